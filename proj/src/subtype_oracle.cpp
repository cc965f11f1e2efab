#include "lsx/subtype_oracle.hpp"

#include <cassert>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsx {

namespace {

// Structural skeleton: spans dropped, atoms anonymized. Every declarative
// rule preserves it, so A <= B can only hold when the skeletons agree.
std::string skeleton(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom: return "a";
        case Type::Kind::Span: return skeleton(t->a);
        case Type::Kind::Prod: return "(" + skeleton(t->a) + "*" + skeleton(t->b) + ")";
        case Type::Kind::Arrow: return "(" + skeleton(t->a) + ">" + skeleton(t->b) + ")";
        default: throw std::invalid_argument("declarative_search: unsupported type");
    }
}

std::string key_of(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom: return t->atom;
        case Type::Kind::Span: return "S(" + key_of(t->a) + ")";
        case Type::Kind::Prod: return "(" + key_of(t->a) + "*" + key_of(t->b) + ")";
        case Type::Kind::Arrow: return "(" + key_of(t->a) + ">" + key_of(t->b) + ")";
        default: throw std::invalid_argument("declarative_search: unsupported type");
    }
}

TypePtr skeletal(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom: return Type::mk_atom("*");
        case Type::Kind::Span: return skeletal(t->a);
        case Type::Kind::Prod: return Type::prod(skeletal(t->a), skeletal(t->b));
        case Type::Kind::Arrow: return Type::arrow(skeletal(t->a), skeletal(t->b));
        default: throw std::invalid_argument("declarative_search: unsupported type");
    }
}

// All decorations of `skel` (atoms filled from {B,X}, each position wrapped
// in up to two spans) within the node-count cap. Two consecutive spans are
// enough for any derivation: S(S(A)) collapses immediately.
void decorate(const TypePtr &skel, int cap, std::vector<TypePtr> &out) {
    std::vector<TypePtr> bare;
    if (skel->is_atom()) {
        bare = {type_B(), type_X()};
    } else {
        std::vector<TypePtr> ls, rs;
        decorate(skel->a, cap - 1, ls);
        decorate(skel->b, cap - 1, rs);
        for (auto &l : ls)
            for (auto &r : rs) {
                if (type_size(l) + type_size(r) + 1 > cap) continue;
                bare.push_back(skel->is_prod() ? Type::prod(l, r) : Type::arrow(l, r));
            }
    }
    for (auto &t : bare) {
        int sz = type_size(t);
        out.push_back(t);
        if (sz + 1 <= cap) out.push_back(Type::span(t));
        if (sz + 2 <= cap) out.push_back(Type::span(Type::span(t)));
    }
}

bool all_atom_product(const TypePtr &t, int &arity) {
    auto fs = factors(t);
    for (auto &f : fs)
        if (!f->is_atom()) return false;
    arity = (int)fs.size();
    return true;
}

struct Bits {
    std::vector<uint64_t> w;
    void init(size_t n) { w.assign((n + 63) / 64, 0); }
    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
    bool intersects(const Bits &o) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] & o.w[i]) return true;
        return false;
    }
};

struct ClassTable {
    std::vector<TypePtr> types;
    std::map<std::string, int> index;
    std::vector<Bits> row;  // row[i].get(j)  <=>  types[i] <= types[j]
    std::vector<Bits> col;  // col[j].get(i)  <=>  types[i] <= types[j]

    int id(const TypePtr &t) const {
        auto it = index.find(key_of(t));
        return it == index.end() ? -1 : it->second;
    }
    bool rel(size_t i, size_t j) const { return row[i].get(j); }
    void set(size_t i, size_t j) {
        row[i].set(j);
        col[j].set(i);
    }
};

}  // namespace

struct DeclarativeOracle::Impl {
    int depth;
    std::map<std::string, ClassTable> classes;  // key: skeleton # cap
    std::map<std::string, bool> memo;

    bool query(const TypePtr &a, const TypePtr &b) {
        std::string ka = key_of(a), kb = key_of(b);
        if (ka == kb) return true;
        std::string sa = skeleton(a);
        if (sa != skeleton(b)) return false;
        std::string mk = ka + "<=" + kb;
        if (auto it = memo.find(mk); it != memo.end()) return it->second;

        int cap = std::max(type_size(a), type_size(b)) + 2;
        ClassTable &ct = table(sa, cap, a);
        int ia = ct.id(a), ib = ct.id(b);
        bool res = ia >= 0 && ib >= 0 && ct.rel(ia, ib);
        memo[mk] = res;
        return res;
    }

    ClassTable &table(const std::string &skel_key, int cap, const TypePtr &rep) {
        std::string ck = skel_key + "#" + std::to_string(cap);
        auto it = classes.find(ck);
        if (it != classes.end()) return it->second;

        ClassTable ct;
        std::vector<TypePtr> all;
        decorate(skeletal(rep), cap, all);
        for (auto &t : all) {
            std::string k = key_of(t);
            if (!ct.index.count(k)) {
                ct.index.emplace(k, (int)ct.types.size());
                ct.types.push_back(t);
            }
        }
        size_t n = ct.types.size();
        ct.row.assign(n, {});
        ct.col.assign(n, {});
        for (size_t i = 0; i < n; ++i) {
            ct.row[i].init(n);
            ct.col[i].init(n);
        }
        auto &stored = classes.emplace(ck, std::move(ct)).first->second;
        saturate(stored);
        return stored;
    }

    void saturate(ClassTable &ct) {
        size_t n = ct.types.size();
        for (int pass = 0; pass < depth; ++pass) {
            bool changed = false;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    if (ct.rel(i, j)) continue;
                    if (derives(ct, i, j)) {
                        ct.set(i, j);
                        changed = true;
                    }
                }
            if (!changed) break;
        }
    }

    bool derives(ClassTable &ct, size_t i, size_t j) {
        const TypePtr &A = ct.types[i];
        const TypePtr &B = ct.types[j];
        if (type_eq(A, B)) return true;                                        // refl
        if (B->is_span() && type_eq(B->a, A)) return true;                     // A <= S(A)
        if (A->is_span() && A->a->is_span() && type_eq(A->a, B)) return true;  // S(S)<=S
        if (B->is_span()) {  // atomic-product axiom
            int na = 0, nb = 0;
            if (all_atom_product(A, na) && all_atom_product(B->a, nb) && na == nb) return true;
        }
        if (A->is_span() && B->is_span()) {  // span monotonicity
            int ii = ct.id(A->a), jj = ct.id(B->a);
            if (ii >= 0 && jj >= 0 && ct.rel(ii, jj)) return true;
        }
        if (A->is_arrow() && B->is_arrow())
            if (query(B->a, A->a) && query(A->b, B->b)) return true;
        if (A->is_prod() && B->is_prod()) {  // binary congruence, modulo associativity
            auto fa = factors(A), fb = factors(B);
            for (size_t sa = 1; sa < fa.size(); ++sa) {
                TypePtr la = Type::prod_of({fa.begin(), fa.begin() + sa});
                TypePtr ra = Type::prod_of({fa.begin() + sa, fa.end()});
                for (size_t sb = 1; sb < fb.size(); ++sb) {
                    TypePtr lb = Type::prod_of({fb.begin(), fb.begin() + sb});
                    TypePtr rb = Type::prod_of({fb.begin() + sb, fb.end()});
                    if (query(la, lb) && query(ra, rb)) return true;
                }
            }
        }
        return ct.row[i].intersects(ct.col[j]);  // transitivity
    }
};

DeclarativeOracle::DeclarativeOracle(int depth) : impl_(new Impl) { impl_->depth = depth; }
DeclarativeOracle::~DeclarativeOracle() = default;
bool DeclarativeOracle::query(const TypePtr &a, const TypePtr &b) { return impl_->query(a, b); }

bool declarative_search(const TypePtr &a, const TypePtr &b, int depth) {
    DeclarativeOracle o(depth);
    return o.query(a, b);
}

}  // namespace lsx
