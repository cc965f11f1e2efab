#include "lsx/term.hpp"

#include <algorithm>

namespace lsx {

namespace {
TermPtr node(Term::Kind k) {
    auto t = std::make_shared<Term>();
    const_cast<Term &>(*t).kind = k;
    return t;
}
Term &mut(TermPtr &p) { return const_cast<Term &>(*p); }
}  // namespace

TermPtr Term::var(std::string n) {
    auto t = node(Kind::Var);
    mut(t).name = std::move(n);
    return t;
}
TermPtr Term::lam(std::string n, TypePtr annot, TermPtr body) {
    auto t = node(Kind::Lam);
    mut(t).name = std::move(n);
    mut(t).annot = std::move(annot);
    mut(t).kids = {std::move(body)};
    return t;
}
TermPtr Term::app(TermPtr f, TermPtr a) {
    auto t = node(Kind::App);
    mut(t).kids = {std::move(f), std::move(a)};
    return t;
}
TermPtr Term::ket(std::string basis, int idx) {
    auto t = node(Kind::Ket);
    mut(t).basis = std::move(basis);
    mut(t).idx = idx;
    return t;
}
TermPtr Term::ite(std::string basis, TermPtr then_, TermPtr else_) {
    auto t = node(Kind::If);
    mut(t).basis = std::move(basis);
    mut(t).kids = {std::move(then_), std::move(else_)};
    return t;
}
TermPtr Term::zero() { return node(Kind::Zero); }

TermPtr Term::sum(std::vector<TermPtr> children) {
    std::vector<TermPtr> flat;
    for (auto &c : children) {
        if (c->is(Kind::Sum))
            flat.insert(flat.end(), c->kids.begin(), c->kids.end());
        else
            flat.push_back(c);
    }
    assert(flat.size() >= 2);
    std::stable_sort(flat.begin(), flat.end(),
                     [](const TermPtr &a, const TermPtr &b) { return term_cmp(a, b) < 0; });
    auto t = node(Kind::Sum);
    mut(t).kids = std::move(flat);
    return t;
}
TermPtr Term::scale(Scalar s, TermPtr body) {
    auto t = node(Kind::Scale);
    mut(t).scalar = s;
    mut(t).kids = {std::move(body)};
    return t;
}
TermPtr Term::err() { return node(Kind::Err); }

TermPtr Term::meas(int m, std::string basis, TermPtr body) {
    auto t = node(Kind::Meas);
    mut(t).m = m;
    mut(t).basis = std::move(basis);
    mut(t).kids = {std::move(body)};
    return t;
}
TermPtr Term::tensor(TermPtr l, TermPtr r) {
    if (l->is(Kind::Tensor)) return tensor(l->kids[0], tensor(l->kids[1], std::move(r)));
    auto t = node(Kind::Tensor);
    mut(t).kids = {std::move(l), std::move(r)};
    return t;
}
TermPtr Term::tensor_of(const std::vector<TermPtr> &fs) {
    assert(!fs.empty());
    TermPtr t = fs.back();
    for (size_t i = fs.size() - 1; i-- > 0;) t = tensor(fs[i], t);
    return t;
}
TermPtr Term::head(TermPtr t0) {
    auto t = node(Kind::Head);
    mut(t).kids = {std::move(t0)};
    return t;
}
TermPtr Term::tail(TermPtr t0) {
    auto t = node(Kind::Tail);
    mut(t).kids = {std::move(t0)};
    return t;
}
TermPtr Term::castl(TermPtr t0) {
    auto t = node(Kind::CastL);
    mut(t).kids = {std::move(t0)};
    return t;
}
TermPtr Term::castr(TermPtr t0) {
    auto t = node(Kind::CastR);
    mut(t).kids = {std::move(t0)};
    return t;
}

int term_cmp(const TermPtr &x, const TermPtr &y) {
    if (x.get() == y.get()) return 0;
    if (x->kind != y->kind) return (int)x->kind < (int)y->kind ? -1 : 1;
    if (x->name != y->name) return x->name < y->name ? -1 : 1;
    if (x->basis != y->basis) return x->basis < y->basis ? -1 : 1;
    if (x->idx != y->idx) return x->idx < y->idx ? -1 : 1;
    if (x->m != y->m) return x->m < y->m ? -1 : 1;
    if (int c = x->scalar.compare(y->scalar); c != 0) return c;
    if (x->annot || y->annot) {
        if (!x->annot) return -1;
        if (!y->annot) return 1;
        if (int c = type_cmp(x->annot, y->annot); c != 0) return c;
    }
    if (x->kids.size() != y->kids.size()) return x->kids.size() < y->kids.size() ? -1 : 1;
    for (size_t i = 0; i < x->kids.size(); ++i)
        if (int c = term_cmp(x->kids[i], y->kids[i]); c != 0) return c;
    return 0;
}

bool term_eq(const TermPtr &x, const TermPtr &y) { return term_cmp(x, y) == 0; }

TermPtr canonicalize(const TermPtr &t) {
    switch (t->kind) {
        case Term::Kind::Var:
        case Term::Kind::Ket:
        case Term::Kind::Zero:
        case Term::Kind::Err: return t;
        case Term::Kind::Lam: return Term::lam(t->name, t->annot, canonicalize(t->kids[0]));
        case Term::Kind::App:
            return Term::app(canonicalize(t->kids[0]), canonicalize(t->kids[1]));
        case Term::Kind::If:
            return Term::ite(t->basis, canonicalize(t->kids[0]), canonicalize(t->kids[1]));
        case Term::Kind::Sum: {
            std::vector<TermPtr> kids;
            kids.reserve(t->kids.size());
            for (auto &k : t->kids) kids.push_back(canonicalize(k));
            return Term::sum(std::move(kids));
        }
        case Term::Kind::Scale: return Term::scale(t->scalar, canonicalize(t->kids[0]));
        case Term::Kind::Meas: return Term::meas(t->m, t->basis, canonicalize(t->kids[0]));
        case Term::Kind::Tensor:
            return Term::tensor(canonicalize(t->kids[0]), canonicalize(t->kids[1]));
        case Term::Kind::Head: return Term::head(canonicalize(t->kids[0]));
        case Term::Kind::Tail: return Term::tail(canonicalize(t->kids[0]));
        case Term::Kind::CastL: return Term::castl(canonicalize(t->kids[0]));
        case Term::Kind::CastR: return Term::castr(canonicalize(t->kids[0]));
    }
    return t;
}

static void free_vars_into(const TermPtr &t, std::set<std::string> &bound,
                           std::set<std::string> &out) {
    switch (t->kind) {
        case Term::Kind::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            return;
        case Term::Kind::Lam: {
            bool was = bound.count(t->name) != 0;
            bound.insert(t->name);
            free_vars_into(t->kids[0], bound, out);
            if (!was) bound.erase(t->name);
            return;
        }
        default:
            for (auto &k : t->kids) free_vars_into(k, bound, out);
            return;
    }
}

std::set<std::string> free_vars(const TermPtr &t) {
    std::set<std::string> bound, out;
    free_vars_into(t, bound, out);
    return out;
}

std::string fresh_name(const std::string &base) {
    static std::atomic<uint64_t> counter{0};
    std::string stem = base;
    if (auto pos = stem.find('\''); pos != std::string::npos) stem = stem.substr(0, pos);
    return stem + "'" + std::to_string(++counter);
}

TermPtr subst(const TermPtr &t, const std::string &x, const TermPtr &r) {
    switch (t->kind) {
        case Term::Kind::Var: return t->name == x ? r : t;
        case Term::Kind::Ket:
        case Term::Kind::Zero:
        case Term::Kind::Err: return t;
        case Term::Kind::Lam: {
            if (t->name == x) return t;  // shadowed
            if (free_vars(r).count(t->name)) {
                std::string n = fresh_name(t->name);
                TermPtr body = subst(t->kids[0], t->name, Term::var(n));
                return Term::lam(n, t->annot, subst(body, x, r));
            }
            return Term::lam(t->name, t->annot, subst(t->kids[0], x, r));
        }
        default: {
            std::vector<TermPtr> kids;
            kids.reserve(t->kids.size());
            for (auto &k : t->kids) kids.push_back(subst(k, x, r));
            auto copy = std::make_shared<Term>(*t);
            const_cast<Term &>(*copy).kids = std::move(kids);
            if (copy->kind == Term::Kind::Sum || copy->kind == Term::Kind::Tensor)
                return canonicalize(copy);
            return copy;
        }
    }
}

bool is_base_term(const TermPtr &t) {
    if (t->is(Term::Kind::Ket)) return true;
    if (t->is(Term::Kind::Tensor))
        return is_base_term(t->kids[0]) && is_base_term(t->kids[1]);
    return false;
}

bool is_value(const TermPtr &t) {
    switch (t->kind) {
        case Term::Kind::Var:
        case Term::Kind::Lam:
        case Term::Kind::Ket:
        case Term::Kind::Zero: return true;
        case Term::Kind::Sum: {
            for (auto &k : t->kids)
                if (!is_value(k)) return false;
            return true;
        }
        case Term::Kind::Scale: return is_value(t->kids[0]);
        case Term::Kind::Tensor: return is_value(t->kids[0]) && is_value(t->kids[1]);
        default: return false;
    }
}

std::vector<TermPtr> tensor_factors(const TermPtr &t) {
    std::vector<TermPtr> out;
    const Term *cur = t.get();
    TermPtr hold = t;
    while (hold->is(Term::Kind::Tensor)) {
        out.push_back(hold->kids[0]);
        hold = hold->kids[1];
        cur = hold.get();
    }
    (void)cur;
    out.push_back(hold);
    return out;
}

}  // namespace lsx
