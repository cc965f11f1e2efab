#include "lsx/subtype.hpp"

#include <functional>

namespace lsx {

TypePtr min_s(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom:
        case Type::Kind::QGen:
        case Type::Kind::Bottom: return t;
        case Type::Kind::Prod: return Type::prod(min_s(t->a), min_s(t->b));
        case Type::Kind::Arrow: return Type::arrow(min_s(t->a), min_s(t->b));
        case Type::Kind::Span: {
            TypePtr inner = min_s(t->a);
            if (inner->is_span()) return inner;
            return Type::span(inner);
        }
    }
    return t;
}

static bool similar_norm(const TypePtr &x, const TypePtr &y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Type::Kind::Atom: return true;  // atoms are interchangeable
        case Type::Kind::QGen: return x->ket.same_ray(y->ket);
        case Type::Kind::Span: return similar_norm(x->a, y->a);
        case Type::Kind::Prod: {
            auto fx = factors(x), fy = factors(y);
            if (fx.size() != fy.size()) return false;
            for (size_t i = 0; i < fx.size(); ++i)
                if (!similar_norm(fx[i], fy[i])) return false;
            return true;
        }
        default: return false;
    }
}

bool similar(const TypePtr &g1, const TypePtr &g2) {
    return similar_norm(min_s(g1), min_s(g2));
}

bool qgen_member(const Vec2 &ket, const std::string &atom, const BasisRegistry &reg) {
    const BasisDef &def = reg.get(atom);
    return ket.same_ray(def.up) || ket.same_ray(def.down);
}

namespace {

struct Ctx {
    const BasisRegistry &reg;
    std::vector<std::string> trace;

    bool yes(const char *rule) {
        trace.emplace_back(rule);
        return true;
    }

    // Both arguments are min_s-normalized.
    bool sub(const TypePtr &a, const TypePtr &b) {
        if (a->is_bottom()) return yes("bottom");
        if (type_eq(a, b)) return yes("refl");
        switch (b->kind) {
            case Type::Kind::Span: {
                if (a->is_span()) {
                    // S(A') <= S(B')  iff  A' <= S(B')
                    if (sub(a->a, b)) return yes("span-mono");
                    return false;
                }
                if (sub(a, b->a)) return yes("span-intro");
                if (is_qubit_type(a) && is_qubit_type(b->a) && similar_norm(a, b->a))
                    return yes("similar");
                return false;
            }
            case Type::Kind::Atom: {
                if (a->is_qgen() && qgen_member(a->ket, b->atom, reg)) return yes("qgen-member");
                return false;  // distinct atoms are unrelated
            }
            case Type::Kind::QGen:
                if (a->is_qgen() && a->ket.same_ray(b->ket)) return yes("qgen-phase");
                return false;
            case Type::Kind::Arrow:
                if (!a->is_arrow()) return false;
                if (sub(b->a, a->a) && sub(a->b, b->b)) return yes("arrow");
                return false;
            case Type::Kind::Prod: {
                if (!a->is_prod()) return false;
                if (prod_count(a) != prod_count(b)) return false;
                auto fa = factors(a), fb = factors(b);
                if (align(fa, 0, fb, 0)) return yes("prod-align");
                return false;
            }
            case Type::Kind::Bottom: return false;
        }
        return false;
    }

    // Matches consecutive groups of `fa` against single factors of `fb`;
    // a span factor on the right may absorb a whole group on the left.
    bool align(const std::vector<TypePtr> &fa, size_t i, const std::vector<TypePtr> &fb,
               size_t j) {
        if (i == fa.size() && j == fb.size()) return true;
        if (i == fa.size() || j == fb.size()) return false;
        size_t remA = fa.size() - i, remB = fb.size() - j;
        if (remA < remB) return false;
        const TypePtr &bj = fb[j];
        if (!bj->is_span()) return sub(fa[i], bj) && align(fa, i + 1, fb, j + 1);
        for (size_t k = 1; i + k <= fa.size() - (remB - 1); ++k) {
            std::vector<TypePtr> group(fa.begin() + i, fa.begin() + i + k);
            if (sub(Type::prod_of(group), bj) && align(fa, i + k, fb, j + 1)) return true;
        }
        return false;
    }
};

}  // namespace

SubtypeVerdict subtype(const TypePtr &a, const TypePtr &b, const BasisRegistry &reg) {
    Ctx ctx{reg, {}};
    ctx.trace.emplace_back("minS");
    bool ok = ctx.sub(min_s(a), min_s(b));
    SubtypeVerdict v;
    v.holds = ok;
    if (ok) v.witness = std::move(ctx.trace);
    return v;
}

}  // namespace lsx
