#include "lsx/typecheck.hpp"

#include "lsx/pretty.hpp"

namespace lsx {

namespace {

using Usage = std::map<std::string, int>;

struct Inferencer {
    const BasisRegistry &reg;
    std::vector<int> path;

    std::string path_str() const {
        std::string s;
        for (int i : path) s += "/" + std::to_string(i);
        return s;
    }

    [[noreturn]] void fail(TypeError::Kind k, const std::string &detail) {
        throw TypeError(k, path_str(), detail);
    }

    struct Res {
        TypePtr type;
        Usage usage;
    };

    bool sub(const TypePtr &a, const TypePtr &b) { return subtype_holds(a, b, reg); }

    static void add_usage(Usage &into, const Usage &from) {
        for (auto &[v, c] : from) into[v] += c;
    }

    // Conditional branches are typed under the same context, so a linear
    // variable must occur the same number of times on both sides.
    Usage merge_branches(const Usage &a, const Usage &b,
                         const std::map<std::string, TypePtr> &env) {
        Usage out = a;
        for (auto &[v, c] : b) {
            auto it = out.find(v);
            int ca = it == out.end() ? 0 : it->second;
            out[v] = std::max(ca, c);
        }
        for (auto &[v, c] : out) {
            auto et = env.find(v);
            if (et == env.end() || is_base_type(et->second)) continue;
            int ca = a.count(v) ? a.at(v) : 0;
            int cb = b.count(v) ? b.at(v) : 0;
            if (ca != cb)
                fail(TypeError::Kind::LinearityViolation,
                     "variable " + v + " used unevenly across conditional branches");
        }
        return out;
    }

    TypePtr join2(const TypePtr &a, const TypePtr &b) {
        if (sub(a, b)) return b;
        if (sub(b, a)) return a;
        TypePtr sb = min_s(Type::span(b));
        if (sub(a, sb)) return sb;
        TypePtr sa = min_s(Type::span(a));
        if (sub(b, sa)) return sa;
        fail(TypeError::Kind::ArgMismatch, "no common type for " + show_type(a) + " and " +
                                               show_type(b));
    }

    Res infer(std::map<std::string, TypePtr> &env, const TermPtr &t) {
        switch (t->kind) {
            case Term::Kind::Var: {
                auto it = env.find(t->name);
                if (it == env.end())
                    fail(TypeError::Kind::UnboundVar, "unbound variable " + t->name);
                return {min_s(it->second), {{t->name, 1}}};
            }
            case Term::Kind::Ket: return {Type::mk_atom(t->basis), {}};
            case Term::Kind::Zero: return {Type::span(Type::bottom()), {}};
            case Term::Kind::Err: return {Type::bottom(), {}};
            case Term::Kind::Lam: {
                if (!is_qubit_type(t->annot))
                    fail(TypeError::Kind::ArgMismatch,
                         "binder annotation must be a qubit type: " + show_type(t->annot));
                TermPtr body = t->kids[0];
                std::string x = t->name;
                if (env.count(x)) {
                    std::string fresh = fresh_name(x);
                    body = subst(body, x, Term::var(fresh));
                    x = fresh;
                }
                env.emplace(x, t->annot);
                path.push_back(0);
                Res r = infer(env, body);
                path.pop_back();
                env.erase(x);
                int cnt = r.usage.count(x) ? r.usage[x] : 0;
                if (!is_base_type(t->annot) && cnt != 1)
                    fail(TypeError::Kind::LinearityViolation,
                         "variable " + t->name + " of non-base type used " +
                             std::to_string(cnt) + " times");
                r.usage.erase(x);
                return {min_s(Type::arrow(t->annot, r.type)), std::move(r.usage)};
            }
            case Term::Kind::App: {
                path.push_back(0);
                Res f = infer(env, t->kids[0]);
                path.pop_back();
                path.push_back(1);
                Res a = infer(env, t->kids[1]);
                path.pop_back();
                Usage u = std::move(f.usage);
                add_usage(u, a.usage);
                if (f.type->is_bottom()) return {Type::bottom(), std::move(u)};
                if (f.type->is_span() && f.type->a->is_bottom())
                    return {f.type, std::move(u)};
                AppChoice c = choose_app(f.type, a.type);
                return {c.result, std::move(u)};
            }
            case Term::Kind::If: {
                path.push_back(0);
                Res a = infer(env, t->kids[0]);
                path.pop_back();
                path.push_back(1);
                Res b = infer(env, t->kids[1]);
                path.pop_back();
                TypePtr c = join2(a.type, b.type);
                Usage u = merge_branches(a.usage, b.usage, env);
                return {min_s(Type::arrow(Type::mk_atom(t->basis), c)), std::move(u)};
            }
            case Term::Kind::Sum: {
                TypePtr c;
                Usage u;
                for (size_t i = 0; i < t->kids.size(); ++i) {
                    path.push_back((int)i);
                    Res r = infer(env, t->kids[i]);
                    path.pop_back();
                    add_usage(u, r.usage);
                    c = c ? join2(c, r.type) : r.type;
                }
                return {min_s(Type::span(c)), std::move(u)};
            }
            case Term::Kind::Scale: {
                path.push_back(0);
                Res r = infer(env, t->kids[0]);
                path.pop_back();
                return {min_s(Type::span(r.type)), std::move(r.usage)};
            }
            case Term::Kind::Meas: {
                path.push_back(0);
                Res r = infer(env, t->kids[0]);
                path.pop_back();
                if (r.type->is_bottom()) return {Type::bottom(), std::move(r.usage)};
                if (!reg.has(t->basis))
                    fail(TypeError::Kind::MeasureArity, "unregistered basis " + t->basis);
                TypePtr v = r.type->is_span() ? r.type->a : r.type;
                if (v->is_bottom())
                    fail(TypeError::Kind::MeasureArity, "cannot measure the empty span");
                auto fs = factors(v);
                for (auto &f : fs)
                    if (!f->is_atom())
                        fail(TypeError::Kind::MeasureArity,
                             "measurement input must be spanned basis qubits, got " +
                                 show_type(r.type));
                int n = (int)fs.size();
                if (t->m < 1 || t->m > n)
                    fail(TypeError::Kind::MeasureArity,
                         "measuring " + std::to_string(t->m) + " of " + std::to_string(n) +
                             " qubits");
                std::vector<TypePtr> out;
                for (int i = 0; i < t->m; ++i) out.push_back(Type::mk_atom(t->basis));
                if (t->m < n) {
                    std::vector<TypePtr> rest(fs.begin() + t->m, fs.end());
                    out.push_back(Type::span(Type::prod_of(rest)));
                }
                return {Type::prod_of(out), std::move(r.usage)};
            }
            case Term::Kind::Tensor: {
                path.push_back(0);
                Res l = infer(env, t->kids[0]);
                path.pop_back();
                path.push_back(1);
                Res r = infer(env, t->kids[1]);
                path.pop_back();
                Usage u = std::move(l.usage);
                add_usage(u, r.usage);
                if (l.type->is_bottom() || r.type->is_bottom())
                    return {Type::bottom(), std::move(u)};
                if (!is_qubit_type(l.type) || !is_qubit_type(r.type))
                    fail(TypeError::Kind::ProductShape,
                         "tensor factors must have qubit types");
                return {Type::prod(l.type, r.type), std::move(u)};
            }
            case Term::Kind::Head:
            case Term::Kind::Tail: {
                path.push_back(0);
                Res r = infer(env, t->kids[0]);
                path.pop_back();
                if (r.type->is_bottom()) return {Type::bottom(), std::move(r.usage)};
                TypePtr v = r.type;
                if (!v->is_prod())
                    fail(TypeError::Kind::ProductShape,
                         "head/tail need a product of basis qubits, got " + show_type(v));
                auto fs = factors(v);
                for (auto &f : fs)
                    if (!f->is_atom())
                        fail(TypeError::Kind::ProductShape,
                             "head/tail need a base-typed list, got " + show_type(v));
                if (t->kind == Term::Kind::Head) return {fs[0], std::move(r.usage)};
                std::vector<TypePtr> rest(fs.begin() + 1, fs.end());
                return {Type::prod_of(rest), std::move(r.usage)};
            }
            case Term::Kind::CastL:
            case Term::Kind::CastR: {
                path.push_back(0);
                Res r = infer(env, t->kids[0]);
                path.pop_back();
                if (r.type->is_bottom()) return {Type::bottom(), std::move(r.usage)};
                return {cast_type(t->kind == Term::Kind::CastL, r.type), std::move(r.usage)};
            }
        }
        fail(TypeError::Kind::ArgMismatch, "unhandled term");
    }

    AppChoice choose_app(const TypePtr &f, const TypePtr &a) {
        if (f->is_arrow()) {
            if (sub(a, f->a)) return {AppRule::ElimPlain, f->b};
            if (sub(a, min_s(Type::span(f->a))))
                return {AppRule::ElimSpan, min_s(Type::span(f->b))};
            fail(TypeError::Kind::ArgMismatch, "argument " + show_type(a) +
                                                   " does not fit domain " + show_type(f->a));
        }
        if (f->is_span() && f->a->is_arrow()) {
            const TypePtr &arrow = f->a;
            if (sub(a, min_s(Type::span(arrow->a))))
                return {AppRule::ElimSpan, min_s(Type::span(arrow->b))};
            fail(TypeError::Kind::ArgMismatch, "argument " + show_type(a) +
                                                   " does not fit domain S(" +
                                                   show_type(arrow->a) + ")");
        }
        fail(TypeError::Kind::NotAFunction, "not a function type: " + show_type(f));
    }

    // Cast typing, following the three generation-lemma alternatives: the
    // span-of-product shape, the X (or user-basis) input yielding S(B), and
    // the B input acting as the identity.
    TypePtr cast_type(bool left, const TypePtr &ty) {
        if (ty->is_atom() || ty->is_qgen()) {
            if (sub(ty, Type::mk_atom("B"))) return Type::mk_atom("B");
            if (sub(ty, Type::mk_atom("X"))) return Type::span(Type::mk_atom("B"));
            for (auto &id : reg.user_ids())
                if (sub(ty, Type::mk_atom(id))) return Type::span(Type::mk_atom("B"));
            fail(TypeError::Kind::CastShape, "cannot cast " + show_type(ty));
        }
        TypePtr v = ty->is_span() ? ty->a : ty;
        if (!v->is_prod())
            fail(TypeError::Kind::CastShape, "cannot cast " + show_type(ty));
        auto fs = factors(v);
        std::vector<TypePtr> out;
        if (left) {
            TypePtr last = fs.back();
            TypePtr inner = last->is_span() ? last->a : last;
            out.assign(fs.begin(), fs.end() - 1);
            for (auto &f : factors(inner)) out.push_back(f);
        } else {
            TypePtr first = fs.front();
            TypePtr inner = first->is_span() ? first->a : first;
            out = factors(inner);
            out.insert(out.end(), fs.begin() + 1, fs.end());
        }
        for (auto &f : out)
            if (!is_qubit_type(f))
                fail(TypeError::Kind::CastShape, "cannot cast " + show_type(ty));
        return min_s(Type::span(Type::prod_of(out)));
    }
};

}  // namespace

AppChoice choose_app_rule(const TypePtr &fun_type, const TypePtr &arg_type,
                          const BasisRegistry &reg) {
    Inferencer inf{reg, {}};
    return inf.choose_app(min_s(fun_type), min_s(arg_type));
}

TypedTerm infer(const TypingContext &ctx, const TermPtr &t, const BasisRegistry &reg) {
    Inferencer inf{reg, {}};
    std::map<std::string, TypePtr> env;
    for (auto &[n, ty] : ctx.bindings) {
        if (env.count(n)) throw std::invalid_argument("duplicate context variable " + n);
        env.emplace(n, ty);
    }
    auto r = inf.infer(env, t);
    for (auto &[n, ty] : ctx.bindings) {
        if (is_base_type(ty)) continue;
        int cnt = r.usage.count(n) ? r.usage.at(n) : 0;
        if (cnt != 1)
            throw TypeError(TypeError::Kind::LinearityViolation, "",
                            "context variable " + n + " of non-base type used " +
                                std::to_string(cnt) + " times");
    }
    return {t, r.type, std::move(r.usage)};
}

void check(const TypingContext &ctx, const TermPtr &t, const TypePtr &expected,
           const BasisRegistry &reg) {
    TypedTerm it = infer(ctx, t, reg);
    if (!subtype_holds(it.type, expected, reg))
        throw TypeError(TypeError::Kind::ArgMismatch, "",
                        "inferred " + show_type(it.type) + " is not a subtype of " +
                            show_type(expected));
}

}  // namespace lsx
