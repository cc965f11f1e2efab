#include "lsx/eval.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "lsx/pretty.hpp"
#include "lsx/subtype.hpp"

namespace lsx {

namespace {

TermPtr cast_node(Term::Kind k, TermPtr u) {
    return k == Term::Kind::CastL ? Term::castl(std::move(u)) : Term::castr(std::move(u));
}

// The computational-basis expansion of a ket constant, with unit scalars and
// zero-amplitude summands dropped.
TermPtr cast_const_term(const TermPtr &ket, const BasisRegistry &reg) {
    const BasisDef &d = reg.get(ket->basis);
    Vec2 v = ket->idx == 0 ? d.up : d.down;
    std::vector<TermPtr> parts;
    if (!v.a0.is_zero()) parts.push_back(v.a0.is_one() ? k0() : Term::scale(v.a0, k0()));
    if (!v.a1.is_zero()) parts.push_back(v.a1.is_one() ? k1() : Term::scale(v.a1, k1()));
    if (parts.empty()) return Term::zero();
    return parts.size() == 1 ? parts[0] : Term::sum(std::move(parts));
}

bool is_vector_value(const TermPtr &t, int &arity) {
    std::vector<TermPtr> stack{t};
    arity = -1;
    while (!stack.empty()) {
        TermPtr cur = stack.back();
        stack.pop_back();
        if (cur->is(Term::Kind::Sum)) {
            for (auto &k : cur->kids) stack.push_back(k);
            continue;
        }
        while (cur->is(Term::Kind::Scale)) cur = cur->kids[0];
        auto fs = tensor_factors(cur);
        for (auto &f : fs)
            if (!f->is(Term::Kind::Ket)) return false;
        if (arity < 0) arity = (int)fs.size();
        if (arity != (int)fs.size()) return false;
    }
    return arity > 0;
}

std::string pi_rule(const std::string &basis, bool error) {
    if (basis == "B") return error ? "err_π" : "proj";
    if (basis == "X") return error ? "err_π𝕏" : "proj_𝕏";
    return (error ? "err_π" : "proj_") + basis.substr(1);
}

std::string cast_rule_name(const TermPtr &ket) {
    if (ket->basis == "B") return ket->idx == 0 ? "cast_0" : "cast_1";
    if (ket->basis == "X") return ket->idx == 0 ? "cast_+" : "cast_-";
    return (ket->idx == 0 ? "cast_↑" : "cast_↓") + ket->basis.substr(1);
}

std::string if_rule_name(const TermPtr &ket, bool taken_then) {
    (void)taken_then;
    if (ket->basis == "B") return ket->idx == 1 ? "if_1" : "if_0";
    if (ket->basis == "X") return ket->idx == 0 ? "if_+" : "if_-";
    return (ket->idx == 0 ? "if_↑" : "if_↓") + ket->basis.substr(1);
}

// Binary split of a canonical sum: first child vs the rest.
std::pair<TermPtr, TermPtr> split_sum(const TermPtr &s) {
    TermPtr first = s->kids[0];
    TermPtr rest;
    if (s->kids.size() == 2) {
        rest = s->kids[1];
    } else {
        std::vector<TermPtr> r(s->kids.begin() + 1, s->kids.end());
        rest = Term::sum(std::move(r));
    }
    return {first, rest};
}

}  // namespace

std::optional<Evaluator::Found> Evaluator::phase1(const TermPtr &t) const {
    auto mk = [&](const char *rule, TermPtr after) {
        return Found{rule, 1.0, t, after, after};
    };

    // Innermost first: children before this node. Abstraction bodies and
    // conditional branches are frozen.
    auto descend = [&](size_t i) -> std::optional<Found> {
        auto sub = phase1(t->kids[i]);
        if (!sub) return std::nullopt;
        std::vector<TermPtr> kids = t->kids;
        kids[i] = sub->whole;
        auto copy = std::make_shared<Term>(*t);
        const_cast<Term &>(*copy).kids = std::move(kids);
        sub->whole = canonicalize(copy);
        return sub;
    };

    switch (t->kind) {
        case Term::Kind::Var:
        case Term::Kind::Ket:
        case Term::Kind::Zero:
        case Term::Kind::Err:
        case Term::Kind::Lam:
        case Term::Kind::If: return std::nullopt;
        default: break;
    }
    for (size_t i = 0; i < t->kids.size(); ++i)
        if (auto f = descend(i)) return f;

    switch (t->kind) {
        case Term::Kind::Sum: {
            for (auto &k : t->kids)
                if (k->is(Term::Kind::Err)) return mk("err_sum", Term::err());
            for (size_t i = 0; i < t->kids.size(); ++i) {
                if (!t->kids[i]->is(Term::Kind::Zero)) continue;
                std::vector<TermPtr> kids = t->kids;
                kids.erase(kids.begin() + i);
                TermPtr after = kids.size() == 1 ? kids[0] : Term::sum(std::move(kids));
                return mk("neut", after);
            }
            for (size_t i = 0; i < t->kids.size(); ++i) {
                for (size_t j = i + 1; j < t->kids.size(); ++j) {
                    const TermPtr &a = t->kids[i], &b = t->kids[j];
                    bool as = a->is(Term::Kind::Scale), bs = b->is(Term::Kind::Scale);
                    TermPtr combined;
                    const char *rule = nullptr;
                    if (as && bs && term_eq(a->kids[0], b->kids[0])) {
                        combined = Term::scale(a->scalar + b->scalar, a->kids[0]);
                        rule = "fact";
                    } else if (as && !bs && term_eq(a->kids[0], b)) {
                        combined = Term::scale(a->scalar + Scalar{1, 0}, b);
                        rule = "fact¹";
                    } else if (!as && bs && term_eq(b->kids[0], a)) {
                        combined = Term::scale(b->scalar + Scalar{1, 0}, a);
                        rule = "fact¹";
                    } else if (!as && !bs && term_eq(a, b)) {
                        combined = Term::scale(Scalar{2, 0}, a);
                        rule = "fact²";
                    }
                    if (!rule) continue;
                    std::vector<TermPtr> kids;
                    for (size_t k = 0; k < t->kids.size(); ++k)
                        if (k != i && k != j) kids.push_back(t->kids[k]);
                    TermPtr redex = Term::sum({a, b});
                    kids.push_back(combined);
                    TermPtr after =
                        kids.size() == 1 ? kids[0] : canonicalize(Term::sum(std::move(kids)));
                    return Found{rule, 1.0, redex, combined, after};
                }
            }
            return std::nullopt;
        }
        case Term::Kind::Scale: {
            const TermPtr &u = t->kids[0];
            if (u->is(Term::Kind::Err)) return mk("err_scal", Term::err());
            if (t->scalar.is_one()) return mk("unit", u);
            if (t->scalar.is_zero()) return mk("zero_α", Term::zero());
            if (u->is(Term::Kind::Zero)) return mk("zero", Term::zero());
            if (u->is(Term::Kind::Scale))
                return mk("prod", Term::scale(t->scalar * u->scalar, u->kids[0]));
            if (u->is(Term::Kind::Sum)) {
                auto [first, rest] = split_sum(u);
                return mk("dist", canonicalize(Term::sum(
                                      {Term::scale(t->scalar, first), Term::scale(t->scalar, rest)})));
            }
            return std::nullopt;
        }
        case Term::Kind::App:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_app_l", Term::err());
            if (t->kids[1]->is(Term::Kind::Err)) return mk("err_app_r", Term::err());
            return std::nullopt;
        case Term::Kind::Tensor:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_tens_l", Term::err());
            if (t->kids[1]->is(Term::Kind::Err)) return mk("err_tens_r", Term::err());
            return std::nullopt;
        case Term::Kind::Meas:
            if (t->kids[0]->is(Term::Kind::Err))
                return mk(t->basis == "X" ? "err_π𝕏" : "err_π", Term::err());
            return std::nullopt;
        case Term::Kind::Head:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_head", Term::err());
            return std::nullopt;
        case Term::Kind::Tail:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_tail", Term::err());
            return std::nullopt;
        case Term::Kind::CastL:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_⇑l", Term::err());
            return std::nullopt;
        case Term::Kind::CastR:
            if (t->kids[0]->is(Term::Kind::Err)) return mk("err_⇑r", Term::err());
            return std::nullopt;
        default: return std::nullopt;
    }
}

std::vector<Evaluator::Found> Evaluator::phase2(const TermPtr &t, std::mt19937_64 *rng) const {
    auto one = [&](const char *rule, TermPtr after) {
        return std::vector<Found>{{rule, 1.0, t, after, after}};
    };
    auto descend = [&](size_t i) -> std::vector<Found> {
        auto subs = phase2(t->kids[i], rng);
        for (auto &s : subs) {
            std::vector<TermPtr> kids = t->kids;
            kids[i] = s.whole;
            auto copy = std::make_shared<Term>(*t);
            const_cast<Term &>(*copy).kids = std::move(kids);
            s.whole = canonicalize(copy);
        }
        return subs;
    };

    // Type of a closed-enough subterm, for the call-by-base rule guards.
    auto type_of = [&](const TermPtr &u) -> TypePtr {
        try {
            return infer(ctx_, u, reg_).type;
        } catch (const TypeError &e) {
            throw EvalError(EvalError::Kind::IllTyped,
                            std::string("rule guard on ill-typed subterm: ") + e.what());
        }
    };

    switch (t->kind) {
        case Term::Kind::Var:
        case Term::Kind::Ket:
        case Term::Kind::Zero:
        case Term::Kind::Err:
        case Term::Kind::Lam:
        case Term::Kind::If: return {};

        case Term::Kind::App: {
            const TermPtr &f = t->kids[0], &a = t->kids[1];
            if (f->is(Term::Kind::Zero)) return one("z_l", Term::zero());
            if (f->is(Term::Kind::Sum)) {
                auto [first, rest] = split_sum(f);
                return one("lin_l",
                           canonicalize(Term::sum({Term::app(first, a), Term::app(rest, a)})));
            }
            if (f->is(Term::Kind::Scale))
                return one("·lin_l",
                           canonicalize(Term::scale(f->scalar, Term::app(f->kids[0], a))));
            if (f->is(Term::Kind::Lam)) {
                if (!is_base_type(f->annot))
                    return one("β_n", canonicalize(subst(f->kids[0], f->name, a)));
                if (is_base_term(a)) {
                    TypePtr ta = type_of(a);
                    if (type_eq(min_s(ta), min_s(f->annot)))
                        return one("β_b", canonicalize(subst(f->kids[0], f->name, a)));
                    return {};  // base argument in the wrong basis: no rule applies
                }
                if (a->is(Term::Kind::Sum)) {
                    auto [first, rest] = split_sum(a);
                    return one("lin_r", canonicalize(Term::sum(
                                            {Term::app(f, first), Term::app(f, rest)})));
                }
                if (a->is(Term::Kind::Scale))
                    return one("·lin_r",
                               canonicalize(Term::scale(a->scalar, Term::app(f, a->kids[0]))));
                if (a->is(Term::Kind::Zero)) return one("z_r", Term::zero());
                return descend(1);
            }
            if (f->is(Term::Kind::If)) {
                if (a->is(Term::Kind::Ket)) {
                    if (a->basis != t->kids[0]->basis) return {};
                    bool then_taken = a->basis == "B" ? a->idx == 1 : a->idx == 0;
                    return one(if_rule_name(a, then_taken).c_str(),
                               f->kids[then_taken ? 0 : 1]);
                }
                if (a->is(Term::Kind::Sum)) {
                    auto [first, rest] = split_sum(a);
                    return one("lin_r", canonicalize(Term::sum(
                                            {Term::app(f, first), Term::app(f, rest)})));
                }
                if (a->is(Term::Kind::Scale))
                    return one("·lin_r",
                               canonicalize(Term::scale(a->scalar, Term::app(f, a->kids[0]))));
                if (a->is(Term::Kind::Zero)) return one("z_r", Term::zero());
                return descend(1);
            }
            // Reducible function position.
            if (!is_value(f)) return descend(0);
            // Normal non-abstraction function (variables in open terms):
            // argument reduction is allowed when the function is base-typed.
            TypePtr tf = min_s(type_of(f));
            if (tf->is_arrow() && is_base_type(tf->a)) {
                if (a->is(Term::Kind::Sum)) {
                    auto [first, rest] = split_sum(a);
                    return one("lin_r", canonicalize(Term::sum(
                                            {Term::app(f, first), Term::app(f, rest)})));
                }
                if (a->is(Term::Kind::Scale))
                    return one("·lin_r",
                               canonicalize(Term::scale(a->scalar, Term::app(f, a->kids[0]))));
                if (a->is(Term::Kind::Zero) && !f->is(Term::Kind::Err))
                    return one("z_r", Term::zero());
                return descend(1);
            }
            return {};
        }

        case Term::Kind::Sum:
        case Term::Kind::Tensor: {
            for (size_t i = 0; i < t->kids.size(); ++i) {
                auto subs = descend(i);
                if (!subs.empty()) return subs;
            }
            return {};
        }
        case Term::Kind::Scale: return descend(0);

        case Term::Kind::Head:
        case Term::Kind::Tail: {
            const TermPtr &u = t->kids[0];
            if (u->is(Term::Kind::Tensor)) {
                auto fs = tensor_factors(u);
                if (fs[0]->is(Term::Kind::Ket)) {
                    if (t->kind == Term::Kind::Head) return one("head", fs[0]);
                    std::vector<TermPtr> rest(fs.begin() + 1, fs.end());
                    return one("tail", Term::tensor_of(rest));
                }
            }
            return descend(0);
        }

        case Term::Kind::CastL:
        case Term::Kind::CastR: {
            bool left = t->kind == Term::Kind::CastL;
            const TermPtr &u = t->kids[0];
            if (u->is(Term::Kind::Sum)) {
                auto [first, rest] = split_sum(u);
                return one("dist^+_⇑", canonicalize(Term::sum({cast_node(t->kind, first),
                                                               cast_node(t->kind, rest)})));
            }
            if (u->is(Term::Kind::Scale))
                return one("dist^α_⇑",
                           canonicalize(Term::scale(u->scalar, cast_node(t->kind, u->kids[0]))));
            if (u->is(Term::Kind::Zero)) return one("neut^0_⇑", Term::zero());
            if (u->is(Term::Kind::Ket))
                return one(cast_rule_name(u).c_str(), cast_const_term(u, reg_));
            if (u->is(Term::Kind::Tensor)) {
                auto fs = tensor_factors(u);
                size_t pos = left ? fs.size() - 1 : 0;
                const TermPtr &endf = fs[pos];
                std::vector<TermPtr> others(fs);
                others.erase(others.begin() + pos);
                TermPtr v = Term::tensor_of(others);
                auto rebuild = [&](const TermPtr &piece) {
                    return left ? Term::tensor(v, piece) : Term::tensor(piece, v);
                };
                if (endf->is(Term::Kind::Sum)) {
                    auto [first, rest] = split_sum(endf);
                    return one(left ? "dist_l^+" : "dist_r^+",
                               canonicalize(Term::sum({cast_node(t->kind, rebuild(first)),
                                                       cast_node(t->kind, rebuild(rest))})));
                }
                if (endf->is(Term::Kind::Scale))
                    return one(left ? "dist_l^α" : "dist_r^α",
                               canonicalize(Term::scale(
                                   endf->scalar, cast_node(t->kind, rebuild(endf->kids[0])))));
                if (endf->is(Term::Kind::Zero) && is_value(v))
                    return one(left ? "dist_l^0" : "dist_r^0", Term::zero());
                if (endf->is(Term::Kind::Ket) && is_value(u))
                    return one(left ? "neut_l^⇑" : "neut_r^⇑", u);
                return descend(0);
            }
            return descend(0);
        }

        case Term::Kind::Meas: {
            const TermPtr &u = t->kids[0];
            if (u->is(Term::Kind::Zero)) return one(pi_rule(t->basis, true).c_str(), Term::err());
            int arity = 0;
            if (is_vector_value(u, arity)) {
                std::string rule = pi_rule(t->basis, false);
                if (rng) {
                    auto [res, p] = measure(u, t->m, t->basis, reg_, *rng);
                    return {{rule, p, t, canonicalize(res), canonicalize(res)}};
                }
                std::vector<Found> out;
                for (auto &o : outcome_set(u, t->m, t->basis, reg_)) {
                    TermPtr res = canonicalize(outcome_term(o, t->basis, reg_));
                    out.push_back({rule, o.probability, t, res, res});
                }
                return out;
            }
            return descend(0);
        }
    }
    return {};
}

std::vector<Evaluator::Found> Evaluator::alternatives(const TermPtr &t,
                                                      std::mt19937_64 *rng) const {
    if (auto f = phase1(t)) return {*f};
    return phase2(t, rng);
}

std::optional<Step> Evaluator::step(const TermPtr &t, std::mt19937_64 &rng) const {
    TermPtr c = canonicalize(t);
    auto alts = alternatives(c, &rng);
    if (alts.empty()) return std::nullopt;
    const Found &f = alts[0];
    return Step{f.rule, f.prob, c, f.whole, f.redex_before, f.redex_after};
}

Trace Evaluator::normalize(const TermPtr &t, std::mt19937_64 &rng, int fuel) const {
    Trace tr;
    TermPtr cur = canonicalize(t);
    for (int n = 0; n < fuel; ++n) {
        auto s = step(cur, rng);
        if (!s) {
            tr.final = cur;
            return tr;
        }
        tr.total_probability *= s->probability;
        cur = s->after;
        tr.steps.push_back(std::move(*s));
    }
    tr.final = cur;
    tr.fuel_exhausted = true;
    throw EvalError(EvalError::Kind::FuelExhausted,
                    "no normal form within fuel: " + show_term(cur));
}

Distribution Evaluator::distribution(const TermPtr &t, int fuel) const {
    std::map<std::string, std::pair<TermPtr, double>> acc;
    struct Item {
        TermPtr term;
        double prob;
    };
    std::vector<Item> work{{canonicalize(t), 1.0}};
    while (!work.empty()) {
        Item it = work.back();
        work.pop_back();
        TermPtr cur = it.term;
        int n = 0;
        for (;; ++n) {
            if (n >= fuel)
                throw EvalError(EvalError::Kind::FuelExhausted,
                                "no normal form within fuel: " + show_term(cur));
            auto alts = alternatives(cur, nullptr);
            if (alts.empty()) {
                auto key = show_term(cur);
                auto [pos, fresh] = acc.emplace(key, std::make_pair(cur, it.prob));
                if (!fresh) pos->second.second += it.prob;
                break;
            }
            if (alts.size() == 1) {
                cur = alts[0].whole;
                continue;
            }
            for (auto &a : alts) work.push_back({a.whole, it.prob * a.prob});
            break;
        }
    }
    Distribution d;
    for (auto &[k, v] : acc) d.outcomes.push_back(v);
    return d;
}

std::string show_step(const Step &s) {
    char p[32];
    std::snprintf(p, sizeof p, "%g", s.probability);
    return s.rule + " p=" + p + " ⊢ " + show_term(s.before) + " ↪ " + show_term(s.after);
}

std::string show_trace(const Trace &t) {
    std::string out;
    for (auto &s : t.steps) out += show_step(s) + "\n";
    out += "final: " + show_term(t.final) + "\n";
    return out;
}

}  // namespace lsx
