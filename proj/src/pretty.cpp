#include "lsx/pretty.hpp"

#include <cmath>
#include <cstdio>

namespace lsx {

namespace {

std::string show_real(double v) {
    if (v == (long long)v && std::fabs(v) < 1e15) return std::to_string((long long)v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Precedence levels: sum 0 < scalar-dot 1 < prefix ops 2 < tensor 3 < app 4 < atom 5.
enum { SUM = 0, DOT = 1, PREFIX = 2, TENSOR = 3, APP = 4, ATOM = 5 };

std::string ket_name(const std::string &basis, int idx) {
    if (basis == "B") return idx == 0 ? "|0>" : "|1>";
    if (basis == "X") return idx == 0 ? "|+>" : "|->";
    std::string n = basis.substr(1);
    return (idx == 0 ? "|up" : "|dn") + n + ">";
}

std::string ite_name(const std::string &basis) {
    if (basis == "B") return "ite";
    if (basis == "X") return "itex";
    return "ite" + basis.substr(1);
}

std::string pi_name(const std::string &basis) {
    if (basis == "B") return "pi";
    if (basis == "X") return "pix";
    return "pi[" + basis.substr(1) + "]";
}

std::string term_at(const TermPtr &t, int level);

std::string wrap(const std::string &s, bool need) { return need ? "(" + s + ")" : s; }

std::string term_at(const TermPtr &t, int level) {
    switch (t->kind) {
        case Term::Kind::Var: return t->name;
        case Term::Kind::Ket: return ket_name(t->basis, t->idx);
        case Term::Kind::Zero: return "zero";
        case Term::Kind::Err: return "err";
        case Term::Kind::If:
            return ite_name(t->basis) + "(" + term_at(t->kids[0], SUM) + ", " +
                   term_at(t->kids[1], SUM) + ")";
        case Term::Kind::Lam:
            return wrap("\\" + t->name + ":" + show_type(t->annot) + ". " +
                            term_at(t->kids[0], SUM),
                        level > SUM);
        case Term::Kind::Sum: {
            std::string s;
            for (size_t i = 0; i < t->kids.size(); ++i) {
                if (i) s += " + ";
                s += term_at(t->kids[i], DOT);
            }
            return wrap(s, level > SUM);
        }
        case Term::Kind::Scale: {
            const TermPtr &body = t->kids[0];
            int blevel = body->is(Term::Kind::Scale) ? ATOM : PREFIX;
            return wrap(show_scalar(t->scalar) + " . " + term_at(body, blevel), level > DOT);
        }
        case Term::Kind::Meas:
            return wrap(pi_name(t->basis) + " " + std::to_string(t->m) + " " +
                            term_at(t->kids[0], PREFIX),
                        level > PREFIX);
        case Term::Kind::Head:
            return wrap("head " + term_at(t->kids[0], PREFIX), level > PREFIX);
        case Term::Kind::Tail:
            return wrap("tail " + term_at(t->kids[0], PREFIX), level > PREFIX);
        case Term::Kind::CastL:
            return wrap("castl " + term_at(t->kids[0], PREFIX), level > PREFIX);
        case Term::Kind::CastR:
            return wrap("castr " + term_at(t->kids[0], PREFIX), level > PREFIX);
        case Term::Kind::Tensor: {
            auto fs = tensor_factors(t);
            std::string s;
            for (size_t i = 0; i < fs.size(); ++i) {
                if (i) s += " (x) ";
                s += term_at(fs[i], APP);
            }
            return wrap(s, level > TENSOR);
        }
        case Term::Kind::App:
            return wrap(term_at(t->kids[0], APP) + " " + term_at(t->kids[1], ATOM),
                        level > APP);
    }
    return "?";
}

}  // namespace

std::string show_scalar(const Scalar &s) {
    if (s.eq(inv_sqrt2())) return "isqrt2";
    if (s.eq({-inv_sqrt2().re, 0})) return "-isqrt2";
    if (std::fabs(s.im) < Scalar::eps) return show_real(s.re);
    std::string im = show_real(std::fabs(s.im)) + "i";
    if (std::fabs(s.re) < Scalar::eps) return (s.im < 0 ? "-" : "") + im;
    return show_real(s.re) + (s.im < 0 ? "-" : "+") + im;
}

std::string show_type(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom: return t->atom;
        case Type::Kind::Bottom: return "Bot";
        case Type::Kind::Span: return "S(" + show_type(t->a) + ")";
        case Type::Kind::QGen: {
            const Vec2 &v = t->ket;
            if (v.same_ray(ket0())) return "Q[|0>]";
            if (v.same_ray(ket1())) return "Q[|1>]";
            if (v.same_ray(ket_plus())) return "Q[|+>]";
            if (v.same_ray(ket_minus())) return "Q[|->]";
            return "Q[(" + show_scalar(v.a0) + ", " + show_scalar(v.a1) + ")]";
        }
        case Type::Kind::Prod: {
            auto fs = factors(t);
            std::string s;
            for (size_t i = 0; i < fs.size(); ++i) {
                if (i) s += " * ";
                const TypePtr &f = fs[i];
                bool paren = f->is_arrow();
                s += paren ? "(" + show_type(f) + ")" : show_type(f);
            }
            return s;
        }
        case Type::Kind::Arrow: {
            std::string dom = show_type(t->a);
            if (t->a->is_arrow() || t->a->is_prod()) dom = "(" + dom + ")";
            std::string cod = show_type(t->b);
            if (t->b->is_prod()) cod = "(" + cod + ")";
            return dom + " => " + cod;
        }
    }
    return "?";
}

std::string show_term(const TermPtr &t) { return term_at(t, SUM); }

}  // namespace lsx
