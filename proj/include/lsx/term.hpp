#pragma once

#include <atomic>
#include <cassert>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lsx/scalar.hpp"
#include "lsx/type.hpp"

namespace lsx {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Preterms. Sums are kept flattened and sorted (canonical form modulo
// associativity and commutativity of +); tensors are right-nested.
struct Term {
    enum class Kind {
        Var,     // name
        Lam,     // name, annot, kid0 = body
        App,     // kid0 = fun, kid1 = arg
        Ket,     // basis, idx (0 = up, 1 = down)
        If,      // basis, kid0 = then, kid1 = else   (the constant ite{} t r)
        Zero,    // null vector
        Sum,     // kids (>= 2, none a Sum, sorted)
        Scale,   // scalar, kid0
        Err,     // lightning
        Meas,    // m, basis, kid0
        Tensor,  // kid0, kid1 (right-nested)
        Head,    // kid0
        Tail,    // kid0
        CastL,   // kid0
        CastR,   // kid0
    };

    Kind kind;
    std::string name;           // Var / Lam
    TypePtr annot;              // Lam
    std::string basis;          // Ket / If / Meas
    int idx = 0;                // Ket
    int m = 0;                  // Meas
    Scalar scalar;              // Scale
    std::vector<TermPtr> kids;

    static TermPtr var(std::string n);
    static TermPtr lam(std::string n, TypePtr annot, TermPtr body);
    static TermPtr app(TermPtr f, TermPtr a);
    static TermPtr ket(std::string basis, int idx);
    static TermPtr ite(std::string basis, TermPtr then_, TermPtr else_);
    static TermPtr zero();
    static TermPtr sum(std::vector<TermPtr> children);  // flattens + sorts
    static TermPtr scale(Scalar s, TermPtr body);
    static TermPtr err();
    static TermPtr meas(int m, std::string basis, TermPtr body);
    static TermPtr tensor(TermPtr l, TermPtr r);  // right-nests
    static TermPtr tensor_of(const std::vector<TermPtr> &fs);
    static TermPtr head(TermPtr t);
    static TermPtr tail(TermPtr t);
    static TermPtr castl(TermPtr t);
    static TermPtr castr(TermPtr t);

    bool is(Kind k) const { return kind == k; }
};

// Convenience ket constructors.
inline TermPtr k0() { return Term::ket("B", 0); }
inline TermPtr k1() { return Term::ket("B", 1); }
inline TermPtr kplus() { return Term::ket("X", 0); }
inline TermPtr kminus() { return Term::ket("X", 1); }

int term_cmp(const TermPtr &x, const TermPtr &y);
bool term_eq(const TermPtr &x, const TermPtr &y);

// Flattens and sorts every Sum node, right-nests tensors; idempotent.
TermPtr canonicalize(const TermPtr &t);

std::set<std::string> free_vars(const TermPtr &t);

// Capture-avoiding substitution t[r/x]; bound variables are renamed with a
// session-unique counter suffix when needed.
TermPtr subst(const TermPtr &t, const std::string &x, const TermPtr &r);

std::string fresh_name(const std::string &base);

// Base terms: tensors of ket constants.
bool is_base_term(const TermPtr &t);

// Values: x | \x.t | b | zero | v+v | a.v | v (x) v.
bool is_value(const TermPtr &t);

// Top-level factors of a tensor (length 1 for non-tensors).
std::vector<TermPtr> tensor_factors(const TermPtr &t);

}  // namespace lsx
