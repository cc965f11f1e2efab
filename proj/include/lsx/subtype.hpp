#pragma once

#include <string>
#include <vector>

#include "lsx/basis.hpp"
#include "lsx/type.hpp"

namespace lsx {

struct SubtypeVerdict {
    bool holds = false;
    std::vector<std::string> witness;  // rule names, outermost first
};

// Collapses nested spans: no span directly wraps another span anywhere in
// the result, and the result is equivalent to the input.
TypePtr min_s(const TypePtr &t);

// Similarity on qubit types: equal skeletons after span collapse, with
// atoms freely interchangeable and generators compared up to global phase.
// Pre: both arguments are qubit types.
bool similar(const TypePtr &g1, const TypePtr &g2);

// Generator membership: Q[|psi>] is a subtype of atom `B` when |psi> equals
// an element of the basis up to global phase.
bool qgen_member(const Vec2 &ket, const std::string &atom, const BasisRegistry &reg);

SubtypeVerdict subtype(const TypePtr &a, const TypePtr &b, const BasisRegistry &reg);

inline bool subtype_holds(const TypePtr &a, const TypePtr &b, const BasisRegistry &reg) {
    return subtype(a, b, reg).holds;
}

inline bool type_equiv(const TypePtr &a, const TypePtr &b, const BasisRegistry &reg) {
    return subtype_holds(a, b, reg) && subtype_holds(b, a, reg);
}

}  // namespace lsx
