#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsx/basis.hpp"
#include "lsx/term.hpp"

namespace lsx {

struct EvalError : std::runtime_error {
    enum class Kind { IllTyped, FuelExhausted, NotAVectorValue, ArityError };
    Kind kind;
    EvalError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
};

// Amplitudes of a vector value expressed in a product basis. Keys are
// strings over {'0','1'} (0 = up element, 1 = down element of the tagged
// basis); entries below 1e-12 in magnitude are pruned.
struct VectorForm {
    std::string basis;  // basis the labels refer to
    int arity = 0;
    std::map<std::string, Scalar> entries;

    static constexpr double prune_eps = 1e-12;

    double norm2() const {
        double z = 0;
        for (auto &[k, a] : entries) z += a.norm2();
        return z;
    }
};

struct MeasurementOutcome {
    std::string k;        // measured prefix, chars over {'0','1'}
    double probability;
    VectorForm residual;  // empty (arity 0) for a full measurement
};

// Expresses a vector value (a linear combination of tensors of kets) in the
// requested product basis, merging equal bitstrings.
VectorForm to_basis(const TermPtr &t, const std::string &basis, const BasisRegistry &reg);

// Rebuilds the canonical term denoted by a vector form, with kets drawn from
// the form's basis.
TermPtr to_term(const VectorForm &v, const BasisRegistry &reg);

// All outcomes with positive probability for measuring the first m qubits,
// sorted by bitstring; probabilities sum to 1 up to rounding.
std::vector<MeasurementOutcome> outcome_set(const TermPtr &t, int m, const std::string &basis,
                                            const BasisRegistry &reg);

// Samples one outcome (inverse CDF over the sorted outcome list) and returns
// the collapsed term |k> (x) |phi_k> together with its probability. The zero
// vector and the error term collapse to the error term with probability 1.
std::pair<TermPtr, double> measure(const TermPtr &t, int m, const std::string &basis,
                                   const BasisRegistry &reg, std::mt19937_64 &rng);

// The collapsed term for a specific outcome.
TermPtr outcome_term(const MeasurementOutcome &o, const std::string &basis,
                     const BasisRegistry &reg);

}  // namespace lsx
