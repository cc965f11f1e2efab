#include "lsx/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "lsx/pretty.hpp"

namespace lsx {

namespace {

struct Summand {
    Scalar coeff;
    std::vector<TermPtr> kets;
};

void collect_summands(const TermPtr &t, std::vector<Summand> &out) {
    if (t->is(Term::Kind::Sum)) {
        for (auto &k : t->kids) collect_summands(k, out);
        return;
    }
    Scalar c{1, 0};
    TermPtr body = t;
    while (body->is(Term::Kind::Scale)) {
        c = c * body->scalar;
        body = body->kids[0];
    }
    auto fs = tensor_factors(body);
    for (auto &f : fs)
        if (!f->is(Term::Kind::Ket))
            throw EvalError(EvalError::Kind::NotAVectorValue,
                            "not a vector value: " + show_term(t));
    out.push_back({c, std::move(fs)});
}

// Amplitudes of a single ket in the target basis: (<up|v>, <down|v>).
std::pair<Scalar, Scalar> ket_in_basis(const TermPtr &ket, const BasisDef &target,
                                       const BasisRegistry &reg) {
    const BasisDef &own = reg.get(ket->basis);
    Vec2 v = ket->idx == 0 ? own.up : own.down;
    return {target.up.inner(v), target.down.inner(v)};
}

}  // namespace

VectorForm to_basis(const TermPtr &t, const std::string &basis, const BasisRegistry &reg) {
    const BasisDef &target = reg.get(basis);
    std::vector<Summand> summands;
    collect_summands(canonicalize(t), summands);
    if (summands.empty())
        throw EvalError(EvalError::Kind::NotAVectorValue, "empty vector value");

    VectorForm out;
    out.basis = basis;
    out.arity = (int)summands[0].kets.size();
    for (auto &s : summands)
        if ((int)s.kets.size() != out.arity)
            throw EvalError(EvalError::Kind::NotAVectorValue,
                            "mixed arity in vector value: " + show_term(t));

    for (auto &s : summands) {
        // Expand the tensor of single-qubit amplitude pairs.
        std::vector<std::pair<std::string, Scalar>> acc{{"", s.coeff}};
        for (auto &ket : s.kets) {
            auto [a0, a1] = ket_in_basis(ket, target, reg);
            std::vector<std::pair<std::string, Scalar>> next;
            next.reserve(acc.size() * 2);
            for (auto &[bits, amp] : acc) {
                if (!(amp * a0).is_zero()) next.emplace_back(bits + "0", amp * a0);
                if (!(amp * a1).is_zero()) next.emplace_back(bits + "1", amp * a1);
            }
            acc = std::move(next);
        }
        for (auto &[bits, amp] : acc) {
            // Short-circuited zero amplitudes leave short strings behind.
            if ((int)bits.size() != out.arity) continue;
            auto it = out.entries.find(bits);
            if (it == out.entries.end())
                out.entries.emplace(bits, amp);
            else
                it->second = it->second + amp;
        }
    }
    for (auto it = out.entries.begin(); it != out.entries.end();)
        it = it->second.abs() < VectorForm::prune_eps ? out.entries.erase(it) : std::next(it);
    return out;
}

TermPtr to_term(const VectorForm &v, const BasisRegistry &reg) {
    (void)reg;
    if (v.entries.empty()) return Term::zero();
    std::vector<TermPtr> parts;
    for (auto &[bits, amp] : v.entries) {
        std::vector<TermPtr> kets;
        for (char c : bits) kets.push_back(Term::ket(v.basis, c == '0' ? 0 : 1));
        TermPtr body = Term::tensor_of(kets);
        parts.push_back(amp.is_one() ? body : Term::scale(amp, body));
    }
    TermPtr t = parts.size() == 1 ? parts[0] : Term::sum(std::move(parts));
    return canonicalize(t);
}

std::vector<MeasurementOutcome> outcome_set(const TermPtr &t, int m, const std::string &basis,
                                            const BasisRegistry &reg) {
    VectorForm v = to_basis(t, basis, reg);
    if (m < 1 || m > v.arity)
        throw EvalError(EvalError::Kind::ArityError,
                        "measuring " + std::to_string(m) + " of " + std::to_string(v.arity) +
                            " qubits");
    double z = v.norm2();
    if (z < VectorForm::prune_eps)
        throw EvalError(EvalError::Kind::NotAVectorValue, "measuring the zero vector");

    std::map<std::string, std::map<std::string, Scalar>> groups;
    for (auto &[bits, amp] : v.entries) groups[bits.substr(0, m)][bits.substr(m)] = amp;

    std::vector<MeasurementOutcome> out;
    for (auto &[prefix, suffixes] : groups) {
        double ell = 0;
        for (auto &[suf, amp] : suffixes) ell += amp.norm2();
        MeasurementOutcome o;
        o.k = prefix;
        o.probability = ell / z;
        o.residual.basis = basis;
        o.residual.arity = v.arity - m;
        double root = std::sqrt(ell);
        for (auto &[suf, amp] : suffixes)
            if (!suf.empty()) o.residual.entries.emplace(suf, amp / root);
        out.push_back(std::move(o));
    }
    return out;  // map iteration: already sorted by bitstring
}

TermPtr outcome_term(const MeasurementOutcome &o, const std::string &basis,
                     const BasisRegistry &reg) {
    std::vector<TermPtr> kets;
    for (char c : o.k) kets.push_back(Term::ket(basis, c == '0' ? 0 : 1));
    TermPtr prefix = Term::tensor_of(kets);
    if (o.residual.arity == 0) return prefix;
    return canonicalize(Term::tensor(prefix, to_term(o.residual, reg)));
}

std::pair<TermPtr, double> measure(const TermPtr &t, int m, const std::string &basis,
                                   const BasisRegistry &reg, std::mt19937_64 &rng) {
    if (t->is(Term::Kind::Zero) || t->is(Term::Kind::Err)) return {Term::err(), 1.0};
    auto outcomes = outcome_set(t, m, basis, reg);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u = uni(rng), cum = 0;
    for (auto &o : outcomes) {
        cum += o.probability;
        if (u < cum || &o == &outcomes.back())
            return {outcome_term(o, basis, reg), o.probability};
    }
    return {outcome_term(outcomes.back(), basis, reg), outcomes.back().probability};
}

}  // namespace lsx
