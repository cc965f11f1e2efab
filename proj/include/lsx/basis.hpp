#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsx/scalar.hpp"

namespace lsx {

// A single-qubit vector in the computational basis.
struct Vec2 {
    Scalar a0;  // amplitude on |0>
    Scalar a1;  // amplitude on |1>

    double norm2() const { return a0.norm2() + a1.norm2(); }

    Scalar inner(const Vec2 &o) const {  // <this|o>
        return a0.conj() * o.a0 + a1.conj() * o.a1;
    }

    // Equality up to a global phase: |<u|v>| == |u||v| within tolerance.
    bool same_ray(const Vec2 &o, double tol = 1e-9) const {
        double lhs = inner(o).abs();
        double rhs = std::sqrt(norm2() * o.norm2());
        return std::fabs(lhs - rhs) < tol;
    }

    bool eq(const Vec2 &o) const { return a0.eq(o.a0) && a1.eq(o.a1); }
};

inline Vec2 ket0() { return {{1, 0}, {0, 0}}; }
inline Vec2 ket1() { return {{0, 0}, {1, 0}}; }
inline Vec2 ket_plus() { return {inv_sqrt2(), inv_sqrt2()}; }
inline Vec2 ket_minus() { return {inv_sqrt2(), {-inv_sqrt2().re, 0}}; }

// A declared measurement basis: an orthonormal pair (up, down).
struct BasisDef {
    std::string id;  // "B", "X", "B1", "B2", ...
    Vec2 up;
    Vec2 down;
};

enum class RegisterMode { Strict, Overlapping };

struct BasisError : std::runtime_error {
    enum class Kind { NotUnitary, OverlapViolation, UnknownBasis, Duplicate };
    Kind kind;
    BasisError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
};

// Registry of measurement bases. "B" (computational) and "X" (Hadamard) are
// built in; user bases are "B1".."Bn". Frozen after session setup: the
// checker and evaluator only read it.
class BasisRegistry {
  public:
    BasisRegistry() {
        defs_["B"] = {"B", ket0(), ket1()};
        defs_["X"] = {"X", ket_plus(), ket_minus()};
    }

    static constexpr double tol = 1e-9;

    const BasisDef &get(const std::string &id) const {
        auto it = defs_.find(id);
        if (it == defs_.end())
            throw BasisError(BasisError::Kind::UnknownBasis, "unknown basis " + id);
        return it->second;
    }

    bool has(const std::string &id) const { return defs_.count(id) != 0; }

    std::vector<std::string> user_ids() const {
        std::vector<std::string> out;
        for (auto &[id, d] : defs_)
            if (id != "B" && id != "X") out.push_back(id);
        return out;
    }

    // Registers basis `def` under def.id. Orthonormality is always required.
    // In strict mode the new basis must not share an element (up to scalar
    // multiple) with the computational basis or any other registered user
    // basis; coinciding with X is allowed.
    std::string register_basis(const BasisDef &def, RegisterMode mode) {
        if (def.id.empty() || def.id == "B" || def.id == "X" || defs_.count(def.id))
            throw BasisError(BasisError::Kind::Duplicate, "basis id unavailable: " + def.id);
        if (std::fabs(def.up.norm2() - 1.0) > tol || std::fabs(def.down.norm2() - 1.0) > tol ||
            def.up.inner(def.down).abs() > tol)
            throw BasisError(BasisError::Kind::NotUnitary,
                             "basis " + def.id + " is not orthonormal");
        if (mode == RegisterMode::Strict) {
            auto clashes = [&](const Vec2 &v, const BasisDef &other) {
                return v.same_ray(other.up) || v.same_ray(other.down);
            };
            for (auto &[id, other] : defs_) {
                if (id == "X") continue;  // one basis may coincide with the Hadamard pair
                if (clashes(def.up, other) || clashes(def.down, other))
                    throw BasisError(BasisError::Kind::OverlapViolation,
                                     "basis " + def.id + " overlaps basis " + id);
            }
        }
        defs_[def.id] = def;
        return def.id;
    }

  private:
    std::map<std::string, BasisDef> defs_;
};

}  // namespace lsx
