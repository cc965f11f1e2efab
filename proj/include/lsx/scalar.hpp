#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace lsx {

// Complex amplitude with tolerance-based equality. All scalar comparisons in
// the rewrite engine and the type checker go through this type so that the
// epsilon is fixed in exactly one place.
struct Scalar {
    double re = 0.0;
    double im = 0.0;

    static constexpr double eps = 1e-12;

    Scalar() = default;
    Scalar(double r, double i = 0.0) : re(r), im(i) {}
    Scalar(std::complex<double> c) : re(c.real()), im(c.imag()) {}

    std::complex<double> c() const { return {re, im}; }

    bool finite() const { return std::isfinite(re) && std::isfinite(im); }

    double norm2() const { return re * re + im * im; }
    double abs() const { return std::sqrt(norm2()); }

    Scalar conj() const { return {re, -im}; }

    friend Scalar operator+(Scalar a, Scalar b) { return {a.re + b.re, a.im + b.im}; }
    friend Scalar operator-(Scalar a, Scalar b) { return {a.re - b.re, a.im - b.im}; }
    friend Scalar operator*(Scalar a, Scalar b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Scalar operator/(Scalar a, double d) { return {a.re / d, a.im / d}; }

    bool eq(const Scalar &o) const {
        return std::fabs(re - o.re) < eps && std::fabs(im - o.im) < eps;
    }
    bool is_zero() const { return abs() < eps; }
    bool is_one() const { return eq(Scalar{1.0, 0.0}); }

    // Deterministic ordering for canonical forms: lexicographic on (re, im)
    // after snapping to a grid coarser than eps, so that eq-equal scalars
    // never compare unequal.
    static int64_t snap(double v) { return (int64_t)std::llround(v * 1e9); }
    int compare(const Scalar &o) const {
        int64_t a = snap(re), b = snap(o.re);
        if (a != b) return a < b ? -1 : 1;
        a = snap(im);
        b = snap(o.im);
        if (a != b) return a < b ? -1 : 1;
        return 0;
    }
};

inline Scalar inv_sqrt2() { return {1.0 / std::sqrt(2.0), 0.0}; }

}  // namespace lsx
