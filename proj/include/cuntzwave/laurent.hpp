// SPDX-License-Identifier: Apache-2.0
//
// Laurent (bilateral trigonometric) polynomials and sampled functions on the
// unit circle.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cuntzwave {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Coefficients with modulus below this are trimmed from both ends.
inline constexpr double kTrimTol = 1e-14;
/// How far off the unit circle an evaluation point may sit.
inline constexpr double kUnitCircleTol = 1e-12;

/// Integer power by repeated squaring; negative exponents invert.
inline cplx ipow(cplx z, long long n) {
    if (n < 0) {
        z = 1.0 / z;
        n = -n;
    }
    cplx r{1.0, 0.0};
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

/// Floor modulo: result in [0, m).
inline long long floor_mod(long long a, long long m) {
    const long long r = a % m;
    return r < 0 ? r + m : r;
}

/// Floor division consistent with floor_mod.
inline long long floor_div(long long a, long long m) {
    return (a - floor_mod(a, m)) / m;
}

/// p(z) = sum_k c_k z^k for k = min_degree ... min_degree + size - 1.
class LaurentPoly {
public:
    LaurentPoly() = default;

    LaurentPoly(int min_degree, std::vector<cplx> coeffs)
        : min_degree_(min_degree), coeffs_(std::move(coeffs)) {
        normalize();
    }

    static LaurentPoly constant(cplx c) { return LaurentPoly(0, {c}); }

    static LaurentPoly monomial(int degree, cplx c = 1.0) {
        return LaurentPoly(degree, {c});
    }

    bool is_zero() const { return coeffs_.empty(); }
    int min_degree() const { return min_degree_; }
    /// Top degree; equals min_degree - 1 for the zero polynomial.
    int max_degree() const { return min_degree_ + static_cast<int>(coeffs_.size()) - 1; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const cplx> coeffs() const { return coeffs_; }

    /// Coefficient of z^k (zero outside the stored range).
    cplx coeff(long long k) const {
        const long long off = k - min_degree_;
        if (off < 0 || off >= static_cast<long long>(coeffs_.size())) return {0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(off)];
    }

    /// Two-sided Horner evaluation; z must lie on the unit circle.
    cplx operator()(cplx z) const {
        if (!(std::abs(std::abs(z) - 1.0) <= kUnitCircleTol))
            throw std::domain_error("LaurentPoly: evaluation point off the unit circle");
        return eval_unchecked(z);
    }

    /// Evaluate at z = exp(i theta).
    cplx at_angle(double theta) const { return eval_unchecked(std::polar(1.0, theta)); }

    /// Evaluate as a 2pi-periodic function of t with z = exp(-i t).
    cplx at_t(double t) const { return at_angle(-t); }

    double norm() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return std::sqrt(s);
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = add(*this, o, 1.0); }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = add(*this, o, -1.0); }
    LaurentPoly& operator*=(cplx s) {
        for (auto& c : coeffs_) c *= s;
        normalize();
        return *this;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return add(a, b, 1.0); }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return add(a, b, -1.0); }
    friend LaurentPoly operator-(const LaurentPoly& a) { return a * cplx(-1.0); }
    friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
    friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }

    /// Direct convolution.
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
        for (std::size_t i = 0; i < a.size(); ++i) {
            const cplx ai = a.coeffs_[i];
            if (ai == cplx{}) continue;
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b.coeffs_[j];
        }
        return LaurentPoly(a.min_degree_ + b.min_degree_, std::move(out));
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    /// Largest coefficient-wise difference, aligned by degree.
    friend double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() && b.is_zero()) return 0.0;
        const int lo = std::min(a.is_zero() ? b.min_degree_ : a.min_degree_,
                                b.is_zero() ? a.min_degree_ : b.min_degree_);
        const int hi = std::max(a.max_degree(), b.max_degree());
        double d = 0.0;
        for (int k = lo; k <= hi; ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
        return d;
    }

private:
    static LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b, double sign) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return b * cplx(sign);
        const int lo = std::min(a.min_degree_, b.min_degree_);
        const int hi = std::max(a.max_degree(), b.max_degree());
        std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1), cplx{});
        for (std::size_t i = 0; i < a.size(); ++i) out[a.min_degree_ - lo + i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.size(); ++i) out[b.min_degree_ - lo + i] += sign * b.coeffs_[i];
        return LaurentPoly(lo, std::move(out));
    }

    cplx eval_unchecked(cplx z) const {
        if (coeffs_.empty()) return {0.0, 0.0};
        const int lo = min_degree_;
        const int hi = max_degree();
        if (lo >= 0) {
            cplx acc{};
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
            return acc * ipow(z, lo);
        }
        const cplx w = 1.0 / z;
        // Negative powers: Horner in w over k = lo .. min(hi, -1).
        const int neg_top = std::min(hi, -1);
        cplx neg{};
        for (int k = lo; k <= neg_top; ++k) neg = neg * w + coeff(k);
        neg *= ipow(w, -neg_top);
        if (hi < 0) return neg;
        cplx pos{};
        for (int k = hi; k >= 0; --k) pos = pos * z + coeff(k);
        return pos + neg;
    }

    void normalize() {
        std::size_t first = 0;
        while (first < coeffs_.size() && std::abs(coeffs_[first]) < kTrimTol) ++first;
        std::size_t last = coeffs_.size();
        while (last > first && std::abs(coeffs_[last - 1]) < kTrimTol) --last;
        if (first == last) {
            coeffs_.clear();
            min_degree_ = 0;
            return;
        }
        coeffs_ = std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                                    coeffs_.begin() + static_cast<std::ptrdiff_t>(last));
        min_degree_ += static_cast<int>(first);
    }

    int min_degree_ = 0;
    std::vector<cplx> coeffs_;
};

/// Conjugate-linear in the first argument.
inline cplx inner(const LaurentPoly& a, const LaurentPoly& b) {
    cplx s{};
    const int lo = std::max(a.min_degree(), b.min_degree());
    const int hi = std::min(a.max_degree(), b.max_degree());
    for (int k = lo; k <= hi; ++k) s += std::conj(a.coeff(k)) * b.coeff(k);
    return s;
}

inline cplx evaluate(const LaurentPoly& p, cplx z) { return p(z); }

/// xi(z) -> xi(z^n).
inline LaurentPoly compose_power(const LaurentPoly& p, int n) {
    if (n < 1) throw std::invalid_argument("compose_power: exponent must be >= 1");
    if (p.is_zero()) return {};
    std::vector<cplx> out((p.size() - 1) * static_cast<std::size_t>(n) + 1, cplx{});
    for (std::size_t i = 0; i < p.size(); ++i) out[i * static_cast<std::size_t>(n)] = p.coeffs()[i];
    return LaurentPoly(p.min_degree() * n, std::move(out));
}

/// Pointwise conjugate on the circle: sum conj(c_k) z^{-k}.
inline LaurentPoly conj_reflect(const LaurentPoly& p) {
    if (p.is_zero()) return {};
    std::vector<cplx> out(p.coeffs().rbegin(), p.coeffs().rend());
    for (auto& c : out) c = std::conj(c);
    return LaurentPoly(-p.max_degree(), std::move(out));
}

/// p(z) -> p(-z).
inline LaurentPoly negate_variable(const LaurentPoly& p) {
    std::vector<cplx> out(p.coeffs().begin(), p.coeffs().end());
    for (std::size_t i = 0; i < out.size(); ++i)
        if ((p.min_degree() + static_cast<long long>(i)) % 2 != 0) out[i] = -out[i];
    return LaurentPoly(p.min_degree(), std::move(out));
}

/// Multiply by z^d.
inline LaurentPoly shift(const LaurentPoly& p, int d) {
    if (p.is_zero()) return {};
    return LaurentPoly(p.min_degree() + d, std::vector<cplx>(p.coeffs().begin(), p.coeffs().end()));
}

/// Coefficient q of the result is coefficient n*q + r of p (polyphase component r).
inline LaurentPoly polyphase(const LaurentPoly& p, int n, int r) {
    if (p.is_zero()) return {};
    const long long qlo = floor_div(p.min_degree() - r + n - 1, n);
    const long long qhi = floor_div(p.max_degree() - r, n);
    if (qhi < qlo) return {};
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(qhi - qlo + 1));
    for (long long q = qlo; q <= qhi; ++q) out.push_back(p.coeff(n * q + r));
    return LaurentPoly(static_cast<int>(qlo), std::move(out));
}

/// The M-th roots of unity exp(2 pi i j / M).
struct CircleGrid {
    long long M = 0;

    explicit CircleGrid(long long m = 1) : M(m) {
        if (m < 1) throw std::invalid_argument("CircleGrid: M must be positive");
    }

    double angle(long long j) const { return kTwoPi * static_cast<double>(floor_mod(j, M)) / static_cast<double>(M); }
    cplx point(long long j) const { return std::polar(1.0, angle(j)); }
    /// Index of z^n when z is point j.
    long long power_index(long long j, long long n) const { return floor_mod(floor_mod(j, M) * n, M); }
    /// Nearest grid index to exp(i theta).
    long long nearest(double theta) const {
        return floor_mod(std::llround(theta * static_cast<double>(M) / kTwoPi), M);
    }
    bool coprime_to(long long n) const { return std::gcd(M, n) == 1; }

    friend bool operator==(const CircleGrid&, const CircleGrid&) = default;
};

/// Grid for z -> z^N dynamics: M = N^L - 1 in [4095, 65535], so that j -> N j
/// mod M is a permutation. Falls back to the smallest M >= 4095 coprime to N
/// when no power fits the window.
inline CircleGrid canonical_grid(long long n, long long lo = 4095, long long hi = 65535) {
    if (n < 2) throw std::invalid_argument("canonical_grid: scale must be >= 2");
    long long p = n;
    while (p - 1 < lo && p <= hi) p *= n;
    if (p - 1 >= lo && p - 1 <= hi) return CircleGrid(p - 1);
    long long m = lo;
    while (std::gcd(m, n) != 1) ++m;
    return CircleGrid(m);
}

/// Smallest multiple of n that is >= lo (grids on which z -> rho z is a rotation).
inline CircleGrid rotation_grid(long long n, long long lo = 4096) {
    return CircleGrid(((lo + n - 1) / n) * n);
}

/// Complex samples at the points of a CircleGrid.
struct GridFunction {
    CircleGrid grid;
    std::vector<cplx> values;

    GridFunction() = default;
    GridFunction(CircleGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (static_cast<long long>(values.size()) != grid.M)
            throw std::invalid_argument("GridFunction: values length must equal grid size");
    }

    static GridFunction constant(CircleGrid g, cplx c) {
        return GridFunction(g, std::vector<cplx>(static_cast<std::size_t>(g.M), c));
    }

    const cplx& operator[](long long j) const { return values[static_cast<std::size_t>(floor_mod(j, grid.M))]; }
    cplx& operator[](long long j) { return values[static_cast<std::size_t>(floor_mod(j, grid.M))]; }

    /// Nearest-sample lookup at exp(i theta).
    cplx at_angle(double theta) const { return (*this)[grid.nearest(theta)]; }
    cplx at_t(double t) const { return at_angle(-t); }

    double sup_norm() const {
        double s = 0.0;
        for (const auto& v : values) s = std::max(s, std::abs(v));
        return s;
    }
    /// L2 norm for the normalized counting measure.
    double norm() const {
        double s = 0.0;
        for (const auto& v : values) s += std::norm(v);
        return std::sqrt(s / static_cast<double>(values.size()));
    }
};

inline GridFunction sample(const LaurentPoly& p, const CircleGrid& grid) {
    std::vector<cplx> v(static_cast<std::size_t>(grid.M));
    for (long long j = 0; j < grid.M; ++j) v[static_cast<std::size_t>(j)] = p.at_angle(grid.angle(j));
    return GridFunction(grid, std::move(v));
}

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid functions live on different grids");
}

inline GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    GridFunction out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= b.values[j];
    return out;
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    GridFunction out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += b.values[j];
    return out;
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    GridFunction out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
    return out;
}

inline GridFunction operator*(cplx s, GridFunction a) {
    for (auto& v : a.values) v *= s;
    return a;
}

/// xi(z) -> xi(z^n) on the same grid.
inline GridFunction compose_power(const GridFunction& f, long long n) {
    GridFunction out = f;
    for (long long j = 0; j < f.grid.M; ++j) out[j] = f[f.grid.power_index(j, n)];
    return out;
}

/// Permutation cycles of j -> n j mod M, each starting at its smallest index.
/// Requires gcd(M, n) = 1.
inline std::vector<std::vector<long long>> power_cycles(const CircleGrid& grid, long long n) {
    if (!grid.coprime_to(n))
        throw std::invalid_argument("power_cycles: grid size must be coprime to the scale");
    std::vector<char> seen(static_cast<std::size_t>(grid.M), 0);
    std::vector<std::vector<long long>> cycles;
    for (long long j = 0; j < grid.M; ++j) {
        if (seen[static_cast<std::size_t>(j)]) continue;
        std::vector<long long> cyc;
        for (long long k = j; !seen[static_cast<std::size_t>(k)]; k = grid.power_index(k, n)) {
            seen[static_cast<std::size_t>(k)] = 1;
            cyc.push_back(k);
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

/// Distance between unit complex numbers measured as an angle in [0, pi].
inline double arc_distance(cplx a, cplx b) { return std::abs(std::arg(a * std::conj(b))); }

}  // namespace cuntzwave
