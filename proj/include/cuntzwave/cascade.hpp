// SPDX-License-Identifier: Apache-2.0
//
// Frequency-side cascade: the scaling function as a truncated infinite
// product of the low-pass filter, the mother functions, periodization checks
// and the operator limits U^n E S_0^n xi.

#pragma once

#include <iomanip>
#include <ostream>
#include <vector>

#include "cuntzwave/cuntz_rep.hpp"

namespace cuntzwave {

inline constexpr int kDefaultCascadeDepth = 20;
inline constexpr double kDefaultCascadeTmax = 8.0 * kPi;
inline constexpr int kDefaultCascadeSamples = 4096;

/// Samples of a function of t on a uniform grid symmetric about 0.
struct LineSamples {
    std::vector<double> t_values;
    std::vector<cplx> values;
    int depth = 0;
    int scale = 0;
    /// Set for grid-kind filters, whose Lipschitz regularity near 0 is assumed rather than checked.
    bool rough_filter_warning = false;

    double spacing() const { return t_values.size() > 1 ? t_values[1] - t_values[0] : 0.0; }
    double t_max() const { return t_values.empty() ? 0.0 : t_values.back(); }
};

/// t_j = (j - h) T / h for j = 0..2h; the count is rounded up to odd so that
/// 0 is a sample point.
inline std::vector<double> symmetric_line(double t_max, int samples) {
    if (samples < 1 || !(t_max > 0)) throw std::invalid_argument("symmetric_line: need T > 0 and samples >= 1");
    const int half = std::max(1, samples / 2);
    std::vector<double> t(static_cast<std::size_t>(2 * half + 1));
    for (int j = 0; j <= 2 * half; ++j) t[static_cast<std::size_t>(j)] = t_max * (j - half) / half;
    return t;
}

/// Line with spacing 2 pi / points_per_period covering [-(2K+1) pi, (2K+1) pi],
/// which is what per_residual needs for lattice truncation K.
struct PerGrid {
    double t_max;
    int samples;
};

inline PerGrid per_grid(int lattice_k, int points_per_period = 64) {
    if (points_per_period % 2 != 0) throw std::invalid_argument("per_grid: points per period must be even");
    return {(2 * lattice_k + 1) * kPi, (2 * lattice_k + 1) * points_per_period + 1};
}

/// (2 pi)^{-1/2} prod_{k=1}^{depth} N^{-1/2} m0(t N^{-k}). At t = 0 every factor
/// is 1 for an admissible m0, and the value is returned exactly.
inline cplx scaling_hat_at(const Filter& m0, int n, double t, int depth) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    cplx p{1.0 / std::sqrt(kTwoPi), 0.0};
    if (t == 0.0) return p;
    double s = t;
    for (int k = 1; k <= depth; ++k) {
        s /= n;
        p *= inv * filter_at_t(m0, s);
    }
    return p;
}

/// N^{-1/2} m_i(t/N) phi_hat(t/N).
inline cplx mother_hat_at(const FilterBank& fb, int i, double t, int depth) {
    const int n = fb.scale;
    return filter_at_t(fb[i], t / n) * scaling_hat_at(fb[0], n, t / n, depth) / std::sqrt(static_cast<double>(n));
}

inline LineSamples scaling_hat(const Filter& m0, int n, double t_max = kDefaultCascadeTmax,
                               int samples = kDefaultCascadeSamples, int depth = kDefaultCascadeDepth,
                               double tol = kVerifyTol) {
    if (depth < 0) throw std::invalid_argument("scaling_hat: depth must be >= 0");
    const auto lp = check_lowpass(m0, n, tol);
    if (!lp.ok)
        throw std::invalid_argument("scaling_hat: m0 is not an admissible low-pass filter (|m0(0) - sqrt N| = " +
                                    std::to_string(lp.value_residual) + ")");
    LineSamples out;
    out.t_values = symmetric_line(t_max, samples);
    out.depth = depth;
    out.scale = n;
    out.rough_filter_warning = kind_of(m0) == FilterKind::grid;
    out.values.reserve(out.t_values.size());
    for (double t : out.t_values) out.values.push_back(scaling_hat_at(m0, n, t, depth));
    return out;
}

/// psi_hat_i on the grid of phi_hat, recomputing phi_hat(t/N) at the same depth.
inline LineSamples mother_hat(const FilterBank& fb, int i, const LineSamples& phi_hat) {
    if (i == 0) throw std::invalid_argument("mother_hat: index 0 is the father function");
    if (i < 0 || i >= fb.scale) throw std::out_of_range("mother_hat: filter index out of range");
    LineSamples out = phi_hat;
    for (std::size_t j = 0; j < out.t_values.size(); ++j)
        out.values[j] = mother_hat_at(fb, i, out.t_values[j], phi_hat.depth);
    out.rough_filter_warning = fb.kind() == FilterKind::grid;
    return out;
}

struct PerReport {
    /// max over t in [-pi, pi] of | sum_{|k| <= K} |f(t + 2 pi k)|^2 - (2 pi)^{-1} |.
    double residual = 0.0;
    /// K times the largest outermost lattice term; a k^{-2}-decay estimate of the truncated tail.
    double tail_estimate = 0.0;
};

inline PerReport per_residual(const LineSamples& s, int lattice_k) {
    if (lattice_k < 0) throw std::invalid_argument("per_residual: K must be >= 0");
    const double h = s.spacing();
    if (!(h > 0)) throw std::invalid_argument("per_residual: need at least two samples");
    const double steps = kTwoPi / h;
    const long period = std::lround(steps);
    if (std::abs(steps - static_cast<double>(period)) > 1e-6)
        throw std::invalid_argument("per_residual: sample spacing must divide 2 pi");
    if (s.t_max() < kTwoPi * lattice_k + kPi - 1e-9 * s.t_max())
        throw std::invalid_argument("per_residual: T_max must be at least 2 pi K + pi");
    const long n = static_cast<long>(s.values.size());
    const long mid = n / 2;
    const long half_period = period / 2;
    PerReport r;
    const double target = 1.0 / kTwoPi;
    for (long j = mid - half_period; j <= mid + half_period; ++j) {
        double sum = 0.0;
        for (long k = -lattice_k; k <= lattice_k; ++k) sum += std::norm(s.values[static_cast<std::size_t>(j + k * period)]);
        r.residual = std::max(r.residual, std::abs(sum - target));
        if (lattice_k > 0) {
            const double edge = std::norm(s.values[static_cast<std::size_t>(j + lattice_k * period)]) +
                                std::norm(s.values[static_cast<std::size_t>(j - lattice_k * period)]);
            r.tail_estimate = std::max(r.tail_estimate, lattice_k * edge);
        }
    }
    return r;
}

/// sup over the line of | U^n E S_0^{n-1} S_i xi - (2 pi)^{1/2} f_hat xi |, where
/// f_hat is phi_hat for i = 0 and psi_hat_i otherwise, evaluated at depth n+20.
/// The left side comes from applying the operators to xi exactly; its degree
/// grows like N^n.
inline double cascade_limit_residual(const CuntzRep& rep, const LaurentPoly& xi, int n,
                                     double t_max = 2.0 * kPi, int samples = kDefaultCascadeSamples,
                                     int mother = 0) {
    if (n < 1) throw std::invalid_argument("cascade_limit_residual: n must be >= 1");
    const int scale = rep.scale();
    if (mother < 0 || mother >= scale) throw std::out_of_range("cascade_limit_residual: filter index");
    LaurentPoly v = rep.isometry(mother, xi);
    for (int k = 1; k < n; ++k) v = rep.isometry(0, v);
    const double scale_n = std::pow(static_cast<double>(scale), n);
    const double amp = std::pow(static_cast<double>(scale), -0.5 * n);
    const double root2pi = std::sqrt(kTwoPi);
    double worst = 0.0;
    for (double t : symmetric_line(t_max, samples)) {
        const double s = t / scale_n;
        const cplx lhs = (std::abs(s) <= kPi) ? amp * v.at_t(s) : cplx{};
        const cplx fhat = mother == 0 ? scaling_hat_at(rep.bank()[0], scale, t, n + 20)
                                      : mother_hat_at(rep.bank(), mother, t, n + 20);
        worst = std::max(worst, std::abs(lhs - root2pi * fhat * xi.at_t(t)));
    }
    return worst;
}

/// Columns t, re, im, abs.
inline void write_csv(std::ostream& os, const LineSamples& s) {
    os << "t,re,im,abs\n" << std::setprecision(17);
    for (std::size_t j = 0; j < s.values.size(); ++j)
        os << s.t_values[j] << ',' << s.values[j].real() << ',' << s.values[j].imag() << ','
           << std::abs(s.values[j]) << '\n';
}

}  // namespace cuntzwave
