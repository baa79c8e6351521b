// SPDX-License-Identifier: Apache-2.0
//
// Scale-N filter banks: quadrature-mirror conditions, the modulation matrix and
// its pointwise unitarity, low-pass admissibility, and completion of a
// low-pass filter to a full bank.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cuntzwave/laurent.hpp"

namespace cuntzwave {

/// Residual below which a bank counts as verified.
inline constexpr double kVerifyTol = 1e-10;

/// A filter is either a trigonometric polynomial or a sampled circle function.
using Filter = std::variant<LaurentPoly, GridFunction>;

enum class FilterKind { poly, grid };

inline FilterKind kind_of(const Filter& f) {
    return std::holds_alternative<LaurentPoly>(f) ? FilterKind::poly : FilterKind::grid;
}

inline std::string to_string(FilterKind k) { return k == FilterKind::poly ? "poly" : "grid"; }

/// Evaluate at exp(i theta). Grid filters use the nearest sample.
inline cplx filter_at_angle(const Filter& f, double theta) {
    return std::visit([theta](const auto& g) { return g.at_angle(theta); }, f);
}

/// Evaluate as a function of t with z = exp(-i t).
inline cplx filter_at_t(const Filter& f, double t) { return filter_at_angle(f, -t); }

inline cplx evaluate(const Filter& f, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(std::abs(z) - 1.0) > kUnitCircleTol)
        throw std::domain_error("filter evaluation point off the unit circle");
    return filter_at_angle(f, std::arg(z));
}

struct FilterBank {
    int scale = 0;
    std::vector<Filter> filters;

    FilterBank() = default;
    FilterBank(int n, std::vector<Filter> fs) : scale(n), filters(std::move(fs)) {
        if (scale < 2) throw std::invalid_argument("FilterBank: scale must be >= 2");
        if (static_cast<int>(filters.size()) != scale)
            throw std::invalid_argument("FilterBank: need exactly `scale` filters");
        for (const auto& f : filters)
            if (kind_of(f) != kind_of(filters.front()))
                throw std::invalid_argument("FilterBank: mixed filter kinds");
    }

    static FilterBank from_polys(std::vector<LaurentPoly> ps) {
        const int n = static_cast<int>(ps.size());
        return FilterBank(n, std::vector<Filter>(ps.begin(), ps.end()));
    }

    FilterKind kind() const { return kind_of(filters.front()); }
    const LaurentPoly& poly(int i) const { return std::get<LaurentPoly>(filters.at(static_cast<std::size_t>(i))); }
    const Filter& operator[](int i) const { return filters.at(static_cast<std::size_t>(i)); }
};

/// max_t | sum_k |m(t + 2 pi k / N)|^2 - N | over the grid.
inline double qmf_residual(const Filter& m, int n, const CircleGrid& grid) {
    double worst = 0.0;
    for (long long j = 0; j < grid.M; ++j) {
        const double t = grid.angle(j);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += std::norm(filter_at_t(m, t + kTwoPi * k / n));
        worst = std::max(worst, std::abs(s - n));
    }
    return worst;
}

/// Entry (i, k) is m_i(rho^k z) / sqrt(N), rho = exp(2 pi i / N); z = exp(i theta).
inline Eigen::MatrixXcd modulation_matrix_at_angle(const FilterBank& fb, double theta) {
    const int n = fb.scale;
    Eigen::MatrixXcd c(n, n);
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) c(i, k) = inv * filter_at_angle(fb[i], theta + kTwoPi * k / n);
    return c;
}

inline Eigen::MatrixXcd modulation_matrix(const FilterBank& fb, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(std::abs(z) - 1.0) > kUnitCircleTol)
        throw std::domain_error("modulation_matrix: point off the unit circle");
    return modulation_matrix_at_angle(fb, std::arg(z));
}

struct UnitarityScan {
    double residual = 0.0;
    long long argmax = 0;
};

/// max over the grid of || C(z) C(z)^* - I ||_2, with the worst grid index.
inline UnitarityScan unitarity_scan(const FilterBank& fb, const CircleGrid& grid) {
    UnitarityScan out;
    const auto id = Eigen::MatrixXcd::Identity(fb.scale, fb.scale);
    for (long long j = 0; j < grid.M; ++j) {
        const Eigen::MatrixXcd c = modulation_matrix_at_angle(fb, grid.angle(j));
        const Eigen::MatrixXcd d = c * c.adjoint() - id;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
        const double r = es.eigenvalues().cwiseAbs().maxCoeff();
        if (r > out.residual) {
            out.residual = r;
            out.argmax = j;
        }
    }
    return out;
}

inline double unitarity_residual(const FilterBank& fb, const CircleGrid& grid) {
    return unitarity_scan(fb, grid).residual;
}

/// max_t | sum_k conj(m_i) m_j (t + 2 pi k / N) - delta_ij N |.
inline double pairwise_residual(const FilterBank& fb, int i, int j, const CircleGrid& grid) {
    const int n = fb.scale;
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("pairwise_residual: filter index");
    const double target = i == j ? n : 0.0;
    double worst = 0.0;
    for (long long p = 0; p < grid.M; ++p) {
        const double t = grid.angle(p);
        cplx s{};
        for (int k = 0; k < n; ++k) {
            const double tk = t + kTwoPi * k / n;
            s += std::conj(filter_at_t(fb[i], tk)) * filter_at_t(fb[j], tk);
        }
        worst = std::max(worst, std::abs(s - target));
    }
    return worst;
}

struct LowpassReport {
    bool ok = false;
    /// |m_0(t=0) - sqrt(N)|.
    double value_residual = 0.0;
    /// ||m_0(t=0)| - sqrt(N)|; small while value_residual is large means a pure phase offset.
    double modulus_residual = 0.0;
    /// Unimodular factor m_0(0) / |m_0(0)|.
    cplx phase{1.0, 0.0};
    /// |m_0(2 pi k / N)| for k = 1 .. N-1.
    std::vector<double> zero_residuals;
};

inline LowpassReport check_lowpass(const Filter& m0, int n, double tol = kVerifyTol) {
    LowpassReport r;
    const cplx v0 = filter_at_t(m0, 0.0);
    const double rn = std::sqrt(static_cast<double>(n));
    r.value_residual = std::abs(v0 - rn);
    r.modulus_residual = std::abs(std::abs(v0) - rn);
    r.phase = std::abs(v0) > 0 ? v0 / std::abs(v0) : cplx{1.0, 0.0};
    bool zeros_ok = true;
    for (int k = 1; k < n; ++k) {
        const double z = std::abs(filter_at_t(m0, kTwoPi * k / n));
        r.zero_residuals.push_back(z);
        zeros_ok = zeros_ok && z <= tol;
    }
    r.ok = zeros_ok && r.value_residual <= tol;
    return r;
}

struct CheckReport {
    std::vector<double> qmf_residuals;
    std::vector<std::vector<double>> pairwise_residuals;
    double unitarity_residual = 0.0;
    long long unitarity_argmax = 0;
    bool lowpass_ok = false;
    long long grid_size = 0;
    bool verified = false;
};

inline CheckReport check_bank(const FilterBank& fb, const CircleGrid& grid, double tol = kVerifyTol) {
    CheckReport r;
    const int n = fb.scale;
    r.grid_size = grid.M;
    for (int i = 0; i < n; ++i) r.qmf_residuals.push_back(qmf_residual(fb[i], n, grid));
    r.pairwise_residuals.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r.pairwise_residuals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                pairwise_residual(fb, i, j, grid);
    const auto scan = unitarity_scan(fb, grid);
    r.unitarity_residual = scan.residual;
    r.unitarity_argmax = scan.argmax;
    r.lowpass_ok = check_lowpass(fb[0], n, tol).ok;
    r.verified = r.unitarity_residual <= tol;
    return r;
}

struct Completion {
    FilterBank bank;
    /// True when a polynomial input with N > 2 produced a grid-kind bank.
    bool downgraded_to_grid = false;
    double unitarity_residual = 0.0;
};

namespace detail {

/// Unitary H with first row u (a unit vector). H = e^{-i phi} R where R is the
/// Householder reflector sending e^{-i phi} conj(u) to e_1, so the pivot is 1.
inline Eigen::MatrixXcd householder_completion(const Eigen::VectorXcd& u) {
    const auto n = u.size();
    Eigen::VectorXcd v = u.conjugate();
    const cplx v0 = v(0);
    const cplx phase = std::abs(v0) > 0 ? v0 / std::abs(v0) : cplx{1.0, 0.0};
    v *= std::conj(phase);
    v /= v.norm();
    Eigen::VectorXcd w = v;
    w(0) -= 1.0;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
    const double wn = w.squaredNorm();
    if (wn > 1e-30) r -= (2.0 / wn) * (w * w.adjoint());
    return std::conj(phase) * r;
}

/// Pointwise completion from polyphase vectors on a grid with N | M.
inline FilterBank grid_completion(const CircleGrid& grid, int n,
                                  const std::function<Eigen::VectorXcd(long long)>& polyphase_at) {
    std::vector<std::vector<cplx>> vals(static_cast<std::size_t>(n), std::vector<cplx>(static_cast<std::size_t>(grid.M)));
    const long long coarse = grid.M;
    std::vector<Eigen::MatrixXcd> cache(static_cast<std::size_t>(coarse));
    std::vector<char> have(static_cast<std::size_t>(coarse), 0);
    for (long long j = 0; j < grid.M; ++j) {
        const long long w = grid.power_index(j, n);
        if (!have[static_cast<std::size_t>(w)]) {
            cache[static_cast<std::size_t>(w)] = householder_completion(polyphase_at(w));
            have[static_cast<std::size_t>(w)] = 1;
        }
        const Eigen::MatrixXcd& h = cache[static_cast<std::size_t>(w)];
        const cplx z = grid.point(j);
        for (int i = 0; i < n; ++i) {
            cplx s{};
            cplx zr{1.0, 0.0};
            for (int r = 0; r < n; ++r) {
                s += zr * h(i, r);
                zr *= z;
            }
            vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    }
    std::vector<Filter> fs;
    for (auto& v : vals) fs.emplace_back(GridFunction(grid, std::move(v)));
    return FilterBank(n, std::move(fs));
}

}  // namespace detail

/// Complete a low-pass filter to a unitary bank.
///
/// N = 2 uses the conjugate-mirror rule m_1(z) = -z^{2K-1} conj(m_0(-z)) with K
/// the top degree of m_0, which stays a Laurent polynomial. For N > 2 the
/// polyphase vector of m_0 is completed pointwise by a Householder unitary on
/// a grid with N | M and the result is a grid-kind bank.
inline Completion complete_filterbank(const LaurentPoly& m0, int n, double tol = kVerifyTol,
                                      std::optional<CircleGrid> grid = std::nullopt) {
    if (n < 2) throw std::invalid_argument("complete_filterbank: scale must be >= 2");
    const double q = qmf_residual(m0, n, canonical_grid(n));
    if (q > tol)
        throw std::invalid_argument("complete_filterbank: m0 violates the QMF condition (residual " +
                                    std::to_string(q) + ")");
    Completion out;
    if (n == 2) {
        const int k = m0.max_degree();
        LaurentPoly m1 = -shift(negate_variable(conj_reflect(m0)), 2 * k - 1);
        out.bank = FilterBank::from_polys({m0, m1});
        out.unitarity_residual = unitarity_residual(out.bank, canonical_grid(n));
        return out;
    }
    const CircleGrid g = grid.value_or(rotation_grid(n));
    if (g.M % n != 0) throw std::invalid_argument("complete_filterbank: grid size must be divisible by N");
    std::vector<LaurentPoly> phases;
    for (int r = 0; r < n; ++r) phases.push_back(polyphase(m0, n, r));
    FilterBank fb = detail::grid_completion(g, n, [&](long long w) {
        Eigen::VectorXcd u(n);
        const double th = g.angle(w);
        for (int r = 0; r < n; ++r) u(r) = phases[static_cast<std::size_t>(r)].at_angle(th);
        return u;
    });
    // Filter 0 is the sampled input, bit for bit.
    fb.filters[0] = sample(m0, g);
    out.bank = std::move(fb);
    out.downgraded_to_grid = true;
    out.unitarity_residual = unitarity_residual(out.bank, g);
    return out;
}

/// Grid-kind completion; the grid of m0 must have N | M.
inline Completion complete_filterbank(const GridFunction& m0, int n, double tol = kVerifyTol) {
    const CircleGrid& g = m0.grid;
    if (g.M % n != 0) throw std::invalid_argument("complete_filterbank: grid size must be divisible by N");
    const double q = qmf_residual(m0, n, g);
    if (q > tol)
        throw std::invalid_argument("complete_filterbank: m0 violates the QMF condition (residual " +
                                    std::to_string(q) + ")");
    const long long step = g.M / n;
    // a_r(z^N) = N^{-1} sum_k (rho^k z)^{-r} m0(rho^k z); any z with z^N = w works,
    // so take the grid point j with N j = w mod M found by a direct scan.
    std::vector<long long> root_of(static_cast<std::size_t>(g.M), -1);
    for (long long j = g.M - 1; j >= 0; --j) root_of[static_cast<std::size_t>(g.power_index(j, n))] = j;
    FilterBank fb = detail::grid_completion(g, n, [&](long long w) {
        const long long j = root_of[static_cast<std::size_t>(w)];
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
        for (int k = 0; k < n; ++k) {
            const long long idx = j + k * step;
            const cplx zk = g.point(idx);
            for (int r = 0; r < n; ++r) u(r) += ipow(zk, -r) * m0[idx];
        }
        return Eigen::VectorXcd(u / static_cast<double>(n));
    });
    fb.filters[0] = m0;
    Completion out;
    out.bank = std::move(fb);
    out.unitarity_residual = unitarity_residual(out.bank, g);
    return out;
}

}  // namespace cuntzwave
