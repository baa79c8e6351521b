// SPDX-License-Identifier: Apache-2.0
//
// Wold decomposition of the weighted-composition isometry S xi = m(z) xi(z^N).
// The unitary part is at most one-dimensional and is nonzero exactly when |m|
// is 1 a.e. and m(z) xi(z^N) = lambda xi(z) has a unimodular solution.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cuntzwave/filterbank.hpp"

namespace cuntzwave {

/// lambda-matching tolerance across permutation cycles, as an arc length.
inline constexpr double kCycleMatchTol = 1e-8;

/// S xi = m(z) xi(z^N) for a polynomial m, with its exact adjoint.
class WeightedIsometry {
public:
    WeightedIsometry(LaurentPoly m, int n) : m_(std::move(m)), m_conj_(conj_reflect(m_)), n_(n) {
        if (n < 2) throw std::invalid_argument("WeightedIsometry: scale must be >= 2");
    }

    LaurentPoly apply(const LaurentPoly& xi) const { return m_ * compose_power(xi, n_); }
    LaurentPoly adjoint(const LaurentPoly& xi) const { return polyphase(m_conj_ * xi, n_, 0); }

    const LaurentPoly& filter() const { return m_; }
    int scale() const { return n_; }

private:
    LaurentPoly m_;
    LaurentPoly m_conj_;
    int n_;
};

/// Residual of sum_k |m(rho^k z)|^2 = N, measured where m can be evaluated exactly.
inline double isometry_residual(const Filter& m, int n) {
    if (const auto* g = std::get_if<GridFunction>(&m)) {
        if (g->grid.M % n != 0)
            throw std::invalid_argument("isometry check for grid filters needs N | M");
        return qmf_residual(m, n, g->grid);
    }
    return qmf_residual(m, n, canonical_grid(n));
}

/// || S^k S^{*k} xi || for k = 0..k_max. The norm is taken after the k
/// adjoints only, since S^k preserves norms once the isometry condition holds.
inline std::vector<double> range_projection_norms(const LaurentPoly& m, int n, const LaurentPoly& xi, int k_max,
                                                  double tol = kVerifyTol) {
    const double r = isometry_residual(m, n);
    if (r > tol) throw std::invalid_argument("range_projection_norms: not an isometry (residual " + std::to_string(r) + ")");
    const WeightedIsometry s(m, n);
    std::vector<double> out;
    LaurentPoly v = xi;
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(v.norm());
        v = s.adjoint(v);
    }
    return out;
}

struct WoldReport {
    int unitary_dim = 0;
    std::optional<cplx> eigenvalue;
    /// Monomial-ansatz solution, present for polynomial m when it exists.
    std::optional<LaurentPoly> eigenfunction_poly;
    /// Grid solution with one free unimodular scalar per cycle, fixed to 1 at the cycle minimum.
    std::optional<GridFunction> eigenfunction_grid;
    double unimodularity_residual = 0.0;
    double cocycle_residual = 0.0;
    /// Probes 1, z, z^{-1}, m (polynomial m only): ||E_k v|| for k = 0..k_max.
    std::vector<std::vector<double>> projection_decay;
    long long grid_size = 0;
    std::size_t cycle_count = 0;
    /// Number of distinct lambda surviving every cycle; more than one would contradict dim P_U <= 1.
    std::size_t candidate_count = 0;
    bool anomaly = false;
    /// Verdict on a second coprime grid matches.
    bool second_grid_agrees = true;
    /// For polynomial m: the monomial ansatz N k + d = k agrees with the grid verdict.
    std::optional<bool> symbolic_agrees;
};

namespace detail {

struct GridWold {
    int unitary_dim = 0;
    std::optional<cplx> lambda;
    std::optional<GridFunction> xi;
    double unimodularity = 0.0;
    double cocycle = 0.0;
    std::size_t cycles = 0;
    std::size_t candidates = 0;
};

inline double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

inline GridWold grid_wold(const Filter& m, int n, const CircleGrid& grid, double tol) {
    GridWold out;
    std::vector<cplx> mv(static_cast<std::size_t>(grid.M));
    for (long long j = 0; j < grid.M; ++j) {
        mv[static_cast<std::size_t>(j)] = filter_at_angle(m, grid.angle(j));
        out.unimodularity = std::max(out.unimodularity, std::abs(std::abs(mv[static_cast<std::size_t>(j)]) - 1.0));
    }
    if (out.unimodularity > tol) return out;

    const auto cycles = power_cycles(grid, n);
    out.cycles = cycles.size();
    std::vector<double> cycle_angle;
    for (const auto& c : cycles) {
        double a = 0.0;
        for (long long j : c) a += std::arg(mv[static_cast<std::size_t>(j)]);
        cycle_angle.push_back(a);
    }
    // Seed from the shortest cycle: its L-th roots are the only possible lambdas.
    std::size_t seed = 0;
    for (std::size_t c = 1; c < cycles.size(); ++c)
        if (cycles[c].size() < cycles[seed].size()) seed = c;
    const double seed_len = static_cast<double>(cycles[seed].size());
    std::vector<double> cand;
    for (std::size_t r = 0; r < cycles[seed].size(); ++r)
        cand.push_back(wrap_angle((cycle_angle[seed] + kTwoPi * static_cast<double>(r)) / seed_len));
    for (std::size_t c = 0; c < cycles.size() && !cand.empty(); ++c) {
        const double len = static_cast<double>(cycles[c].size());
        std::erase_if(cand, [&](double th) {
            return std::abs(wrap_angle(len * th - cycle_angle[c])) > kCycleMatchTol * len;
        });
    }
    out.candidates = cand.size();
    if (cand.empty()) return out;

    const cplx lambda = std::polar(1.0, cand.front());
    GridFunction xi = GridFunction::constant(grid, 0.0);
    for (const auto& c : cycles) {
        // m(z) xi(z^N) = lambda xi(z)  =>  xi(z^N) = lambda xi(z) / m(z).
        cplx v{1.0, 0.0};
        for (long long j : c) {
            xi[j] = v;
            v = lambda * v / mv[static_cast<std::size_t>(j)];
        }
    }
    for (long long j = 0; j < grid.M; ++j)
        out.cocycle = std::max(out.cocycle, std::abs(mv[static_cast<std::size_t>(j)] * xi[grid.power_index(j, n)] - lambda * xi[j]));
    out.lambda = lambda;
    out.xi = std::move(xi);
    out.unitary_dim = out.cocycle <= tol ? 1 : 0;
    return out;
}

}  // namespace detail

/// Screens for a one-dimensional unitary part on a grid with gcd(M, N) = 1.
/// The finite grid only sees necessary conditions, so the verdict is
/// re-run on a second coprime grid and, for polynomial m, compared with the
/// monomial ansatz.
inline WoldReport wold_analysis(const Filter& m, int n, const CircleGrid& grid, double tol = kVerifyTol,
                                int k_max = 20) {
    if (!grid.coprime_to(n)) throw std::invalid_argument("wold_analysis: grid size must be coprime to N");
    const double iso = isometry_residual(m, n);
    if (iso > tol) throw std::invalid_argument("wold_analysis: not an isometry (residual " + std::to_string(iso) + ")");

    WoldReport r;
    r.grid_size = grid.M;
    auto primary = detail::grid_wold(m, n, grid, tol);
    r.unimodularity_residual = primary.unimodularity;
    r.cocycle_residual = primary.cocycle;
    r.cycle_count = primary.cycles;
    r.candidate_count = primary.candidates;
    r.anomaly = primary.candidates > 1;
    r.unitary_dim = primary.unitary_dim;
    if (r.unitary_dim == 1) {
        r.eigenvalue = primary.lambda;
        r.eigenfunction_grid = std::move(primary.xi);
    }

    const CircleGrid second(grid.M * n + n - 1);
    r.second_grid_agrees = detail::grid_wold(m, n, second, tol).unitary_dim == r.unitary_dim;

    if (const auto* p = std::get_if<LaurentPoly>(&m)) {
        // A unimodular Laurent polynomial is c z^d, and S z^k = c z^{N k + d}.
        bool sym = false;
        if (p->size() == 1 && std::abs(std::abs(p->coeffs()[0]) - 1.0) <= tol && p->min_degree() % (n - 1) == 0) {
            sym = true;
            if (r.unitary_dim == 1) {
                r.eigenfunction_poly = LaurentPoly::monomial(-p->min_degree() / (n - 1));
                r.eigenvalue = p->coeffs()[0];
            }
        }
        r.symbolic_agrees = sym == (r.unitary_dim == 1);
        const std::vector<LaurentPoly> probes{LaurentPoly::constant(1.0), LaurentPoly::monomial(1),
                                              LaurentPoly::monomial(-1), *p};
        for (const auto& v : probes) r.projection_decay.push_back(range_projection_norms(*p, n, v, k_max, tol));
    }
    return r;
}

struct ShiftCheck {
    bool all_shifts = false;
    /// check_lowpass passed on m_0 and the bank is unitary.
    bool admissible = false;
    std::vector<int> unitary_dims;
};

/// Classifies each S_i of the bank. Admissibility is reported, not enforced,
/// so non-wavelet banks (e.g. monomial ones) can be compared.
inline ShiftCheck shift_check(const FilterBank& fb, double tol = kVerifyTol) {
    ShiftCheck out;
    const CircleGrid cgrid = canonical_grid(fb.scale);
    const CircleGrid ugrid = fb.kind() == FilterKind::grid ? std::get<GridFunction>(fb[0]).grid : cgrid;
    out.admissible = check_lowpass(fb[0], fb.scale, tol).ok && unitarity_residual(fb, ugrid) <= tol;
    out.all_shifts = true;
    for (int i = 0; i < fb.scale; ++i) {
        const int d = wold_analysis(fb[i], fb.scale, cgrid, tol).unitary_dim;
        out.unitary_dims.push_back(d);
        out.all_shifts = out.all_shifts && d == 0;
    }
    return out;
}

inline bool wavelet_shift_check(const FilterBank& fb, double tol = kVerifyTol) { return shift_check(fb, tol).all_shifts; }

}  // namespace cuntzwave
