// SPDX-License-Identifier: Apache-2.0
//
// Index of an N = 2 filter pair through the combined isometry
// (M xi)(z) = 2^{-1/2} (m0(z) xi(z^2) + m1(z) xi(-z^2)): the total dimension
// of its unit-circle eigenspaces, found on a Laurent window and validated
// against the exact operator.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cuntzwave/filterbank.hpp"

namespace cuntzwave {

inline constexpr double kSpectralRadiusTol = 1e-6;
inline constexpr double kEigenClusterTol = 1e-6;
/// Singular-value cutoff for the candidate nullspace of the compressed matrix.
inline constexpr double kCandidateTol = 1e-6;

class CombinedIsometry {
public:
    CombinedIsometry(LaurentPoly m0, LaurentPoly m1, double tol = kVerifyTol)
        : m0_(std::move(m0)), m1_(std::move(m1)) {
        const double r = unitarity_residual(FilterBank::from_polys({m0_, m1_}), canonical_grid(2));
        if (r > tol)
            throw std::invalid_argument("CombinedIsometry: modulation matrix is not unitary (residual " +
                                        std::to_string(r) + ")");
    }

    LaurentPoly apply(const LaurentPoly& xi) const {
        return (m0_ * compose_power(xi, 2) + m1_ * compose_power(negate_variable(xi), 2)) * (1.0 / std::numbers::sqrt2);
    }

    /// Matrix of the operator restricted to and compressed on degrees [-K, K].
    Eigen::MatrixXcd compressed(int k) const {
        const int n = 2 * k + 1;
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
        for (int c = -k; c <= k; ++c) {
            const LaurentPoly col = apply(LaurentPoly::monomial(c));
            for (int r = std::max(-k, col.min_degree()); r <= std::min(k, col.max_degree()); ++r) a(r + k, c + k) = col.coeff(r);
        }
        return a;
    }

    const LaurentPoly& m0() const { return m0_; }
    const LaurentPoly& m1() const { return m1_; }

private:
    LaurentPoly m0_;
    LaurentPoly m1_;
};

inline LaurentPoly combined_isometry_apply(const LaurentPoly& m0, const LaurentPoly& m1, const LaurentPoly& xi) {
    return CombinedIsometry(m0, m1).apply(xi);
}

struct PairingValue {
    cplx value;
    double constancy_residual = 0.0;
};

/// z -> conj(phi(z)) psi(z) + conj(phi(-z)) psi(-z), averaged over the grid.
inline PairingValue pairing(const LaurentPoly& phi, const LaurentPoly& psi, const CircleGrid& grid) {
    std::vector<cplx> f(static_cast<std::size_t>(grid.M));
    cplx mean{};
    for (long long j = 0; j < grid.M; ++j) {
        const double th = grid.angle(j);
        const cplx v = std::conj(phi.at_angle(th)) * psi.at_angle(th) +
                       std::conj(phi.at_angle(th + kPi)) * psi.at_angle(th + kPi);
        f[static_cast<std::size_t>(j)] = v;
        mean += v;
    }
    mean /= static_cast<double>(grid.M);
    PairingValue out{mean, 0.0};
    for (const cplx& v : f) out.constancy_residual = std::max(out.constancy_residual, std::abs(v - mean));
    return out;
}

struct SpectralSolution {
    cplx lambda;
    LaurentPoly phi;
    /// || M phi - lambda phi || / || phi || through the exact operator.
    double residual = 0.0;
};

struct SpectralReport {
    std::vector<SpectralSolution> solutions;
    int index = 0;
    int window = 0;
    /// pairing_matrix[a][b] = {phi_a, phi_b}.
    std::vector<std::vector<cplx>> pairing_matrix;
    double pairing_constancy = 0.0;
    /// Unit-circle eigenvalue clusters of the compression that were examined.
    std::size_t candidate_clusters = 0;
    /// Set when the index leaves {0, 1, 2}; never clamped.
    bool anomaly = false;
};

inline SpectralReport spectral_solutions(const LaurentPoly& m0, const LaurentPoly& m1, int window,
                                         double tol = kVerifyTol) {
    if (window < 1) throw std::invalid_argument("spectral_solutions: window must be >= 1");
    const CombinedIsometry op(m0, m1);
    const Eigen::MatrixXcd a = op.compressed(window);
    const Eigen::Index n = a.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);

    std::vector<cplx> clusters;
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx l = es.eigenvalues()(k);
        if (std::abs(l) < 1.0 - kSpectralRadiusTol) continue;
        bool seen = false;
        for (const cplx& c : clusters) seen = seen || std::abs(c - l) <= kEigenClusterTol;
        if (!seen) clusters.push_back(l);
    }

    SpectralReport r;
    r.window = window;
    r.candidate_clusters = clusters.size();
    auto to_poly = [&](const Eigen::VectorXcd& v) {
        return LaurentPoly(-window, std::vector<cplx>(v.data(), v.data() + v.size()));
    };
    for (const cplx& l0 : clusters) {
        const cplx l = std::polar(1.0, std::arg(l0));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a - l * Eigen::MatrixXcd::Identity(n, n), Eigen::ComputeFullV);
        std::vector<Eigen::Index> null_cols;
        for (Eigen::Index k = 0; k < n; ++k)
            if (svd.singularValues()(k) <= kCandidateTol) null_cols.push_back(k);
        if (null_cols.empty()) continue;
        Eigen::MatrixXcd basis(n, static_cast<Eigen::Index>(null_cols.size()));
        for (std::size_t c = 0; c < null_cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(null_cols[c]);

        // Exact residuals (M - lambda) b for each basis vector, on a common degree window.
        std::vector<LaurentPoly> res;
        int lo = 0, hi = 0;
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            const LaurentPoly b = to_poly(basis.col(c));
            res.push_back(op.apply(b) - b * l);
            if (!res.back().is_zero()) {
                lo = std::min(lo, res.back().min_degree());
                hi = std::max(hi, res.back().max_degree());
            }
        }
        Eigen::MatrixXcd rm = Eigen::MatrixXcd::Zero(hi - lo + 1, basis.cols());
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            const auto& p = res[static_cast<std::size_t>(c)];
            for (int d = p.min_degree(); !p.is_zero() && d <= p.max_degree(); ++d) rm(d - lo, c) = p.coeff(d);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(rm, Eigen::ComputeFullV);
        for (Eigen::Index k = 0; k < rm.cols(); ++k) {
            const double s = k < rsvd.singularValues().size() ? rsvd.singularValues()(k) : 0.0;
            if (s > tol) continue;
            Eigen::VectorXcd v = basis * rsvd.matrixV().col(k);
            // Normalize the phase so the largest coefficient is real and positive.
            Eigen::Index arg = 0;
            v.cwiseAbs().maxCoeff(&arg);
            v *= std::conj(v(arg)) / std::abs(v(arg));
            const LaurentPoly phi = to_poly(v);
            r.solutions.push_back({l, phi, (op.apply(phi) - phi * l).norm() / phi.norm()});
        }
    }
    r.index = static_cast<int>(r.solutions.size());
    r.anomaly = r.index > 2;

    const CircleGrid g = canonical_grid(2);
    for (const auto& a1 : r.solutions) {
        std::vector<cplx> row;
        for (const auto& b1 : r.solutions) {
            const auto pv = pairing(a1.phi, b1.phi, g);
            row.push_back(pv.value);
            r.pairing_constancy = std::max(r.pairing_constancy, pv.constancy_residual);
        }
        r.pairing_matrix.push_back(std::move(row));
    }
    return r;
}

inline bool haar_component_flag(const LaurentPoly& m0, const LaurentPoly& m1, int window = 32) {
    return spectral_solutions(m0, m1, window).index >= 1;
}

}  // namespace cuntzwave
