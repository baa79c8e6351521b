// SPDX-License-Identifier: Apache-2.0
//
// The Cuntz isometries (S_i xi)(z) = m_i(z) xi(z^N) realized exactly on
// Laurent polynomials, together with their adjoints and the diagnostics for
// the Cuntz relations, the endomorphism condition and the shift realization.

#pragma once

#include <vector>

#include "cuntzwave/filterbank.hpp"

namespace cuntzwave {

class CuntzRep {
public:
    /// Verifies unitarity of the modulation matrix on the canonical grid.
    explicit CuntzRep(FilterBank bank, double tol = kVerifyTol) : bank_(std::move(bank)) {
        const double r = unitarity_residual(bank_, check_grid());
        if (r > tol)
            throw std::invalid_argument("CuntzRep: bank is not unitary (residual " + std::to_string(r) + ")");
        init();
    }

    /// Skips the unitarity check; for diagnosing broken banks.
    static CuntzRep unverified(FilterBank bank) { return CuntzRep(std::move(bank), Unchecked{}); }

    int scale() const { return bank_.scale; }
    const FilterBank& bank() const { return bank_; }

    LaurentPoly isometry(int i, const LaurentPoly& xi) const {
        return poly_filter(i) * compose_power(xi, scale());
    }

    /// (S_i^* xi)(z) = N^{-1} sum_{w^N = z} conj(m_i(w)) xi(w): multiply by the
    /// on-circle conjugate of m_i and keep every N-th coefficient.
    LaurentPoly adjoint(int i, const LaurentPoly& xi) const {
        const LaurentPoly g = conj_filters_.at(static_cast<std::size_t>(check_index(i))) * xi;
        return polyphase(g, scale(), 0);
    }

    /// Grid analogue of S_i: values m_i(z_j) xi(z_j^N) on the grid of xi.
    GridFunction isometry(int i, const GridFunction& xi) const {
        const Filter& m = bank_[check_index(i)];
        GridFunction out = xi;
        for (long long j = 0; j < xi.grid.M; ++j)
            out[j] = filter_at_angle(m, xi.grid.angle(j)) * xi[xi.grid.power_index(j, scale())];
        return out;
    }

private:
    struct Unchecked {};
    CuntzRep(FilterBank bank, Unchecked) : bank_(std::move(bank)) { init(); }

    CircleGrid check_grid() const {
        return bank_.kind() == FilterKind::grid ? std::get<GridFunction>(bank_[0]).grid : canonical_grid(bank_.scale);
    }

    void init() {
        if (bank_.kind() != FilterKind::poly) return;
        for (int i = 0; i < bank_.scale; ++i) conj_filters_.push_back(conj_reflect(bank_.poly(i)));
    }

    int check_index(int i) const {
        if (i < 0 || i >= scale()) throw std::out_of_range("CuntzRep: filter index out of range");
        return i;
    }

    const LaurentPoly& poly_filter(int i) const {
        check_index(i);
        if (bank_.kind() != FilterKind::poly)
            throw std::invalid_argument("CuntzRep: Laurent operations need a polynomial bank");
        return bank_.poly(i);
    }

    FilterBank bank_;
    std::vector<LaurentPoly> conj_filters_;
};

inline LaurentPoly apply_isometry(const CuntzRep& rep, int i, const LaurentPoly& xi) { return rep.isometry(i, xi); }
inline LaurentPoly apply_adjoint(const CuntzRep& rep, int i, const LaurentPoly& xi) { return rep.adjoint(i, xi); }

struct CuntzResiduals {
    /// max || S_j^* S_i xi - delta_ij xi ||
    double orthogonality = 0.0;
    /// max || sum_i S_i S_i^* xi - xi ||
    double completeness = 0.0;
};

inline CuntzResiduals cuntz_residuals(const CuntzRep& rep, const std::vector<LaurentPoly>& samples) {
    CuntzResiduals r;
    const int n = rep.scale();
    for (const auto& xi : samples) {
        LaurentPoly sum;
        for (int i = 0; i < n; ++i) {
            const LaurentPoly si = rep.isometry(i, xi);
            for (int j = 0; j < n; ++j) {
                LaurentPoly d = rep.adjoint(j, si);
                if (i == j) d -= xi;
                r.orthogonality = std::max(r.orthogonality, d.norm());
            }
            sum += rep.isometry(i, rep.adjoint(i, xi));
        }
        r.completeness = std::max(r.completeness, (sum - xi).norm());
    }
    return r;
}

/// max over samples of || sum_i S_i (f S_i^* xi) - f(z^N) xi ||.
inline double endomorphism_residual(const CuntzRep& rep, const LaurentPoly& f,
                                    const std::vector<LaurentPoly>& samples) {
    const int n = rep.scale();
    const LaurentPoly fn = compose_power(f, n);
    double worst = 0.0;
    for (const auto& xi : samples) {
        LaurentPoly lhs;
        for (int i = 0; i < n; ++i) lhs += rep.isometry(i, f * rep.adjoint(i, xi));
        worst = std::max(worst, (lhs - fn * xi).norm());
    }
    return worst;
}

struct ShiftCoefficients {
    int depth = 0;
    /// blocks[k-1][j-1] = S_j^* (S_0^*)^{k-1} xi for k = 1..depth, j = 1..N-1.
    std::vector<std::vector<LaurentPoly>> blocks;
    /// || S_0^depth (S_0^*)^depth xi ||, the part not yet captured by shift layers.
    double residual_norm = 0.0;
    /// || sum_k sum_j S_0^{k-1} S_j psi_k^(j) + S_0^depth (S_0^*)^depth xi - xi ||.
    double reconstruction_error = 0.0;
};

inline ShiftCoefficients shift_realization(const CuntzRep& rep, const LaurentPoly& xi, int depth) {
    if (depth < 1) throw std::invalid_argument("shift_realization: depth must be >= 1");
    const int n = rep.scale();
    ShiftCoefficients out;
    out.depth = depth;
    LaurentPoly tail = xi;  // (S_0^*)^{k-1} xi
    for (int k = 1; k <= depth; ++k) {
        std::vector<LaurentPoly> row;
        for (int j = 1; j < n; ++j) row.push_back(rep.adjoint(j, tail));
        out.blocks.push_back(std::move(row));
        tail = rep.adjoint(0, tail);
    }
    // Reconstruct from the innermost layer outwards: acc_k = S_0 acc_{k+1} + sum_j S_j psi_k^(j).
    LaurentPoly acc = tail;
    for (int k = depth; k >= 1; --k) {
        LaurentPoly layer = rep.isometry(0, acc);
        for (int j = 1; j < n; ++j)
            layer += rep.isometry(j, out.blocks[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)]);
        acc = std::move(layer);
    }
    out.reconstruction_error = (acc - xi).norm();
    LaurentPoly captured = tail;
    for (int k = 0; k < depth; ++k) captured = rep.isometry(0, captured);
    out.residual_norm = captured.norm();
    return out;
}

}  // namespace cuntzwave
