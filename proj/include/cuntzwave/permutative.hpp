// SPDX-License-Identifier: Apache-2.0
//
// Monomial (permutative) representations m_i = z^{d_i} acting on Fourier
// modes by k -> N k + d_i, and characteristic-function representations
// m_j = sqrt(N) chi_{A_j} u compared through the coboundary equation
// Delta(z) u1(z) = u2(z) Delta(z^N).

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuntzwave/filterbank.hpp"

namespace cuntzwave {

struct MonomialRep {
    int scale = 2;
    std::vector<int> digits;

    MonomialRep() = default;
    MonomialRep(int n, std::vector<int> d) : scale(n), digits(std::move(d)) { validate(); }

    void validate() const {
        if (scale < 2) throw std::invalid_argument("MonomialRep: scale must be >= 2");
        if (static_cast<int>(digits.size()) != scale) throw std::invalid_argument("MonomialRep: need N digits");
        std::vector<bool> seen(static_cast<std::size_t>(scale), false);
        for (int d : digits) {
            auto r = static_cast<std::size_t>(floor_mod(d, scale));
            if (seen[r]) throw std::invalid_argument("MonomialRep: digits must be mutually incongruent modulo N");
            seen[r] = true;
        }
    }

    /// Index of the unique digit congruent to k modulo N.
    int branch(long long k) const {
        for (int i = 0; i < scale; ++i)
            if (floor_mod(k - digits[static_cast<std::size_t>(i)], scale) == 0) return i;
        throw std::logic_error("MonomialRep: no branch");  // unreachable once validated
    }

    long long backward(long long k) const { return (k - digits[static_cast<std::size_t>(branch(k))]) / scale; }
    long long forward(int i, long long k) const { return scale * k + digits.at(static_cast<std::size_t>(i)); }

    /// Cycle points satisfy |c| <= max |d_i| / (N - 1).
    long long cycle_radius() const {
        long long d = 0;
        for (int x : digits) d = std::max<long long>(d, std::abs(x));
        return d / (scale - 1);
    }

    FilterBank bank() const {
        std::vector<LaurentPoly> ps;
        for (int d : digits) ps.push_back(LaurentPoly::monomial(d));
        return FilterBank::from_polys(std::move(ps));
    }
};

struct MonomialComponent {
    /// The generating cycle, starting at its smallest element, in backward-map order.
    std::vector<long long> cycle;
    /// Members inside the enumerated window, ascending.
    std::vector<long long> members;
    /// Human-readable generator, e.g. "closure of {0} under k -> 2k+0, 2k+1".
    std::string generator;
};

struct ComponentReport {
    long long window_min = 0;
    long long window_max = 0;
    std::vector<MonomialComponent> components;
    bool partition_ok = false;
    /// Window points k whose forward image N k + d_i inside the window changes component.
    std::size_t invariance_violations = 0;

    std::size_t component_count() const { return components.size(); }
};

/// Cycles of the backward map, found by exhaustive search on the cycle radius.
inline std::vector<std::vector<long long>> backward_cycles(const MonomialRep& rep) {
    rep.validate();
    const long long r = rep.cycle_radius();
    std::vector<std::vector<long long>> out;
    std::vector<bool> on_cycle(static_cast<std::size_t>(2 * r + 1), false);
    for (long long c = -r; c <= r; ++c) {
        if (on_cycle[static_cast<std::size_t>(c + r)]) continue;
        // Walk until a repeat; the walk stays in [-r, r].
        std::map<long long, std::size_t> pos;
        std::vector<long long> path;
        long long k = c;
        while (!pos.contains(k)) {
            pos[k] = path.size();
            path.push_back(k);
            k = rep.backward(k);
        }
        if (on_cycle[static_cast<std::size_t>(k + r)]) continue;
        std::vector<long long> cyc(path.begin() + static_cast<std::ptrdiff_t>(pos[k]), path.end());
        const auto mn = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), mn, cyc.end());
        for (long long x : cyc) on_cycle[static_cast<std::size_t>(x + r)] = true;
        out.push_back(std::move(cyc));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() > b.front(); });
    return out;
}

inline ComponentReport decompose_monomial(const MonomialRep& rep, long long window) {
    if (window < 0) throw std::invalid_argument("decompose_monomial: window must be >= 0");
    const auto cycles = backward_cycles(rep);
    std::map<long long, std::size_t> where;
    for (std::size_t c = 0; c < cycles.size(); ++c)
        for (long long x : cycles[c]) where[x] = c;

    ComponentReport out;
    out.window_min = -window;
    out.window_max = window;
    out.components.resize(cycles.size());
    std::string maps;
    for (int i = 0; i < rep.scale; ++i) {
        if (i) maps += ", ";
        maps += std::to_string(rep.scale) + "k" + (rep.digits[static_cast<std::size_t>(i)] < 0 ? "" : "+") +
                std::to_string(rep.digits[static_cast<std::size_t>(i)]);
    }
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        out.components[c].cycle = cycles[c];
        std::string cyc;
        for (long long x : cycles[c]) cyc += (cyc.empty() ? "" : ",") + std::to_string(x);
        out.components[c].generator = "closure of {" + cyc + "} under k -> " + maps;
    }

    std::vector<std::size_t> label(static_cast<std::size_t>(2 * window + 1));
    for (long long k = -window; k <= window; ++k) {
        long long j = k;
        while (!where.contains(j)) j = rep.backward(j);
        label[static_cast<std::size_t>(k + window)] = where[j];
        out.components[where[j]].members.push_back(k);
    }
    std::size_t covered = 0;
    for (const auto& c : out.components) covered += c.members.size();
    for (long long k = -window; k <= window; ++k)
        for (int i = 0; i < rep.scale; ++i) {
            const long long f = rep.forward(i, k);
            if (f < -window || f > window) continue;
            if (label[static_cast<std::size_t>(f + window)] != label[static_cast<std::size_t>(k + window)])
                ++out.invariance_violations;
        }
    out.partition_ok = covered == label.size() && out.invariance_violations == 0;
    return out;
}

/// Membership beyond the enumerated window: the component whose cycle the backward orbit of k reaches.
inline std::size_t component_of(const MonomialRep& rep, const ComponentReport& report, long long k) {
    for (;;) {
        for (std::size_t c = 0; c < report.components.size(); ++c) {
            const auto& cyc = report.components[c].cycle;
            if (std::find(cyc.begin(), cyc.end(), k) != cyc.end()) return c;
        }
        k = rep.backward(k);
    }
}

/// mask_k[j] is true iff floor(j N / M) = k, i.e. z_j lies on the arc from rho^k to rho^{k+1}.
inline std::vector<std::vector<bool>> standard_arcs(const CircleGrid& grid, int n) {
    std::vector<std::vector<bool>> masks(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(grid.M)));
    for (long long j = 0; j < grid.M; ++j)
        masks[static_cast<std::size_t>((j * n) / grid.M)][static_cast<std::size_t>(j)] = true;
    return masks;
}

inline int standard_arc_index(double theta, int n) {
    const double a = theta - kTwoPi * std::floor(theta / kTwoPi);
    return std::min(n - 1, static_cast<int>(std::floor(a * n / kTwoPi)));
}

/// True iff every rotation orbit {z, rho z, ..., rho^{N-1} z} meets each A_k exactly once.
inline bool check_partition(const std::vector<std::vector<bool>>& masks, int n) {
    if (n < 1 || static_cast<int>(masks.size()) != n || masks.front().empty()) return false;
    const std::size_t m = masks.front().size();
    for (const auto& a : masks)
        if (a.size() != m) return false;
    if (m % static_cast<std::size_t>(n) != 0) return false;
    for (std::size_t j = 0; j < m; ++j) {
        int owners = 0;
        for (const auto& a : masks) owners += a[j] ? 1 : 0;
        if (owners != 1) return false;
    }
    const std::size_t step = m / static_cast<std::size_t>(n);
    for (std::size_t j = 0; j < step; ++j)
        for (const auto& a : masks) {
            int hits = 0;
            for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) hits += a[j + r * step] ? 1 : 0;
            if (hits != 1) return false;
        }
    return true;
}

inline constexpr double kModulusTol = 1e-12;
/// Per-point arc tolerance for cycle obstructions; scaled by the cycle length.
inline constexpr double kCycleObstructionTol = 1e-8;

inline double modulus_residual(const GridFunction& u) {
    double r = 0.0;
    for (const cplx& v : u.values) r = std::max(r, std::abs(std::abs(v) - 1.0));
    return r;
}

/// m_j(z) = sqrt(N) chi_{A_j}(z) u(z) on the standard arcs.
struct CharRep {
    int scale = 2;
    GridFunction u;

    CharRep(int n, GridFunction cocycle) : scale(n), u(std::move(cocycle)) {
        if (scale < 2) throw std::invalid_argument("CharRep: scale must be >= 2");
        if (const double r = modulus_residual(u); r > kModulusTol)
            throw std::invalid_argument("CharRep: |u| must be 1 on the grid (residual " + std::to_string(r) + ")");
    }

    /// (S_j xi)(z) = m_j(z) xi(z^N); needs gcd(M, N) = 1 so z^N stays on the grid.
    GridFunction apply(int j, const GridFunction& xi) const {
        if (j < 0 || j >= scale) throw std::out_of_range("CharRep: filter index out of range");
        if (!(xi.grid == u.grid)) throw std::invalid_argument("CharRep: grid mismatch");
        GridFunction out = xi;
        const double s = std::sqrt(static_cast<double>(scale));
        for (long long k = 0; k < xi.grid.M; ++k) {
            const bool in = standard_arc_index(xi.grid.angle(k), scale) == j;
            out[k] = in ? s * u[k] * xi[xi.grid.power_index(k, scale)] : cplx{};
        }
        return out;
    }
};

struct CoboundaryResult {
    bool exists = false;
    /// Delta with the free unimodular scalar fixed to 1 at each cycle minimum.
    std::optional<GridFunction> delta;
    /// max over cycles of the arc distance of prod (u1/u2) from 1.
    double obstruction = 0.0;
    /// max | Delta u1 - u2 Delta(z^N) | when Delta exists.
    double residual = 0.0;
    std::size_t cycle_count = 0;
    /// a with u2/u1 = z^{a(1-N)} exactly on the grid, i.e. Delta = z^a, searched over |a| <= 64.
    std::optional<int> monomial_exponent;
    /// The finite grid only screens the almost-everywhere statement.
    bool grid_screen = true;
};

/// Solves Delta(z) u1(z) = u2(z) Delta(z^N) along the cycles of j -> N j mod M.
inline CoboundaryResult solve_coboundary(const GridFunction& u1, const GridFunction& u2, int n, double tol = kVerifyTol) {
    if (!(u1.grid == u2.grid)) throw std::invalid_argument("solve_coboundary: grid mismatch");
    const CircleGrid& g = u1.grid;
    if (!g.coprime_to(n)) throw std::invalid_argument("solve_coboundary: grid size must be coprime to N");
    if (modulus_residual(u1) > kModulusTol || modulus_residual(u2) > kModulusTol)
        throw std::invalid_argument("solve_coboundary: cocycles must be unimodular");

    CoboundaryResult out;
    const auto cycles = power_cycles(g, n);
    out.cycle_count = cycles.size();
    bool ok = true;
    for (const auto& c : cycles) {
        double a = 0.0;
        for (long long j : c) a += std::arg(u1[j] / u2[j]);
        const double arc = std::abs(std::remainder(a, kTwoPi));
        out.obstruction = std::max(out.obstruction, arc);
        if (arc > kCycleObstructionTol * static_cast<double>(c.size())) ok = false;
    }
    for (int a = -64; a <= 64 && !out.monomial_exponent; ++a) {
        bool match = true;
        for (long long j = 0; j < g.M && match; ++j)
            match = std::abs(u2[j] - u1[j] * g.point(floor_mod(static_cast<long long>(a) * (1 - n) * j, g.M))) <= tol;
        if (match) out.monomial_exponent = a;
    }
    if (!ok) return out;

    GridFunction d = GridFunction::constant(g, 0.0);
    for (const auto& c : cycles) {
        cplx v{1.0, 0.0};
        for (long long j : c) {
            d[j] = v;
            v = v * u1[j] / u2[j];
        }
    }
    for (long long j = 0; j < g.M; ++j)
        out.residual = std::max(out.residual, std::abs(d[j] * u1[j] - u2[j] * d[g.power_index(j, n)]));
    out.exists = out.residual <= tol;
    out.delta = std::move(d);
    return out;
}

struct EquivalenceReport {
    bool equivalent = false;
    CoboundaryResult coboundary;
    /// max over probes and j of | Delta S1_j xi - S2_j (Delta xi) |.
    double intertwining_residual = 0.0;
    bool grid_screen = true;
};

inline EquivalenceReport equivalence_check(const CharRep& a, const CharRep& b, double tol = kVerifyTol) {
    if (a.scale != b.scale) throw std::invalid_argument("equivalence_check: scale mismatch");
    if (!(a.u.grid == b.u.grid)) throw std::invalid_argument("equivalence_check: grid mismatch");
    EquivalenceReport out;
    out.coboundary = solve_coboundary(a.u, b.u, a.scale, tol);
    if (!out.coboundary.exists) return out;
    const GridFunction& d = *out.coboundary.delta;
    const CircleGrid& g = a.u.grid;
    std::vector<GridFunction> probes;
    for (int k : {0, 1, -1, 3}) probes.push_back(sample(LaurentPoly::monomial(k), g));
    probes.push_back(sample(LaurentPoly(-2, {0.5, cplx(0, 1), 1.0, cplx(-0.25, 0.5), 2.0}), g));
    for (const auto& xi : probes)
        for (int j = 0; j < a.scale; ++j) {
            const GridFunction lhs = d * a.apply(j, xi);
            const GridFunction rhs = b.apply(j, d * xi);
            out.intertwining_residual = std::max(out.intertwining_residual, (lhs - rhs).sup_norm());
        }
    out.equivalent = out.intertwining_residual <= tol;
    return out;
}

}  // namespace cuntzwave
