// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cuntzwave/permutative.hpp"
#include "oracles.hpp"

using namespace cuntzwave;

namespace {

std::vector<long long> labels_on_window(const ComponentReport& r) {
    std::vector<long long> lab(static_cast<std::size_t>(r.window_max - r.window_min + 1), -1);
    for (std::size_t c = 0; c < r.components.size(); ++c)
        for (long long k : r.components[c].members) lab[static_cast<std::size_t>(k - r.window_min)] = static_cast<long long>(c);
    return lab;
}

// Two labellings describe the same partition iff the label pairs form a bijection.
bool same_partition(const std::vector<long long>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<long long, int> ab;
    std::map<int, long long> ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) return false;
        auto [p, fresh] = ab.emplace(a[i], b[i]);
        auto [q, fresh2] = ba.emplace(b[i], a[i]);
        if (p->second != b[i] || q->second != a[i]) return false;
    }
    return true;
}

GridFunction random_phases(const CircleGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-kPi, kPi);
    GridFunction u = GridFunction::constant(g, 0.0);
    for (long long j = 0; j < g.M; ++j) u[j] = std::polar(1.0, a(rng));
    return u;
}

bool per_cycle_constant(const GridFunction& f, int n, double tol) {
    for (const auto& c : power_cycles(f.grid, n))
        for (long long j : c)
            if (std::abs(f[j] - f[c.front()]) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("monomial decomposition examples", "[permutative]") {
    {
        const auto r = decompose_monomial(MonomialRep(2, {0, 1}), 64);
        CHECK(r.partition_ok);
        REQUIRE(r.component_count() == 2);
        CHECK(r.components[0].cycle == std::vector<long long>{0});
        CHECK(r.components[1].cycle == std::vector<long long>{-1});
        for (long long k : r.components[0].members) CHECK(k >= 0);
        for (long long k : r.components[1].members) CHECK(k <= -1);
        CHECK(r.components[0].members.size() == 65);
    }
    {
        const MonomialRep rep(2, {1, 2});
        const auto r = decompose_monomial(rep, 64);
        CHECK(r.partition_ok);
        REQUIRE(r.component_count() == 2);
        const auto& a = r.components[component_of(rep, r, -1)];
        const auto& b = r.components[component_of(rep, r, -2)];
        CHECK(a.cycle == std::vector<long long>{-1});
        CHECK(b.cycle == std::vector<long long>{-2});
        std::set<long long> am(a.members.begin(), a.members.end());
        for (long long k = -64; k <= 64; ++k) CHECK(am.contains(k) == (k >= -1));
    }
    {
        const auto r = decompose_monomial(MonomialRep(3, {0, 1, 2}), 64);
        CHECK(r.partition_ok);
        CHECK(r.component_count() == 2);
        const auto lab = labels_on_window(r);
        for (long long k = -64; k <= 64; ++k) CHECK((lab[static_cast<std::size_t>(k + 64)] == lab[64]) == (k >= 0));
    }
    CHECK_THROWS_AS(MonomialRep(2, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(MonomialRep(3, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(decompose_monomial(MonomialRep(2, {0, 1}), -1), std::invalid_argument);
}

TEST_CASE("random digit systems against orbit closure", "[permutative][oracle]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        std::vector<int> digits;
        for (int r = 0; r < n; ++r) {
            std::vector<int> opts;
            for (int d = -8; d <= 8; ++d)
                if (floor_mod(d, n) == r) opts.push_back(d);
            digits.push_back(opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)]);
        }
        std::shuffle(digits.begin(), digits.end(), rng);
        const MonomialRep rep(n, digits);
        const auto r = decompose_monomial(rep, 64);
        INFO("N = " << n << " trial " << trial);
        CHECK(r.partition_ok);
        CHECK(r.invariance_violations == 0);
        CHECK(same_partition(labels_on_window(r), oracle::orbit_components(n, digits, 64)));

        // Exhaustive scan over twice the cycle radius finds exactly the reported cycle points.
        const long long rad = rep.cycle_radius();
        long long max_digit = 0;
        for (int d : digits) max_digit = std::max<long long>(max_digit, std::abs(d));
        std::set<long long> reported;
        for (const auto& c : backward_cycles(rep))
            for (long long k : c) {
                CHECK(std::abs(k) * (n - 1) <= max_digit);
                CHECK(std::abs(k) <= rad);
                reported.insert(k);
            }
        for (long long k = -2 * rad - 2; k <= 2 * rad + 2; ++k) {
            long long x = k;
            bool periodic = false;
            for (int s = 0; s < 64 && !periodic; ++s) {
                x = rep.backward(x);
                periodic = x == k;
            }
            CHECK(periodic == reported.contains(k));
        }
    }
}

TEST_CASE("partition check", "[permutative]") {
    for (int n : {2, 3, 4}) {
        const CircleGrid g(static_cast<long long>(n) * 1024);
        const auto arcs = standard_arcs(g, n);
        CHECK(check_partition(arcs, n));
        for (long long shift : {1LL, 17LL, 500LL}) {
            auto rot = arcs;
            for (int k = 0; k < n; ++k)
                for (long long j = 0; j < g.M; ++j)
                    rot[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                        arcs[static_cast<std::size_t>(k)][static_cast<std::size_t>(floor_mod(j - shift, g.M))];
            CHECK(check_partition(rot, n));
        }
        auto doubled = arcs;
        doubled[1] = doubled[0];
        CHECK_FALSE(check_partition(doubled, n));
        auto holed = arcs;
        holed[0][3] = false;
        CHECK_FALSE(check_partition(holed, n));
    }
    CHECK_FALSE(check_partition(standard_arcs(CircleGrid(4095), 2), 2));
    CHECK(standard_arc_index(0.0, 2) == 0);
    CHECK(standard_arc_index(kPi + 1e-9, 2) == 1);
    CHECK(standard_arc_index(-0.1, 4) == 3);
}

TEST_CASE("coboundary examples", "[permutative]") {
    const CircleGrid g = canonical_grid(2);
    const GridFunction one = GridFunction::constant(g, 1.0);
    {
        const auto r = solve_coboundary(one, one, 2);
        REQUIRE(r.exists);
        CHECK(r.delta->sup_norm() == 1.0);
        for (long long j = 0; j < g.M; ++j) CHECK((*r.delta)[j] == cplx(1.0));
        CHECK(r.monomial_exponent == std::optional<int>(0));
        CHECK(r.grid_screen);
    }
    {
        const auto z = sample(LaurentPoly::monomial(1), g);
        const auto r = solve_coboundary(one, z, 2);
        REQUIRE(r.exists);
        CHECK(r.residual < 1e-10);
        CHECK(r.monomial_exponent == std::optional<int>(-1));
        CHECK(per_cycle_constant(*r.delta * z, 2, 1e-10));
    }
    {
        std::mt19937_64 rng(5);
        const auto r = solve_coboundary(one, random_phases(g, rng), 2);
        CHECK_FALSE(r.exists);
        CHECK_FALSE(r.delta.has_value());
        CHECK(r.obstruction > 1e-3);
    }
    GridFunction bad = one;
    bad[0] = 1.1;
    CHECK_THROWS_AS(solve_coboundary(one, bad, 2), std::invalid_argument);
    CHECK_THROWS_AS(solve_coboundary(one, GridFunction::constant(CircleGrid(4097), 1.0), 2), std::invalid_argument);
    CHECK_THROWS_AS(solve_coboundary(GridFunction::constant(CircleGrid(4096), 1.0), GridFunction::constant(CircleGrid(4096), 1.0), 2),
                    std::invalid_argument);
}

TEST_CASE("coboundary families built by construction", "[permutative][property]") {
    std::mt19937_64 rng(17);
    for (int n : {2, 3}) {
        const CircleGrid g = canonical_grid(n);
        for (int trial = 0; trial < 15; ++trial) {
            const auto u1 = random_phases(g, rng);
            const auto d = random_phases(g, rng);
            GridFunction u2 = u1;
            for (long long j = 0; j < g.M; ++j) u2[j] = d[j] * u1[j] / d[g.power_index(j, n)];
            const auto r = solve_coboundary(u1, u2, n);
            REQUIRE(r.exists);
            CHECK(r.residual < 1e-10);
            // Unique up to one unimodular scalar per cycle.
            GridFunction ratio = *r.delta;
            for (long long j = 0; j < g.M; ++j) ratio[j] = (*r.delta)[j] * std::conj(d[j]);
            CHECK(per_cycle_constant(ratio, n, 1e-10));

            // Symmetry: the swapped problem is solved by the conjugate.
            const auto back = solve_coboundary(u2, u1, n);
            REQUIRE(back.exists);
            for (long long j = 0; j < g.M; j += 7) CHECK(std::abs((*back.delta)[j] - std::conj((*r.delta)[j])) < 1e-10);

            // Transitivity through a third cocycle.
            const auto e = random_phases(g, rng);
            GridFunction u3 = u2;
            for (long long j = 0; j < g.M; ++j) u3[j] = e[j] * u2[j] / e[g.power_index(j, n)];
            const auto r23 = solve_coboundary(u2, u3, n);
            const auto r13 = solve_coboundary(u1, u3, n);
            REQUIRE(r23.exists);
            REQUIRE(r13.exists);
            GridFunction comp = *r13.delta;
            for (long long j = 0; j < g.M; ++j) comp[j] = (*r13.delta)[j] * std::conj((*r.delta)[j] * (*r23.delta)[j]);
            CHECK(per_cycle_constant(comp, n, 1e-10));
        }
        for (int trial = 0; trial < 15; ++trial) {
            const auto r = solve_coboundary(random_phases(g, rng), random_phases(g, rng), n);
            CHECK_FALSE(r.exists);
        }
    }
}

TEST_CASE("equivalence of characteristic-function representations", "[permutative]") {
    const CircleGrid g = canonical_grid(2);
    std::mt19937_64 rng(3);
    const auto u = random_phases(g, rng);
    const CharRep a(2, u);
    {
        const auto r = equivalence_check(a, a);
        CHECK(r.equivalent);
        for (long long j = 0; j < g.M; j += 11) CHECK(std::abs((*r.coboundary.delta)[j] - 1.0) < 1e-12);
        CHECK(r.intertwining_residual < 1e-12);
    }
    {
        const CharRep b(2, sample(LaurentPoly::monomial(1), g) * u);
        const auto r = equivalence_check(a, b);
        CHECK(r.equivalent);
        CHECK(r.intertwining_residual < 1e-10);
        CHECK(r.coboundary.monomial_exponent == std::optional<int>(-1));
        CHECK(r.grid_screen);
    }
    {
        const CharRep one(2, GridFunction::constant(g, 1.0));
        const auto r = equivalence_check(one, a);
        CHECK_FALSE(r.equivalent);
        CHECK_FALSE(r.coboundary.exists);
    }
    // Isometric up to grid quadrature, with disjointly supported ranges.
    const auto xi = sample(LaurentPoly(-1, {1.0, cplx(0, 2), 0.5}), g);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(a.apply(j, xi).norm() - xi.norm()) < 1e-3 * xi.norm());
    double cross = 0.0;
    for (long long k = 0; k < g.M; ++k) cross = std::max(cross, std::abs(a.apply(0, xi)[k] * a.apply(1, xi)[k]));
    CHECK(cross == 0.0);

    GridFunction off = u;
    off[4] *= 1.5;
    CHECK_THROWS_AS(CharRep(2, off), std::invalid_argument);
    CHECK_THROWS_AS(equivalence_check(a, CharRep(3, u)), std::invalid_argument);
    CHECK_THROWS_AS(equivalence_check(a, CharRep(2, GridFunction::constant(CircleGrid(4097), 1.0))), std::invalid_argument);
}
