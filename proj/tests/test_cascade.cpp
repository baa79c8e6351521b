// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cuntzwave/cascade.hpp"
#include "cuntzwave/fixtures.hpp"
#include "oracles.hpp"

using namespace cuntzwave;

namespace {
const double inv_root2pi = 1.0 / std::sqrt(2 * kPi);

LineSamples scaled(LineSamples s, double f) {
    for (auto& v : s.values) v *= f;
    return s;
}
}  // namespace

TEST_CASE("normalization at the origin", "[cascade]") {
    for (const auto& fb : {fixtures::haar2(), fixtures::db4(), fixtures::haar(3), fixtures::shannon()}) {
        const auto s = scaling_hat(fb[0], fb.scale, 4 * kPi, 257);
        const auto mid = s.values.size() / 2;
        CHECK(s.t_values[mid] == 0.0);
        CHECK(std::abs(s.values[mid] - inv_root2pi) < 1e-15);
    }
}

TEST_CASE("Haar product against the closed form", "[cascade][oracle]") {
    const auto s = scaling_hat(fixtures::haar2()[0], 2, 8 * kPi, 4096, 20);
    CHECK(s.values.size() % 2 == 1);
    CHECK(s.t_max() == Catch::Approx(8 * kPi));
    double worst = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j)
        worst = std::max(worst, std::abs(std::abs(s.values[j]) - oracle::haar_phi_hat_abs(s.t_values[j])));
    CHECK(worst < 1e-6);
    // The vanishing factor m0 at t = pi is reached once depth >= log2 |k| + 1.
    for (int k : {-1, 1})
        for (int d : {1, 5, 20}) CHECK(std::abs(scaling_hat_at(fixtures::haar2()[0], 2, 2 * kPi * k, d)) < 1e-12);
    for (int k : {-2, 2})
        for (int d : {2, 5, 20}) CHECK(std::abs(scaling_hat_at(fixtures::haar2()[0], 2, 2 * kPi * k, d)) < 1e-12);
}

TEST_CASE("depth recursion and convergence in depth", "[cascade]") {
    const auto db4 = fixtures::db4();
    for (double t : {-7.3, 0.4, 3.0, 19.1}) {
        for (int n : {0, 3, 12}) {
            const cplx next = scaling_hat_at(db4[0], 2, t, n + 1);
            const cplx want = filter_at_t(db4[0], t / std::pow(2.0, n + 1)) / std::sqrt(2.0) * scaling_hat_at(db4[0], 2, t, n);
            CHECK(std::abs(next - want) < 1e-15);
        }
    }
    const auto a = scaling_hat(db4[0], 2, 8 * kPi, 1024, 20);
    const auto b = scaling_hat(db4[0], 2, 8 * kPi, 1024, 40);
    // Moduli settle by depth 20. The values keep a phase drift of order
    // (group delay) * t * 2^{-20} since db4 is not centred at 0.
    double worst_abs = 0.0, worst = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) {
        worst_abs = std::max(worst_abs, std::abs(std::abs(a.values[j]) - std::abs(b.values[j])));
        worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
    }
    CHECK(worst_abs < 1e-8);
    CHECK(worst < 1.5 * 8 * kPi * std::pow(2.0, -20) * inv_root2pi);
}

TEST_CASE("mother functions", "[cascade]") {
    const auto haar = fixtures::haar2();
    const auto phi = scaling_hat(haar[0], 2, 4 * kPi, 513);
    const auto psi = mother_hat(haar, 1, phi);
    CHECK(std::abs(psi.values[psi.values.size() / 2]) < 1e-16);
    for (std::size_t j = 0; j < psi.values.size(); j += 37) {
        const double t = psi.t_values[j];
        const cplx want = haar.poly(1).at_t(t / 2) * scaling_hat_at(haar[0], 2, t / 2, 20) / std::sqrt(2.0);
        CHECK(std::abs(psi.values[j] - want) < 1e-15);
    }
    CHECK_THROWS_AS(mother_hat(haar, 0, phi), std::invalid_argument);
    CHECK_THROWS_AS(mother_hat(haar, 2, phi), std::out_of_range);

    // Shannon: the father lives on |t| <= pi, the mother on pi < |t| <= 2 pi.
    const auto sh = fixtures::shannon();
    const auto sphi = scaling_hat(sh[0], 2, 3 * kPi, 1201);
    const auto spsi = mother_hat(sh, 1, sphi);
    CHECK(sphi.rough_filter_warning);
    const double edge = 2 * kPi / 4096 * 8;
    for (std::size_t j = 0; j < spsi.values.size(); ++j) {
        const double t = std::abs(spsi.t_values[j]);
        if (t < kPi - edge || t > 2 * kPi + edge) CHECK(std::abs(spsi.values[j]) < 1e-15);
        if (t > kPi + edge && t < 2 * kPi - edge) CHECK(std::abs(std::abs(spsi.values[j]) - inv_root2pi) < 1e-12);
        if (t < kPi - edge) CHECK(std::abs(std::abs(sphi.values[j]) - inv_root2pi) < 1e-12);
        if (t > kPi + edge) CHECK(std::abs(sphi.values[j]) < 1e-15);
    }
}

TEST_CASE("lattice sum", "[cascade]") {
    const auto haar = fixtures::haar2();
    const auto g = per_grid(64);
    const auto phi = scaling_hat(haar[0], 2, g.t_max, g.samples, 20);
    const auto r = per_residual(phi, 64);
    CHECK(r.residual < 1e-3);
    CHECK(r.tail_estimate > 0.0);
    // psi_hat draws on phi_hat(t/2), so its lattice tail is twice as heavy.
    const auto g2 = per_grid(128);
    CHECK(per_residual(mother_hat(haar, 1, scaling_hat(haar[0], 2, g2.t_max, g2.samples)), 128).residual < 1e-3);

    // Monotone in K up to grid noise.
    double prev = 1.0;
    for (int k : {2, 8, 32, 64}) {
        const double v = per_residual(phi, k).residual;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }

    const auto bad = per_residual(scaled(phi, 2.0), 64);
    CHECK(std::abs(bad.residual - 3 * inv_root2pi * inv_root2pi) < 1e-3);

    const auto sg = per_grid(4);
    const auto sh = fixtures::shannon();
    const auto sphi = scaling_hat(sh[0], 2, sg.t_max, sg.samples);
    CHECK(per_residual(sphi, 4).residual < 1e-6);
    CHECK(per_residual(mother_hat(sh, 1, sphi), 4).residual < 1e-6);

    const auto db4 = fixtures::db4();
    const auto dphi = scaling_hat(db4[0], 2, g.t_max, g.samples);
    CHECK(per_residual(dphi, 64).residual < 1e-3);

    CHECK_THROWS_AS(per_residual(phi, 65), std::invalid_argument);
    CHECK_THROWS_AS(per_residual(scaling_hat(haar[0], 2, 8 * kPi, 999), 1), std::invalid_argument);
}

TEST_CASE("cascade limit", "[cascade]") {
    const CuntzRep haar(fixtures::haar2());
    const auto one = LaurentPoly::constant(1.0);
    // The Haar low-pass filter is not centred, so the left side carries the phase
    // e^{-it(1 - 2^{-n})/2} against the limit: the gap on |t| <= 2 pi is about 2^{-n}.
    double prev = 1.0;
    for (int n : {4, 6, 8, 10, 12, 14}) {
        const double r = cascade_limit_residual(haar, one, n, 2 * kPi, 1025);
        CHECK(r <= 1.01 * std::pow(2.0, -n));
        CHECK(r < prev);
        prev = r;
    }
    CHECK(cascade_limit_residual(haar, one, 14, 2 * kPi, 1025) < 1e-4);
    CHECK(cascade_limit_residual(haar, one, 10, 2 * kPi, 1025, 1) <= 1.01 * std::pow(2.0, 1 - 10));
    CHECK(cascade_limit_residual(haar, one, 14, 2 * kPi, 1025, 1) < 1e-3);
    CHECK(cascade_limit_residual(haar, LaurentPoly{}, 10) == 0.0);

    const CuntzRep db4(fixtures::db4());
    const LaurentPoly xi(-1, {0.5, 1.0, cplx(0, 0.25)});
    CHECK(cascade_limit_residual(db4, xi, 10, 2 * kPi, 513) < cascade_limit_residual(db4, xi, 6, 2 * kPi, 513));

    CHECK_THROWS_AS(cascade_limit_residual(haar, one, 0), std::invalid_argument);
    CHECK_THROWS_AS(cascade_limit_residual(haar, one, 3, 2 * kPi, 65, 2), std::out_of_range);
}

TEST_CASE("errors and CSV", "[cascade]") {
    CHECK_THROWS_AS(scaling_hat(LaurentPoly(0, {1.0, 0.5}), 2), std::invalid_argument);
    CHECK_THROWS_AS(scaling_hat(fixtures::haar2()[0], 2, 8 * kPi, 256, -1), std::invalid_argument);
    CHECK_THROWS_AS(symmetric_line(-1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(per_grid(4, 63), std::invalid_argument);

    std::ostringstream os;
    write_csv(os, scaling_hat(fixtures::haar2()[0], 2, kPi, 5));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,re,im,abs");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
}
