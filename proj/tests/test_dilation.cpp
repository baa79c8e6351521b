// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "cuntzwave/dilation.hpp"
#include "oracles.hpp"

using namespace cuntzwave;

namespace {

const double s2 = std::sqrt(2.0);

// Fock-space operators on the truncation used by WernerEmbedding, written out
// from the convention alone: level k holds N^k blocks of size dim, the word
// (i_1, ..., i_k) sits at block sum_j i_j N^{k-j}.
struct Fock {
    int n, dim, depth;
    Eigen::Index offset(int k) const {
        Eigen::Index off = 0, lev = 1;
        for (int j = 0; j < k; ++j, lev *= n) off += lev * dim;
        return off;
    }
    Eigen::Index words(int k) const {
        Eigen::Index lev = 1;
        for (int j = 0; j < k; ++j) lev *= n;
        return lev;
    }
    Eigen::Index size() const { return offset(depth + 1); }

    // Creation e_i (x) -, dropping what would leave the truncation.
    Vec create(int i, const Vec& x) const {
        Vec out = Vec::Zero(size());
        for (int k = 0; k < depth; ++k)
            for (Eigen::Index w = 0; w < words(k); ++w)
                out.segment(offset(k + 1) + (i * words(k) + w) * dim, dim) = x.segment(offset(k) + w * dim, dim);
        return out;
    }
    Vec annihilate(int i, const Vec& x) const {
        Vec out = Vec::Zero(size());
        for (int k = 0; k < depth; ++k)
            for (Eigen::Index w = 0; w < words(k); ++w)
                out.segment(offset(k) + w * dim, dim) = x.segment(offset(k + 1) + (i * words(k) + w) * dim, dim);
        return out;
    }
};

std::vector<Word> all_words(int n, int max_up, int max_down) {
    std::vector<Word> out;
    for (const auto& u : words_up_to(n, max_up))
        for (const auto& d : words_up_to(n, max_down)) out.push_back({u, d});
    return out;
}

}  // namespace

TEST_CASE("state values", "[dilation]") {
    const auto cuntz = scalar_family({1.0, 0.0});
    CHECK(state_value(cuntz, {}) == cplx(1.0));
    CHECK(std::abs(state_value(cuntz, {{0}, {0}}) - 1.0) < 1e-15);
    CHECK(std::abs(state_value(cuntz, {{1}, {0}})) < 1e-15);
    const auto even = scalar_family({1 / s2, 1 / s2});
    CHECK(std::abs(state_value(even, {{0}, {0}}) - 0.5) < 1e-15);
    CHECK(std::abs(state_value(even, {{0, 0}, {0, 0}}) - 0.25) < 1e-15);
    const auto tilted = scalar_family({cplx(0.6, 0), cplx(0, 0.8)});
    CHECK(std::abs(state_value(tilted, {{0}, {1}}) - 0.6 * std::conj(cplx(0, 0.8))) < 1e-15);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        CHECK(std::abs(state_value(random_coisometry(2, 3, seed), {}) - 1.0) < 1e-14);
    CHECK_THROWS_AS(state_value(cuntz, {{2}, {}}), std::out_of_range);
}

TEST_CASE("family invariants", "[dilation]") {
    auto f = random_coisometry(2, 3, 11);
    std::vector<Mat> v = f.operators();
    CHECK(spectral_norm(f.sigma(Mat::Identity(3, 3)) - Mat::Identity(3, 3)) < 1e-12);
    CHECK(f.krylov_rank() == 3);
    auto corrupted = v;
    corrupted[0] *= 1.1;
    CHECK_THROWS_AS(CoisometryFamily(corrupted, f.omega()), std::invalid_argument);
    CHECK_THROWS_AS(CoisometryFamily(v, 2.0 * f.omega()), std::invalid_argument);
    CHECK_THROWS_AS(CoisometryFamily(v, Vec::Ones(2) / s2), std::invalid_argument);
    Mat v0 = Mat::Zero(2, 2), v1 = Mat::Zero(2, 2);
    v0(0, 0) = 1.0;
    v1(1, 1) = 1.0;
    CHECK_THROWS_AS(CoisometryFamily({v0, v1}, Vec::Unit(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(random_coisometry(0, 3, 1), std::invalid_argument);
}

TEST_CASE("Gram positivity", "[dilation]") {
    const auto cuntz = gram_matrix(scalar_family({1.0, 0.0}), 2);
    CHECK(cuntz.size == 7);
    CHECK(cuntz.psd);
    CHECK(cuntz.min_eigenvalue >= -1e-12);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 2;
        const int dim = 1 + trial % 4;
        const auto fam = random_coisometry(n, dim, rng());
        const auto g = gram_matrix(fam, 3);
        CHECK(g.psd);
        CHECK(g.min_eigenvalue >= -1e-9 * static_cast<double>(g.size));
    }
    CHECK(gram_matrix(random_coisometry(2, 3, 0), 3).min_eigenvalue >= -1e-9);
    CHECK_THROWS_AS(gram_matrix(random_coisometry(4, 2, 0), 7), std::invalid_argument);
    CHECK_THROWS_AS(gram_matrix(random_coisometry(2, 2, 0), 0), std::invalid_argument);
}

TEST_CASE("Werner embedding", "[dilation]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto fam = random_coisometry(2, 3, seed);
        for (cplx lam : {cplx(0.0), cplx(0.3), cplx(0.5), cplx(0.9), cplx(0, 0.5)}) {
            const auto e = werner_embedding(fam, lam, 8);
            CHECK(std::abs(e.isometry_defect - oracle::werner_defect(std::abs(lam), 8)) < 1e-12);
            CHECK(e.intertwining_residual < 1e-10);
        }
    }
    const auto fam = random_coisometry(3, 2, 8);
    const auto e0 = werner_embedding(fam, 0.0, 4);
    CHECK(e0.isometry_defect == 0.0);
    CHECK((e0.W.topRows(2) - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK(e0.W.bottomRows(e0.W.rows() - 2).norm() == 0.0);
    const auto e = werner_embedding(fam, 0.5, 5);
    CHECK(std::abs(e.isometry_defect - std::pow(2.0, -12)) < 1e-12);
    CHECK(e.W.rows() == 2 * (1 + 3 + 9 + 27 + 81 + 243));
    CHECK_THROWS_AS(werner_embedding(fam, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(werner_embedding(fam, cplx(0.8, 0.6), 3), std::invalid_argument);
}

TEST_CASE("R_lambda values", "[dilation]") {
    const auto fam = random_coisometry(2, 3, 21);
    for (const auto& w : all_words(2, 2, 2)) {
        CHECK(std::abs(r_lambda_value(fam, 1.0, w) - state_value(fam, w)) < 1e-12);
        if (!w.up.empty() || !w.down.empty()) CHECK(r_lambda_value(fam, 0.0, w) == cplx(0.0));
    }
    for (const auto& w : all_words(2, 4, 0)) CHECK(std::abs(r_lambda_value(fam, 1.0, w) - state_value(fam, w)) < 1e-12);
    for (const auto& w : all_words(2, 0, 4)) CHECK(std::abs(r_lambda_value(fam, 1.0, w) - state_value(fam, w)) < 1e-12);
    for (cplx lam : {cplx(0.0), cplx(0.4), cplx(0.0, -0.7), cplx(1.0)}) CHECK(r_lambda_value(fam, lam, {}) == cplx(1.0));
    const Word w{{0, 1}, {1}};
    CHECK(std::abs(r_lambda_value(fam, 0.5, w) - 0.125 * state_value(fam, w)) < 1e-14);
    CHECK(std::abs(r_lambda_value(fam, 0.999999, w) - r_lambda_value(fam, 1.0, w)) < 1e-5);
    CHECK_THROWS_AS(r_lambda_value(fam, 1.1, w), std::invalid_argument);
}

TEST_CASE("R_lambda is the compression of Fock words", "[dilation][oracle]") {
    const int depth = 8;
    for (std::uint64_t seed : {5u, 6u}) {
        const auto fam = random_coisometry(2, 2, seed);
        for (double lam : {0.3, 0.6}) {
            const auto e = werner_embedding(fam, lam, depth);
            const Fock fock{2, 2, depth};
            const Vec wo = e.W * fam.omega();
            for (const auto& w : all_words(2, 2, 2)) {
                Vec x = wo;
                for (int j : w.down) x = fock.annihilate(j, x);
                for (auto it = w.up.rbegin(); it != w.up.rend(); ++it) x = fock.create(*it, x);
                const cplx via_fock = wo.dot(x);
                const int len = static_cast<int>(std::max(w.up.size(), w.down.size()));
                const double tol = 4.0 * std::pow(lam, 2 * (depth + 1 - len)) + 1e-14;
                CHECK(std::abs(via_fock - r_lambda_value(fam, lam, w)) <= tol);
            }
        }
    }
}

TEST_CASE("purity diagnostics", "[dilation]") {
    const auto s = purity_diagnostics(scalar_family({1 / s2, cplx(0, 1 / s2)}));
    CHECK(s.fixed_dim == 1);
    CHECK(s.pure);
    CHECK(s.tail_trivial);
    const auto b = purity_diagnostics(two_block_family());
    CHECK(b.fixed_dim == 2);
    CHECK_FALSE(b.pure);
    CHECK_FALSE(b.tail_trivial);
    int pure_count = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = purity_diagnostics(random_coisometry(2, 3, seed));
        pure_count += r.pure ? 1 : 0;
        CHECK(r.subdominant_modulus < 1.0);
        // The tail test is meaningful exactly when the subdominant modes have died out by n = 50.
        if (std::pow(r.subdominant_modulus, 50) < 1e-12) CHECK(r.tail_trivial == r.pure);
    }
    CHECK(pure_count == 10);
}
