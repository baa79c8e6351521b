// SPDX-License-Identifier: Apache-2.0
//
// States on O_N from a finite coisometry family: sum V_i V_i^* = I on K with
// a cyclic unit vector Omega. Includes the Werner embedding W_lambda into the
// truncated Fock space, its compression R_lambda, Gram positivity
// certificates and the purity/tail diagnostics of X -> sum V_i X V_i^*.

#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "cuntzwave/laurent.hpp"

namespace cuntzwave {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kCoisometryTol = 1e-12;
inline constexpr double kCyclicTol = 1e-10;
inline constexpr std::size_t kMaxWords = 10000;

inline double spectral_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

class CoisometryFamily {
public:
    CoisometryFamily(std::vector<Mat> v, Vec omega) : v_(std::move(v)), omega_(std::move(omega)) {
        if (v_.empty()) throw std::invalid_argument("CoisometryFamily: need at least one operator");
        const auto d = omega_.size();
        if (d == 0) throw std::invalid_argument("CoisometryFamily: empty Omega");
        for (const auto& m : v_)
            if (m.rows() != d || m.cols() != d) throw std::invalid_argument("CoisometryFamily: shape mismatch");
        if (const double r = spectral_norm(sigma(Mat::Identity(d, d)) - Mat::Identity(d, d)); r > kCoisometryTol)
            throw std::invalid_argument("CoisometryFamily: sum V_i V_i^* != I (residual " + std::to_string(r) + ")");
        if (std::abs(omega_.norm() - 1.0) > kCoisometryTol)
            throw std::invalid_argument("CoisometryFamily: Omega must be a unit vector");
        if (krylov_rank() < d) throw std::invalid_argument("CoisometryFamily: Omega is not cyclic for the V_i^*");
    }

    int size() const { return static_cast<int>(v_.size()); }
    int dim() const { return static_cast<int>(omega_.size()); }
    const Mat& V(int i) const { return v_.at(static_cast<std::size_t>(i)); }
    const std::vector<Mat>& operators() const { return v_; }
    const Vec& omega() const { return omega_; }

    /// sigma(X) = sum_i V_i X V_i^*.
    Mat sigma(const Mat& x) const {
        Mat out = Mat::Zero(x.rows(), x.cols());
        for (const auto& m : v_) out += m * x * m.adjoint();
        return out;
    }

    /// Dimension of the span of all V^*_{i_k} ... V^*_{i_1} Omega.
    long krylov_rank() const {
        std::vector<Vec> basis;
        std::vector<Vec> frontier;
        auto add = [&](Vec x) {
            for (const auto& b : basis) x -= b.dot(x) * b;
            const double nx = x.norm();
            if (nx <= kCyclicTol) return;
            basis.push_back(x / nx);
            frontier.push_back(basis.back());
        };
        add(omega_);
        while (!frontier.empty()) {
            const Vec x = frontier.back();
            frontier.pop_back();
            for (const auto& m : v_) add(m.adjoint() * x);
        }
        return static_cast<long>(basis.size());
    }

private:
    std::vector<Mat> v_;
    Vec omega_;
};

/// s_{i_1} ... s_{i_n} s^*_{j_m} ... s^*_{j_1}.
struct Word {
    std::vector<int> up;
    std::vector<int> down;
};

namespace detail {

inline void check_indices(const CoisometryFamily& fam, const std::vector<int>& w) {
    for (int i : w)
        if (i < 0 || i >= fam.size()) throw std::out_of_range("word index out of range");
}

/// V^*_{w_k} ... V^*_{w_1} x.
inline Vec down_apply(const CoisometryFamily& fam, const std::vector<int>& w, Vec x) {
    for (int i : w) x = fam.V(i).adjoint() * x;
    return x;
}

}  // namespace detail

/// < V^*_{i_n}..V^*_{i_1} Omega | V^*_{j_m}..V^*_{j_1} Omega >.
inline cplx state_value(const CoisometryFamily& fam, const Word& w) {
    detail::check_indices(fam, w.up);
    detail::check_indices(fam, w.down);
    return detail::down_apply(fam, w.up, fam.omega()).dot(detail::down_apply(fam, w.down, fam.omega()));
}

/// All words over {0..n-1} of length <= max_len in order of length, then lexicographic.
inline std::vector<std::vector<int>> words_up_to(int n, int max_len) {
    std::vector<std::vector<int>> out{{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t k = begin; k < end; ++k)
            for (int i = 0; i < n; ++i) {
                auto w = out[k];
                w.push_back(i);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

inline std::size_t word_count(int n, int max_len) {
    std::size_t total = 0, level = 1;
    for (int len = 0; len <= max_len; ++len) {
        total += level;
        if (total > kMaxWords) return total;
        level *= static_cast<std::size_t>(n);
    }
    return total;
}

struct GramReport {
    std::size_t size = 0;
    double min_eigenvalue = 0.0;
    bool psd = false;
};

/// G[a][b] = < V^*_a Omega | V^*_b Omega > over down-words of length <= L.
/// PSD when the smallest eigenvalue is >= -1e-9 times the matrix dimension.
inline GramReport gram_matrix(const CoisometryFamily& fam, int max_len) {
    if (max_len < 1) throw std::invalid_argument("gram_matrix: L must be >= 1");
    if (word_count(fam.size(), max_len) > kMaxWords) throw std::invalid_argument("gram_matrix: more than 10000 words");
    const auto words = words_up_to(fam.size(), max_len);
    Mat vecs(fam.dim(), static_cast<Eigen::Index>(words.size()));
    for (std::size_t k = 0; k < words.size(); ++k)
        vecs.col(static_cast<Eigen::Index>(k)) = detail::down_apply(fam, words[k], fam.omega());
    const Mat g = vecs.adjoint() * vecs;
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    GramReport r;
    r.size = words.size();
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.psd = r.min_eigenvalue >= -1e-9 * static_cast<double>(r.size);
    return r;
}

/// Truncated Werner isometry. Row blocks are indexed by Fock words with i_1
/// the most significant digit; level k starts at offset dim * (N^0 + ... + N^{k-1}).
struct WernerEmbedding {
    cplx lambda;
    int depth = 0;
    int scale = 0;
    int dim = 0;
    Mat W;
    /// || W^* W - I ||; exactly |lambda|^{2(K+1)} in exact arithmetic.
    double isometry_defect = 0.0;
    /// max_i || (a_i (x) 1) W - lambda W V_i^* || on output levels below K.
    double intertwining_residual = 0.0;

    Eigen::Index level_offset(int k) const {
        Eigen::Index off = 0, level = 1;
        for (int j = 0; j < k; ++j, level *= scale) off += level * dim;
        return off;
    }
    Eigen::Index level_words(int k) const {
        Eigen::Index level = 1;
        for (int j = 0; j < k; ++j) level *= scale;
        return level;
    }

    /// Annihilation a_i: keeps words with i_1 = i and drops the leading letter.
    Mat annihilate(int i, const Mat& x) const {
        Mat out = Mat::Zero(x.rows(), x.cols());
        for (int k = 1; k <= depth; ++k) {
            const Eigen::Index sub = level_words(k - 1);
            const Eigen::Index src = level_offset(k) + i * sub * dim;
            out.middleRows(level_offset(k - 1), sub * dim) = x.middleRows(src, sub * dim);
        }
        return out;
    }
};

inline WernerEmbedding werner_embedding(const CoisometryFamily& fam, cplx lambda, int depth) {
    if (std::abs(lambda) >= 1.0) throw std::invalid_argument("werner_embedding: need |lambda| < 1");
    if (depth < 0) throw std::invalid_argument("werner_embedding: depth must be >= 0");
    if (word_count(fam.size(), depth) > 100000) throw std::invalid_argument("werner_embedding: Fock truncation too large");
    WernerEmbedding e;
    e.lambda = lambda;
    e.depth = depth;
    e.scale = fam.size();
    e.dim = fam.dim();
    const Eigen::Index d = fam.dim();
    e.W = Mat::Zero(e.level_offset(depth + 1), d);

    // Level k block for word w is sqrt(1 - |lambda|^2) lambda^k V^*_{i_k}..V^*_{i_1}; build level k from level k-1.
    const double c = std::sqrt(1.0 - std::norm(lambda));
    e.W.topRows(d) = c * Mat::Identity(d, d);
    for (int k = 1; k <= depth; ++k) {
        const Eigen::Index prev = e.level_offset(k - 1);
        const Eigen::Index cur = e.level_offset(k);
        const Eigen::Index sub = e.level_words(k - 1);
        for (Eigen::Index w = 0; w < sub; ++w)
            for (int i = 0; i < e.scale; ++i) {
                // New letter appended last: index w * N + i, operator applied outermost.
                const Eigen::Index dst = cur + (w * e.scale + i) * d;
                e.W.middleRows(dst, d) = lambda * fam.V(i).adjoint() * e.W.middleRows(prev + w * d, d);
            }
    }

    e.isometry_defect = spectral_norm(e.W.adjoint() * e.W - Mat::Identity(d, d));
    const Eigen::Index interior = e.level_offset(depth);
    for (int i = 0; i < e.scale; ++i) {
        const Mat lhs = e.annihilate(i, e.W);
        const Mat rhs = lambda * e.W * fam.V(i).adjoint();
        e.intertwining_residual = std::max(e.intertwining_residual, spectral_norm((lhs - rhs).topRows(interior)));
    }
    return e;
}

/// conj(lambda)^n lambda^m < Omega, V_{i_1}..V_{i_n} V^*_{j_m}..V^*_{j_1} Omega >.
inline cplx r_lambda_value(const CoisometryFamily& fam, cplx lambda, const Word& w) {
    if (std::abs(lambda) > 1.0 + 1e-15) throw std::invalid_argument("r_lambda_value: need |lambda| <= 1");
    detail::check_indices(fam, w.up);
    detail::check_indices(fam, w.down);
    Vec x = detail::down_apply(fam, w.down, fam.omega());
    for (auto it = w.up.rbegin(); it != w.up.rend(); ++it) x = fam.V(*it) * x;
    cplx scale{1.0, 0.0};
    for (std::size_t k = 0; k < w.up.size(); ++k) scale *= std::conj(lambda);
    for (std::size_t k = 0; k < w.down.size(); ++k) scale *= lambda;
    return scale * fam.omega().dot(x);
}

struct PurityReport {
    int fixed_dim = 0;
    bool pure = false;
    /// Cauchy test over sigma^50..sigma^100 within 1e-9 plus scalar limit.
    /// Slowly mixing families fail it even though sigma^n(X) converges.
    bool tail_trivial = false;
    /// Largest |mu| < 1 - 1e-9 among eigenvalues of sigma; the tail test passes once this^50 is below 1e-9.
    double subdominant_modulus = 0.0;
};

inline constexpr double kFixedPointTol = 1e-9;

inline PurityReport purity_diagnostics(const CoisometryFamily& fam) {
    const Eigen::Index d = fam.dim();
    // vec(V X V^*) = (conj(V) (x) V) vec(X) for column-major vec.
    Mat t = Mat::Zero(d * d, d * d);
    for (const auto& v : fam.operators())
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) t.block(i * d, j * d, d, d) += std::conj(v(i, j)) * v;
    t -= Mat::Identity(d * d, d * d);
    Eigen::JacobiSVD<Mat> svd(t);
    PurityReport r;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) <= kFixedPointTol) ++r.fixed_dim;
    r.pure = r.fixed_dim == 1;
    Eigen::ComplexEigenSolver<Mat> es(t + Mat::Identity(d * d, d * d), false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double a = std::abs(es.eigenvalues()(k));
        if (a < 1.0 - kFixedPointTol) r.subdominant_modulus = std::max(r.subdominant_modulus, a);
    }

    r.tail_trivial = true;
    for (Eigen::Index a = 0; a < d && r.tail_trivial; ++a)
        for (Eigen::Index b = 0; b < d && r.tail_trivial; ++b) {
            Mat x = Mat::Zero(d, d);
            x(a, b) = 1.0;
            std::vector<Mat> iter;
            for (int n = 1; n <= 100; ++n) {
                x = fam.sigma(x);
                if (n >= 50) iter.push_back(x);
            }
            const Mat& last = iter.back();
            for (const auto& y : iter) r.tail_trivial = r.tail_trivial && spectral_norm(y - last) <= kFixedPointTol;
            const cplx tr = last.trace() / static_cast<double>(d);
            r.tail_trivial = r.tail_trivial && spectral_norm(last - tr * Mat::Identity(d, d)) <= kFixedPointTol;
        }
    return r;
}

/// V_i = Q_i^* for the row blocks Q_i of a QR-orthonormalized N dim x dim
/// complex Gaussian matrix, so sum_i V_i V_i^* = Q^* Q = I. Omega is a
/// Gaussian unit vector.
inline CoisometryFamily random_coisometry(int n, int dim, std::uint64_t seed) {
    if (n < 1 || dim < 1) throw std::invalid_argument("random_coisometry: need N >= 1 and dim >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat a(static_cast<Eigen::Index>(n) * dim, dim);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cplx(g(rng), g(rng));
    const Mat q = Eigen::HouseholderQR<Mat>(a).householderQ() * Mat::Identity(a.rows(), dim);
    std::vector<Mat> v;
    for (int i = 0; i < n; ++i) v.push_back(q.middleRows(static_cast<Eigen::Index>(i) * dim, dim).adjoint());
    Vec omega(dim);
    for (Eigen::Index j = 0; j < dim; ++j) omega(j) = cplx(g(rng), g(rng));
    return CoisometryFamily(std::move(v), omega / omega.norm());
}

/// V_0 = diag(1, 0), V_1 = diag(0, 1), Omega = (1, 1)/sqrt 2: two one-dimensional blocks.
inline CoisometryFamily two_block_family() {
    Mat v0 = Mat::Zero(2, 2), v1 = Mat::Zero(2, 2);
    v0(0, 0) = 1.0;
    v1(1, 1) = 1.0;
    Vec omega(2);
    omega << 1.0, 1.0;
    return CoisometryFamily({v0, v1}, omega / std::sqrt(2.0));
}

/// One-dimensional family V_i = alpha_i with sum |alpha_i|^2 = 1.
inline CoisometryFamily scalar_family(const std::vector<cplx>& alpha) {
    std::vector<Mat> v;
    for (const cplx& a : alpha) v.push_back(Mat::Constant(1, 1, a));
    return CoisometryFamily(std::move(v), Vec::Ones(1));
}

}  // namespace cuntzwave
