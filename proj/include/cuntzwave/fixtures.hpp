// SPDX-License-Identifier: Apache-2.0
//
// Named filter banks used by the CLI and the test suites.

#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "cuntzwave/filterbank.hpp"

namespace cuntzwave::fixtures {

/// Haar bank of scale 2: m0 = (1+z)/sqrt2, m1 = (1-z)/sqrt2.
inline FilterBank haar2() {
    const double s = std::numbers::sqrt2 / 2.0;
    return FilterBank::from_polys({LaurentPoly(0, {s, s}), LaurentPoly(0, {s, -s})});
}

/// Scale-N Haar bank: m_i(z) = N^{-1/2} sum_r rho^{i r} z^r. Filter 0 is the
/// box filter (1 + z + ... + z^{N-1}) / sqrt(N); the others are its DFT rows.
inline FilterBank haar(int n) {
    if (n < 2) throw std::invalid_argument("haar: scale must be >= 2");
    if (n == 2) return haar2();
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<LaurentPoly> ps;
    for (int i = 0; i < n; ++i) {
        std::vector<cplx> c(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) c[static_cast<std::size_t>(r)] = inv * std::polar(1.0, kTwoPi * ((i * r) % n) / n);
        ps.emplace_back(0, std::move(c));
    }
    return FilterBank::from_polys(std::move(ps));
}

/// Daubechies low-pass filter with two vanishing moments, normalized so that
/// m0(1) = sqrt(2). These are the closed-form roots of the degree-3 spectral
/// factorization of |m0|^2 = 2 cos^4(t/2) (1 + 2 sin^2(t/2)).
inline LaurentPoly db4_lowpass() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::numbers::sqrt2;
    return LaurentPoly(0, {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d});
}

inline FilterBank db4() { return complete_filterbank(db4_lowpass(), 2).bank; }

/// m_i = z^{d_i}; the digits must be mutually incongruent mod N = digits.size().
inline FilterBank monomial(const std::vector<int>& digits) {
    const int n = static_cast<int>(digits.size());
    if (n < 2) throw std::invalid_argument("monomial: need at least two digits");
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int d : digits) {
        auto& u = used[static_cast<std::size_t>(floor_mod(d, n))];
        if (u) throw std::invalid_argument("monomial: digits must be mutually incongruent modulo N");
        u = 1;
    }
    std::vector<LaurentPoly> ps;
    for (int d : digits) ps.push_back(LaurentPoly::monomial(d));
    return FilterBank::from_polys(std::move(ps));
}

/// Shannon bank on a grid with 4 | M: m0 = sqrt2 on the arc |t| < pi/2,
/// m1(z) = -z conj(m0(-z)). Arcs are half-open in grid index so that z and
/// -z always fall in complementary halves.
inline FilterBank shannon(long long m = 4096) {
    if (m % 4 != 0) throw std::invalid_argument("shannon: grid size must be divisible by 4");
    const CircleGrid g(m);
    std::vector<cplx> v0(static_cast<std::size_t>(m)), v1(static_cast<std::size_t>(m));
    auto in_arc = [&](long long j) { return floor_mod(j + m / 4, m) < m / 2; };
    for (long long j = 0; j < m; ++j) {
        v0[static_cast<std::size_t>(j)] = in_arc(j) ? std::numbers::sqrt2 : 0.0;
        v1[static_cast<std::size_t>(j)] = in_arc(j + m / 2) ? -std::numbers::sqrt2 * g.point(j) : cplx{};
    }
    return FilterBank(2, {GridFunction(g, std::move(v0)), GridFunction(g, std::move(v1))});
}

namespace detail {

inline std::vector<int> parse_int_list(std::string_view s) {
    std::vector<int> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        std::string_view tok = s.substr(0, comma);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
        int v = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            throw std::invalid_argument("bad integer list: " + std::string(s));
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace detail

/// Names: haar2, haar<N>, db4, shannon, monomial(d0,d1,...) or monomial:d0,d1,...
inline FilterBank by_name(std::string_view name) {
    if (name == "haar2") return haar2();
    if (name == "db4") return db4();
    if (name == "shannon") return shannon();
    if (name.starts_with("haar")) {
        const auto digits = name.substr(4);
        int n = 0;
        const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc{} && p == digits.data() + digits.size() && n >= 2) return haar(n);
    }
    if (name.starts_with("monomial:")) return monomial(detail::parse_int_list(name.substr(9)));
    if (name.starts_with("monomial(") && name.ends_with(")"))
        return monomial(detail::parse_int_list(name.substr(9, name.size() - 10)));
    throw std::invalid_argument("unknown fixture: " + std::string(name));
}

}  // namespace cuntzwave::fixtures
