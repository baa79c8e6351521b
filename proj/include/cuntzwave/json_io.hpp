// SPDX-License-Identifier: Apache-2.0
//
// JSON encodings. Complex numbers are [re, im] pairs.
//   LaurentPoly       {"min_degree": int, "coeffs": [[re, im], ...]}
//   GridFunction      {"M": int, "values": [[re, im], ...]}
//   FilterBank        {"scale": N, "kind": "poly"|"grid", "filters": [...]}
//   CoisometryFamily  {"N": int, "dim": int, "V": [[[row of [re, im]], ...], ...], "Omega": [[re, im], ...]}
// Reports serialize through to_json overloads found by ADL.

#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "cuntzwave/cascade.hpp"
#include "cuntzwave/dilation.hpp"
#include "cuntzwave/index.hpp"
#include "cuntzwave/permutative.hpp"
#include "cuntzwave/wold.hpp"

namespace cuntzwave {

using json = nlohmann::ordered_json;

// --- encoding -------------------------------------------------------------

inline json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline json complex_list_json(std::span<const cplx> v) {
    json a = json::array();
    for (const cplx& c : v) a.push_back(complex_json(c));
    return a;
}

inline void to_json(json& j, const LaurentPoly& p) {
    j = json{{"min_degree", p.min_degree()}, {"coeffs", complex_list_json(p.coeffs())}};
}

inline void to_json(json& j, const GridFunction& g) {
    j = json{{"M", g.grid.M}, {"values", complex_list_json(g.values)}};
}

inline json filter_json(const Filter& f) {
    return std::visit([](const auto& x) { return json(x); }, f);
}

inline void to_json(json& j, const FilterBank& fb) {
    json fs = json::array();
    for (const auto& f : fb.filters) fs.push_back(filter_json(f));
    j = json{{"scale", fb.scale}, {"kind", to_string(fb.kind())}, {"filters", fs}};
}

inline json matrix_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline void to_json(json& j, const CoisometryFamily& f) {
    json vs = json::array();
    for (const auto& v : f.operators()) vs.push_back(matrix_json(v));
    json om = json::array();
    for (Eigen::Index k = 0; k < f.omega().size(); ++k) om.push_back(complex_json(f.omega()(k)));
    j = json{{"N", f.size()}, {"dim", f.dim()}, {"V", vs}, {"Omega", om}};
}

inline void to_json(json& j, const CheckReport& r) {
    j = json{{"qmf_residuals", r.qmf_residuals},   {"pairwise_residuals", r.pairwise_residuals},
             {"unitarity_residual", r.unitarity_residual}, {"unitarity_argmax", r.unitarity_argmax},
             {"lowpass_ok", r.lowpass_ok},         {"grid_size", r.grid_size},
             {"verified", r.verified}};
}

inline void to_json(json& j, const LowpassReport& r) {
    j = json{{"ok", r.ok},
             {"value_residual", r.value_residual},
             {"modulus_residual", r.modulus_residual},
             {"phase", complex_json(r.phase)},
             {"zero_residuals", r.zero_residuals}};
}

inline void to_json(json& j, const Completion& c) {
    j = json{{"bank", c.bank}, {"downgraded_to_grid", c.downgraded_to_grid}, {"unitarity_residual", c.unitarity_residual}};
}

inline void to_json(json& j, const PerReport& r) {
    j = json{{"residual", r.residual}, {"tail_estimate", r.tail_estimate}};
}

inline void to_json(json& j, const WoldReport& r) {
    j = json{{"unitary_dim", r.unitary_dim},
             {"eigenvalue", r.eigenvalue ? complex_json(*r.eigenvalue) : json(nullptr)},
             {"eigenfunction_poly", r.eigenfunction_poly ? json(*r.eigenfunction_poly) : json(nullptr)},
             {"eigenfunction_grid", r.eigenfunction_grid ? json(*r.eigenfunction_grid) : json(nullptr)},
             {"unimodularity_residual", r.unimodularity_residual},
             {"cocycle_residual", r.cocycle_residual},
             {"projection_decay", r.projection_decay},
             {"grid_size", r.grid_size},
             {"cycle_count", r.cycle_count},
             {"candidate_count", r.candidate_count},
             {"anomaly", r.anomaly},
             {"second_grid_agrees", r.second_grid_agrees},
             {"symbolic_agrees", r.symbolic_agrees ? json(*r.symbolic_agrees) : json(nullptr)}};
}

inline void to_json(json& j, const ShiftCheck& s) {
    j = json{{"all_shifts", s.all_shifts}, {"admissible", s.admissible}, {"unitary_dims", s.unitary_dims}};
}

inline void to_json(json& j, const ComponentReport& r) {
    json comps = json::array();
    for (const auto& c : r.components)
        comps.push_back(json{{"cycle", c.cycle}, {"generator", c.generator}, {"members", c.members}});
    j = json{{"window", {r.window_min, r.window_max}},
             {"component_count", r.component_count()},
             {"components", comps},
             {"partition_ok", r.partition_ok},
             {"invariance_violations", r.invariance_violations}};
}

inline void to_json(json& j, const CoboundaryResult& r) {
    j = json{{"exists", r.exists},
             {"obstruction", r.obstruction},
             {"residual", r.residual},
             {"cycle_count", r.cycle_count},
             {"monomial_exponent", r.monomial_exponent ? json(*r.monomial_exponent) : json(nullptr)},
             {"grid_screen", r.grid_screen},
             {"delta", r.delta ? json(*r.delta) : json(nullptr)}};
}

inline void to_json(json& j, const EquivalenceReport& r) {
    j = json{{"equivalent", r.equivalent},
             {"intertwining_residual", r.intertwining_residual},
             {"grid_screen", r.grid_screen},
             {"coboundary", r.coboundary}};
}

inline void to_json(json& j, const GramReport& r) {
    j = json{{"size", r.size}, {"min_eigenvalue", r.min_eigenvalue}, {"psd", r.psd}};
}

inline void to_json(json& j, const WernerEmbedding& e) {
    j = json{{"lambda", complex_json(e.lambda)},
             {"fock_depth", e.depth},
             {"rows", e.W.rows()},
             {"isometry_defect", e.isometry_defect},
             {"expected_defect", std::pow(std::abs(e.lambda), 2 * (e.depth + 1))},
             {"intertwining_residual", e.intertwining_residual}};
}

inline void to_json(json& j, const PurityReport& r) {
    j = json{{"fixed_dim", r.fixed_dim},
             {"pure", r.pure},
             {"tail_trivial", r.tail_trivial},
             {"subdominant_modulus", r.subdominant_modulus}};
}

inline void to_json(json& j, const SpectralReport& r) {
    json sols = json::array();
    for (const auto& s : r.solutions)
        sols.push_back(json{{"lambda", complex_json(s.lambda)}, {"phi", s.phi}, {"residual", s.residual}});
    json pm = json::array();
    for (const auto& row : r.pairing_matrix) pm.push_back(complex_list_json(row));
    j = json{{"index", r.index},
             {"window", {-r.window, r.window}},
             {"solutions", sols},
             {"pairing_matrix", pm},
             {"pairing_constancy", r.pairing_constancy},
             {"candidate_clusters", r.candidate_clusters},
             {"anomaly", r.anomaly}};
}

// --- decoding -------------------------------------------------------------

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw std::invalid_argument("json: " + what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace detail

inline cplx parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        detail::bad("complex numbers are [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> parse_complex_list(const json& j) {
    if (!j.is_array()) detail::bad("expected an array of complex numbers");
    std::vector<cplx> out;
    for (const auto& x : j) out.push_back(parse_complex(x));
    return out;
}

inline LaurentPoly parse_laurent(const json& j) {
    const json& d = detail::field(j, "min_degree");
    if (!d.is_number_integer()) detail::bad("min_degree must be an integer");
    return LaurentPoly(d.get<int>(), parse_complex_list(detail::field(j, "coeffs")));
}

inline GridFunction parse_grid_function(const json& j) {
    const json& m = detail::field(j, "M");
    if (!m.is_number_integer() || m.get<long long>() < 1) detail::bad("M must be a positive integer");
    return GridFunction(CircleGrid(m.get<long long>()), parse_complex_list(detail::field(j, "values")));
}

inline Filter parse_filter(const json& j) {
    if (j.is_object() && j.contains("M")) return parse_grid_function(j);
    return parse_laurent(j);
}

inline FilterBank parse_bank(const json& j) {
    const json& s = detail::field(j, "scale");
    if (!s.is_number_integer()) detail::bad("scale must be an integer");
    const json& fs = detail::field(j, "filters");
    if (!fs.is_array()) detail::bad("filters must be an array");
    std::vector<Filter> filters;
    for (const auto& f : fs) filters.push_back(parse_filter(f));
    FilterBank fb(s.get<int>(), std::move(filters));
    if (j.contains("kind") && j.at("kind") != to_string(fb.kind())) detail::bad("kind does not match the filters");
    return fb;
}

inline Mat parse_matrix(const json& j, Eigen::Index dim) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) detail::bad("matrix must have dim rows");
    Mat m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto row = parse_complex_list(j[static_cast<std::size_t>(r)]);
        if (static_cast<Eigen::Index>(row.size()) != dim) detail::bad("matrix must have dim columns");
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

inline CoisometryFamily parse_family(const json& j) {
    const int n = detail::field(j, "N").get<int>();
    const int dim = detail::field(j, "dim").get<int>();
    const json& vs = detail::field(j, "V");
    if (!vs.is_array() || static_cast<int>(vs.size()) != n) detail::bad("V must hold N matrices");
    std::vector<Mat> v;
    for (const auto& m : vs) v.push_back(parse_matrix(m, dim));
    const auto om = parse_complex_list(detail::field(j, "Omega"));
    if (static_cast<int>(om.size()) != dim) detail::bad("Omega must have dim entries");
    return CoisometryFamily(std::move(v), Eigen::Map<const Vec>(om.data(), dim));
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace cuntzwave
