// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Every subcommand prints a RunReport as JSON:
//   {"command", "inputs", "verdicts", "residuals", "artifacts", "elapsed", "report"}
// Exit codes: 0 all verdicts true, 1 a mathematical check failed, 2 input or usage error.

#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <optional>

#include "cuntzwave/fixtures.hpp"
#include "cuntzwave/json_io.hpp"

namespace cuntzwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunReport {
    std::string command;
    json inputs = json::object();
    json verdicts = json::object();
    json residuals = json::object();
    json artifacts = json::array();
    double elapsed = 0.0;
    json report = json::object();

    bool all_verdicts() const {
        for (const auto& [k, v] : verdicts.items())
            if (!v.get<bool>()) return false;
        return true;
    }

    json to_json() const {
        return json{{"command", command}, {"inputs", inputs},   {"verdicts", verdicts}, {"residuals", residuals},
                    {"artifacts", artifacts}, {"elapsed", elapsed}, {"report", report}};
    }
};

/// "8pi", "-pi", "pi/2", "3pi/4", "0.5pi" or a plain number of radians.
inline double parse_angle(std::string s) {
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    auto number = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (t.empty() || used != t.size()) throw std::invalid_argument("bad angle: " + s);
        return v;
    };
    double denom = 1.0;
    std::string head = s;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        denom = number(s.substr(slash + 1));
        head = s.substr(0, slash);
    }
    if (head.size() >= 2 && head.ends_with("pi")) {
        std::string c = head.substr(0, head.size() - 2);
        if (!c.empty() && c.back() == '*') c.pop_back();
        const double coef = c.empty() || c == "+" ? 1.0 : c == "-" ? -1.0 : number(c);
        return coef * kPi / denom;
    }
    return number(head) / denom;
}

namespace detail {

struct BankSource {
    std::string path;
    std::string fixture;

    void add_to(CLI::App* app, bool positional = false) {
        if (positional)
            app->add_option("bank", path, "FilterBank JSON file");
        else
            app->add_option("--bank", path, "FilterBank JSON file");
        app->add_option("--fixture", fixture, "built-in bank: haar2, haarN, db4, shannon, monomial:d0,d1,...");
    }

    FilterBank load(RunReport& rr) const {
        if (path.empty() == fixture.empty()) throw std::invalid_argument("give exactly one of a bank file or --fixture");
        if (!fixture.empty()) {
            rr.inputs["fixture"] = fixture;
            return fixtures::by_name(fixture);
        }
        rr.inputs["bank"] = path;
        return parse_bank(read_json_file(path));
    }
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
}

inline double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace detail

/// Parses and runs one command line. The report goes to `out` (or --out), diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wavelet filter banks and Cuntz algebra representations", "cuntzwave"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    std::uint64_t seed = 0;
    double tol = kVerifyTol;
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");
    app.add_option("--seed", seed, "seed for randomized commands")->capture_default_str();
    app.add_option("--tol", tol, "verification tolerance")->capture_default_str();

    RunReport rr;
    std::function<void()> action;

    // check
    detail::BankSource check_src;
    long long check_grid = 4096;
    auto* check = app.add_subcommand("check", "verify filter-bank unitarity");
    check_src.add_to(check, true);
    check->add_option("--grid", check_grid, "grid size for polynomial banks")->capture_default_str();
    check->callback([&] {
        action = [&] {
            const FilterBank fb = check_src.load(rr);
            const CircleGrid g = fb.kind() == FilterKind::grid ? std::get<GridFunction>(fb[0]).grid : CircleGrid(check_grid);
            rr.inputs["grid"] = g.M;
            const CheckReport r = check_bank(fb, g, tol);
            rr.verdicts["verified"] = r.verified;
            rr.residuals["unitarity_residual"] = r.unitarity_residual;
            rr.residuals["max_qmf_residual"] = detail::max_of(r.qmf_residuals);
            rr.report = r;
        };
    });

    // complete
    std::string complete_m0, complete_fixture, complete_write;
    int complete_scale = 2;
    auto* complete = app.add_subcommand("complete", "complete a low-pass filter to a unitary bank");
    complete->add_option("--m0", complete_m0, "LaurentPoly or GridFunction JSON file");
    complete->add_option("--fixture", complete_fixture, "use m0 of a built-in bank");
    complete->add_option("--scale", complete_scale, "scale N")->capture_default_str();
    complete->add_option("--write", complete_write, "write the completed FilterBank JSON here");
    complete->callback([&] {
        action = [&] {
            if (complete_m0.empty() == complete_fixture.empty()) throw std::invalid_argument("give exactly one of --m0 or --fixture");
            Filter m0 = complete_fixture.empty() ? parse_filter(read_json_file(complete_m0))
                                                 : fixtures::by_name(complete_fixture)[0];
            rr.inputs[complete_fixture.empty() ? "m0" : "fixture"] = complete_fixture.empty() ? complete_m0 : complete_fixture;
            rr.inputs["scale"] = complete_scale;
            const Completion c = std::holds_alternative<LaurentPoly>(m0)
                                     ? complete_filterbank(std::get<LaurentPoly>(m0), complete_scale, tol)
                                     : complete_filterbank(std::get<GridFunction>(m0), complete_scale, tol);
            rr.verdicts["unitary"] = c.unitarity_residual <= tol;
            rr.residuals["unitarity_residual"] = c.unitarity_residual;
            if (!complete_write.empty()) {
                detail::write_text(complete_write, json(c.bank).dump(2) + "\n");
                rr.artifacts.push_back(complete_write);
            }
            rr.report = c;
        };
    });

    // cascade
    detail::BankSource cas_src;
    int cas_depth = kDefaultCascadeDepth, cas_samples = kDefaultCascadeSamples, cas_mother = 0;
    std::string cas_tmax = "8pi", cas_csv;
    std::optional<int> cas_per_k;
    double cas_per_tol = 1e-3;
    auto* cascade = app.add_subcommand("cascade", "scaling and mother functions by the infinite product");
    cas_src.add_to(cascade);
    cascade->add_option("--depth", cas_depth, "product depth")->capture_default_str();
    cascade->add_option("--tmax", cas_tmax, "half-width T of the t range, e.g. 8pi")->capture_default_str();
    cascade->add_option("--samples", cas_samples, "number of samples")->capture_default_str();
    cascade->add_option("--mother", cas_mother, "0 for phi-hat, i >= 1 for psi-hat_i")->capture_default_str();
    cascade->add_option("--csv", cas_csv, "write samples as CSV (t,re,im,abs)");
    cascade->add_option("--per-k", cas_per_k, "also report the periodization residual with lattice truncation K");
    cascade->add_option("--per-tol", cas_per_tol, "tolerance for the periodization verdict")->capture_default_str();
    cascade->callback([&] {
        action = [&] {
            const FilterBank fb = cas_src.load(rr);
            const double t_max = parse_angle(cas_tmax);
            rr.inputs["depth"] = cas_depth;
            rr.inputs["tmax"] = t_max;
            rr.inputs["samples"] = cas_samples;
            rr.inputs["mother"] = cas_mother;
            const LineSamples phi = scaling_hat(fb[0], fb.scale, t_max, cas_samples, cas_depth, tol);
            const LineSamples s = cas_mother == 0 ? phi : mother_hat(fb, cas_mother, phi);
            const double phi0 = std::abs(phi.values[phi.values.size() / 2] - 1.0 / std::sqrt(kTwoPi));
            rr.verdicts["normalized"] = phi0 <= 1e-12;
            rr.residuals["phi_hat_0_residual"] = phi0;
            double peak = 0.0;
            for (const cplx& v : s.values) peak = std::max(peak, std::abs(v));
            rr.report = json{{"samples", s.values.size()}, {"t_max", s.t_max()},     {"spacing", s.spacing()},
                             {"depth", s.depth},           {"max_abs", peak},        {"rough_filter_warning", s.rough_filter_warning}};
            if (cas_per_k) {
                rr.inputs["per_k"] = *cas_per_k;
                const PerGrid pg = per_grid(*cas_per_k);
                const LineSamples wide = scaling_hat(fb[0], fb.scale, pg.t_max, pg.samples, cas_depth, tol);
                const PerReport pr = per_residual(cas_mother == 0 ? wide : mother_hat(fb, cas_mother, wide), *cas_per_k);
                rr.verdicts["per_ok"] = pr.residual <= cas_per_tol;
                rr.residuals["per_residual"] = pr.residual;
                rr.residuals["per_tail_estimate"] = pr.tail_estimate;
                rr.report["per"] = pr;
            }
            if (!cas_csv.empty()) {
                std::ofstream f(cas_csv);
                if (!f) throw std::invalid_argument("cannot write " + cas_csv);
                write_csv(f, s);
                rr.artifacts.push_back(cas_csv);
            }
        };
    });

    // wold
    detail::BankSource wold_src;
    std::string wold_filter;
    int wold_scale = 2, wold_kmax = 20;
    std::optional<long long> wold_grid;
    auto* wold = app.add_subcommand("wold", "Wold decomposition of S xi = m(z) xi(z^N)");
    wold_src.add_to(wold);
    wold->add_option("--filter", wold_filter, "single filter (LaurentPoly or GridFunction JSON)");
    wold->add_option("--scale", wold_scale, "scale N for --filter")->capture_default_str();
    wold->add_option("--kmax", wold_kmax, "projection-decay depth")->capture_default_str();
    wold->add_option("--grid", wold_grid, "grid size coprime to N (default N^L - 1)");
    wold->callback([&] {
        action = [&] {
            if (!wold_filter.empty()) {
                if (!wold_src.path.empty() || !wold_src.fixture.empty())
                    throw std::invalid_argument("give either --filter or a bank, not both");
                const Filter m = parse_filter(read_json_file(wold_filter));
                const CircleGrid g = wold_grid ? CircleGrid(*wold_grid) : canonical_grid(wold_scale);
                rr.inputs["filter"] = wold_filter;
                rr.inputs["scale"] = wold_scale;
                rr.inputs["grid"] = g.M;
                const WoldReport w = wold_analysis(m, wold_scale, g, tol, wold_kmax);
                rr.verdicts["consistent"] = !w.anomaly && w.second_grid_agrees && w.symbolic_agrees.value_or(true);
                rr.residuals["unimodularity_residual"] = w.unimodularity_residual;
                rr.residuals["cocycle_residual"] = w.cocycle_residual;
                rr.report = w;
                return;
            }
            const FilterBank fb = wold_src.load(rr);
            const ShiftCheck sc = shift_check(fb, tol);
            rr.verdicts["all_shifts"] = sc.all_shifts;
            rr.report = sc;
        };
    });

    // index
    detail::BankSource idx_src;
    int idx_window = 64;
    auto* index = app.add_subcommand("index", "spectral index of an N = 2 bank");
    idx_src.add_to(index);
    index->add_option("--window", idx_window, "Laurent window K")->capture_default_str();
    index->callback([&] {
        action = [&] {
            const FilterBank fb = idx_src.load(rr);
            if (fb.scale != 2 || fb.kind() != FilterKind::poly)
                throw std::invalid_argument("index needs a polynomial bank with N = 2");
            rr.inputs["window"] = idx_window;
            const SpectralReport s = spectral_solutions(fb.poly(0), fb.poly(1), idx_window, tol);
            const SpectralReport s2 = spectral_solutions(fb.poly(0), fb.poly(1), 2 * idx_window, tol);
            double worst = 0.0;
            for (const auto& sol : s.solutions) worst = std::max(worst, sol.residual);
            rr.verdicts["index_in_range"] = s.index >= 0 && s.index <= 2;
            rr.verdicts["solutions_validated"] = worst <= tol;
            rr.verdicts["pairing_constant"] = s.pairing_constancy <= tol;
            rr.verdicts["window_stable"] = s.index == s2.index;
            rr.residuals["max_solution_residual"] = worst;
            rr.residuals["pairing_constancy"] = s.pairing_constancy;
            rr.report = s;
            rr.report["index_at_double_window"] = s2.index;
        };
    });

    // decompose
    int dec_scale = 2;
    std::vector<int> dec_digits;
    long long dec_window = 64;
    auto* decompose = app.add_subcommand("decompose", "components of a monomial representation");
    decompose->add_option("--scale", dec_scale, "scale N")->capture_default_str();
    decompose->add_option("--digits", dec_digits, "digits d_0,...,d_{N-1}")->delimiter(',')->required();
    decompose->add_option("--window", dec_window, "enumerate k in [-W, W]")->capture_default_str();
    decompose->callback([&] {
        action = [&] {
            rr.inputs["scale"] = dec_scale;
            rr.inputs["digits"] = dec_digits;
            rr.inputs["window"] = dec_window;
            const ComponentReport c = decompose_monomial(MonomialRep(dec_scale, dec_digits), dec_window);
            rr.verdicts["partition_ok"] = c.partition_ok;
            rr.report = c;
        };
    });

    // equiv
    std::string eq_u1, eq_u2;
    int eq_scale = 2;
    auto* equiv = app.add_subcommand("equiv", "unitary equivalence of characteristic-function representations");
    equiv->add_option("--u1", eq_u1, "GridFunction JSON")->required();
    equiv->add_option("--u2", eq_u2, "GridFunction JSON")->required();
    equiv->add_option("--scale", eq_scale, "scale N")->capture_default_str();
    equiv->callback([&] {
        action = [&] {
            rr.inputs["u1"] = eq_u1;
            rr.inputs["u2"] = eq_u2;
            rr.inputs["scale"] = eq_scale;
            const CharRep a(eq_scale, parse_grid_function(read_json_file(eq_u1)));
            const CharRep b(eq_scale, parse_grid_function(read_json_file(eq_u2)));
            const EquivalenceReport e = equivalence_check(a, b, tol);
            rr.verdicts["equivalent"] = e.equivalent;
            rr.residuals["obstruction"] = e.coboundary.obstruction;
            rr.residuals["intertwining_residual"] = e.intertwining_residual;
            rr.report = e;
        };
    });

    // dilate
    std::string dil_family, dil_write;
    std::vector<int> dil_random;
    double dil_lambda = 0.5;
    int dil_fock = 8, dil_gram = 3;
    auto* dilate = app.add_subcommand("dilate", "Werner dilation and state diagnostics of a coisometry family");
    dilate->add_option("--family", dil_family, "CoisometryFamily JSON");
    dilate->add_option("--random", dil_random, "random family N,dim (uses --seed)")->delimiter(',')->expected(2);
    dilate->add_option("--lambda", dil_lambda, "real lambda with |lambda| < 1")->capture_default_str();
    dilate->add_option("--fock-depth", dil_fock, "Fock truncation K")->capture_default_str();
    dilate->add_option("--gram-depth", dil_gram, "maximum word length for the Gram certificate")->capture_default_str();
    dilate->add_option("--write-family", dil_write, "write the family JSON here");
    dilate->callback([&] {
        action = [&] {
            if (dil_family.empty() == dil_random.empty()) throw std::invalid_argument("give exactly one of --family or --random");
            const CoisometryFamily fam = dil_family.empty() ? random_coisometry(dil_random[0], dil_random[1], seed)
                                                            : parse_family(read_json_file(dil_family));
            if (dil_family.empty()) {
                rr.inputs["random"] = dil_random;
                rr.inputs["seed"] = seed;
            } else {
                rr.inputs["family"] = dil_family;
            }
            rr.inputs["lambda"] = dil_lambda;
            rr.inputs["fock_depth"] = dil_fock;
            rr.inputs["gram_depth"] = dil_gram;
            const WernerEmbedding w = werner_embedding(fam, dil_lambda, dil_fock);
            const double expected = std::pow(std::abs(dil_lambda), 2 * (dil_fock + 1));
            const GramReport g = gram_matrix(fam, dil_gram);
            const PurityReport p = purity_diagnostics(fam);
            rr.verdicts["defect_matches"] = std::abs(w.isometry_defect - expected) <= 1e-12;
            rr.verdicts["intertwining_ok"] = w.intertwining_residual <= tol;
            rr.verdicts["gram_psd"] = g.psd;
            rr.residuals["defect_error"] = std::abs(w.isometry_defect - expected);
            rr.residuals["intertwining_residual"] = w.intertwining_residual;
            rr.residuals["gram_min_eigenvalue"] = g.min_eigenvalue;
            rr.report = json{{"werner", w}, {"gram", g}, {"purity", p}};
            if (!dil_write.empty()) {
                detail::write_text(dil_write, json(fam).dump(2) + "\n");
                rr.artifacts.push_back(dil_write);
            }
        };
    });

    // fixtures
    std::string fx_name, fx_write;
    auto* fx = app.add_subcommand("fixtures", "list or emit built-in filter banks");
    fx->add_option("name", fx_name, "fixture name; omit to list");
    fx->add_option("--write", fx_write, "write the FilterBank JSON here");
    fx->callback([&] {
        action = [&] {
            if (fx_name.empty()) {
                rr.report = json{{"fixtures", {"haar2", "haarN", "db4", "shannon", "monomial:d0,...,d{N-1}"}}};
                return;
            }
            rr.inputs["name"] = fx_name;
            const FilterBank fb = fixtures::by_name(fx_name);
            const CircleGrid g = fb.kind() == FilterKind::grid ? std::get<GridFunction>(fb[0]).grid : CircleGrid(4096);
            const double u = unitarity_residual(fb, g);
            rr.verdicts["verified"] = u <= tol;
            rr.residuals["unitarity_residual"] = u;
            if (!fx_write.empty()) {
                detail::write_text(fx_write, json(fb).dump(2) + "\n");
                rr.artifacts.push_back(fx_write);
                rr.report = json{{"scale", fb.scale}, {"kind", to_string(fb.kind())}};
            } else {
                rr.report = fb;
            }
        };
    });

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::vector<const char*> argv{"cuntzwave"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
        for (auto* sub : app.get_subcommands()) rr.command = sub->get_name();
        action();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    rr.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rr.inputs["tol"] = tol;
    rr.inputs["seed"] = seed;
    if (!out_path.empty()) rr.artifacts.push_back(out_path);
    const std::string text = rr.to_json().dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        try {
            detail::write_text(out_path, text);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return rr.all_verdicts() ? kExitOk : kExitCheckFailed;
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace cuntzwave::cli
