// Copyright 2026 The dqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The dqc command-line tool, callable in-process for tests.
//
// Exit codes: 0 success, 1 verification failure, 2 contract or dimension
// error, 3 capacity error, 4 parse error (including bad flags).

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dqc_io.hpp"
#include "dqc_svg.hpp"

namespace dqc::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kContract = 2, kCapacity = 3, kParse = 4 };

namespace detail {

using io::Json;

struct Options {
    std::string input;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1000;
    std::vector<std::size_t> n;
    std::vector<std::size_t> m;
    std::optional<std::string> delta;
    std::string mode = "abstract";
    std::string out;
    std::string format = "json";
    std::optional<std::string> p;
    std::optional<std::string> params;
    std::optional<double> alpha;
    std::optional<double> beta;
    unsigned threads = 1;
    std::string method = "exact";
    std::uint64_t samples = 10000;
    std::string suite = "all";
    std::string kind;
    std::optional<std::string> basis;
    double extent = 0.0;
    std::size_t resolution = 1;
};

inline void emit(const Options &o, const std::string &text, std::ostream &out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        throw ContractError("cannot write '" + o.out + "'");
    }
    f << text;
}

inline std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

inline Json delta_json(double d) {
    return std::isinf(d) ? Json("inf") : Json(d);
}

inline void require_format(const Options &o, std::initializer_list<const char *> allowed) {
    for (const char *a : allowed) {
        if (o.format == a) {
            return;
        }
    }
    throw ContractError("unsupported --format '" + o.format + "' for this command");
}

/// "builtin:NAME" or a path to an ensemble JSON file.
inline BipartiteEnsemble load_ensemble(const Options &o, Json &config) {
    static const std::string prefix = "builtin:";
    if (o.input.rfind(prefix, 0) == 0) {
        const std::string name = o.input.substr(prefix.size());
        std::vector<double> params;
        if (o.params) {
            for (const auto &tok : io::split(*o.params, ',')) {
                params.push_back(io::parse_rational(tok));
            }
        } else if (o.p && (name == "bell" || name == "erasure_code")) {
            params = io::parse_probabilities(*o.p);
        } else if (name == "hidden_orthogonality" && (o.alpha || o.beta)) {
            params = {o.alpha.value_or(1e-3), o.beta.value_or(1e-3)};
        }
        config["builtin"] = name;
        config["params"] = params;
        return make_builtin(name, params);
    }
    config["file"] = o.input;
    return io::parse_ensemble(io::read_file(o.input));
}

inline int cmd_rates(const Options &o, std::ostream &out) {
    require_format(o, {"json", "csv"});
    Json config = Json::object();
    config["input"] = o.input;
    const BipartiteEnsemble e = load_ensemble(o, config);
    std::vector<RateBounds> families{slepian_wolf_bounds(e), irreducible_bound(e), caw_corner(e)};
    const auto bell = detect_bell_form(e);
    if (bell) {
        families.push_back(bell_region(*bell));
    }
    std::optional<HybridRateReport> hybrid;
    if (config.contains("builtin") && config["builtin"] == "walgate_pair") {
        const std::vector<double> pr = config["params"].get<std::vector<double>>();
        hybrid = hybrid_rate(pr[0], pr[1], pr[2], pr[3], pr[4], pr[5]);
        families.push_back(to_rate_bounds(*hybrid));
    }
    if (o.format == "csv") {
        RegionExportOptions opt;
        opt.extent = o.extent;
        opt.resolution = o.resolution;
        emit(o, region_csv(region_export(families, opt)), out);
        return kOk;
    }
    const EntropyTriple s = average_entropies(e);
    Json reports = Json::array();
    for (const auto &b : families) {
        reports.push_back(io::to_json(b));
    }
    Json doc = io::envelope("rates", o.seed, config, reports);
    doc["entropies"] = {{"S_A", s.s_a}, {"S_B", s.s_b}, {"S_AB", s.s_ab}};
    if (hybrid) {
        doc["hybrid"] = io::to_json(*hybrid);
    }
    emit(o, dump(doc), out);
    return kOk;
}

inline int cmd_bell_sim(const Options &o, std::ostream &out) {
    require_format(o, {"json", "csv"});
    if (o.n.size() != 1) {
        throw ContractError("bell-sim: exactly one --n is required");
    }
    if (o.m.empty() && !o.delta) {
        throw ContractError("bell-sim: give --m or --delta");
    }
    const std::vector<double> pv = io::parse_probabilities(o.p.value_or("1/4,1/4,1/4,1/4"));
    const auto probs = bell_probabilities(pv);
    McConfig cfg;
    cfg.p = probs;
    cfg.n = o.n[0];
    cfg.trials = o.trials;
    cfg.mode = parse_mode(o.mode);
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    if (o.delta) {
        cfg.delta = io::parse_number(*o.delta);
    }
    std::vector<std::optional<std::size_t>> ms;
    if (o.m.empty()) {
        ms.push_back(std::nullopt);
    }
    for (auto m : o.m) {
        ms.push_back(m);
    }
    std::vector<McReport> reps;
    for (const auto &m : ms) {
        McConfig c = cfg;
        c.m = m;
        if (m) {
            c.delta.reset();
        }
        reps.push_back(run_monte_carlo(c));
    }
    if (o.format == "csv") {
        std::string text = io::mc_csv_header();
        for (const auto &r : reps) {
            text += io::mc_csv_row(r);
        }
        emit(o, text, out);
        return kOk;
    }
    Json config = {{"p", probs}, {"n", cfg.n}, {"m", o.m}, {"delta", o.delta ? Json(*cfg.delta) : Json(nullptr)},
                   {"trials", cfg.trials}, {"mode", mode_name(cfg.mode)}, {"threads", cfg.threads}};
    Json reports = Json::array();
    for (const auto &r : reps) {
        reports.push_back(io::to_json(r));
    }
    emit(o, dump(io::envelope("bell-sim", o.seed, config, reports)), out);
    return kOk;
}

inline int cmd_hidden_orthog(const Options &o, std::ostream &out) {
    require_format(o, {"json", "csv"});
    const double alpha = o.alpha.value_or(0.01), beta = o.beta.value_or(0.01);
    const double delta = io::parse_number(o.delta.value_or("0.25"));
    const std::vector<std::size_t> ns = o.n.empty() ? std::vector<std::size_t>{1} : o.n;
    FidelityOptions fo;
    if (o.method == "sampled") {
        fo.method = FidelityMethod::sampled;
    } else if (o.method != "exact") {
        throw ContractError("unknown --method '" + o.method + "' (expected exact or sampled)");
    }
    fo.samples = o.samples;
    fo.seed = o.seed;
    const BipartiteEnsemble e = builtin::hidden_orthogonality(alpha, beta);
    std::vector<FidelityReport> reps;
    std::vector<double> masses_a, masses_b;
    for (std::size_t n : ns) {
        const ProductCodecScheme s = hidden_orthogonality_scheme(alpha, beta, n, delta);
        reps.push_back(s.fidelity(e, fo));
        masses_a.push_back(s.compressor_a().typical_mass());
        masses_b.push_back(s.compressor_b().typical_mass());
    }
    if (o.format == "csv") {
        std::string text = "n,fidelity,rate_A,rate_B\n";
        for (const auto &r : reps) {
            text += std::to_string(r.n) + "," + io::fmt(r.average_fidelity) + "," + io::fmt(r.rate_a) + "," + io::fmt(r.rate_b) + "\n";
        }
        emit(o, text, out);
        return kOk;
    }
    const RatePoint asym = hidden_orthogonality_rates(alpha, beta);
    Json config = {{"alpha", alpha}, {"beta", beta}, {"n", ns}, {"delta", delta_json(delta)}, {"method", method_name(fo.method)}};
    if (fo.method == FidelityMethod::sampled) {
        config["samples"] = fo.samples;
    }
    Json reports = Json::array();
    for (std::size_t i = 0; i < reps.size(); ++i) {
        Json r = io::to_json(reps[i]);
        r["typical_mass_A"] = masses_a[i];
        r["typical_mass_B"] = masses_b[i];
        reports.push_back(std::move(r));
    }
    Json doc = io::envelope("hidden-orthog", o.seed, config, reports);
    doc["asymptotic_rates"] = {{"R_A", asym.ra}, {"R_B", asym.rb}, {"sum", asym.ra + asym.rb}};
    emit(o, dump(doc), out);
    return kOk;
}

inline int cmd_erasure_check(const Options &o, std::ostream &out) {
    require_format(o, {"json", "csv"});
    const std::vector<ComplexVector> basis = o.basis ? io::parse_basis(io::read_file(*o.basis)) : builtin::erasure_codewords();
    if (basis.empty()) {
        throw ContractError("erasure-check: empty basis");
    }
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < static_cast<std::size_t>(basis[0].size())) {
        ++qubits;
    }
    std::vector<ErasureReport> reps;
    for (std::size_t q = 1; q <= std::max<std::size_t>(qubits, 1); ++q) {
        reps.push_back(erasure_correctable(basis, q));
    }
    if (o.format == "csv") {
        static const char *names[4] = {"I", "X", "Y", "Z"};
        std::string text = "q,A,residual,correctable\n";
        for (const auto &r : reps) {
            for (std::size_t k = 0; k < 4; ++k) {
                text += std::to_string(r.position) + "," + names[k] + "," + io::fmt(r.residuals[k]) + "," +
                        (r.correctable ? "true" : "false") + "\n";
            }
        }
        emit(o, text, out);
        return kOk;
    }
    Json config = {{"basis", o.basis ? Json(*o.basis) : Json("builtin:erasure_code")}, {"dimension", basis.size()}, {"qubits", qubits}};
    Json reports = Json::array();
    for (const auto &r : reps) {
        reports.push_back(io::to_json(r));
    }
    emit(o, dump(io::envelope("erasure-check", o.seed, config, reports)), out);
    return kOk;
}

inline int cmd_verify(const Options &o, std::ostream &out) {
    require_format(o, {"json"});
    static const std::vector<std::string> suites{"labels", "decoder", "reducibility", "channel-view", "accounting"};
    std::vector<std::string> chosen;
    if (o.suite == "all") {
        chosen = suites;
    } else {
        for (const auto &s : io::split(o.suite, ',')) {
            if (std::find(suites.begin(), suites.end(), s) == suites.end()) {
                throw ContractError("unknown --suite '" + s + "'");
            }
            chosen.push_back(s);
        }
    }
    Json reports = Json::array();
    bool ok = true;
    for (const auto &s : chosen) {
        oracles::OracleReport r;
        if (s == "labels") {
            r = oracles::verify_label_oracles();
        } else if (s == "decoder") {
            r = oracles::decoder_agreement(200, o.seed);
        } else if (s == "reducibility") {
            r = oracles::reducibility_agreement(300, o.seed);
        } else if (s == "channel-view") {
            const double p[] = {0.55, 0.2, 0.15, 0.1};
            r = oracles::channel_view_agreement(3, p);
        } else {
            const std::size_t ns[] = {2, 4, 6};
            r = oracles::accounting_agreement(0.01, 0.01, ns, 0.25);
        }
        ok = ok && r.passed();
        reports.push_back(io::to_json(r));
    }
    Json doc = io::envelope("verify", o.seed, {{"suite", chosen}}, reports);
    doc["passed"] = ok;
    emit(o, dump(doc), out);
    return ok ? kOk : kVerifyFailed;
}

inline int cmd_plot(const Options &o, std::ostream &out) {
    const io::CsvTable t = io::parse_csv(io::read_file(o.input));
    if (o.kind == "region") {
        emit(o, svg::region_plot(t), out);
    } else if (o.kind == "failure_curve") {
        emit(o, svg::failure_curve_plot(t), out);
    } else {
        throw ContractError("unknown --kind '" + o.kind + "' (expected region or failure_curve)");
    }
    return kOk;
}

}  // namespace detail

inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    detail::Options o;
    CLI::App app{"Distributed quantum compression laboratory", "dqc"};
    app.set_version_flag("--version", DQC_VERSION);
    app.require_subcommand(1);

    auto add_common = [&o](CLI::App *c) {
        c->add_option("--seed", o.seed, "64-bit seed");
        c->add_option("--out", o.out, "Output path (default stdout)");
        c->add_option("--format", o.format, "json or csv");
    };

    CLI::App *rates = app.add_subcommand("rates", "Rate-region bounds of an ensemble");
    rates->add_option("input", o.input, "Ensemble JSON file or builtin:NAME")->required();
    rates->add_option("--p", o.p, "Probabilities for builtin:bell or builtin:erasure_code, e.g. 1/2,1/4,1/8,1/8");
    rates->add_option("--params", o.params, "Comma-separated builtin parameters");
    rates->add_option("--alpha", o.alpha, "alpha for builtin:hidden_orthogonality");
    rates->add_option("--beta", o.beta, "beta for builtin:hidden_orthogonality");
    rates->add_option("--extent", o.extent, "CSV: cut-off for unbounded boundary rays");
    rates->add_option("--resolution", o.resolution, "CSV: vertices per boundary segment");
    add_common(rates);

    CLI::App *bell = app.add_subcommand("bell-sim", "Monte Carlo failure rate of the Bell-pair hashing protocol");
    bell->add_option("--p", o.p, "Four Bell-label probabilities (rationals allowed)");
    bell->add_option("--n", o.n, "Number of pairs")->delimiter(',');
    bell->add_option("--m", o.m, "Pairs sent; a comma list gives one report per value")->delimiter(',');
    bell->add_option("--delta", o.delta, "Rate slack; m = ceil(n(H + 2 delta) / 2)");
    bell->add_option("--trials", o.trials, "Trials per report");
    bell->add_option("--mode", o.mode, "abstract or compiled");
    bell->add_option("--threads", o.threads, "Worker threads (results do not depend on this)");
    add_common(bell);

    CLI::App *ho = app.add_subcommand("hidden-orthog", "Exact fidelity of the hidden-orthogonality protocol");
    ho->add_option("--alpha", o.alpha, "alpha in (0, 1)");
    ho->add_option("--beta", o.beta, "beta in (0, 1)");
    ho->add_option("--n", o.n, "Block length(s), comma-separated")->delimiter(',');
    ho->add_option("--delta", o.delta, "Typicality slack, or inf for full rate");
    ho->add_option("--method", o.method, "exact or sampled");
    ho->add_option("--trials", o.samples, "Samples for the sampled method");
    add_common(ho);

    CLI::App *er = app.add_subcommand("erasure-check", "Known-position erasure correctability of a code");
    er->add_option("--basis", o.basis, "Code basis JSON {\"vectors\": [[[re, im], ...], ...]}");
    add_common(er);

    CLI::App *ver = app.add_subcommand("verify", "Run the oracle suites");
    ver->add_option("--suite", o.suite, "all or a comma list of labels,decoder,reducibility,channel-view,accounting");
    add_common(ver);

    CLI::App *plot = app.add_subcommand("plot", "Render a CSV as SVG");
    plot->add_option("input", o.input, "CSV from rates --format csv or bell-sim --format csv")->required();
    plot->add_option("--kind", o.kind, "region or failure_curve")->required();
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion &e) {
        out << DQC_VERSION << "\n";
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    }

    try {
        if (rates->parsed()) {
            return detail::cmd_rates(o, out);
        }
        if (bell->parsed()) {
            return detail::cmd_bell_sim(o, out);
        }
        if (ho->parsed()) {
            return detail::cmd_hidden_orthog(o, out);
        }
        if (er->parsed()) {
            return detail::cmd_erasure_check(o, out);
        }
        if (ver->parsed()) {
            return detail::cmd_verify(o, out);
        }
        return detail::cmd_plot(o, out);
    } catch (const CapacityError &e) {
        err << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ContractError &e) {
        err << "contract error: " << e.what() << "\n";
        return kContract;
    } catch (const std::invalid_argument &e) {
        err << "contract error: " << e.what() << "\n";
        return kContract;
    }
}

}  // namespace dqc::cli
