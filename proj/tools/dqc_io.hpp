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

// JSON and CSV ingestion and emission for the command-line tool.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqc/dqc.hpp"

namespace dqc::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Numbers
// ---------------------------------------------------------------------------

inline double parse_number(std::string_view s) {
    const auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) {
            v.remove_prefix(1);
        }
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) {
            v.remove_suffix(1);
        }
        return v;
    };
    s = trim(s);
    if (s == "inf" || s == "+inf" || s == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    const std::string str(s);
    char *end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size() || std::isnan(v)) {
        throw ParseError("invalid number '" + str + "'");
    }
    return v;
}

/// "a/b" or a decimal.
inline double parse_rational(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return parse_number(s);
    }
    const double num = parse_number(s.substr(0, slash));
    const double den = parse_number(s.substr(slash + 1));
    if (den == 0.0 || !std::isfinite(num) || !std::isfinite(den)) {
        throw ParseError("invalid rational '" + std::string(s) + "'");
    }
    return num / den;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

/// Comma-separated rationals; the total must be 1 within 1e-6 and is then normalized.
inline std::vector<double> parse_probabilities(std::string_view s) {
    std::vector<double> p;
    double total = 0.0;
    for (const auto &tok : split(s, ',')) {
        p.push_back(parse_rational(tok));
        total += p.back();
    }
    for (double x : p) {
        if (x < 0.0) {
            throw ContractError("probabilities must be non-negative");
        }
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw ContractError("probabilities sum to " + fmt(total) + ", not 1 within 1e-6");
    }
    for (double &x : p) {
        x /= total;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t line_of(const std::string &text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        line += text[i] == '\n';
    }
    return line;
}

inline Json parse_json(const std::string &text, const std::string &what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(what + ": malformed JSON at line " + std::to_string(line_of(text, e.byte)) + " (byte " +
                         std::to_string(e.byte) + ")");
    }
}

inline const Json &field(const Json &obj, const std::string &key, const std::string &path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(path + ": missing field '" + key + "'");
    }
    return obj.at(key);
}

inline double number_at(const Json &v, const std::string &path) {
    if (!v.is_number()) {
        throw ParseError(path + ": expected a number");
    }
    return v.get<double>();
}

inline std::size_t dim_at(const Json &v, const std::string &path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw ParseError(path + ": expected a positive integer");
    }
    return v.get<std::size_t>();
}

inline ComplexVector vector_at(const Json &v, const std::string &path) {
    if (!v.is_array() || v.empty()) {
        throw ParseError(path + ": expected a non-empty array of [re, im] pairs");
    }
    ComplexVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const Json &c = v[i];
        if (!c.is_array() || c.size() != 2) {
            throw ParseError(p + ": expected [re, im]");
        }
        out(static_cast<Eigen::Index>(i)) = Complex(number_at(c[0], p + "[0]"), number_at(c[1], p + "[1]"));
    }
    return out;
}

}  // namespace detail

/// Schema: {"dA": int, "dB": int, "states": [{"p": real, "vector": [[re, im], ...]}, ...]}.
inline BipartiteEnsemble parse_ensemble(const std::string &text) {
    const Json j = detail::parse_json(text, "ensemble");
    const std::size_t da = detail::dim_at(detail::field(j, "dA", "ensemble"), "dA");
    const std::size_t db = detail::dim_at(detail::field(j, "dB", "ensemble"), "dB");
    const Json &states = detail::field(j, "states", "ensemble");
    if (!states.is_array() || states.empty()) {
        throw ParseError("states: expected a non-empty array");
    }
    std::vector<EnsembleItem> items;
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string path = "states[" + std::to_string(i) + "]";
        const double p = detail::number_at(detail::field(states[i], "p", path), path + ".p");
        ComplexVector v = detail::vector_at(detail::field(states[i], "vector", path), path + ".vector");
        if (static_cast<std::size_t>(v.size()) != da * db) {
            throw DimensionError(path + ".vector: length " + std::to_string(v.size()) + " != dA*dB = " + std::to_string(da * db));
        }
        items.push_back({p, std::move(v)});
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw ContractError("states: probabilities sum to " + fmt(total) + ", not 1 within 1e-6");
    }
    for (auto &item : items) {
        item.p /= total;
    }
    return BipartiteEnsemble(da, db, std::move(items));
}

inline Json complex_json(Complex c) {
    return Json::array({c.real(), c.imag()});
}

inline Json ensemble_json(const BipartiteEnsemble &e) {
    Json states = Json::array();
    for (const auto &item : e.items()) {
        Json v = Json::array();
        for (Eigen::Index k = 0; k < item.state.size(); ++k) {
            v.push_back(complex_json(item.state(k)));
        }
        states.push_back({{"p", item.p}, {"vector", v}});
    }
    return {{"dA", e.d_a()}, {"dB", e.d_b()}, {"states", states}};
}

/// {"vectors": [[[re, im], ...], ...]}
inline std::vector<ComplexVector> parse_basis(const std::string &text) {
    const Json j = detail::parse_json(text, "basis");
    const Json &vs = detail::field(j, "vectors", "basis");
    if (!vs.is_array() || vs.empty()) {
        throw ContractError("basis: expected a non-empty array of vectors");
    }
    std::vector<ComplexVector> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        try {
            out.push_back(detail::vector_at(vs[i], "vectors[" + std::to_string(i) + "]"));
        } catch (const ParseError &e) {
            throw ContractError(std::string("basis: ") + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json optional_json(const std::optional<double> &v) {
    return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const RateBounds &b) {
    Json corners = Json::array();
    for (const auto &c : b.corners) {
        corners.push_back({{"RA", c.ra}, {"RB", c.rb}});
    }
    return {{"family", family_name(b.family)},
            {"ra_lb", optional_json(b.ra_lb)},
            {"rb_lb", optional_json(b.rb_lb)},
            {"sum_lb", optional_json(b.sum_lb)},
            {"corners", corners},
            {"applicability",
             {{"is_product", b.applicability.is_product},
              {"is_irreducible_joint", b.applicability.is_irreducible_joint},
              {"is_bell_form", b.applicability.is_bell_form},
              {"applies", b.applicability.applies},
              {"note", b.applicability.note}}}};
}

inline Json to_json(const HybridRateReport &h) {
    return {{"q", h.q}, {"H_Eprime", h.h_eprime}, {"chi_Eprime", h.chi_eprime}, {"chi_Edoubleprime", h.chi_edoubleprime},
            {"R_A", h.r_a}, {"R_B", h.r_b}};
}

inline Json to_json(const McReport &r) {
    return {{"n", r.n},
            {"m", r.m},
            {"p", r.p},
            {"H", r.H},
            {"delta", r.delta},
            {"trials", r.trials},
            {"failures", r.failures},
            {"ties", r.ties},
            {"capacity_errors", r.capacity_errors},
            {"empirical_failure_rate", r.empirical_failure_rate},
            {"standard_error", r.standard_error()},
            {"bound", r.bound},
            {"mode", mode_name(r.mode)},
            {"seed", r.seed}};
}

inline const std::string &mc_csv_header() {
    static const std::string h = "n,m,H,delta,trials,failures,ties,empirical,bound,mode,seed\n";
    return h;
}

inline std::string mc_csv_row(const McReport &r) {
    std::ostringstream os;
    os << r.n << ',' << r.m << ',' << fmt(r.H) << ',' << fmt(r.delta) << ',' << r.trials << ',' << r.failures << ',' << r.ties
       << ',' << fmt(r.empirical_failure_rate) << ',' << fmt(r.bound) << ',' << mode_name(r.mode) << ',' << r.seed << '\n';
    return os.str();
}

inline Json to_json(const FidelityReport &r) {
    return {{"n", r.n},
            {"average_fidelity", r.average_fidelity},
            {"worst_fidelity", r.worst_fidelity},
            {"worst_sequence", r.worst_sequence},
            {"rate_A", r.rate_a},
            {"rate_B", r.rate_b},
            {"method", method_name(r.method)},
            {"samples", r.samples},
            {"standard_error", r.standard_error}};
}

inline Json to_json(const ErasureReport &r) {
    static const char *names[4] = {"I", "X", "Y", "Z"};
    Json res = Json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        res[names[k]] = r.residuals[k];
    }
    return {{"position", r.position}, {"correctable", r.correctable}, {"residuals", res}};
}

inline Json to_json(const oracles::OracleReport &r) {
    Json failures = Json::array();
    for (const auto &f : r.failures) {
        failures.push_back({{"case", f.name}, {"detail", f.detail}});
    }
    return {{"oracle", r.oracle}, {"cases", r.cases}, {"passed", r.passed()}, {"failures", failures}};
}

/// Top-level report envelope.
inline Json envelope(const std::string &command, std::uint64_t seed, Json config, Json reports) {
    return {{"tool", "dqc"}, {"version", DQC_VERSION}, {"command", command}, {"seed", seed}, {"config", std::move(config)},
            {"reports", std::move(reports)}};
}

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw ParseError("csv: missing column '" + name + "'");
    }
};

inline CsvTable parse_csv(const std::string &text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split(line, ',');
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw ParseError("csv: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) + " fields, expected " +
                             std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace dqc::io
