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

// Static SVG 1.1 plots of rate regions and Monte Carlo failure curves.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dqc_io.hpp"

namespace dqc::svg {

namespace detail {

constexpr double kWidth = 640, kHeight = 480, kLeft = 70, kRight = 160, kTop = 30, kBottom = 60;

inline const char *color(std::size_t i) {
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return palette[i % 7];
}

struct Frame {
    double x0, x1, y0, y1;
    bool log_y = false;

    double px(double x) const {
        return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        const double lo = log_y ? std::log10(y0) : y0, hi = log_y ? std::log10(y1) : y1;
        return kHeight - kBottom - (v - lo) / (hi - lo) * (kHeight - kTop - kBottom);
    }
};

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string header() {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

inline std::string axes(const Frame &f, const std::string &xlabel, const std::string &ylabel) {
    std::ostringstream os;
    const double bx = kLeft, by = kHeight - kBottom, ex = kWidth - kRight, ey = kTop;
    os << "<g stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << ex << "\" y2=\"" << by << "\"/>\n"
       << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << ey << "\"/>\n"
       << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 5.0;
        os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">" << io::fmt(std::round(x * 100) / 100)
           << "</text>\n";
    }
    if (f.log_y) {
        for (int e = static_cast<int>(std::ceil(std::log10(f.y0) - 1e-9)); e <= static_cast<int>(std::floor(std::log10(f.y1) + 1e-9)); ++e) {
            os << "<text x=\"" << bx - 6 << "\" y=\"" << num(f.py(std::pow(10.0, e)) + 4) << "\" text-anchor=\"end\">1e" << e
               << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double y = f.y0 + (f.y1 - f.y0) * i / 5.0;
            os << "<text x=\"" << bx - 6 << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << io::fmt(std::round(y * 100) / 100)
               << "</text>\n";
        }
    }
    os << "<text x=\"" << (bx + ex) / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
       << "</text>\n"
       << "<text x=\"18\" y=\"" << (by + ey) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (by + ey) / 2 << ")\">" << ylabel << "</text>\n</g>\n";
    return os.str();
}

inline std::string legend(const std::vector<std::string> &names) {
    std::ostringstream os;
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = kTop + 10 + 18.0 * static_cast<double>(i);
        os << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << y << "\" x2=\"" << kWidth - kRight + 40 << "\" y2=\"" << y
           << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << y + 4 << "\">" << names[i] << "</text>\n";
    }
    os << "</g>\n";
    return os.str();
}

inline std::string polyline(const Frame &f, const std::vector<std::pair<double, double>> &pts, std::size_t ci, bool dashed) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color(ci) << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
       << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        os << (i ? " " : "") << num(f.px(pts[i].first)) << ',' << num(f.py(pts[i].second));
    }
    os << "\"/>\n";
    return os.str();
}

}  // namespace detail

/// Input: rates region CSV (family,vertex_index,RA,RB).
inline std::string region_plot(const io::CsvTable &t) {
    if (t.rows.empty()) {
        throw ContractError("plot: empty CSV, nothing to plot");
    }
    const std::size_t cf = t.column("family"), ci = t.column("vertex_index"), ca = t.column("RA"), cb = t.column("RB");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<std::size_t, std::pair<double, double>>>> series;
    double hi = 0.0;
    for (const auto &r : t.rows) {
        const double ra = io::parse_number(r[ca]), rb = io::parse_number(r[cb]);
        const auto idx = static_cast<std::size_t>(io::parse_number(r[ci]));
        if (!series.count(r[cf])) {
            order.push_back(r[cf]);
        }
        series[r[cf]].push_back({idx, {ra, rb}});
        hi = std::max({hi, ra, rb});
    }
    const detail::Frame f{0.0, hi > 0 ? hi : 1.0, 0.0, hi > 0 ? hi : 1.0, false};
    std::string out = detail::header() + detail::axes(f, "R_A (qubits/signal)", "R_B (qubits/signal)");
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto pts = series[order[i]];
        std::stable_sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
        std::vector<std::pair<double, double>> xy;
        for (const auto &p : pts) {
            xy.push_back(p.second);
        }
        out += detail::polyline(f, xy, i, false);
    }
    out += detail::legend(order) + "</svg>\n";
    return out;
}

/// Input: bell-sim CSV (n,m,H,delta,trials,failures,ties,empirical,bound,mode,seed).
/// Zero empirical rates are drawn at the bottom of the axis.
inline std::string failure_curve_plot(const io::CsvTable &t) {
    if (t.rows.empty()) {
        throw ContractError("plot: empty CSV, nothing to plot");
    }
    const std::size_t cm = t.column("m"), ce = t.column("empirical"), cbnd = t.column("bound"), cmode = t.column("mode"),
                      ctr = t.column("trials");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    std::map<double, double> bound;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ymin = 1.0;
    for (const auto &r : t.rows) {
        const double m = io::parse_number(r[cm]), e = io::parse_number(r[ce]), b = io::parse_number(r[cbnd]);
        const double trials = io::parse_number(r[ctr]);
        const std::string key = "empirical " + r[cmode];
        if (!series.count(key)) {
            order.push_back(key);
        }
        series[key].push_back({m, e});
        bound[m] = b;
        xlo = std::min(xlo, m);
        xhi = std::max(xhi, m);
        if (e > 0) {
            ymin = std::min(ymin, e);
        }
        if (b > 0) {
            ymin = std::min(ymin, b);
        }
        if (trials > 0) {
            ymin = std::min(ymin, 0.5 / trials);
        }
    }
    if (xhi == xlo) {
        xlo -= 1;
        xhi += 1;
    }
    const double floor_y = std::pow(10.0, std::floor(std::log10(ymin)));
    double ymax = 1.0;
    for (const auto &[m, b] : bound) {
        ymax = std::max(ymax, b);
    }
    ymax = std::pow(10.0, std::ceil(std::log10(ymax)));
    const detail::Frame f{xlo, xhi, floor_y, ymax, true};
    std::string out = detail::header() + detail::axes(f, "m (pairs sent)", "failure probability");
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto pts = series[order[i]];
        std::stable_sort(pts.begin(), pts.end());
        for (auto &p : pts) {
            p.second = std::max(p.second, floor_y);
        }
        out += detail::polyline(f, pts, i, false);
    }
    std::vector<std::pair<double, double>> bpts;
    for (const auto &[m, b] : bound) {
        bpts.push_back({m, std::clamp(b, floor_y, ymax)});
    }
    out += detail::polyline(f, bpts, order.size(), true);
    order.push_back("bound 2^(n(H+d)-2m)");
    out += detail::legend(order) + "</svg>\n";
    return out;
}

}  // namespace dqc::svg
