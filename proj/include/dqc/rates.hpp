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

// Rate-region arithmetic for distributed compression of a bipartite ensemble.
// Every quantity is in qubits per source signal and is computed from the
// entropies of the ensemble's average states.

#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dqc/ensembles.hpp"
#include "dqc/matcore.hpp"

namespace dqc {

enum class RateFamily { slepian_wolf, irreducible, bell, caw_corner, hybrid };

inline const char *family_name(RateFamily f) {
    switch (f) {
        case RateFamily::slepian_wolf:
            return "slepian_wolf";
        case RateFamily::irreducible:
            return "irreducible";
        case RateFamily::bell:
            return "bell";
        case RateFamily::caw_corner:
            return "caw_corner";
        case RateFamily::hybrid:
            return "hybrid";
    }
    return "unknown";
}

struct RatePoint {
    double ra;
    double rb;
};

struct Applicability {
    bool is_product = false;
    bool is_irreducible_joint = false;
    bool is_bell_form = false;
    /// Whether the hypotheses of the family's formula hold for this ensemble.
    bool applies = false;
    std::string note;
};

struct RateBounds {
    RateFamily family;
    std::optional<double> ra_lb;
    std::optional<double> rb_lb;
    std::optional<double> sum_lb;
    /// Distinguished corner points of the region, when the family has them.
    std::vector<RatePoint> corners;
    Applicability applicability;
};

/// S(rho^A), S(rho^B), S(rho^AB) of the average state.
struct EntropyTriple {
    double s_a;
    double s_b;
    double s_ab;
};

inline EntropyTriple average_entropies(const BipartiteEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    const DensityOperator rho = average_state(e, tol);
    const std::size_t dims[2] = {e.d_a(), e.d_b()};
    const std::size_t keep_a[1] = {0};
    const std::size_t keep_b[1] = {1};
    return {vn_entropy(partial_trace(rho, dims, keep_a, tol), tol), vn_entropy(partial_trace(rho, dims, keep_b, tol), tol),
            vn_entropy(rho, tol)};
}

/// Probabilities (p1..p4) if every state is a Bell vector up to phase.
inline std::optional<std::array<double, 4>> detect_bell_form(const BipartiteEnsemble &e, double tol = 1e-9) {
    if (e.d_a() != 2 || e.d_b() != 2) {
        return std::nullopt;
    }
    std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
    for (const auto &item : e.items()) {
        bool matched = false;
        for (int l = 0; l < 4; ++l) {
            if (std::abs(std::abs(builtin::bell_vector(l >> 1, l & 1).dot(item.state)) - 1.0) <= tol) {
                p[static_cast<std::size_t>(l)] += item.p;
                matched = true;
                break;
            }
        }
        if (!matched) {
            return std::nullopt;
        }
    }
    return p;
}

inline Applicability applicability_flags(const BipartiteEnsemble &e) {
    Applicability a;
    a.is_product = is_product_ensemble(e);
    const auto joint = joint_vectors(e);
    a.is_irreducible_joint = !is_reducible(joint).reducible;
    a.is_bell_form = detect_bell_form(e).has_value();
    return a;
}

namespace detail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline double clamp0(double x) {
    return x < 0.0 ? 0.0 : x;
}

}  // namespace detail

/// R_A + R_B >= S(AB), R_A >= S(A|B), R_B >= S(B|A); conditional entropies clamped at 0.
inline RateBounds slepian_wolf_bounds(const BipartiteEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    const EntropyTriple s = average_entropies(e, tol);
    RateBounds r{RateFamily::slepian_wolf, {}, {}, {}, {}, applicability_flags(e)};
    const double a_given_b = s.s_ab - s.s_b;
    const double b_given_a = s.s_ab - s.s_a;
    r.sum_lb = detail::clamp0(s.s_ab);
    r.ra_lb = detail::clamp0(a_given_b);
    r.rb_lb = detail::clamp0(b_given_a);
    r.corners = {{detail::clamp0(s.s_a), *r.rb_lb}, {*r.ra_lb, detail::clamp0(s.s_b)}};
    r.applicability.applies = true;
    std::string note = "valid for every source";
    if (a_given_b < 0.0 || b_given_a < 0.0) {
        note += "; raw S(A|B)=" + detail::fmt(a_given_b) + " S(B|A)=" + detail::fmt(b_given_a) + " clamped at 0";
    }
    r.applicability.note = note;
    return r;
}

/// R_A + R_B >= (S(E_A) + S(E_B) + S(E_AB)) / 2, reported for every ensemble and
/// flagged when the ensemble is not an irreducible set of product states.
inline RateBounds irreducible_bound(const BipartiteEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    const EntropyTriple s = average_entropies(e, tol);
    RateBounds r{RateFamily::irreducible, {}, {}, {}, {}, applicability_flags(e)};
    r.sum_lb = detail::clamp0(0.5 * (s.s_a + s.s_b + s.s_ab));
    auto &a = r.applicability;
    a.applies = a.is_product && a.is_irreducible_joint;
    if (a.applies) {
        a.note = "irreducible product-state ensemble";
    } else if (!a.is_product) {
        a.note = "not applicable: states are not all product states";
    } else {
        a.note = "not applicable: joint ensemble is reducible";
    }
    return r;
}

/// R_A >= H/2 and R_B >= H/2 for a mixture of Bell pairs.
inline RateBounds bell_region(std::span<const double> p, const Tolerances &tol = kDefaultTolerances) {
    if (p.size() != 4) {
        throw ContractError("bell_region: expected four probabilities");
    }
    const double h = shannon_entropy(p, tol);
    RateBounds r{RateFamily::bell, h / 2.0, h / 2.0, h, {{h / 2.0, h / 2.0}}, {}};
    r.applicability.is_bell_form = true;
    r.applicability.applies = true;
    r.applicability.note = "H = " + detail::fmt(h);
    return r;
}

/// Corner points (S(E_A), (S(E_B)+S(E_AB)-S(E_A))/2) and its mirror image, with
/// the per-party lower bounds R_B >= (S(E_B)+S(E_AB)-S(E_A))/2 and R_A analogously.
inline RateBounds caw_corner(const BipartiteEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    const EntropyTriple s = average_entropies(e, tol);
    RateBounds r{RateFamily::caw_corner, {}, {}, {}, {}, applicability_flags(e)};
    const double rb_low = 0.5 * (s.s_b + s.s_ab - s.s_a);
    const double ra_low = 0.5 * (s.s_a + s.s_ab - s.s_b);
    r.ra_lb = detail::clamp0(ra_low);
    r.rb_lb = detail::clamp0(rb_low);
    r.sum_lb = detail::clamp0(0.5 * (s.s_a + s.s_b + s.s_ab));
    r.corners = {{detail::clamp0(s.s_a), *r.rb_lb}, {*r.ra_lb, detail::clamp0(s.s_b)}};
    r.applicability.applies = true;
    r.applicability.note = "density-operator source model (entanglement fidelity)";
    if (ra_low < 0.0 || rb_low < 0.0) {
        r.applicability.note += "; raw per-party bounds " + detail::fmt(ra_low) + ", " + detail::fmt(rb_low) + " clamped at 0";
    }
    return r;
}

// ---------------------------------------------------------------------------
// Hybrid measure-and-piggyback strategy for two orthogonal two-qubit states
// ---------------------------------------------------------------------------

struct HybridRateReport {
    std::array<double, 2> q;
    /// Bob's conditional state given Alice's outcome j; zero matrix when q_j = 0.
    std::array<ComplexMatrix, 2> omega_b;
    double h_eprime;
    double chi_eprime;
    double chi_edoubleprime;
    double r_a;
    double r_b;
};

inline HybridRateReport hybrid_rate(double p0, double p1, double alpha0, double beta0, double alpha1, double beta1,
                                    const Tolerances &tol = kDefaultTolerances) {
    const BipartiteEnsemble e = builtin::walgate_pair(p0, p1, alpha0, beta0, alpha1, beta1);
    const double p[2] = {p0, p1};
    const double a2[2] = {alpha0 * alpha0, alpha1 * alpha1};
    const double b2[2] = {beta0 * beta0, beta1 * beta1};

    HybridRateReport r{};
    r.q = {p[0] * a2[0] + p[1] * a2[1], p[0] * b2[0] + p[1] * b2[1]};
    // Outcome 0 leaves Bob in |i>, outcome 1 in |not i>.
    for (int j = 0; j < 2; ++j) {
        ComplexMatrix w = ComplexMatrix::Zero(2, 2);
        for (int i = 0; i < 2; ++i) {
            const double weight = p[i] * (j == 0 ? a2[i] : b2[i]);
            const int bob = j == 0 ? i : 1 - i;
            w(bob, bob) += weight;
        }
        if (r.q[static_cast<std::size_t>(j)] > 0.0) {
            w /= r.q[static_cast<std::size_t>(j)];
        }
        r.omega_b[static_cast<std::size_t>(j)] = w;
    }
    r.h_eprime = shannon_entropy(r.q, tol);
    std::vector<WeightedState> eprime;
    for (std::size_t j = 0; j < 2; ++j) {
        if (r.q[j] > 0.0) {
            eprime.push_back({r.q[j], DensityOperator(r.omega_b[j], tol)});
        }
    }
    r.chi_eprime = holevo_chi(eprime, tol);
    const EntropyTriple s = average_entropies(e, tol);
    r.chi_edoubleprime = 1.0 + s.s_b - s.s_ab;
    const double numerator = r.h_eprime - r.chi_eprime;
    const double denominator = numerator + r.chi_edoubleprime;
    if (std::abs(denominator) < tol.eig) {
        throw DegenerateRateError("hybrid_rate: H(E') - chi(E') + chi(E'') vanishes; rate undefined");
    }
    r.r_a = numerator / denominator;
    r.r_b = s.s_b;
    return r;
}

inline RateBounds to_rate_bounds(const HybridRateReport &h) {
    RateBounds r{RateFamily::hybrid, h.r_a, h.r_b, h.r_a + h.r_b, {{h.r_a, h.r_b}}, {}};
    r.applicability.applies = true;
    r.applicability.note = "achievable point of the measure-and-piggyback strategy";
    return r;
}

// ---------------------------------------------------------------------------
// Region export
// ---------------------------------------------------------------------------

struct RegionVertex {
    RateFamily family;
    std::size_t vertex_index;
    double ra;
    double rb;
};

struct RegionExportOptions {
    /// Coordinate at which unbounded boundary rays are cut off; <= 0 selects max(sum_lb) + 1.
    double extent = 0.0;
    /// Vertices per boundary segment (>= 1); extra points are interpolated.
    std::size_t resolution = 1;
};

/// Boundary polylines of each family's region, in input order.
inline std::vector<RegionVertex> region_export(std::span<const RateBounds> bounds, const RegionExportOptions &opt = {}) {
    std::vector<RegionVertex> out;
    if (bounds.empty()) {
        return out;
    }
    double extent = opt.extent;
    if (extent <= 0.0) {
        for (const auto &b : bounds) {
            extent = std::max(extent, b.sum_lb.value_or(0.0));
            extent = std::max(extent, b.ra_lb.value_or(0.0));
            extent = std::max(extent, b.rb_lb.value_or(0.0));
        }
        extent += 1.0;
    }
    const std::size_t res = std::max<std::size_t>(1, opt.resolution);
    for (const auto &b : bounds) {
        for (const auto *v : {&b.ra_lb, &b.rb_lb, &b.sum_lb}) {
            if (v->has_value() && !std::isfinite(**v)) {
                throw ContractError("region_export: non-finite bound");
            }
        }
        std::vector<RatePoint> poly;
        const double ra = b.ra_lb.value_or(0.0);
        const double rb = b.rb_lb.value_or(0.0);
        if (b.sum_lb.has_value() && !b.ra_lb.has_value() && !b.rb_lb.has_value()) {
            const double s = *b.sum_lb;
            poly = {{0.0, s}, {s, 0.0}};
        } else if (b.sum_lb.has_value() && *b.sum_lb > ra + rb) {
            const double s = *b.sum_lb;
            poly = {{ra, extent}, {ra, s - ra}, {s - rb, rb}, {extent, rb}};
        } else {
            poly = {{ra, extent}, {ra, rb}, {extent, rb}};
        }
        std::size_t idx = 0;
        for (std::size_t seg = 0; seg + 1 < poly.size(); ++seg) {
            for (std::size_t k = 0; k < res; ++k) {
                const double t = static_cast<double>(k) / static_cast<double>(res);
                out.push_back({b.family, idx++, poly[seg].ra + t * (poly[seg + 1].ra - poly[seg].ra),
                               poly[seg].rb + t * (poly[seg + 1].rb - poly[seg].rb)});
            }
        }
        out.push_back({b.family, idx, poly.back().ra, poly.back().rb});
    }
    return out;
}

/// CSV with header `family,vertex_index,RA,RB`, LF endings, 9 significant digits.
inline std::string region_csv(std::span<const RegionVertex> vertices) {
    std::ostringstream os;
    os << "family,vertex_index,RA,RB\n";
    for (const auto &v : vertices) {
        os << family_name(v.family) << ',' << v.vertex_index << ',' << detail::fmt(v.ra) << ',' << detail::fmt(v.rb) << '\n';
    }
    return os.str();
}

}  // namespace dqc
