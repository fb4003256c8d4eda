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

// Brute-force reference computations. None of these share code paths with the
// routines they check beyond basic linear algebra and the label layout.

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dqc/bellhash.hpp"
#include "dqc/ensembles.hpp"
#include "dqc/matcore.hpp"
#include "dqc/protosim.hpp"
#include "dqc/rng.hpp"

namespace dqc::oracles {

struct CaseFailure {
    std::string name;
    std::string detail;
};

struct OracleReport {
    std::string oracle;
    std::size_t cases = 0;
    std::vector<CaseFailure> failures;

    bool passed() const {
        return failures.empty();
    }
};

namespace detail {

inline std::string label_str(BellLabel l) {
    return "(" + std::to_string(l.y1) + "," + std::to_string(l.y2) + ")";
}

/// Bell vector written out from the amplitude table, independently of the library constructor.
inline ComplexVector bell_from_table(int l) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (l) {
        case 0:
            return make_vector({r, 0.0, 0.0, r});
        case 1:
            return make_vector({r, 0.0, 0.0, -r});
        case 2:
            return make_vector({0.0, r, r, 0.0});
        default:
            return make_vector({0.0, r, -r, 0.0});
    }
}

/// Index of the product of Bell labels matching psi up to global phase, or -1.
inline int identify_bell_product(const ComplexVector &psi, std::size_t pairs) {
    const int count = 1 << (2 * pairs);
    for (int code = 0; code < count; ++code) {
        ComplexVector v = bell_from_table((code >> (2 * (pairs - 1))) & 3);
        for (std::size_t k = 1; k < pairs; ++k) {
            v = tensor(v, bell_from_table((code >> (2 * (pairs - 1 - k))) & 3));
        }
        if (std::abs(std::abs(v.dot(psi)) - 1.0) < 1e-12) {
            return code;
        }
    }
    return -1;
}

}  // namespace detail

using BcnotTable = std::function<std::pair<BellLabel, BellLabel>(BellLabel, BellLabel)>;
using HTable = std::function<BellLabel(BellLabel)>;

/// Checks the bilateral CNOT and bilateral Hadamard label tables against
/// explicit 4- and 2-qubit statevectors, and label_to_state against the
/// printed amplitudes.
inline OracleReport verify_label_oracles(const BcnotTable &bcnot = bcnot_labels, const HTable &h = bilateral_h_label) {
    OracleReport rep{"label tables", 0, {}};
    // Qubit order (A_z, B_z, A_y, B_y); pair y controls pair z on both sides.
    for (int zl = 0; zl < 4; ++zl) {
        for (int yl = 0; yl < 4; ++yl) {
            ++rep.cases;
            const ComplexVector in = tensor(detail::bell_from_table(zl), detail::bell_from_table(yl));
            ComplexVector out = ComplexVector::Zero(16);
            for (int idx = 0; idx < 16; ++idx) {
                int a1 = (idx >> 3) & 1, b1 = (idx >> 2) & 1;
                const int a2 = (idx >> 1) & 1, b2 = idx & 1;
                a1 ^= a2;
                b1 ^= b2;
                out((a1 << 3) | (b1 << 2) | (a2 << 1) | b2) += in(idx);
            }
            const int code = detail::identify_bell_product(out, 2);
            const BellLabel z = BellLabel::from_index(zl), y = BellLabel::from_index(yl);
            const auto [tz, ty] = bcnot(z, y);
            const std::string name = "bcnot " + detail::label_str(z) + detail::label_str(y);
            if (code < 0) {
                rep.failures.push_back({name, "statevector output is not a Bell product"});
            } else if (tz.index() != (code >> 2) || ty.index() != (code & 3)) {
                rep.failures.push_back({name, "table gives " + detail::label_str(tz) + detail::label_str(ty) +
                                                  ", statevector gives " + detail::label_str(BellLabel::from_index(code >> 2)) +
                                                  detail::label_str(BellLabel::from_index(code & 3))});
            }
        }
    }
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix hh = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const int sign = ((i & j) & 1) ^ (((i >> 1) & (j >> 1)) & 1);
            hh(i, j) = (sign ? -1.0 : 1.0) * r * r;
        }
    }
    for (int l = 0; l < 4; ++l) {
        ++rep.cases;
        const ComplexVector out = hh * detail::bell_from_table(l);
        const int code = detail::identify_bell_product(out, 1);
        const BellLabel in = BellLabel::from_index(l);
        const BellLabel t = h(in);
        const std::string name = "bilateral_h " + detail::label_str(in);
        if (code < 0 || t.index() != code) {
            rep.failures.push_back({name, "table gives " + detail::label_str(t) + ", statevector gives " +
                                              (code < 0 ? std::string("non-Bell") : detail::label_str(BellLabel::from_index(code)))});
        }
    }
    for (int l = 0; l < 4; ++l) {
        ++rep.cases;
        const ComplexVector v = label_to_state(BellLabel::from_index(l));
        if ((v - detail::bell_from_table(l)).norm() > 1e-15) {
            rep.failures.push_back({"label_to_state " + detail::label_str(BellLabel::from_index(l)), "amplitudes differ"});
        }
        for (int k = 0; k < 4; ++k) {
            const double g = std::abs(v.dot(label_to_state(BellLabel::from_index(k))));
            if (std::abs(g - (k == l ? 1.0 : 0.0)) > 1e-12) {
                rep.failures.push_back({"label_to_state gram", std::to_string(l) + "," + std::to_string(k)});
            }
        }
    }
    return rep;
}

/// Maximum likelihood over all 4^n strings consistent with the observation.
inline DecodeResult exhaustive_ml_decode(const BitVec &obs, const ObservationSystem &sys, std::span<const double> p,
                                         double tie_tol = 1e-9) {
    if (sys.n > 10) {
        throw CapacityError("exhaustive_ml_decode: n > 10");
    }
    DecodeResult r;
    r.candidate = LabelString(sys.n);
    const std::uint64_t count = std::uint64_t{1} << (2 * sys.n);
    for (std::uint64_t v = 0; v < count; ++v) {
        LabelString x(sys.n, BitVec::from_u64(2 * sys.n, v));
        bool match = true;
        for (std::size_t k = 0; k < sys.matrix.rows() && match; ++k) {
            bool bit = false;
            for (std::size_t c = 0; c < sys.matrix.cols(); ++c) {
                bit ^= sys.matrix.get(k, c) && x.bits.get(c);
            }
            match = bit == obs.get(k);
        }
        if (!match) {
            continue;
        }
        ++r.candidates_enumerated;
        double score = 0.0;
        for (std::size_t i = 0; i < sys.n; ++i) {
            const double pi = p[static_cast<std::size_t>(x.label(i).index())];
            score += pi > 0.0 ? std::log2(pi) : -std::numeric_limits<double>::infinity();
        }
        if (score == -std::numeric_limits<double>::infinity()) {
            continue;
        }
        if (score > r.log2_likelihood + tie_tol) {
            r.log2_likelihood = score;
            r.candidate = x;
            r.maximizers = 1;
        } else if (score >= r.log2_likelihood - tie_tol) {
            ++r.maximizers;
        }
    }
    r.status = r.maximizers == 0 ? DecodeStatus::zero_likelihood
                                 : (r.maximizers == 1 ? DecodeStatus::success : DecodeStatus::tie);
    return r;
}

/// Whether some nontrivial bipartition of the set has all cross overlaps below tol.
inline bool brute_force_reducible(std::span<const ComplexVector> vectors, double tol = 1e-9) {
    const std::size_t k = vectors.size();
    if (k < 2) {
        return false;
    }
    if (k > 20) {
        throw CapacityError("brute_force_reducible: more than 20 vectors");
    }
    // Vector 0 is always on the first side; enumerate the rest.
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (k - 1)); ++mask) {
        bool separated = true;
        for (std::size_t i = 0; i < k && separated; ++i) {
            const bool si = i > 0 && ((mask >> (i - 1)) & 1);
            for (std::size_t j = i + 1; j < k && separated; ++j) {
                const bool sj = (mask >> (j - 1)) & 1;
                if (si != sj && std::abs(vectors[i].dot(vectors[j])) > tol) {
                    separated = false;
                }
            }
        }
        if (separated) {
            return true;
        }
    }
    return false;
}

struct AccountingReport {
    double fidelity = 0.0;
    /// 1 - fidelity: weight lost to the atypical branches and to the projections.
    double deficit = 0.0;
    double typical_mass_a = 0.0;
    double typical_mass_b = 0.0;
    std::size_t typical_dim_a = 0;
    std::size_t typical_dim_b = 0;
};

namespace detail {

/// Typical-set bookkeeping for a real symmetric 2x2 state, by explicit sequence enumeration.
struct QubitTypicalSet {
    double lam[2];
    Eigen::Vector2d vec[2];
    std::vector<std::vector<int>> typical;
    std::vector<int> fallback;
    double mass = 0.0;

    QubitTypicalSet(const Eigen::Matrix2d &rho, std::size_t n, double delta) {
        const double a = rho(0, 0), b = rho(0, 1), d = rho(1, 1);
        const double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        lam[0] = mid + rad;
        lam[1] = mid - rad;
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d v = std::abs(b) > 1e-300 ? Eigen::Vector2d(b, lam[k] - a)
                                                     : (std::abs(lam[k] - a) <= std::abs(lam[k] - d) ? Eigen::Vector2d(1, 0)
                                                                                                      : Eigen::Vector2d(0, 1));
            vec[k] = v.normalized();
        }
        if (std::abs(b) <= 1e-300 && lam[0] == lam[1]) {
            vec[0] = {1, 0};
            vec[1] = {0, 1};
        }
        double s = 0.0;
        for (double l : lam) {
            s -= l > 0.0 ? l * std::log2(l) : 0.0;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
            std::vector<int> seq(n);
            double prob = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                seq[k] = static_cast<int>((code >> (n - 1 - k)) & 1);
                prob *= lam[seq[k]];
            }
            bool typ;
            if (std::isinf(delta)) {
                typ = true;
            } else {
                typ = prob > 0.0 && std::abs(-std::log2(prob) / static_cast<double>(n) - s) <= delta + 1e-12;
            }
            if (!typ) {
                continue;
            }
            mass += prob;
            if (prob > best * (1.0 + 1e-12) || best == -std::numeric_limits<double>::infinity()) {
                best = prob;
                fallback = seq;
            }
            typical.push_back(std::move(seq));
        }
        if (typical.empty()) {
            fallback.assign(n, 0);
            typical.push_back(fallback);
            mass = std::pow(lam[0], static_cast<double>(n));
        }
    }

    /// <bra|Pi|ket> for product vectors.
    double projected(const std::vector<Eigen::Vector2d> &bra, const std::vector<Eigen::Vector2d> &ket) const {
        double out = 0.0;
        for (const auto &seq : typical) {
            double t = 1.0;
            for (std::size_t k = 0; k < seq.size() && t != 0.0; ++k) {
                t *= bra[k].dot(vec[seq[k]]) * vec[seq[k]].dot(ket[k]);
            }
            out += t;
        }
        return out;
    }

    double fallback_overlap(const std::vector<Eigen::Vector2d> &bra) const {
        double t = 1.0;
        for (std::size_t k = 0; k < fallback.size(); ++k) {
            t *= bra[k].dot(vec[fallback[k]]);
        }
        return t;
    }
};

}  // namespace detail

/// Exact ensemble fidelity of the hidden-orthogonality protocol at block length n,
/// from the per-copy branch vectors written out by hand. After Bob's |2> map and
/// the decoder projection, copy i contributes (Alice vector, Bob vector, target):
///   i = 1: (|0>, (sqrt(1-b), sqrt(b)), same product)
///   i = 2: ((sqrt(a), sqrt(1-a)), |1>, same product)
///   i = 3: (|1>, sqrt(1-b)|0> or sqrt(b)|0>, |1>|0>)
inline AccountingReport hidden_orthogonality_accounting(double alpha, double beta, std::size_t n, double delta) {
    if (n == 0 || n > 12) {
        throw CapacityError("hidden_orthogonality_accounting: n must lie in 1..12");
    }
    using V = Eigen::Vector2d;
    const V phi[3] = {V(1, 0), V(std::sqrt(alpha), std::sqrt(1 - alpha)), V(0, 1)};
    const V psi1(std::sqrt(1 - beta), std::sqrt(beta));
    Eigen::Matrix2d rho_a = Eigen::Matrix2d::Zero(), rho_b = Eigen::Matrix2d::Zero();
    for (const auto &v : phi) {
        rho_a += v * v.transpose() / 3.0;
    }
    rho_b = (psi1 * psi1.transpose() + V(0, 1) * V(0, 1).transpose() + V(1, 0) * V(1, 0).transpose()) / 3.0;
    const detail::QubitTypicalSet ta(rho_a, n, delta), tb(rho_b, n, delta);

    struct Branch {
        V alpha, beta, ga, gb;
    };
    const std::vector<Branch> branches[3] = {
        {{phi[0], psi1, phi[0], psi1}},
        {{phi[1], V(0, 1), phi[1], V(0, 1)}},
        {{phi[2], V(std::sqrt(1 - beta), 0), V(0, 1), V(1, 0)}, {phi[2], V(std::sqrt(beta), 0), V(0, 1), V(1, 0)}},
    };
    AccountingReport rep;
    const std::uint64_t total = static_cast<std::uint64_t>(std::pow(3.0, static_cast<double>(n)));
    std::vector<V> al(n), be(n), ga(n), gb(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<int> seq(n);
        std::uint64_t rest = idx;
        for (std::size_t k = n; k-- > 0;) {
            seq[k] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        double f = 0.0;
        std::vector<std::size_t> pick(n, 0);
        while (true) {
            for (std::size_t k = 0; k < n; ++k) {
                const Branch &br = branches[seq[k]][pick[k]];
                al[k] = br.alpha;
                be[k] = br.beta;
                ga[k] = br.ga;
                gb[k] = br.gb;
            }
            double na = 1.0, nb = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                na *= al[k].squaredNorm();
                nb *= be[k].squaredNorm();
            }
            const double lost_a = std::max(0.0, na - ta.projected(al, al));
            const double lost_b = std::max(0.0, nb - tb.projected(be, be));
            const double pa = ta.projected(ga, al), pb = tb.projected(gb, be);
            const double fa = ta.fallback_overlap(ga), fb = tb.fallback_overlap(gb);
            f += pa * pa * pb * pb + lost_b * pa * pa * fb * fb + lost_a * fa * fa * pb * pb + lost_a * lost_b * fa * fa * fb * fb;
            std::size_t k = n;
            while (k-- > 0) {
                if (++pick[k] < branches[seq[k]].size()) {
                    break;
                }
                pick[k] = 0;
            }
            if (k == static_cast<std::size_t>(-1)) {
                break;
            }
        }
        rep.fidelity += std::pow(1.0 / 3.0, static_cast<double>(n)) * f;
    }
    rep.deficit = 1.0 - rep.fidelity;
    rep.typical_mass_a = ta.mass;
    rep.typical_mass_b = tb.mass;
    rep.typical_dim_a = ta.typical.size();
    rep.typical_dim_b = tb.typical.size();
    return rep;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Coset decoder against exhaustive search on random instances with n in 3..6.
inline OracleReport decoder_agreement(std::size_t instances, std::uint64_t seed) {
    OracleReport rep{"decoder vs exhaustive", 0, {}};
    Rng rng(seed);
    for (std::size_t t = 0; t < instances; ++t) {
        const std::size_t n = 3 + t % 4;
        const std::size_t m = rng.below(n + 1);
        const MaskMode mode = t % 2 ? MaskMode::compiled : MaskMode::abstract;
        std::array<double, 4> p{};
        double total = 0.0;
        for (auto &x : p) {
            x = rng.uniform() < 0.15 ? 0.0 : rng.uniform();
            total += x;
        }
        if (total == 0.0) {
            p = {1.0, 0.0, 0.0, 0.0};
            total = 1.0;
        }
        for (auto &x : p) {
            x /= total;
        }
        const ObservationSystem sys = compile_protocol(draw_schedule(n, m, mode, rng));
        const LabelString x = sample_labels(p, n, rng);
        const BitVec obs = observe(x, sys);
        const DecodeResult fast = decode(obs, sys, p);
        const DecodeResult slow = exhaustive_ml_decode(obs, sys, p);
        ++rep.cases;
        const bool same_status = fast.status == slow.status && fast.maximizers == slow.maximizers;
        const bool same_value = slow.status == DecodeStatus::zero_likelihood ||
                                std::abs(fast.log2_likelihood - slow.log2_likelihood) <= 1e-9;
        const bool same_candidate = slow.status != DecodeStatus::success || fast.candidate == slow.candidate;
        if (!(same_status && same_value && same_candidate)) {
            rep.failures.push_back({"instance " + std::to_string(t),
                                    std::string("decoder ") + status_name(fast.status) + " vs exhaustive " + status_name(slow.status)});
        }
    }
    return rep;
}

/// Union-find reducibility against the bipartition search on sparse random vector sets.
inline OracleReport reducibility_agreement(std::size_t trials, std::uint64_t seed) {
    OracleReport rep{"reducibility vs brute force", 0, {}};
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t k = 1 + rng.below(6);
        const std::size_t d = 2 + rng.below(3);
        std::vector<ComplexVector> vs;
        for (std::size_t i = 0; i < k; ++i) {
            ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
            for (std::size_t c = 0; c < d; ++c) {
                if (rng.uniform() < 0.4) {
                    v(static_cast<Eigen::Index>(c)) = Complex(rng.normal(), rng.normal());
                }
            }
            if (v.norm() == 0.0) {
                v(static_cast<Eigen::Index>(rng.below(d))) = 1.0;
            }
            vs.push_back(v / v.norm());
        }
        ++rep.cases;
        const bool fast = is_reducible(vs).reducible, slow = brute_force_reducible(vs);
        if (fast != slow) {
            rep.failures.push_back({"trial " + std::to_string(t), fast ? "reported reducible" : "reported irreducible"});
        }
    }
    return rep;
}

/// Every compiled schedule with n <= max_n: qubit-level channel fidelity
/// against the label-level success probability (first-maximizer tie rule).
inline OracleReport channel_view_agreement(std::size_t max_n, std::span<const double> p, double tol = 1e-9) {
    OracleReport rep{"channel view vs label simulation", 0, {}};
    const BipartiteEnsemble e = builtin::bell(p);
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            const std::size_t width = 2 * (n - m);
            const std::size_t bits = 2 * m * width;
            if (bits > 20) {
                throw CapacityError("channel_view_agreement: too many schedules at n = " + std::to_string(n));
            }
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
                MaskSchedule s{n, m, {}, MaskMode::compiled, 0};
                for (std::size_t k = 0; k < 2 * m; ++k) {
                    s.masks.push_back(BitVec::from_u64(width, width ? (v >> (k * width)) & ((std::uint64_t{1} << width) - 1) : 0));
                }
                if (!compiled_constraints_hold(s)) {
                    continue;
                }
                ++rep.cases;
                const double f = scheme_fidelity(e, bell_protocol_channel_view(s, p)).average_fidelity;
                const double q = exact_success_probability(compile_protocol(s), p, TiePolicy::canonical);
                if (std::abs(f - q) > tol) {
                    rep.failures.push_back({"n=" + std::to_string(n) + " m=" + std::to_string(m) + " masks=" + std::to_string(v),
                                            "fidelity " + std::to_string(f) + " vs success " + std::to_string(q)});
                }
            }
        }
    }
    return rep;
}

/// Hidden-orthogonality scheme fidelity against the hand-written accounting.
inline OracleReport accounting_agreement(double alpha, double beta, std::span<const std::size_t> ns, double delta, double tol = 1e-9) {
    OracleReport rep{"hidden orthogonality accounting", 0, {}};
    const BipartiteEnsemble e = builtin::hidden_orthogonality(alpha, beta);
    for (std::size_t n : ns) {
        ++rep.cases;
        const double f = hidden_orthogonality_scheme(alpha, beta, n, delta).fidelity(e).average_fidelity;
        const AccountingReport acc = hidden_orthogonality_accounting(alpha, beta, n, delta);
        if (std::abs(f - (1.0 - acc.deficit)) > tol) {
            rep.failures.push_back({"n=" + std::to_string(n), "scheme " + std::to_string(f) + " vs accounting " +
                                                                   std::to_string(1.0 - acc.deficit)});
        }
    }
    return rep;
}

}  // namespace dqc::oracles
