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

// Bell-pair hashing compression: label algebra, mask-round compilation,
// GF(2) observation systems, coset maximum-likelihood decoding and Monte Carlo.
//
// Layout conventions. A string of n Bell pairs is a 2n-bit vector with bit 2i
// the amplitude bit y1 of pair i and bit 2i+1 its phase bit y2. Pairs 0..m-1 are
// sent to the receiver ("channel" pairs, C); pairs m..n-1 are kept back (W).
// Round k = 2j + t targets bit t of channel pair j, so observation row k
// corresponds to label bit k. W bit position w addresses label bit 2m + w.

#pragma once

#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dqc/bits.hpp"
#include "dqc/ensembles.hpp"
#include "dqc/matcore.hpp"
#include "dqc/rng.hpp"

namespace dqc {

struct BellLabel {
    std::uint8_t y1 = 0;
    std::uint8_t y2 = 0;

    /// 2*y1 + y2, which is also the order phi+, phi-, psi+, psi-.
    int index() const {
        return 2 * y1 + y2;
    }
    static BellLabel from_index(int l) {
        return {static_cast<std::uint8_t>((l >> 1) & 1), static_cast<std::uint8_t>(l & 1)};
    }
    bool operator==(const BellLabel &) const = default;
};

/// Label action of a bilateral CNOT with control pair y and target pair z.
inline std::pair<BellLabel, BellLabel> bcnot_labels(BellLabel z, BellLabel y) {
    return {{static_cast<std::uint8_t>(z.y1 ^ y.y1), z.y2}, {y.y1, static_cast<std::uint8_t>(y.y2 ^ z.y2)}};
}

/// Label action of a Hadamard applied by both parties.
inline BellLabel bilateral_h_label(BellLabel y) {
    return {y.y2, y.y1};
}

inline ComplexVector label_to_state(BellLabel l) {
    return builtin::bell_vector(l.y1, l.y2);
}

/// n Bell labels packed as 2n bits.
struct LabelString {
    std::size_t n = 0;
    BitVec bits;

    LabelString() = default;
    explicit LabelString(std::size_t pairs) : n(pairs), bits(2 * pairs) {
    }
    LabelString(std::size_t pairs, BitVec b) : n(pairs), bits(std::move(b)) {
        if (bits.size() != 2 * n) {
            throw DimensionError("LabelString: expected " + std::to_string(2 * n) + " bits");
        }
    }

    BellLabel label(std::size_t i) const {
        return {static_cast<std::uint8_t>(bits.get(2 * i)), static_cast<std::uint8_t>(bits.get(2 * i + 1))};
    }
    void set_label(std::size_t i, BellLabel l) {
        bits.set(2 * i, l.y1);
        bits.set(2 * i + 1, l.y2);
    }

    bool operator==(const LabelString &) const = default;
};

/// Probability of the whole string under the i.i.d. label distribution p.
inline double string_probability(const LabelString &x, std::span<const double> p) {
    double prob = 1.0;
    for (std::size_t i = 0; i < x.n; ++i) {
        prob *= p[static_cast<std::size_t>(x.label(i).index())];
    }
    return prob;
}

inline LabelString sample_labels(std::span<const double> p, std::size_t n, Rng &rng) {
    LabelString x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.set_label(i, BellLabel::from_index(static_cast<int>(rng.categorical(p))));
    }
    return x;
}

inline std::array<double, 4> bell_probabilities(std::span<const double> p) {
    if (p.size() != 4) {
        throw ContractError("expected four Bell-label probabilities");
    }
    builtin::check_probabilities(p, "bell probabilities");
    return {p[0], p[1], p[2], p[3]};
}

// ---------------------------------------------------------------------------
// Schedules and compilation
// ---------------------------------------------------------------------------

enum class MaskMode { abstract, compiled };

inline const char *mode_name(MaskMode m) {
    return m == MaskMode::abstract ? "abstract" : "compiled";
}

inline MaskMode parse_mode(std::string_view s) {
    if (s == "abstract") {
        return MaskMode::abstract;
    }
    if (s == "compiled") {
        return MaskMode::compiled;
    }
    throw ParseError("unknown mode '" + std::string(s) + "' (expected abstract or compiled)");
}

struct MaskSchedule {
    std::size_t n = 0;
    std::size_t m = 0;
    /// 2m masks over the 2(n-m) W positions; masks[k] is used in round k.
    std::vector<BitVec> masks;
    MaskMode mode = MaskMode::abstract;
    std::uint64_t seed = 0;
};

namespace detail {

inline BitVec swap_pair_bits(const BitVec &s) {
    BitVec out(s.size());
    for (std::size_t w = 0; w + 1 < s.size(); w += 2) {
        out.set(w, s.get(w + 1));
        out.set(w + 1, s.get(w));
    }
    return out;
}

inline std::size_t both_set_pairs(const BitVec &s) {
    std::size_t c = 0;
    for (std::size_t w = 0; w + 1 < s.size(); w += 2) {
        c += s.get(w) && s.get(w + 1);
    }
    return c;
}

inline BitVec random_mask(std::size_t width, Rng &rng) {
    BitVec s(width);
    for (std::size_t k = 0; k < s.num_words(); ++k) {
        s.data()[k] = rng.next_u64();
    }
    const std::size_t tail = width & 63;
    if (tail != 0) {
        s.data()[s.num_words() - 1] &= (std::uint64_t{1} << tail) - 1;
    }
    return s;
}

}  // namespace detail

/// Whether schedule masks satisfy the compiled-mode resampling constraints:
/// an even number of W pairs with both bits set in each amplitude-round mask,
/// and s(2j+1) . swap(s(2j)) = 0 for each channel pair j.
inline bool compiled_constraints_hold(const MaskSchedule &s) {
    for (std::size_t j = 0; j < s.m; ++j) {
        const BitVec &a = s.masks[2 * j];
        const BitVec &b = s.masks[2 * j + 1];
        if (detail::both_set_pairs(a) % 2 != 0 || b.dot(detail::swap_pair_bits(a))) {
            return false;
        }
    }
    return true;
}

inline void validate_schedule(const MaskSchedule &s) {
    if (s.m > s.n) {
        throw ContractError("schedule: m = " + std::to_string(s.m) + " exceeds n = " + std::to_string(s.n));
    }
    if (s.masks.size() != 2 * s.m) {
        throw ContractError("schedule: expected " + std::to_string(2 * s.m) + " masks, got " + std::to_string(s.masks.size()));
    }
    for (const auto &mask : s.masks) {
        if (mask.size() != 2 * (s.n - s.m)) {
            throw ContractError("schedule: mask width must be " + std::to_string(2 * (s.n - s.m)));
        }
    }
    if (s.mode == MaskMode::compiled && !compiled_constraints_hold(s)) {
        throw ContractError("schedule: masks violate the compiled-mode resampling constraints");
    }
}

/// Uniform masks; in compiled mode each mask is redrawn until the constraints hold.
inline MaskSchedule draw_schedule(std::size_t n, std::size_t m, MaskMode mode, Rng &rng, std::uint64_t seed_tag = 0) {
    if (m > n) {
        throw ContractError("draw_schedule: m exceeds n");
    }
    MaskSchedule s{n, m, {}, mode, seed_tag};
    const std::size_t width = 2 * (n - m);
    s.masks.reserve(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        BitVec a = detail::random_mask(width, rng);
        if (mode == MaskMode::compiled) {
            while (detail::both_set_pairs(a) % 2 != 0) {
                a = detail::random_mask(width, rng);
            }
        }
        BitVec b = detail::random_mask(width, rng);
        if (mode == MaskMode::compiled) {
            const BitVec back = detail::swap_pair_bits(a);
            while (b.dot(back)) {
                b = detail::random_mask(width, rng);
            }
        }
        s.masks.push_back(std::move(a));
        s.masks.push_back(std::move(b));
    }
    return s;
}

struct Gate {
    enum Kind { bcnot, hadamard } kind;
    /// bcnot: target pair; hadamard: the pair.
    std::size_t target;
    /// bcnot: control pair; unused for hadamard.
    std::size_t control;
};

/// Bilateral gate sequence realizing a compiled schedule.
inline std::vector<Gate> gate_sequence(const MaskSchedule &s) {
    validate_schedule(s);
    std::vector<Gate> gates;
    for (std::size_t k = 0; k < 2 * s.m; ++k) {
        const std::size_t j = k / 2;
        const bool phase_round = (k & 1) != 0;
        const BitVec &mask = s.masks[k];
        for (std::size_t w = 0; w < mask.size(); ++w) {
            if (!mask.get(w)) {
                continue;
            }
            const std::size_t i = s.m + w / 2;
            const bool reads_phase = (w & 1) != 0;
            const bool cross = reads_phase != phase_round;
            if (cross) {
                gates.push_back({Gate::hadamard, i, 0});
            }
            if (phase_round) {
                gates.push_back({Gate::bcnot, i, j});
            } else {
                gates.push_back({Gate::bcnot, j, i});
            }
            if (cross) {
                gates.push_back({Gate::hadamard, i, 0});
            }
        }
    }
    return gates;
}

/// Apply the gates to concrete labels.
inline LabelString apply_gates(std::span<const Gate> gates, LabelString x) {
    for (const Gate &g : gates) {
        if (g.kind == Gate::hadamard) {
            x.set_label(g.target, bilateral_h_label(x.label(g.target)));
        } else {
            const auto [z, y] = bcnot_labels(x.label(g.target), x.label(g.control));
            x.set_label(g.target, z);
            x.set_label(g.control, y);
        }
    }
    return x;
}

struct ObservationSystem {
    std::size_t n = 0;
    std::size_t m = 0;
    MaskMode mode = MaskMode::abstract;
    /// 2m x 2n; row k is the functional of the initial labels that round k reveals.
    Gf2Matrix matrix;
};

/// Row k has a 1 on label bit k and 0 on the channel bits of every later round.
inline bool is_unit_lower_triangular(const ObservationSystem &sys) {
    const std::size_t rows = 2 * sys.m;
    for (std::size_t k = 0; k < rows; ++k) {
        if (!sys.matrix.get(k, k)) {
            return false;
        }
        for (std::size_t c = k + 1; c < rows; ++c) {
            if (sys.matrix.get(k, c)) {
                return false;
            }
        }
    }
    return true;
}

inline ObservationSystem compile_protocol(const MaskSchedule &s) {
    validate_schedule(s);
    const std::size_t nbits = 2 * s.n;
    ObservationSystem sys{s.n, s.m, s.mode, Gf2Matrix(2 * s.m, nbits)};
    if (s.mode == MaskMode::abstract) {
        for (std::size_t k = 0; k < 2 * s.m; ++k) {
            sys.matrix.set(k, k, true);
            for (std::size_t w = 0; w < s.masks[k].size(); ++w) {
                if (s.masks[k].get(w)) {
                    sys.matrix.set(k, 2 * s.m + w, true);
                }
            }
        }
        return sys;
    }
    // Each current label bit as a linear functional of the initial bits.
    std::vector<BitVec> f(nbits, BitVec(nbits));
    for (std::size_t b = 0; b < nbits; ++b) {
        f[b].set(b, true);
    }
    for (const Gate &g : gate_sequence(s)) {
        if (g.kind == Gate::hadamard) {
            std::swap(f[2 * g.target], f[2 * g.target + 1]);
        } else {
            f[2 * g.target] ^= f[2 * g.control];
            f[2 * g.control + 1] ^= f[2 * g.target + 1];
        }
    }
    for (std::size_t k = 0; k < 2 * s.m; ++k) {
        sys.matrix.row(k) = f[k];
    }
    if (!is_unit_lower_triangular(sys)) {
        throw ContractError("compile_protocol: compiled observation rows are not unit lower-triangular");
    }
    return sys;
}

inline BitVec observe(const LabelString &x, const ObservationSystem &sys) {
    if (x.n != sys.n) {
        throw ContractError("observe: label string has " + std::to_string(x.n) + " pairs, system expects " +
                            std::to_string(sys.n));
    }
    return sys.matrix.multiply(x.bits);
}

/// Observation computed by running the schedule on concrete labels, without
/// building the observation matrix.
inline BitVec observe_direct(const LabelString &x, const MaskSchedule &s) {
    validate_schedule(s);
    if (x.n != s.n) {
        throw ContractError("observe_direct: pair count mismatch");
    }
    BitVec obs(2 * s.m);
    if (s.mode == MaskMode::abstract) {
        const BitVec xw = x.bits.slice(2 * s.m, 2 * (s.n - s.m));
        for (std::size_t k = 0; k < 2 * s.m; ++k) {
            obs.set(k, x.bits.get(k) ^ s.masks[k].dot(xw));
        }
        return obs;
    }
    const LabelString out = apply_gates(gate_sequence(s), x);
    for (std::size_t k = 0; k < 2 * s.m; ++k) {
        obs.set(k, out.bits.get(k));
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

enum class DecodeStatus { success, tie, zero_likelihood };

inline const char *status_name(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::success:
            return "success";
        case DecodeStatus::tie:
            return "tie";
        case DecodeStatus::zero_likelihood:
            return "zero_likelihood";
    }
    return "unknown";
}

struct DecodeResult {
    DecodeStatus status = DecodeStatus::zero_likelihood;
    /// Most likely candidate; on a tie, the first maximizer in enumeration order.
    LabelString candidate;
    double log2_likelihood = -std::numeric_limits<double>::infinity();
    /// Number of maximizers within the tie tolerance.
    std::size_t maximizers = 0;
    std::uint64_t candidates_enumerated = 0;
};

struct DecodeOptions {
    std::uint64_t cap = std::uint64_t{1} << 26;
    double tie_tol = 1e-9;
};

namespace detail {

struct CosetSearch {
    std::size_t n;
    std::array<double, 4> logp;
    double max_logp;
    double tie_tol;
    const AffineSolution *sol;
    /// Kernel vector index for each label bit, or npos when the bit is a pivot.
    std::vector<std::size_t> kernel_of_bit;
    /// Pairs whose two bits are both free, in increasing order.
    std::vector<std::size_t> free_pairs;
    /// Lone free bits (the other bit of their pair is a pivot).
    std::vector<std::size_t> lone_bits;
    /// Pairs containing at least one pivot bit; scored at the leaves.
    std::vector<std::size_t> leaf_pairs;

    BitVec x;
    double best = -std::numeric_limits<double>::infinity();
    BitVec best_x;
    std::size_t maximizers = 0;
    std::uint64_t leaves = 0;

    void visit_leaf(double partial) {
        ++leaves;
        double score = partial;
        for (std::size_t i : leaf_pairs) {
            score += logp[static_cast<std::size_t>(2 * x.get(2 * i) + x.get(2 * i + 1))];
            if (score == -std::numeric_limits<double>::infinity()) {
                return;
            }
        }
        if (score > best + tie_tol) {
            best = score;
            best_x = x;
            maximizers = 1;
        } else if (score >= best - tie_tol) {
            ++maximizers;
        }
    }

    void lone(std::size_t idx, double partial) {
        if (idx == lone_bits.size()) {
            pairs(0, partial);
            return;
        }
        lone(idx + 1, partial);
        const BitVec &k = sol->kernel[kernel_of_bit[lone_bits[idx]]];
        x ^= k;
        lone(idx + 1, partial);
        x ^= k;
    }

    void pairs(std::size_t idx, double partial) {
        const double remaining = static_cast<double>(free_pairs.size() - idx + leaf_pairs.size()) * max_logp;
        if (partial + remaining < best - tie_tol) {
            return;
        }
        if (idx == free_pairs.size()) {
            visit_leaf(partial);
            return;
        }
        const std::size_t i = free_pairs[idx];
        const BitVec &k1 = sol->kernel[kernel_of_bit[2 * i]];
        const BitVec &k2 = sol->kernel[kernel_of_bit[2 * i + 1]];
        for (int l = 0; l < 4; ++l) {
            if (logp[static_cast<std::size_t>(l)] == -std::numeric_limits<double>::infinity()) {
                continue;
            }
            const bool b1 = (l >> 1) & 1;
            const bool b2 = l & 1;
            if (b1) {
                x ^= k1;
            }
            if (b2) {
                x ^= k2;
            }
            pairs(idx + 1, partial + logp[static_cast<std::size_t>(l)]);
            if (b1) {
                x ^= k1;
            }
            if (b2) {
                x ^= k2;
            }
        }
    }
};

}  // namespace detail

/// Exact maximum-likelihood decoding over the affine coset consistent with obs.
inline DecodeResult decode(const BitVec &obs, const ObservationSystem &sys, std::span<const double> p,
                           const DecodeOptions &opt = {}) {
    const auto probs = bell_probabilities(p);
    if (obs.size() != 2 * sys.m) {
        throw ContractError("decode: observation has " + std::to_string(obs.size()) + " bits, expected " +
                            std::to_string(2 * sys.m));
    }
    const AffineSolution sol = solve_affine(sys.matrix, obs);
    DecodeResult r;
    r.candidate = LabelString(sys.n);
    if (!sol.consistent) {
        return r;
    }
    if (sol.kernel.size() >= 64 || (std::uint64_t{1} << sol.kernel.size()) > opt.cap) {
        throw CapacityError("decode: solution coset has 2^" + std::to_string(sol.kernel.size()) +
                            " candidates, above the cap of " + std::to_string(opt.cap) + "; increase m or decrease n");
    }
    detail::CosetSearch search;
    search.n = sys.n;
    search.max_logp = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < 4; ++l) {
        search.logp[l] = probs[l] > 0.0 ? std::log2(probs[l]) : -std::numeric_limits<double>::infinity();
        search.max_logp = std::max(search.max_logp, search.logp[l]);
    }
    search.tie_tol = opt.tie_tol;
    search.sol = &sol;
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    search.kernel_of_bit.assign(2 * sys.n, npos);
    for (std::size_t f = 0; f < sol.free_cols.size(); ++f) {
        search.kernel_of_bit[sol.free_cols[f]] = f;
    }
    for (std::size_t i = 0; i < sys.n; ++i) {
        const bool f1 = search.kernel_of_bit[2 * i] != npos;
        const bool f2 = search.kernel_of_bit[2 * i + 1] != npos;
        if (f1 && f2) {
            search.free_pairs.push_back(i);
        } else {
            if (f1) {
                search.lone_bits.push_back(2 * i);
            }
            if (f2) {
                search.lone_bits.push_back(2 * i + 1);
            }
            search.leaf_pairs.push_back(i);
        }
    }
    search.x = sol.particular;
    search.lone(0, 0.0);

    r.candidates_enumerated = search.leaves;
    if (search.maximizers == 0) {
        r.candidate.bits = sol.particular;
        return r;
    }
    r.candidate.bits = search.best_x;
    r.log2_likelihood = search.best;
    r.maximizers = search.maximizers;
    r.status = search.maximizers == 1 ? DecodeStatus::success : DecodeStatus::tie;
    return r;
}

// ---------------------------------------------------------------------------
// Trials and Monte Carlo
// ---------------------------------------------------------------------------

struct TrialResult {
    LabelString x;
    BitVec observation;
    DecodeResult decoded;
    bool success = false;
};

inline TrialResult run_protocol_trial(std::span<const double> p, std::size_t n, std::size_t m, MaskMode mode, Rng &rng,
                                      const DecodeOptions &opt = {}) {
    const auto probs = bell_probabilities(p);
    if (m > n) {
        throw ContractError("run_protocol_trial: m exceeds n");
    }
    TrialResult t;
    t.x = sample_labels(probs, n, rng);
    const MaskSchedule schedule = draw_schedule(n, m, mode, rng);
    const ObservationSystem sys = compile_protocol(schedule);
    t.observation = observe(t.x, sys);
    t.decoded = decode(t.observation, sys, probs, opt);
    t.success = t.decoded.status == DecodeStatus::success && t.decoded.candidate == t.x;
    return t;
}

struct McConfig {
    std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};
    std::size_t n = 1;
    std::optional<std::size_t> m;
    std::optional<double> delta;
    std::uint64_t trials = 1000;
    MaskMode mode = MaskMode::abstract;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t cap = std::uint64_t{1} << 26;
};

struct McReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::array<double, 4> p{};
    double H = 0.0;
    double delta = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t ties = 0;
    std::uint64_t capacity_errors = 0;
    double empirical_failure_rate = 0.0;
    double bound = 0.0;
    MaskMode mode = MaskMode::abstract;
    std::uint64_t seed = 0;

    /// Binomial standard error of the empirical rate.
    double standard_error() const {
        if (trials == 0) {
            return 0.0;
        }
        const double q = empirical_failure_rate;
        return std::sqrt(std::max(q * (1.0 - q), 1.0 / static_cast<double>(trials)) / static_cast<double>(trials));
    }
};

/// Fills in m from delta (2m = ceil(n(H + 2 delta))) or delta from m, as needed.
inline std::pair<std::size_t, double> resolve_rate(const std::array<double, 4> &p, std::size_t n, std::optional<std::size_t> m,
                                                   std::optional<double> delta) {
    const double h = shannon_entropy(p);
    if (n == 0) {
        throw ContractError("n must be at least 1");
    }
    if (m.has_value()) {
        if (*m > n) {
            throw ContractError("m = " + std::to_string(*m) + " exceeds n = " + std::to_string(n));
        }
        const double d = delta.value_or((2.0 * static_cast<double>(*m) / static_cast<double>(n) - h) / 2.0);
        return {*m, d};
    }
    if (!delta.has_value()) {
        throw ContractError("either m or delta must be given");
    }
    if (!(*delta >= 0.0) || !std::isfinite(*delta)) {
        throw ContractError("delta must be a finite non-negative number");
    }
    const double m_real = static_cast<double>(n) * (h + 2.0 * *delta) / 2.0;
    const auto m_val = static_cast<std::size_t>(std::ceil(m_real - 1e-12));
    if (m_val > n) {
        throw ContractError("delta = " + std::to_string(*delta) + " requires m = " + std::to_string(m_val) + " > n");
    }
    return {m_val, *delta};
}

inline McReport run_monte_carlo(const McConfig &cfg) {
    const auto probs = bell_probabilities(cfg.p);
    const auto [m, delta] = resolve_rate(probs, cfg.n, cfg.m, cfg.delta);
    McReport rep;
    rep.n = cfg.n;
    rep.m = m;
    rep.p = probs;
    rep.H = shannon_entropy(probs);
    rep.delta = delta;
    rep.trials = cfg.trials;
    rep.mode = cfg.mode;
    rep.seed = cfg.seed;
    rep.bound = std::exp2(static_cast<double>(cfg.n) * (rep.H + delta) - 2.0 * static_cast<double>(m));

    const std::size_t coset_dim = 2 * (cfg.n - m);
    if (coset_dim >= 64 || (std::uint64_t{1} << coset_dim) > cfg.cap) {
        throw CapacityError("bell-sim: solution cosets have 2^" + std::to_string(coset_dim) + " candidates, above the cap of " +
                            std::to_string(cfg.cap) + "; increase m or decrease n");
    }

    const unsigned threads = std::max(1u, cfg.threads);
    std::vector<std::uint64_t> failures(threads, 0), ties(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    DecodeOptions opt;
    opt.cap = cfg.cap;
    auto worker = [&](unsigned w) {
        try {
            for (std::uint64_t t = w; t < cfg.trials; t += threads) {
                Rng rng(derive_seed(cfg.seed, t));
                const TrialResult r = run_protocol_trial(probs, cfg.n, m, cfg.mode, rng, opt);
                if (!r.success) {
                    ++failures[w];
                }
                if (r.decoded.status == DecodeStatus::tie) {
                    ++ties[w];
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(worker, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (unsigned w = 0; w < threads; ++w) {
        rep.failures += failures[w];
        rep.ties += ties[w];
    }
    rep.empirical_failure_rate = cfg.trials ? static_cast<double>(rep.failures) / static_cast<double>(cfg.trials) : 0.0;
    return rep;
}

struct CollisionReport {
    std::uint64_t trials = 0;
    std::uint64_t collisions = 0;
    double rate = 0.0;
    /// 1 if x = y, 0 if they differ only on channel bits, 2^{-2m} otherwise.
    double expected = 0.0;
    double sigma = 0.0;
};

/// Fraction of freshly drawn schedules under which x and y give the same observation.
inline CollisionReport collision_probe(const LabelString &x, const LabelString &y, std::size_t n, std::size_t m,
                                       std::uint64_t trials, MaskMode mode, Rng &rng) {
    if (x.n != n || y.n != n) {
        throw ContractError("collision_probe: label strings must have n pairs");
    }
    if (m > n) {
        throw ContractError("collision_probe: m exceeds n");
    }
    LabelString d(n, x.bits ^ y.bits);
    const bool w_equal = d.bits.slice(2 * m, 2 * (n - m)).none();
    CollisionReport rep;
    rep.trials = trials;
    rep.expected = d.bits.none() ? 1.0 : (w_equal ? 0.0 : std::exp2(-2.0 * static_cast<double>(m)));
    for (std::uint64_t t = 0; t < trials; ++t) {
        const MaskSchedule s = draw_schedule(n, m, mode, rng);
        if (observe_direct(d, s).none()) {
            ++rep.collisions;
        }
    }
    rep.rate = trials ? static_cast<double>(rep.collisions) / static_cast<double>(trials) : 0.0;
    rep.sigma = trials ? std::sqrt(rep.expected * (1.0 - rep.expected) / static_cast<double>(trials)) : 0.0;
    return rep;
}

enum class TiePolicy { strict, canonical };

/// Sum over all 4^n strings x of p(x) [decoder recovers x]. Under the strict
/// policy a tie is a failure; under the canonical policy the first maximizer is
/// taken as the decoder's output.
inline double exact_success_probability(const ObservationSystem &sys, std::span<const double> p, TiePolicy policy,
                                        const DecodeOptions &opt = {}) {
    const auto probs = bell_probabilities(p);
    if (sys.n > 10) {
        throw CapacityError("exact_success_probability: 4^n enumeration limited to n <= 10");
    }
    std::map<std::string, DecodeResult> memo;
    double total = 0.0;
    const std::uint64_t count = std::uint64_t{1} << (2 * sys.n);
    for (std::uint64_t v = 0; v < count; ++v) {
        LabelString x(sys.n, BitVec::from_u64(2 * sys.n, v));
        const double px = string_probability(x, probs);
        if (px == 0.0) {
            continue;
        }
        const BitVec obs = observe(x, sys);
        auto it = memo.find(obs.str());
        if (it == memo.end()) {
            it = memo.emplace(obs.str(), decode(obs, sys, probs, opt)).first;
        }
        const DecodeResult &r = it->second;
        const bool ok = r.status == DecodeStatus::success || (policy == TiePolicy::canonical && r.status == DecodeStatus::tie);
        if (ok && r.candidate == x) {
            total += px;
        }
    }
    return total;
}

}  // namespace dqc
