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

#include "dqc/bellhash.hpp"

#include "gtest/gtest.h"

#include "dqc/oracles.hpp"

using namespace dqc;

namespace {

LabelString labels(std::size_t n, std::uint64_t v) {
    return LabelString(n, BitVec::from_u64(2 * n, v));
}

MaskSchedule schedule(std::size_t n, std::size_t m, MaskMode mode, std::vector<std::string> masks) {
    MaskSchedule s{n, m, {}, mode, 0};
    for (const auto &t : masks) {
        s.masks.push_back(BitVec::from_string(t));
    }
    return s;
}

/// Every schedule for (n, m) in the given mode, by enumerating all mask bits.
std::vector<MaskSchedule> all_schedules(std::size_t n, std::size_t m, MaskMode mode) {
    const std::size_t width = 2 * (n - m);
    const std::size_t total_bits = 2 * m * width;
    std::vector<MaskSchedule> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << total_bits); ++v) {
        MaskSchedule s{n, m, {}, mode, 0};
        for (std::size_t k = 0; k < 2 * m; ++k) {
            s.masks.push_back(BitVec::from_u64(width, (v >> (k * width)) & ((std::uint64_t{1} << width) - 1)));
        }
        if (mode == MaskMode::compiled && !compiled_constraints_hold(s)) {
            continue;
        }
        out.push_back(std::move(s));
    }
    return out;
}

const double kUniform[] = {0.25, 0.25, 0.25, 0.25};

}  // namespace

TEST(bellhash, bcnot_examples) {
    const auto [a, b] = bcnot_labels({0, 0}, {0, 0});
    ASSERT_EQ(a.index(), 0);
    ASSERT_EQ(b.index(), 0);
    const auto [z, y] = bcnot_labels({0, 1}, {1, 0});
    ASSERT_EQ(z.y1, 1);
    ASSERT_EQ(z.y2, 1);
    ASSERT_EQ(y.y1, 1);
    ASSERT_EQ(y.y2, 1);
}

TEST(bellhash, bilateral_h_examples) {
    ASSERT_EQ(bilateral_h_label({0, 0}).index(), 0);
    const BellLabel t = bilateral_h_label({0, 1});
    ASSERT_EQ(t.y1, 1);
    ASSERT_EQ(t.y2, 0);
    for (int l = 0; l < 4; ++l) {
        ASSERT_EQ(bilateral_h_label(bilateral_h_label(BellLabel::from_index(l))).index(), l);
    }
}

TEST(bellhash, label_to_state_examples) {
    const double r = 1.0 / std::sqrt(2.0);
    ASSERT_TRUE(label_to_state({0, 0}).isApprox(make_vector({r, 0, 0, r})));
    ASSERT_TRUE(label_to_state({1, 1}).isApprox(make_vector({0, r, -r, 0})));
}

TEST(bellhash, label_oracle_passes) {
    const oracles::OracleReport rep = oracles::verify_label_oracles();
    ASSERT_TRUE(rep.passed()) << rep.failures.front().name << ": " << rep.failures.front().detail;
    ASSERT_EQ(rep.cases, 24u);
}

TEST(bellhash, label_oracle_detects_corruption) {
    auto bad_bcnot = [](BellLabel z, BellLabel y) {
        auto out = bcnot_labels(z, y);
        if (z.index() == 1 && y.index() == 2) {
            out.first.y2 ^= 1;
        }
        return out;
    };
    const auto rep = oracles::verify_label_oracles(bad_bcnot);
    ASSERT_EQ(rep.failures.size(), 1u);
    ASSERT_EQ(rep.failures[0].name, "bcnot (0,1)(1,0)");

    auto bad_h = [](BellLabel y) { return y; };
    const auto rep_h = oracles::verify_label_oracles(bcnot_labels, bad_h);
    ASSERT_EQ(rep_h.failures.size(), 2u);
}

TEST(bellhash, sampling_and_probabilities) {
    const double p[] = {0.5, 0.5, 0.0, 0.0};
    Rng rng(3);
    const LabelString x = sample_labels(p, 40, rng);
    for (std::size_t i = 0; i < x.n; ++i) {
        ASSERT_EQ(x.label(i).y1, 0);
    }
    ASSERT_NEAR(string_probability(x, p), std::pow(0.5, 40), 1e-20);
    const double bad[] = {0.5, 0.5, 0.1, 0.0};
    ASSERT_THROW(bell_probabilities(bad), ContractError);
    ASSERT_THROW(parse_mode("hybrid"), ParseError);
    ASSERT_EQ(parse_mode("compiled"), MaskMode::compiled);
}

TEST(bellhash, compile_examples) {
    const ObservationSystem full = compile_protocol(MaskSchedule{2, 2, {BitVec(0), BitVec(0), BitVec(0), BitVec(0)}, MaskMode::compiled, 0});
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            ASSERT_EQ(full.matrix.get(r, c), r == c);
        }
    }
    const ObservationSystem abs = compile_protocol(schedule(2, 1, MaskMode::abstract, {"10", "01"}));
    ASSERT_EQ(abs.matrix.row(0).str(), "1010");
    ASSERT_EQ(abs.matrix.row(1).str(), "0101");
    ASSERT_THROW(compile_protocol(schedule(2, 1, MaskMode::compiled, {"11", "00"})), ContractError);
    ASSERT_THROW(compile_protocol(schedule(2, 1, MaskMode::compiled, {"10", "01"})), ContractError);
    ASSERT_THROW(compile_protocol(schedule(2, 1, MaskMode::abstract, {"10"})), ContractError);
}

TEST(bellhash, compiled_matches_gate_semantics) {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.below(8);
        const std::size_t m = rng.below(n + 1);
        const MaskSchedule s = draw_schedule(n, m, MaskMode::compiled, rng);
        const ObservationSystem sys = compile_protocol(s);
        const LabelString x = sample_labels(kUniform, n, rng);
        ASSERT_EQ(observe(x, sys), observe_direct(x, s));
        const MaskSchedule a{n, m, s.masks, MaskMode::abstract, 0};
        ASSERT_EQ(observe(x, compile_protocol(a)), observe_direct(x, a));
    }
}

TEST(bellhash, compiled_vs_abstract_rows_exhaustive) {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            if (2 * m * 2 * (n - m) > 16) {
                continue;
            }
            for (const MaskSchedule &s : all_schedules(n, m, MaskMode::compiled)) {
                const ObservationSystem c = compile_protocol(s);
                const ObservationSystem a = compile_protocol(MaskSchedule{n, m, s.masks, MaskMode::abstract, 0});
                ASSERT_TRUE(is_unit_lower_triangular(c));
                for (std::size_t k = 0; k < 2 * m; ++k) {
                    for (std::size_t col = k; col < 2 * m; ++col) {
                        ASSERT_EQ(c.matrix.get(k, col), a.matrix.get(k, col));
                    }
                }
            }
        }
    }
}

TEST(bellhash, triangularity_fuzz) {
    Rng rng(5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.below(16);
        const std::size_t m = rng.below(n + 1);
        const ObservationSystem sys = compile_protocol(draw_schedule(n, m, MaskMode::compiled, rng));
        ASSERT_TRUE(is_unit_lower_triangular(sys));
    }
}

TEST(bellhash, observe_linearity_and_edge_cases) {
    Rng rng(6);
    const MaskSchedule s = draw_schedule(6, 3, MaskMode::compiled, rng);
    const ObservationSystem sys = compile_protocol(s);
    ASSERT_TRUE(observe(LabelString(6), sys).none());
    for (int t = 0; t < 50; ++t) {
        const LabelString x = sample_labels(kUniform, 6, rng), y = sample_labels(kUniform, 6, rng);
        BitVec sum = observe(x, sys);
        sum ^= observe(y, sys);
        ASSERT_EQ(observe(LabelString(6, x.bits ^ y.bits), sys), sum);
    }
    const ObservationSystem identity = compile_protocol(draw_schedule(5, 5, MaskMode::abstract, rng));
    const LabelString x = sample_labels(kUniform, 5, rng);
    ASSERT_EQ(observe(x, identity), x.bits);
    ASSERT_THROW(observe(LabelString(4), sys), ContractError);
}

TEST(bellhash, zero_collision_exhaustive) {
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        for (std::size_t n = 1; n <= 4; ++n) {
            for (std::size_t m = 1; m <= n; ++m) {
                Rng rng(100 + n * 10 + m);
                for (int sched = 0; sched < 4; ++sched) {
                    const MaskSchedule s = draw_schedule(n, m, mode, rng);
                    const ObservationSystem sys = compile_protocol(s);
                    const std::uint64_t c_count = std::uint64_t{1} << (2 * m);
                    const std::uint64_t w_count = std::uint64_t{1} << (2 * (n - m));
                    for (std::uint64_t w = 0; w < w_count; ++w) {
                        for (std::uint64_t c1 = 0; c1 < c_count; ++c1) {
                            for (std::uint64_t c2 = c1 + 1; c2 < c_count; ++c2) {
                                const LabelString x = labels(n, c1 | (w << (2 * m)));
                                const LabelString y = labels(n, c2 | (w << (2 * m)));
                                ASSERT_NE(observe(x, sys), observe(y, sys));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(bellhash, decode_trivial_cases) {
    Rng rng(7);
    const double p[] = {0.7, 0.1, 0.1, 0.1};
    for (int t = 0; t < 20; ++t) {
        const MaskSchedule s = draw_schedule(5, 5, MaskMode::compiled, rng);
        const ObservationSystem sys = compile_protocol(s);
        const LabelString x = sample_labels(p, 5, rng);
        const DecodeResult r = decode(observe(x, sys), sys, p);
        ASSERT_EQ(r.status, DecodeStatus::success);
        ASSERT_EQ(r.candidate, x);
    }
    const double det[] = {1.0, 0.0, 0.0, 0.0};
    for (std::size_t m = 0; m <= 6; ++m) {
        const TrialResult tr = run_protocol_trial(det, 6, m, MaskMode::compiled, rng);
        ASSERT_TRUE(tr.success);
    }
}

TEST(bellhash, decode_uniform_ties) {
    Rng rng(8);
    int ties = 0;
    for (int t = 0; t < 50; ++t) {
        const TrialResult tr = run_protocol_trial(kUniform, 6, 4, MaskMode::abstract, rng);
        ties += tr.decoded.status == DecodeStatus::tie;
        ASSERT_EQ(tr.decoded.maximizers, 16u);
        ASSERT_FALSE(tr.success);
    }
    ASSERT_EQ(ties, 50);
}

TEST(bellhash, decode_matches_exhaustive_ml) {
    Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 3 + static_cast<std::size_t>(t % 4);
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
        const MaskSchedule s = draw_schedule(n, m, mode, rng);
        const ObservationSystem sys = compile_protocol(s);
        const LabelString x = sample_labels(p, n, rng);
        const BitVec obs = observe(x, sys);
        const DecodeResult fast = decode(obs, sys, p);
        const DecodeResult slow = oracles::exhaustive_ml_decode(obs, sys, p);
        ASSERT_EQ(fast.status, slow.status) << "instance " << t;
        ASSERT_EQ(fast.maximizers, slow.maximizers) << "instance " << t;
        if (slow.status != DecodeStatus::zero_likelihood) {
            ASSERT_NEAR(fast.log2_likelihood, slow.log2_likelihood, 1e-9);
        }
        if (slow.status == DecodeStatus::success) {
            ASSERT_EQ(fast.candidate, slow.candidate) << "instance " << t;
        }
    }
}

TEST(bellhash, decode_capacity) {
    Rng rng(10);
    const MaskSchedule s = draw_schedule(20, 2, MaskMode::abstract, rng);
    const ObservationSystem sys = compile_protocol(s);
    DecodeOptions opt;
    opt.cap = 1 << 10;
    ASSERT_THROW(decode(BitVec(4), sys, kUniform, opt), CapacityError);
}

TEST(bellhash, trial_determinism) {
    const double p[] = {0.6, 0.2, 0.1, 0.1};
    Rng a(77), b(77);
    const TrialResult x = run_protocol_trial(p, 8, 6, MaskMode::compiled, a);
    const TrialResult y = run_protocol_trial(p, 8, 6, MaskMode::compiled, b);
    ASSERT_EQ(x.x, y.x);
    ASSERT_EQ(x.observation, y.observation);
    ASSERT_EQ(x.decoded.candidate, y.decoded.candidate);
    ASSERT_EQ(x.success, y.success);
}

TEST(bellhash, resolve_rate_rules) {
    const std::array<double, 4> p{0.5, 0.5, 0.0, 0.0};
    const auto [m, d] = resolve_rate(p, 24, std::nullopt, 0.15);
    ASSERT_EQ(m, 16u);
    ASSERT_DOUBLE_EQ(d, 0.15);
    const auto [m2, d2] = resolve_rate(p, 24, 16, std::nullopt);
    ASSERT_EQ(m2, 16u);
    ASSERT_NEAR(d2, (32.0 / 24.0 - 1.0) / 2.0, 1e-12);
    ASSERT_THROW(resolve_rate(p, 4, 5, std::nullopt), ContractError);
    ASSERT_THROW(resolve_rate(p, 4, std::nullopt, std::nullopt), ContractError);
    ASSERT_THROW(resolve_rate(p, 4, std::nullopt, 2.0), ContractError);
}

TEST(bellhash, monte_carlo_contracts) {
    McConfig cfg;
    cfg.p = {0.7, 0.1, 0.1, 0.1};
    cfg.n = 10;
    cfg.m = 7;
    cfg.trials = 300;
    cfg.seed = 42;
    cfg.mode = MaskMode::compiled;
    const McReport one = run_monte_carlo(cfg);
    cfg.threads = 3;
    const McReport three = run_monte_carlo(cfg);
    ASSERT_EQ(one.failures, three.failures);
    ASSERT_EQ(one.ties, three.ties);
    ASSERT_LE(one.failures, one.trials);
    ASSERT_DOUBLE_EQ(one.empirical_failure_rate, static_cast<double>(one.failures) / 300.0);

    cfg.m = 10;
    ASSERT_EQ(run_monte_carlo(cfg).failures, 0u);

    cfg.m = 1;
    cfg.n = 20;
    ASSERT_THROW(run_monte_carlo(cfg), CapacityError);
}

TEST(bellhash, collision_probe_cases) {
    Rng rng(12);
    const std::size_t n = 5, m = 1;
    const LabelString x = labels(n, 0x2d5), y = labels(n, 0x1c6);
    const CollisionReport r = collision_probe(x, y, n, m, 20000, MaskMode::abstract, rng);
    ASSERT_NEAR(r.expected, 0.25, 1e-15);
    ASSERT_LE(std::abs(r.rate - r.expected), 4 * r.sigma);
    ASSERT_EQ(collision_probe(x, x, n, m, 100, MaskMode::compiled, rng).rate, 1.0);
    const LabelString z = labels(n, 0x2d5 ^ 0x3);
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        const CollisionReport c = collision_probe(x, z, n, m, 2000, mode, rng);
        ASSERT_EQ(c.collisions, 0u);
        ASSERT_EQ(c.expected, 0.0);
    }
}

TEST(bellhash, exact_success_probability_cases) {
    Rng rng(13);
    const MaskSchedule s = draw_schedule(3, 3, MaskMode::compiled, rng);
    ASSERT_NEAR(exact_success_probability(compile_protocol(s), kUniform, TiePolicy::strict), 1.0, 1e-12);
    const double p[] = {0.7, 0.1, 0.1, 0.1};
    const MaskSchedule t = draw_schedule(3, 2, MaskMode::abstract, rng);
    const ObservationSystem sys = compile_protocol(t);
    const double strict = exact_success_probability(sys, p, TiePolicy::strict);
    const double canonical = exact_success_probability(sys, p, TiePolicy::canonical);
    ASSERT_LE(strict, canonical + 1e-15);
    ASSERT_GT(strict, 0.0);
    ASSERT_LE(canonical, 1.0);
}
