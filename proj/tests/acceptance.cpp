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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances, seeds and
// runtime limits are fixed below. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dqc/dqc.hpp"
#include "test_util.hpp"

using namespace dqc;
using dqc::testing::random_density;
using dqc::testing::random_hermitian;
using dqc::testing::random_unitary;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << "FAILED " << what << "; ";
        }
    }
};

struct Criterion {
    int id;
    const char *title;
    double limit_seconds;
    std::function<void(Outcome &)> body;
};

std::string g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double h2(double x) {
    const double p[] = {x, 1.0 - x};
    return shannon_entropy(p);
}

LabelString random_labels(std::size_t n, Rng &rng) {
    return LabelString(n, detail::random_mask(2 * n, rng));
}

void rate_formulas(Outcome &o) {
    const double u[] = {0.25, 0.25, 0.25, 0.25};
    const RateBounds bu = bell_region(u);
    o.check(std::abs(*bu.ra_lb - 1.0) < 1e-12 && std::abs(*bu.rb_lb - 1.0) < 1e-12 && std::abs(*bu.sum_lb - 2.0) < 1e-12,
            "uniform Bell corner (1,1), tol 1e-12");
    const RateBounds cc = caw_corner(builtin::bell(u));
    o.check(std::abs(cc.corners[0].ra - 1.0) < 1e-9 && std::abs(cc.corners[0].rb - 1.0) < 1e-9, "uniform Bell corner via caw_corner");

    const RatePoint ho = hidden_orthogonality_rates(1e-3, 1e-3);
    const double achieved = ho.ra + ho.rb;
    o.check(std::abs(achieved - 2 * h2(2.0 / 3.0)) < 1e-3 && std::abs(achieved - 1.8366) < 1e-3, "hidden-orthogonality sum, tol 1e-3");
    const double ir = *irreducible_bound(builtin::hidden_orthogonality(1e-3, 1e-3)).sum_lb;
    o.check(std::abs(ir - (0.5 * h2(2.0 / 3.0) + std::log2(3.0))) < 2e-3 && std::abs(ir - 2.0441) < 2e-3,
            "irreducible bound on hidden orthogonality, tol 2e-3");
    o.detail << "HO sum " << g(achieved) << ", irreducible bound " << g(ir) << "; ";

    const double p[] = {0.4, 0.3, 0.2, 0.1};
    const double h = shannon_entropy(p);
    const BipartiteEnsemble bell = builtin::bell(p);
    const RateBounds sw = slepian_wolf_bounds(bell);
    o.check(std::abs(*sw.ra_lb - (h - 1)) < 1e-9 && std::abs(*sw.rb_lb - (h - 1)) < 1e-9 && std::abs(*sw.sum_lb - h) < 1e-9,
            "Slepian-Wolf on Bell source, tol 1e-9");
    o.check(std::abs(*irreducible_bound(bell).sum_lb - (2 + h) / 2) < 1e-9, "irreducible formula on Bell source (2+H)/2, tol 1e-9");

    const double r = 1.0 / std::sqrt(2.0);
    const HybridRateReport hy = hybrid_rate(0.5, 0.5, r, r, r, r);
    o.check(std::abs(hy.r_a - 0.5) < 1e-9, "hybrid R_A = 0.5, tol 1e-9");
    o.detail << "hybrid R_A " << g(hy.r_a);
}

void label_semantics(Outcome &o) {
    const oracles::OracleReport r = oracles::verify_label_oracles();
    o.check(r.passed(), "statevector label oracle");
    o.detail << r.cases << " cases, " << r.failures.size() << " mismatches";
}

void zero_collision(Outcome &o) {
    std::uint64_t exhaustive = 0, violations = 0;
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        for (std::size_t n = 1; n <= 4; ++n) {
            for (std::size_t m = 1; m <= n; ++m) {
                Rng rng(1000 + 10 * n + m + (mode == MaskMode::compiled ? 500 : 0));
                for (int sched = 0; sched < 8; ++sched) {
                    const ObservationSystem sys = compile_protocol(draw_schedule(n, m, mode, rng));
                    const std::uint64_t c_count = std::uint64_t{1} << (2 * m);
                    const std::uint64_t w_count = std::uint64_t{1} << (2 * (n - m));
                    for (std::uint64_t w = 0; w < w_count; ++w) {
                        for (std::uint64_t c1 = 0; c1 < c_count; ++c1) {
                            const BitVec o1 = observe(LabelString(n, BitVec::from_u64(2 * n, c1 | (w << (2 * m)))), sys);
                            for (std::uint64_t c2 = c1 + 1; c2 < c_count; ++c2) {
                                ++exhaustive;
                                if (o1 == observe(LabelString(n, BitVec::from_u64(2 * n, c2 | (w << (2 * m)))), sys)) {
                                    ++violations;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    std::uint64_t randomized = 0;
    const std::size_t n = 16;
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        Rng rng(mode == MaskMode::abstract ? 31 : 37);
        for (int t = 0; t < 10000; ++t) {
            const std::size_t m = 1 + rng.below(n);
            const MaskSchedule s = draw_schedule(n, m, mode, rng);
            const LabelString x = random_labels(n, rng);
            BitVec diff = detail::random_mask(2 * m, rng);
            if (diff.none()) {
                diff = BitVec::from_u64(2 * m, 1);
            }
            BitVec ybits = x.bits;
            for (std::size_t b = 0; b < 2 * m; ++b) {
                if (diff.get(b)) {
                    ybits.flip(b);
                }
            }
            ++randomized;
            if (observe_direct(x, s) == observe_direct(LabelString(n, ybits), s)) {
                ++violations;
            }
        }
    }
    o.check(violations == 0, "distinct observations for equal W, distinct C");
    o.detail << exhaustive << " exhaustive pairs at n<=4, " << randomized << " random pairs at n=16, " << violations << " violations";
}

void collision_rate(Outcome &o) {
    const std::size_t n = 6;
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        for (std::size_t m = 1; m <= 3; ++m) {
            Rng rng(4000 + m + (mode == MaskMode::compiled ? 100 : 0));
            LabelString x = random_labels(n, rng), y = x;
            y.bits.flip(2 * m + rng.below(2 * (n - m)));
            const CollisionReport r = collision_probe(x, y, n, m, 100000, mode, rng);
            const double z = r.sigma > 0 ? (r.rate - r.expected) / r.sigma : 0.0;
            o.detail << mode_name(mode) << " m=" << m << " rate " << g(r.rate) << " vs " << g(r.expected) << " (" << g(z) << " sigma); ";
            if (mode == MaskMode::abstract) {
                o.check(std::abs(z) <= 4.0, "abstract collision rate within 4 sigma at m=" + std::to_string(m));
            }
        }
    }
    o.detail << "compiled mode reported only";
}

void monte_carlo_failure(Outcome &o) {
    const std::array<double, 4> p{0.5, 0.5, 0.0, 0.0};
    std::map<MaskMode, std::vector<McReport>> by_mode;
    for (MaskMode mode : {MaskMode::abstract, MaskMode::compiled}) {
        McConfig main;
        main.p = p;
        main.n = 24;
        main.delta = 0.15;
        main.trials = 2000;
        main.mode = mode;
        main.seed = 2024;
        const McReport r = run_monte_carlo(main);
        o.check(r.m == 16, "delta 0.15 resolves to 2m = 32");
        o.check(r.empirical_failure_rate <= 0.1, std::string(mode_name(mode)) + " failure <= 0.1");
        o.check(std::abs(r.bound - std::exp2(-4.4)) < 1e-12, "bound field 2^-4.4");
        o.detail << mode_name(mode) << " 2m=32 failure " << g(r.empirical_failure_rate) << " (bound " << g(r.bound) << "); ";
        for (std::size_t m : {14u, 16u, 18u}) {
            McConfig c = main;
            c.delta.reset();
            c.m = m;
            c.seed = 2024 + m;
            by_mode[mode].push_back(run_monte_carlo(c));
        }
        const auto &v = by_mode[mode];
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double slack = 3.0 * std::hypot(v[i].standard_error(), v[i + 1].standard_error());
            o.check(v[i + 1].empirical_failure_rate <= v[i].empirical_failure_rate + slack,
                    std::string(mode_name(mode)) + " non-increasing in m within 3 sigma");
        }
        o.detail << mode_name(mode) << " 2m=28,32,36: " << g(v[0].empirical_failure_rate) << "," << g(v[1].empirical_failure_rate) << ","
                 << g(v[2].empirical_failure_rate) << "; ";
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const McReport &a = by_mode[MaskMode::abstract][i], &c = by_mode[MaskMode::compiled][i];
        const double slack = 3.0 * std::hypot(a.standard_error(), c.standard_error());
        o.check(std::abs(a.empirical_failure_rate - c.empirical_failure_rate) <= slack, "modes agree within 3 sigma at m=" + std::to_string(a.m));
    }
}

void decoder_optimality(Outcome &o) {
    const oracles::OracleReport r = oracles::decoder_agreement(200, 77);
    o.check(r.passed(), "coset decoder equals exhaustive ML");
    o.detail << r.cases << " instances, " << r.failures.size() << " disagreements";
}

void hidden_orthogonality(Outcome &o) {
    const double a = 0.01, b = 0.01;
    const BipartiteEnsemble e = builtin::hidden_orthogonality(a, b);
    const double full = hidden_orthogonality_scheme(a, b, 1, std::numeric_limits<double>::infinity()).fidelity(e).average_fidelity;
    o.check(std::abs(full - 1.0) < 1e-12, "n=1 full-rate fidelity 1, tol 1e-12");
    const double f8 = hidden_orthogonality_scheme(a, b, 8, 0.25).fidelity(e).average_fidelity;
    const double f2 = hidden_orthogonality_scheme(a, b, 2, 0.25).fidelity(e).average_fidelity;
    const oracles::AccountingReport acc = oracles::hidden_orthogonality_accounting(a, b, 8, 0.25);
    o.check(std::abs(f8 - (1.0 - acc.deficit)) < 1e-9, "n=8 fidelity equals accounting identity, tol 1e-9");
    o.check(f8 > f2, "n=8 fidelity exceeds n=2");
    o.detail << "F(1,inf)=" << g(full) << ", F(8,0.25)=" << g(f8) << " vs accounting " << g(1.0 - acc.deficit) << ", F(2,0.25)=" << g(f2);
}

void erasure(Outcome &o) {
    const auto cw = builtin::erasure_codewords();
    double worst = 0.0;
    for (std::size_t q = 1; q <= 4; ++q) {
        const ErasureReport r = erasure_correctable(cw, q);
        o.check(r.correctable, "correctable at q=" + std::to_string(q));
        for (double x : r.residuals) {
            worst = std::max(worst, x);
        }
    }
    o.check(worst <= 1e-8, "residuals <= 1e-8");
    const std::vector<ComplexVector> ghz{basis_vector(16, 0), basis_vector(16, 15)};
    const ErasureReport bad = erasure_correctable(ghz, 1);
    o.check(!bad.correctable, "span{|0000>,|1111>} rejected at q=1");
    o.detail << "worst residual " << g(worst) << ", counterexample residual " << g(*std::max_element(bad.residuals.begin(), bad.residuals.end()));
}

void cross_representation(Outcome &o) {
    const double uniform[] = {0.25, 0.25, 0.25, 0.25};
    const double skewed[] = {0.55, 0.2, 0.15, 0.1};
    std::size_t cases = 0;
    for (const auto *p : {uniform, skewed}) {
        const oracles::OracleReport r = oracles::channel_view_agreement(3, std::span<const double>(p, 4), 1e-9);
        o.check(r.passed(), "channel view equals success probability, tol 1e-9");
        cases += r.cases;
    }
    o.detail << cases << " schedules at n<=3, two label distributions";
}

void numeric_foundation(Outcome &o) {
    Rng rng(99);
    double worst_add = 0.0, worst_sub = 0.0, worst_unit = 0.0, worst_chi = 0.0, worst_res = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t da = 1 + rng.below(4), db = 1 + rng.below(3);
        const DensityOperator a = random_density(da, rng), b = random_density(db, rng, 1 + rng.below(db));
        worst_add = std::max(worst_add, std::abs(vn_entropy(tensor(a, b)) - vn_entropy(a) - vn_entropy(b)));
        const DensityOperator ab = random_density(da * db, rng, 1 + rng.below(da * db));
        const std::size_t dims[] = {da, db}, ka[] = {0}, kb[] = {1};
        worst_sub = std::max(worst_sub, vn_entropy(ab) - vn_entropy(partial_trace(ab, dims, ka)) - vn_entropy(partial_trace(ab, dims, kb)));
        const ComplexMatrix u = random_unitary(da * db, rng);
        const ComplexMatrix rot = u * ab.matrix() * u.adjoint();
        worst_unit = std::max(worst_unit, std::abs(vn_entropy(DensityOperator(0.5 * (rot + rot.adjoint()))) - vn_entropy(ab)));

        std::vector<WeightedState> ens;
        const std::size_t k = 1 + rng.below(4), d = 2 + rng.below(3);
        for (std::size_t i = 0; i < k; ++i) {
            ens.push_back({1.0 / static_cast<double>(k), random_density(d, rng, 1 + rng.below(d))});
        }
        const double chi = holevo_chi(ens);
        worst_chi = std::max({worst_chi, -chi, chi - vn_entropy(average_of(ens))});

        const ComplexMatrix hm = random_hermitian(1 + rng.below(8), rng);
        const EigenResidual er = eigen_residual(hm, hermitian_eigen(hm));
        worst_res = std::max({worst_res, er.relative_residual, er.orthonormality_defect});
    }
    o.check(worst_add <= 1e-8, "additivity");
    o.check(worst_sub <= 1e-8, "subadditivity");
    o.check(worst_unit <= 1e-8, "unitary invariance");
    o.check(worst_chi <= 1e-8, "0 <= chi <= S(avg)");
    o.check(worst_res <= 1e-8, "eigensolver residual <= 1e-8");

    int checked = 0, within = 0;
    while (checked < 100) {
        const ComplexMatrix u = random_unitary(2, rng);
        const double theta = 0.2 * rng.uniform();
        ComplexMatrix rot(2, 2);
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        const ComplexMatrix v = u * rot;
        const Povm povm({v.col(0) * v.col(0).adjoint(), v.col(1) * v.col(1).adjoint()});
        std::vector<DensityOperator> states{DensityOperator(u.col(0) * u.col(0).adjoint()), DensityOperator(u.col(1) * u.col(1).adjoint())};
        const std::size_t assign[] = {0, 1};
        double lambda = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            lambda = std::max(lambda, 1.0 - (states[i].matrix() * povm.effects()[i]).trace().real());
        }
        ++checked;
        within += gentle_measurement_check(states, povm, assign, lambda).within_bound ? 1 : 0;
    }
    o.check(within == checked, "gentle-measurement bound");
    o.detail << "tol 1e-8; worst additivity " << g(worst_add) << ", eigen residual " << g(worst_res) << ", gentle " << within << "/" << checked;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "rate formulas", 1.0, rate_formulas},
        {2, "bilateral-CNOT and bilateral-H label semantics", 1.0, label_semantics},
        {3, "hashing zero-collision property", 30.0, zero_collision},
        {4, "schedule collision rate 2^-2m", 60.0, collision_rate},
        {5, "Monte Carlo failure vs bound", 300.0, monte_carlo_failure},
        {6, "coset decoder vs exhaustive ML", 120.0, decoder_optimality},
        {7, "hidden-orthogonality protocol fidelity", 120.0, hidden_orthogonality},
        {8, "erasure code correctability", 1.0, erasure},
        {9, "channel view vs success probability", 120.0, cross_representation},
        {10, "numeric foundation properties", 60.0, numeric_foundation},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool ok = o.pass && in_time;
        failures += ok ? 0 : 1;
        std::printf("%s criterion %2d  %-48s %8.3f s (limit %g s)%s  %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs, c.limit_seconds,
                    in_time ? "" : " TIMEOUT", o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
