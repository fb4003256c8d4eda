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

#include "dqc/ensembles.hpp"

#include "gtest/gtest.h"

#include "dqc/oracles.hpp"
#include "test_util.hpp"

using namespace dqc;
using dqc::testing::random_state;
using dqc::testing::random_unitary;

namespace {

BipartiteEnsemble uniform_bell() {
    const double u[] = {0.25, 0.25, 0.25, 0.25};
    return builtin::bell(u);
}

}  // namespace

TEST(ensembles, construction_validation) {
    ASSERT_THROW(BipartiteEnsemble(2, 2, {{0.5, basis_vector(4, 0)}}), ContractError);
    ASSERT_THROW(BipartiteEnsemble(2, 2, {{1.0, basis_vector(3, 0)}}), DimensionError);
    ASSERT_THROW(BipartiteEnsemble(2, 2, {{1.0, ComplexVector::Zero(4)}}), ContractError);
    ASSERT_THROW(BipartiteEnsemble(2, 2, {{-0.1, basis_vector(4, 0)}, {1.1, basis_vector(4, 1)}}), ContractError);
    const BipartiteEnsemble e(2, 2, {{1.0, basis_vector(4, 0)}, {0.0, basis_vector(4, 1)}});
    ASSERT_EQ(e.size(), 1u);
}

TEST(ensembles, reduced_ensemble_cases) {
    Rng rng(2);
    const ComplexVector a = random_state(2, rng), b = random_state(3, rng);
    const BipartiteEnsemble prod(2, 3, {{1.0, tensor(a, b)}});
    for (Side side : {Side::A, Side::B}) {
        const ReducedEnsemble r = reduced_ensemble(prod, side);
        ASSERT_EQ(r.items.size(), 1u);
        ASSERT_NEAR(vn_entropy(r.items[0].rho), 0.0, 1e-9);
        ASSERT_NEAR(r.items[0].rho.matrix().trace().real(), 1.0, 1e-9);
    }
    const ReducedEnsemble rb = reduced_ensemble(prod, Side::B);
    ASSERT_NEAR(fidelity_pure(b, rb.items[0].rho), 1.0, 1e-12);

    const ReducedEnsemble bell_a = reduced_ensemble(uniform_bell(), Side::A);
    for (const auto &item : bell_a.items) {
        ASSERT_TRUE(item.rho.matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0, 1e-12));
    }
    ASSERT_NEAR(holevo_chi(bell_a.items), 0.0, 1e-12);
}

TEST(ensembles, average_state_cases) {
    Rng rng(3);
    const ComplexVector v = random_state(6, rng);
    const BipartiteEnsemble single(2, 3, {{1.0, v}});
    ASSERT_TRUE(average_state(single).matrix().isApprox(v * v.adjoint()));
    ASSERT_TRUE(average_state(uniform_bell()).matrix().isApprox(ComplexMatrix::Identity(4, 4) / 4.0, 1e-12));

    const BipartiteEnsemble ho = builtin::hidden_orthogonality(0.0, 0.0);
    const std::size_t dims[] = {2, 3};
    const std::size_t keep_b[] = {1};
    const DensityOperator rho_b = partial_trace(average_state(ho), dims, keep_b);
    ASSERT_NEAR(vn_entropy(rho_b), std::log2(3.0), 1e-12);
    ASSERT_EQ(hermitian_eigen(average_state(ho).matrix()).values[3] < 1e-12, true);
}

TEST(ensembles, reduce_then_average_commutes) {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        std::vector<EnsembleItem> items;
        const std::size_t k = 1 + rng.below(4);
        for (std::size_t i = 0; i < k; ++i) {
            items.push_back({1.0 / static_cast<double>(k), random_state(6, rng)});
        }
        const BipartiteEnsemble e(2, 3, items);
        const std::size_t dims[] = {2, 3};
        for (std::size_t side = 0; side < 2; ++side) {
            const std::size_t keep[] = {side};
            const DensityOperator lhs = average_state(reduced_ensemble(e, side == 0 ? Side::A : Side::B));
            const DensityOperator rhs = partial_trace(average_state(e), dims, keep);
            ASSERT_LT(max_abs_entry(lhs.matrix() - rhs.matrix()), 1e-9);
        }
    }
}

TEST(ensembles, is_reducible_cases) {
    const std::vector<ComplexVector> orth{basis_vector(2, 0), basis_vector(2, 1)};
    ASSERT_TRUE(is_reducible(orth).reducible);
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<ComplexVector> nonorth{basis_vector(2, 0), make_vector({r, r})};
    ASSERT_FALSE(is_reducible(nonorth).reducible);

    const BipartiteEnsemble ho = builtin::hidden_orthogonality(0.01, 0.02);
    const Reducibility joint = is_reducible(joint_vectors(ho));
    ASSERT_TRUE(joint.reducible);
    ASSERT_EQ(joint.components.size(), 2u);
    ASSERT_FALSE(is_reducible(local_vectors(ho, Side::A)).reducible);
    ASSERT_FALSE(is_reducible(local_vectors(ho, Side::B)).reducible);
}

TEST(ensembles, is_reducible_matches_brute_force) {
    Rng rng(5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t k = 1 + rng.below(5);
        const std::size_t d = 2 + rng.below(3);
        std::vector<ComplexVector> vs;
        for (std::size_t i = 0; i < k; ++i) {
            // Sparse vectors to make exact orthogonality common.
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
        ASSERT_EQ(is_reducible(vs).reducible, oracles::brute_force_reducible(vs)) << "trial " << t;

        const ComplexMatrix u = random_unitary(d, rng);
        std::vector<ComplexVector> rotated;
        for (const auto &v : vs) {
            rotated.push_back(u * v);
        }
        ASSERT_EQ(is_reducible(rotated).reducible, is_reducible(vs).reducible);
    }
}

TEST(ensembles, is_product_ensemble_cases) {
    ASSERT_TRUE(is_product_ensemble(builtin::hidden_orthogonality(0.3, 0.4)));
    ASSERT_FALSE(is_product_ensemble(uniform_bell()));
    Rng rng(6);
    const BipartiteEnsemble prod(3, 2, {{1.0, tensor(random_state(3, rng), random_state(2, rng))}});
    ASSERT_TRUE(is_product_ensemble(prod));
}

TEST(ensembles, builtin_orthogonality_and_normalization) {
    const BipartiteEnsemble bell = uniform_bell();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            ASSERT_NEAR(std::abs(bell[i].state.dot(bell[j].state)), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
    for (double alpha : {0.0, 0.01, 0.5, 1.0}) {
        for (double beta : {0.0, 0.2, 0.99}) {
            const BipartiteEnsemble ho = builtin::hidden_orthogonality(alpha, beta);
            ASSERT_NEAR(std::abs(ho[0].state.dot(ho[2].state)), 0.0, 1e-15);
            for (const auto &item : ho.items()) {
                ASSERT_NEAR(item.state.norm(), 1.0, 1e-12);
            }
        }
    }
    const auto cw = builtin::erasure_codewords();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            ASSERT_NEAR(std::abs(cw[i].dot(cw[j])), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
    const BipartiteEnsemble w = builtin::walgate_pair(0.5, 0.5, 1.0, 0.0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    ASSERT_EQ(w.d_a(), 2u);
    ASSERT_NEAR(std::abs(w[0].state.dot(w[1].state)), 0.0, 1e-15);
}

TEST(ensembles, builtin_errors) {
    const double bad[] = {0.5, 0.6, 0.0, -0.1};
    ASSERT_THROW(builtin::bell(bad), ContractError);
    ASSERT_THROW(builtin::hidden_orthogonality(1.5, 0.1), ContractError);
    ASSERT_THROW(builtin::walgate_pair(0.5, 0.5, 1.0, 1.0, 1.0, 0.0), ContractError);
    const double none[] = {0.0};
    ASSERT_THROW(make_builtin("cloning", std::span<const double>(none, 0)), ContractError);
    ASSERT_EQ(make_builtin("erasure_code", {}).d_a(), 4u);
    ASSERT_EQ(make_builtin("hidden_orthogonality", {}).d_b(), 3u);
}

TEST(ensembles, sample_product_sequence_properties) {
    const double det[] = {1.0, 0.0, 0.0, 0.0};
    Rng rng(7);
    for (auto i : sample_product_sequence(builtin::bell(det), 50, rng)) {
        ASSERT_EQ(i, 0u);
    }

    const double p[] = {0.1, 0.2, 0.3, 0.4};
    const BipartiteEnsemble e = builtin::bell(p);
    const std::size_t draws = 100000;
    Rng rng2(8);
    std::vector<std::size_t> counts(4, 0);
    for (auto i : sample_product_sequence(e, draws, rng2)) {
        ++counts[i];
    }
    for (std::size_t k = 0; k < 4; ++k) {
        const double sigma = std::sqrt(p[k] * (1 - p[k]) / static_cast<double>(draws));
        ASSERT_NEAR(static_cast<double>(counts[k]) / static_cast<double>(draws), p[k], 4 * sigma);
    }

    Rng a(99), b(99);
    ASSERT_EQ(sample_product_sequence(e, 200, a), sample_product_sequence(e, 200, b));
    ASSERT_THROW(sample_product_sequence(e, 0, a), ContractError);
}
