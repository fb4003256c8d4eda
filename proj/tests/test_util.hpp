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

#pragma once

#include <Eigen/QR>

#include "dqc/matcore.hpp"
#include "dqc/rng.hpp"

namespace dqc::testing {

inline ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng &rng) {
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double re = rng.normal();
            m(r, c) = Complex(re, rng.normal());
        }
    }
    return m;
}

inline ComplexVector random_state(std::size_t d, Rng &rng) {
    ComplexVector v = random_gaussian(d, 1, rng).col(0);
    return v / v.norm();
}

inline ComplexMatrix random_hermitian(std::size_t d, Rng &rng) {
    const ComplexMatrix g = random_gaussian(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_unitary(std::size_t d, Rng &rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(d, d, rng));
    return qr.householderQ() * ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

/// Ginibre-distributed density operator of the given rank.
inline DensityOperator random_density(std::size_t d, Rng &rng, std::size_t rank = 0) {
    const ComplexMatrix g = random_gaussian(d, rank == 0 ? d : rank, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityOperator(0.5 * (rho + rho.adjoint()));
}

/// Channel with `k` Kraus operators from the top block of a random isometry.
inline QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t k, Rng &rng) {
    const ComplexMatrix u = random_unitary(d_out * k, rng);
    std::vector<ComplexMatrix> ks;
    for (std::size_t j = 0; j < k; ++j) {
        ks.push_back(u.block(static_cast<Eigen::Index>(j * d_out), 0, static_cast<Eigen::Index>(d_out),
                             static_cast<Eigen::Index>(d_in)));
    }
    return QuantumChannel(d_in, d_out, std::move(ks));
}

}  // namespace dqc::testing
