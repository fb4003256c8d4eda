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

#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "dqc/matcore.hpp"
#include "dqc/rng.hpp"

namespace dqc {

enum class Side { A, B };

struct EnsembleItem {
    double p;
    ComplexVector state;
};

/// {p_i, |phi_i>^{AB}} with joint basis index a * d_B + b.
///
/// Items with probability exactly zero are dropped on construction, so two
/// ensembles that differ only by zero-weight items compare equal item-wise.
class BipartiteEnsemble {
  public:
    BipartiteEnsemble(std::size_t d_a, std::size_t d_b, std::vector<EnsembleItem> items,
                      const Tolerances &tol = kDefaultTolerances)
        : d_a_(d_a), d_b_(d_b) {
        if (d_a == 0 || d_b == 0) {
            throw DimensionError("BipartiteEnsemble: local dimensions must be positive");
        }
        double total = 0.0;
        for (auto &item : items) {
            if (!(item.p >= 0.0) || !std::isfinite(item.p)) {
                throw ContractError("BipartiteEnsemble: negative or non-finite probability");
            }
            if (static_cast<std::size_t>(item.state.size()) != d_a * d_b) {
                throw DimensionError("BipartiteEnsemble: state length " + std::to_string(item.state.size()) +
                                     " is not d_A * d_B = " + std::to_string(d_a * d_b));
            }
            if (!item.state.allFinite() || std::abs(item.state.norm() - 1.0) > tol.tr) {
                throw ContractError("BipartiteEnsemble: state vector is not normalized");
            }
            total += item.p;
            if (item.p > 0.0) {
                items_.push_back(std::move(item));
            }
        }
        if (items_.empty()) {
            throw ContractError("BipartiteEnsemble: no states with positive probability");
        }
        if (std::abs(total - 1.0) > tol.tr) {
            throw ContractError("BipartiteEnsemble: probabilities sum to " + std::to_string(total));
        }
    }

    std::size_t d_a() const {
        return d_a_;
    }
    std::size_t d_b() const {
        return d_b_;
    }
    std::size_t dim() const {
        return d_a_ * d_b_;
    }
    std::size_t size() const {
        return items_.size();
    }
    const std::vector<EnsembleItem> &items() const {
        return items_;
    }
    const EnsembleItem &operator[](std::size_t i) const {
        return items_[i];
    }

    std::vector<double> probabilities() const {
        std::vector<double> p;
        p.reserve(items_.size());
        for (const auto &item : items_) {
            p.push_back(item.p);
        }
        return p;
    }

    /// The state as a d_A x d_B coefficient matrix.
    ComplexMatrix coefficient_matrix(std::size_t i) const {
        const auto &v = items_[i].state;
        ComplexMatrix m(static_cast<Eigen::Index>(d_a_), static_cast<Eigen::Index>(d_b_));
        for (std::size_t a = 0; a < d_a_; ++a) {
            for (std::size_t b = 0; b < d_b_; ++b) {
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v(static_cast<Eigen::Index>(a * d_b_ + b));
            }
        }
        return m;
    }

  private:
    std::size_t d_a_;
    std::size_t d_b_;
    std::vector<EnsembleItem> items_;
};

struct ReducedEnsemble {
    std::size_t dim;
    std::vector<WeightedState> items;
};

/// {p_i, Tr_other |phi_i><phi_i|}, order preserved.
inline ReducedEnsemble reduced_ensemble(const BipartiteEnsemble &e, Side side, const Tolerances &tol = kDefaultTolerances) {
    ReducedEnsemble out{side == Side::A ? e.d_a() : e.d_b(), {}};
    out.items.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix c = e.coefficient_matrix(i);
        ComplexMatrix rho = side == Side::A ? ComplexMatrix(c * c.adjoint()) : ComplexMatrix((c.adjoint() * c).transpose());
        out.items.push_back({e[i].p, DensityOperator(0.5 * (rho + rho.adjoint()), tol)});
    }
    return out;
}

/// sum_i p_i |phi_i><phi_i|.
inline DensityOperator average_state(const BipartiteEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    const auto d = static_cast<Eigen::Index>(e.dim());
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (const auto &item : e.items()) {
        acc.noalias() += item.p * item.state * item.state.adjoint();
    }
    return DensityOperator(0.5 * (acc + acc.adjoint()), tol);
}

inline DensityOperator average_state(const ReducedEnsemble &e, const Tolerances &tol = kDefaultTolerances) {
    return average_of(e.items, tol);
}

// ---------------------------------------------------------------------------
// Reducibility
// ---------------------------------------------------------------------------

struct Reducibility {
    bool reducible;
    /// Connected components of the non-orthogonality graph, each sorted, ordered by smallest member.
    std::vector<std::vector<std::size_t>> components;
};

/// A set is reducible iff the graph with an edge wherever |<phi_i|phi_j>| > tol is disconnected.
inline Reducibility is_reducible(std::span<const ComplexVector> vectors, double tol = 1e-9) {
    if (vectors.empty()) {
        throw ContractError("is_reducible: empty vector set");
    }
    const std::size_t k = vectors.size();
    for (const auto &v : vectors) {
        if (v.size() != vectors.front().size()) {
            throw DimensionError("is_reducible: vectors have different dimensions");
        }
    }
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (std::abs(vectors[i].dot(vectors[j])) > tol) {
                const std::size_t ri = find(i);
                const std::size_t rj = find(j);
                if (ri != rj) {
                    parent[std::max(ri, rj)] = std::min(ri, rj);
                }
            }
        }
    }
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> slot(k, SIZE_MAX);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == SIZE_MAX) {
            slot[r] = comps.size();
            comps.emplace_back();
        }
        comps[slot[r]].push_back(i);
    }
    return {comps.size() > 1, std::move(comps)};
}

inline std::vector<ComplexVector> joint_vectors(const BipartiteEnsemble &e) {
    std::vector<ComplexVector> out;
    for (const auto &item : e.items()) {
        out.push_back(item.state);
    }
    return out;
}

/// Local pure states of a product ensemble (leading Schmidt vector on the chosen side).
inline std::vector<ComplexVector> local_vectors(const BipartiteEnsemble &e, Side side) {
    std::vector<ComplexVector> out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix c = e.coefficient_matrix(i);
        const ComplexMatrix rho = side == Side::A ? ComplexMatrix(c * c.adjoint()) : ComplexMatrix((c.adjoint() * c).transpose());
        const EigenDecomposition eig = hermitian_eigen(0.5 * (rho + rho.adjoint()));
        out.push_back(eig.vectors.col(0));
    }
    return out;
}

/// True iff every state has Schmidt rank one (second eigenvalue of Tr_B <= tol).
inline bool is_product_ensemble(const BipartiteEnsemble &e, double tol = 1e-9) {
    const ReducedEnsemble ra = reduced_ensemble(e, Side::A);
    for (const auto &item : ra.items) {
        const EigenDecomposition eig = hermitian_eigen(item.rho.matrix());
        if (eig.values.size() > 1 && eig.values[1] > tol) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Built-in ensembles
// ---------------------------------------------------------------------------

namespace builtin {

inline void check_probabilities(std::span<const double> p, const char *who) {
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ContractError(std::string(who) + ": negative or non-finite probability");
        }
        s += x;
    }
    if (std::abs(s - 1.0) > kDefaultTolerances.tr) {
        throw ContractError(std::string(who) + ": probabilities sum to " + std::to_string(s));
    }
}

/// Bell state with label (y1, y2): (|0>|y1> + (-1)^{y2} |1>|1-y1>) / sqrt(2).
inline ComplexVector bell_vector(int y1, int y2) {
    ComplexVector v = ComplexVector::Zero(4);
    const double r = 1.0 / std::sqrt(2.0);
    v(0 * 2 + y1) = r;
    v(1 * 2 + (1 - y1)) = (y2 ? -r : r);
    return v;
}

/// {p1: phi+, p2: phi-, p3: psi+, p4: psi-}.
inline BipartiteEnsemble bell(std::span<const double> p) {
    if (p.size() != 4) {
        throw ContractError("bell: expected four probabilities");
    }
    check_probabilities(p, "bell");
    std::vector<EnsembleItem> items;
    for (int l = 0; l < 4; ++l) {
        items.push_back({p[static_cast<std::size_t>(l)], bell_vector(l >> 1, l & 1)});
    }
    return BipartiteEnsemble(2, 2, std::move(items));
}

struct HiddenOrthogonalityVectors {
    std::vector<ComplexVector> alice;  // phi_1..phi_3 in C^2
    std::vector<ComplexVector> bob;    // psi_1..psi_3 in C^3
};

inline HiddenOrthogonalityVectors hidden_orthogonality_vectors(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
        throw ContractError("hidden_orthogonality: alpha and beta must lie in [0, 1]");
    }
    HiddenOrthogonalityVectors v;
    v.alice = {make_vector({1.0, 0.0}), make_vector({std::sqrt(alpha), std::sqrt(1.0 - alpha)}), make_vector({0.0, 1.0})};
    v.bob = {make_vector({std::sqrt(1.0 - beta), std::sqrt(beta), 0.0}), make_vector({0.0, 1.0, 0.0}),
             make_vector({std::sqrt(beta), 0.0, std::sqrt(1.0 - beta)})};
    return v;
}

/// Three equiprobable product states on C^2 x C^3 whose joint set is reducible
/// while both local sets are irreducible.
inline BipartiteEnsemble hidden_orthogonality(double alpha, double beta) {
    const auto v = hidden_orthogonality_vectors(alpha, beta);
    std::vector<EnsembleItem> items;
    for (int i = 0; i < 3; ++i) {
        items.push_back({1.0 / 3.0, tensor(v.alice[static_cast<std::size_t>(i)], v.bob[static_cast<std::size_t>(i)])});
    }
    return BipartiteEnsemble(2, 3, std::move(items));
}

/// The four codewords |psi_xy> of the two-qubit-per-party erasure code, in
/// order 00, 01, 10, 11. Qubits 1-2 belong to A, 3-4 to B.
inline std::vector<ComplexVector> erasure_codewords() {
    const double r = 1.0 / std::sqrt(2.0);
    auto cw = [r](unsigned x, unsigned y) {
        ComplexVector v = ComplexVector::Zero(16);
        v(x) = r;
        v(y) = r;
        return v;
    };
    return {cw(0b0000, 0b1111), cw(0b0011, 0b1100), cw(0b0101, 0b1010), cw(0b1001, 0b0110)};
}

inline BipartiteEnsemble erasure_code(std::span<const double> weights) {
    if (weights.size() != 4) {
        throw ContractError("erasure_code: expected four weights");
    }
    check_probabilities(weights, "erasure_code");
    const auto cws = erasure_codewords();
    std::vector<EnsembleItem> items;
    for (std::size_t i = 0; i < 4; ++i) {
        items.push_back({weights[i], cws[i]});
    }
    return BipartiteEnsemble(4, 4, std::move(items));
}

/// {p0: a0|00> + b0|11>, p1: a1|01> + b1|10>}.
inline BipartiteEnsemble walgate_pair(double p0, double p1, double a0, double b0, double a1, double b1) {
    const double probs[2] = {p0, p1};
    check_probabilities(probs, "walgate_pair");
    if (std::abs(a0 * a0 + b0 * b0 - 1.0) > kDefaultTolerances.tr || std::abs(a1 * a1 + b1 * b1 - 1.0) > kDefaultTolerances.tr) {
        throw ContractError("walgate_pair: amplitudes are not normalized");
    }
    return BipartiteEnsemble(2, 2, {{p0, make_vector({a0, 0.0, 0.0, b0})}, {p1, make_vector({0.0, a1, b1, 0.0})}});
}

}  // namespace builtin

/// Dispatch by name: bell(p1..p4), hidden_orthogonality(alpha, beta),
/// erasure_code(w00, w01, w10, w11), walgate_pair(p0, p1, a0, b0, a1, b1).
/// Empty parameter lists select the uniform / canonical defaults where one exists.
inline BipartiteEnsemble make_builtin(std::string_view name, std::span<const double> params) {
    auto need = [&](std::size_t k) {
        if (params.size() != k) {
            throw ContractError(std::string(name) + ": expected " + std::to_string(k) + " parameters, got " +
                                std::to_string(params.size()));
        }
    };
    if (name == "bell") {
        if (params.empty()) {
            const double u[4] = {0.25, 0.25, 0.25, 0.25};
            return builtin::bell(u);
        }
        need(4);
        return builtin::bell(params);
    }
    if (name == "hidden_orthogonality") {
        if (params.empty()) {
            return builtin::hidden_orthogonality(1e-3, 1e-3);
        }
        need(2);
        return builtin::hidden_orthogonality(params[0], params[1]);
    }
    if (name == "erasure_code") {
        if (params.empty()) {
            const double u[4] = {0.25, 0.25, 0.25, 0.25};
            return builtin::erasure_code(u);
        }
        need(4);
        return builtin::erasure_code(params);
    }
    if (name == "walgate_pair") {
        need(6);
        return builtin::walgate_pair(params[0], params[1], params[2], params[3], params[4], params[5]);
    }
    throw ContractError("unknown builtin ensemble '" + std::string(name) + "'");
}

/// i.i.d. indices drawn from the ensemble's probabilities.
inline std::vector<std::size_t> sample_product_sequence(const BipartiteEnsemble &e, std::size_t n, Rng &rng) {
    if (n == 0) {
        throw ContractError("sample_product_sequence: n must be at least 1");
    }
    const std::vector<double> p = e.probabilities();
    std::vector<std::size_t> seq(n);
    for (auto &s : seq) {
        s = rng.categorical(p);
    }
    return seq;
}

}  // namespace dqc
