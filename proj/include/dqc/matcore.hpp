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

// Dense complex linear algebra for small quantum systems: density operators,
// channels, POVMs, a cyclic Jacobi eigensolver and the entropic quantities
// built on top of it. All logarithms are base 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dqc/errors.hpp"

namespace dqc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical tolerances shared by every validating constructor and operation.
struct Tolerances {
    double herm = 1e-9;
    double tp = 1e-9;
    double psd = 1e-9;
    double eig = 1e-8;
    double tr = 1e-9;
    /// Largest row or column count of any operator we are willing to materialize.
    std::size_t dim_cap = std::size_t{1} << 20;
};

inline constexpr Tolerances kDefaultTolerances{};

inline double max_abs_entry(const ComplexMatrix &m) {
    double best = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            best = std::max(best, std::abs(m(r, c)));
        }
    }
    return best;
}

inline double hermiticity_defect(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    double best = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r <= c; ++r) {
            best = std::max(best, std::abs(m(r, c) - std::conj(m(c, r))));
        }
    }
    return best;
}

inline void require_finite(const ComplexMatrix &m, const char *what) {
    if (!m.allFinite()) {
        throw ContractError(std::string(what) + ": non-finite entry");
    }
}

inline void check_dim_cap(std::size_t rows, std::size_t cols, const Tolerances &tol, const char *what) {
    if (rows > tol.dim_cap || cols > tol.dim_cap) {
        throw DimensionError(std::string(what) + ": dimension " + std::to_string(std::max(rows, cols)) +
                             " exceeds cap " + std::to_string(tol.dim_cap));
    }
}

// ---------------------------------------------------------------------------
// Eigensolver
// ---------------------------------------------------------------------------

struct EigenDecomposition {
    /// Eigenvalues in descending order.
    std::vector<double> values;
    /// Column k is the unit eigenvector for values[k].
    ComplexMatrix vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot, then applies the real
/// Jacobi rotation that annihilates it. Sweeps continue until the off-diagonal
/// Frobenius mass is negligible relative to the full matrix.
inline EigenDecomposition hermitian_eigen(const ComplexMatrix &m, const Tolerances &tol = kDefaultTolerances) {
    require_finite(m, "hermitian_eigen");
    const double scale = std::max(1.0, max_abs_entry(m));
    if (hermiticity_defect(m) > tol.herm * scale) {
        throw ContractError("hermitian_eigen: matrix is not Hermitian within tolerance");
    }
    const Eigen::Index n = m.rows();
    ComplexMatrix a = 0.5 * (m + m.adjoint());
    ComplexMatrix v = ComplexMatrix::Identity(n, n);

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index r = 0; r < c; ++r) {
                s += std::norm(a(r, c));
            }
        }
        return 2.0 * s;
    };
    const double total = std::max(a.squaredNorm(), 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm2() <= 1e-32 * total) {
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Skip pivots that can no longer change the diagonal in floating point.
                if (sweep > 3 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / mag;  // e^{i theta}
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, conj(phase)) * R(c, s), restricted to the (p, q) block.
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
    EigenDecomposition out;
    out.values.reserve(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real());
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

struct EigenResidual {
    /// max_k ||M v_k - lambda_k v_k||_2 / max(1, ||M||_2-ish)
    double relative_residual;
    /// max |V^dagger V - I|
    double orthonormality_defect;
};

inline EigenResidual eigen_residual(const ComplexMatrix &m, const EigenDecomposition &e) {
    const double norm = std::max(1.0, m.operatorNorm());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const ComplexVector col = e.vectors.col(k);
        worst = std::max(worst, (m * col - e.values[static_cast<std::size_t>(k)] * col).norm());
    }
    const ComplexMatrix gram = e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(m.rows(), m.cols());
    return {worst / norm, max_abs_entry(gram)};
}

/// Square root of a PSD matrix; eigenvalues in [-tol.psd, 0) are treated as zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &m, const Tolerances &tol = kDefaultTolerances) {
    const EigenDecomposition e = hermitian_eigen(m, tol);
    ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        double lam = e.values[static_cast<std::size_t>(k)];
        if (lam < -tol.psd) {
            throw ContractError("psd_sqrt: matrix has a negative eigenvalue " + std::to_string(lam));
        }
        lam = std::max(lam, 0.0);
        out += std::sqrt(lam) * e.vectors.col(k) * e.vectors.col(k).adjoint();
    }
    return out;
}

inline bool is_psd(const ComplexMatrix &m, double slack) {
    ComplexMatrix shifted = 0.5 * (m + m.adjoint());
    shifted.diagonal().array() += slack;
    Eigen::LLT<ComplexMatrix> llt(shifted);
    return llt.info() == Eigen::Success;
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// A Hermitian, unit-trace, positive semidefinite matrix.
class DensityOperator {
  public:
    explicit DensityOperator(ComplexMatrix m, const Tolerances &tol = kDefaultTolerances) : m_(std::move(m)) {
        if (m_.rows() == 0 || m_.rows() != m_.cols()) {
            throw DimensionError("DensityOperator: matrix must be square and nonempty");
        }
        require_finite(m_, "DensityOperator");
        if (hermiticity_defect(m_) > tol.herm) {
            throw ContractError("DensityOperator: not Hermitian within tolerance");
        }
        const Complex tr = m_.trace();
        if (std::abs(tr - 1.0) > tol.tr) {
            throw ContractError("DensityOperator: trace " + std::to_string(tr.real()) + " differs from 1");
        }
        if (!is_psd(m_, tol.psd)) {
            throw ContractError("DensityOperator: minimum eigenvalue below -tolerance");
        }
    }

    static DensityOperator pure(const ComplexVector &v, const Tolerances &tol = kDefaultTolerances) {
        if (std::abs(v.norm() - 1.0) > tol.tr) {
            throw ContractError("DensityOperator::pure: vector is not normalized");
        }
        return DensityOperator(v * v.adjoint(), tol);
    }

    static DensityOperator maximally_mixed(std::size_t d) {
        const auto n = static_cast<Eigen::Index>(d);
        return DensityOperator(ComplexMatrix::Identity(n, n) / static_cast<double>(d));
    }

    std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }

  private:
    ComplexMatrix m_;
};

// ---------------------------------------------------------------------------
// Tensor products and partial traces
// ---------------------------------------------------------------------------

/// Kronecker product with index convention (i_a, i_b) -> i_a * dim_b + i_b.
inline ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b, const Tolerances &tol = kDefaultTolerances) {
    const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    check_dim_cap(rows, cols, tol, "tensor");
    ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index ac = 0; ac < a.cols(); ++ac) {
        for (Eigen::Index ar = 0; ar < a.rows(); ++ar) {
            out.block(ar * b.rows(), ac * b.cols(), b.rows(), b.cols()) = a(ar, ac) * b;
        }
    }
    return out;
}

inline ComplexVector tensor(const ComplexVector &a, const ComplexVector &b, const Tolerances &tol = kDefaultTolerances) {
    const auto rows = static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(b.size());
    check_dim_cap(rows, 1, tol, "tensor");
    ComplexVector out(static_cast<Eigen::Index>(rows));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline DensityOperator tensor(const DensityOperator &a, const DensityOperator &b, const Tolerances &tol = kDefaultTolerances) {
    return DensityOperator(tensor(a.matrix(), b.matrix(), tol), tol);
}

/// Partial trace of a square matrix over the factors not listed in `keep`.
/// Kept factors appear in their original order.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, std::span<const std::size_t> factor_dims,
                                   std::span<const std::size_t> keep) {
    std::size_t total = 1;
    for (auto d : factor_dims) {
        if (d == 0) {
            throw DimensionError("partial_trace: zero factor dimension");
        }
        total *= d;
    }
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total) {
        throw DimensionError("partial_trace: factor dimensions do not multiply to the operator dimension");
    }
    std::vector<bool> kept(factor_dims.size(), false);
    for (auto k : keep) {
        if (k >= factor_dims.size()) {
            throw DimensionError("partial_trace: keep index out of range");
        }
        kept[k] = true;
    }
    std::size_t keep_dim = 1;
    std::size_t trace_dim = 1;
    for (std::size_t f = 0; f < factor_dims.size(); ++f) {
        (kept[f] ? keep_dim : trace_dim) *= factor_dims[f];
    }
    // full_index[kept * trace_dim + traced] -> row index of m.
    std::vector<std::size_t> full_index(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        std::size_t k_idx = 0, k_stride = 1, t_idx = 0, t_stride = 1;
        for (std::size_t f = factor_dims.size(); f-- > 0;) {
            const std::size_t digit = rem % factor_dims[f];
            rem /= factor_dims[f];
            if (kept[f]) {
                k_idx += digit * k_stride;
                k_stride *= factor_dims[f];
            } else {
                t_idx += digit * t_stride;
                t_stride *= factor_dims[f];
            }
        }
        full_index[k_idx * trace_dim + t_idx] = idx;
    }
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
    for (std::size_t j = 0; j < keep_dim; ++j) {
        for (std::size_t i = 0; i < keep_dim; ++i) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < trace_dim; ++t) {
                s += m(static_cast<Eigen::Index>(full_index[i * trace_dim + t]),
                       static_cast<Eigen::Index>(full_index[j * trace_dim + t]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
        }
    }
    return out;
}

inline DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> factor_dims,
                                     std::span<const std::size_t> keep, const Tolerances &tol = kDefaultTolerances) {
    return DensityOperator(partial_trace(rho.matrix(), factor_dims, keep), tol);
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// -sum p log2 p, with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> p, const Tolerances &tol = kDefaultTolerances) {
    double sum = 0.0;
    double h = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ContractError("shannon_entropy: negative or non-finite probability");
        }
        sum += x;
        if (x > 0.0) {
            h -= x * std::log2(x);
        }
    }
    if (std::abs(sum - 1.0) > tol.tr) {
        throw ContractError("shannon_entropy: probabilities sum to " + std::to_string(sum));
    }
    return h;
}

inline double entropy_of_spectrum(std::span<const double> eigenvalues, const Tolerances &tol = kDefaultTolerances) {
    double h = 0.0;
    for (double lam : eigenvalues) {
        if (lam < -tol.psd) {
            throw ContractError("vn_entropy: eigenvalue " + std::to_string(lam) + " below -tolerance");
        }
        if (lam > tol.psd) {
            h -= lam * std::log2(lam);
        }
    }
    return h;
}

/// Von Neumann entropy in bits.
inline double vn_entropy(const DensityOperator &rho, const Tolerances &tol = kDefaultTolerances) {
    const EigenDecomposition e = hermitian_eigen(rho.matrix(), tol);
    return entropy_of_spectrum(e.values, tol);
}

struct WeightedState {
    double p;
    DensityOperator rho;
};

inline DensityOperator average_of(std::span<const WeightedState> ensemble, const Tolerances &tol = kDefaultTolerances) {
    if (ensemble.empty()) {
        throw ContractError("average_of: empty ensemble");
    }
    const auto d = static_cast<Eigen::Index>(ensemble.front().rho.dim());
    ComplexMatrix avg = ComplexMatrix::Zero(d, d);
    for (const auto &item : ensemble) {
        if (item.rho.matrix().rows() != d) {
            throw DimensionError("holevo_chi: states have different dimensions");
        }
        avg += item.p * item.rho.matrix();
    }
    return DensityOperator(avg, tol);
}

/// chi = S(sum p rho) - sum p S(rho).
inline double holevo_chi(std::span<const WeightedState> ensemble, const Tolerances &tol = kDefaultTolerances) {
    std::vector<double> probs;
    probs.reserve(ensemble.size());
    for (const auto &item : ensemble) {
        probs.push_back(item.p);
    }
    (void)shannon_entropy(probs, tol);
    double mean_entropy = 0.0;
    for (const auto &item : ensemble) {
        mean_entropy += item.p * vn_entropy(item.rho, tol);
    }
    return vn_entropy(average_of(ensemble, tol), tol) - mean_entropy;
}

// ---------------------------------------------------------------------------
// Channels and measurements
// ---------------------------------------------------------------------------

/// A CPTP map in Kraus form. Every Kraus operator is dim_out x dim_in.
class QuantumChannel {
  public:
    QuantumChannel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> kraus,
                   const Tolerances &tol = kDefaultTolerances)
        : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
        if (kraus_.empty()) {
            throw ContractError("QuantumChannel: empty Kraus list");
        }
        check_dim_cap(dim_in, dim_out, tol, "QuantumChannel");
        const auto in = static_cast<Eigen::Index>(dim_in);
        const auto out = static_cast<Eigen::Index>(dim_out);
        ComplexMatrix sum = ComplexMatrix::Zero(in, in);
        for (const auto &k : kraus_) {
            if (k.rows() != out || k.cols() != in) {
                throw DimensionError("QuantumChannel: Kraus operator has the wrong shape");
            }
            sum.noalias() += k.adjoint() * k;
        }
        if (max_abs_entry(sum - ComplexMatrix::Identity(in, in)) > tol.tp) {
            throw ContractError("QuantumChannel: Kraus operators are not trace preserving");
        }
    }

    static QuantumChannel identity(std::size_t d) {
        const auto n = static_cast<Eigen::Index>(d);
        return QuantumChannel(d, d, {ComplexMatrix::Identity(n, n)});
    }

    static QuantumChannel unitary(const ComplexMatrix &u, const Tolerances &tol = kDefaultTolerances) {
        return QuantumChannel(static_cast<std::size_t>(u.cols()), static_cast<std::size_t>(u.rows()), {u}, tol);
    }

    /// Kraus operators |i><j| / sqrt(d); maps every state to I/d.
    static QuantumChannel completely_depolarizing(std::size_t d) {
        std::vector<ComplexMatrix> ks;
        const auto n = static_cast<Eigen::Index>(d);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                ComplexMatrix k = ComplexMatrix::Zero(n, n);
                k(i, j) = 1.0 / std::sqrt(static_cast<double>(d));
                ks.push_back(std::move(k));
            }
        }
        return QuantumChannel(d, d, std::move(ks));
    }

    /// outer o inner. Kraus products that vanish identically are dropped.
    static QuantumChannel compose(const QuantumChannel &outer, const QuantumChannel &inner,
                                  const Tolerances &tol = kDefaultTolerances) {
        if (outer.dim_in() != inner.dim_out()) {
            throw DimensionError("QuantumChannel::compose: dimension mismatch");
        }
        std::vector<ComplexMatrix> ks;
        for (const auto &a : outer.kraus()) {
            for (const auto &b : inner.kraus()) {
                ComplexMatrix k = a * b;
                if (max_abs_entry(k) > 0.0) {
                    ks.push_back(std::move(k));
                }
            }
        }
        if (ks.empty()) {
            ks.push_back(ComplexMatrix::Zero(static_cast<Eigen::Index>(outer.dim_out()),
                                             static_cast<Eigen::Index>(inner.dim_in())));
        }
        return QuantumChannel(inner.dim_in(), outer.dim_out(), std::move(ks), tol);
    }

    static QuantumChannel tensor(const QuantumChannel &a, const QuantumChannel &b, const Tolerances &tol = kDefaultTolerances) {
        std::vector<ComplexMatrix> ks;
        for (const auto &ka : a.kraus()) {
            for (const auto &kb : b.kraus()) {
                ks.push_back(dqc::tensor(ka, kb, tol));
            }
        }
        return QuantumChannel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(), std::move(ks), tol);
    }

    std::size_t dim_in() const {
        return dim_in_;
    }
    std::size_t dim_out() const {
        return dim_out_;
    }
    const std::vector<ComplexMatrix> &kraus() const {
        return kraus_;
    }

  private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    std::vector<ComplexMatrix> kraus_;
};

/// sum_k K rho K^dagger.
inline DensityOperator apply_channel(const QuantumChannel &ch, const DensityOperator &rho,
                                     const Tolerances &tol = kDefaultTolerances) {
    if (ch.dim_in() != rho.dim()) {
        throw DimensionError("apply_channel: channel input dimension does not match the state");
    }
    const auto out = static_cast<Eigen::Index>(ch.dim_out());
    ComplexMatrix acc = ComplexMatrix::Zero(out, out);
    for (const auto &k : ch.kraus()) {
        acc.noalias() += k * rho.matrix() * k.adjoint();
    }
    // Trace preservation was checked at tp on the channel; allow that slack here.
    Tolerances relaxed = tol;
    relaxed.tr = std::max(tol.tr, tol.tp * static_cast<double>(rho.dim()));
    return DensityOperator(0.5 * (acc + acc.adjoint()), relaxed);
}

/// A POVM: PSD effects summing to the identity.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> effects, const Tolerances &tol = kDefaultTolerances)
        : effects_(std::move(effects)) {
        if (effects_.empty()) {
            throw ContractError("Povm: no effects");
        }
        const Eigen::Index d = effects_.front().rows();
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (std::size_t b = 0; b < effects_.size(); ++b) {
            const auto &e = effects_[b];
            if (e.rows() != d || e.cols() != d) {
                throw DimensionError("Povm: effects have different shapes");
            }
            if (hermiticity_defect(e) > tol.herm || !is_psd(e, tol.psd)) {
                throw ContractError("Povm: effect " + std::to_string(b) + " is not PSD");
            }
            sum += e;
        }
        if (max_abs_entry(sum - ComplexMatrix::Identity(d, d)) > tol.tp) {
            throw ContractError("Povm: effects do not sum to the identity");
        }
    }

    std::size_t dim() const {
        return static_cast<std::size_t>(effects_.front().rows());
    }
    const std::vector<ComplexMatrix> &effects() const {
        return effects_;
    }

  private:
    std::vector<ComplexMatrix> effects_;
};

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// <phi| rho |phi>, clamped to [0, 1].
inline double fidelity_pure(const ComplexVector &phi, const DensityOperator &rho, const Tolerances &tol = kDefaultTolerances) {
    if (static_cast<std::size_t>(phi.size()) != rho.dim()) {
        throw DimensionError("fidelity_pure: dimension mismatch");
    }
    if (std::abs(phi.norm() - 1.0) > tol.tr) {
        throw ContractError("fidelity_pure: vector is not normalized");
    }
    const double f = phi.dot(rho.matrix() * phi).real();
    return std::clamp(f, 0.0, 1.0);
}

/// Trace norm of a Hermitian matrix.
inline double trace_norm_hermitian(const ComplexMatrix &m, const Tolerances &tol = kDefaultTolerances) {
    const EigenDecomposition e = hermitian_eigen(m, tol);
    double s = 0.0;
    for (double lam : e.values) {
        s += std::abs(lam);
    }
    return s;
}

/// ||a - b||_1 (no factor 1/2).
inline double trace_distance(const DensityOperator &a, const DensityOperator &b, const Tolerances &tol = kDefaultTolerances) {
    if (a.dim() != b.dim()) {
        throw DimensionError("trace_distance: dimension mismatch");
    }
    return trace_norm_hermitian(a.matrix() - b.matrix(), tol);
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline ComplexVector basis_vector(std::size_t dim, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline ComplexVector make_vector(std::initializer_list<Complex> entries) {
    ComplexVector v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (const auto &x : entries) {
        v(i++) = x;
    }
    return v;
}

}  // namespace dqc
