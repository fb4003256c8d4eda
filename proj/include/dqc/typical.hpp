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

// Typical-subspace (Schumacher) compression of n copies of a density operator.
//
// Typicality of an eigenvector sequence depends only on its type (how many
// times each eigen-index occurs), so overlaps of the typical projector with
// product vectors are evaluated by dynamic programming over types instead of
// by materializing d^n-dimensional operators.

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "dqc/matcore.hpp"

namespace dqc {

class TypicalCompressor {
  public:
    /// delta = +infinity selects the full space (no compression).
    TypicalCompressor(const DensityOperator &rho, std::size_t n, double delta, const Tolerances &tol = kDefaultTolerances)
        : d_(rho.dim()), n_(n), delta_(delta) {
        if (n == 0) {
            throw ContractError("TypicalCompressor: n must be at least 1");
        }
        if (!(delta >= 0.0)) {
            throw ContractError("TypicalCompressor: delta must be non-negative");
        }
        const EigenDecomposition e = hermitian_eigen(rho.matrix(), tol);
        eigvecs_ = e.vectors;
        for (double lam : e.values) {
            if (lam < -tol.psd) {
                throw ContractError("TypicalCompressor: negative eigenvalue");
            }
            lambda_.push_back(lam > tol.psd ? lam : 0.0);
        }
        entropy_ = entropy_of_spectrum(lambda_, tol);
        enumerate_types();
    }

    std::size_t local_dim() const {
        return d_;
    }
    std::size_t copies() const {
        return n_;
    }
    double delta() const {
        return delta_;
    }
    double entropy() const {
        return entropy_;
    }
    const std::vector<double> &eigenvalues() const {
        return lambda_;
    }
    const ComplexMatrix &eigenvectors() const {
        return eigvecs_;
    }
    /// Number of typical eigen-sequences (the code-space dimension).
    double typical_dimension() const {
        return typical_dim_;
    }
    std::size_t qubits() const {
        return qubits_;
    }
    /// ceil(log2 typical dimension) / n.
    double rate() const {
        return static_cast<double>(qubits_) / static_cast<double>(n_);
    }
    /// Tr(P rho^{(x)n}).
    double typical_mass() const {
        return typical_mass_;
    }
    /// The most probable typical eigen-sequence (lexicographically first on ties).
    const std::vector<std::size_t> &fallback() const {
        return fallback_;
    }
    /// True when no sequence is typical and the code space is the fallback alone.
    bool empty_typical_set() const {
        return empty_;
    }

    bool is_typical_type(const std::vector<std::size_t> &counts) const {
        if (std::isinf(delta_)) {
            return true;
        }
        double neg_log = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            if (counts[j] == 0) {
                continue;
            }
            if (lambda_[j] == 0.0) {
                return false;
            }
            neg_log -= static_cast<double>(counts[j]) * std::log2(lambda_[j]);
        }
        return std::abs(neg_log / static_cast<double>(n_) - entropy_) <= delta_ + 1e-12;
    }

    bool is_typical_sequence(const std::vector<std::size_t> &seq) const {
        if (empty_) {
            return seq == fallback_;
        }
        std::vector<std::size_t> counts(d_, 0);
        for (auto s : seq) {
            ++counts[s];
        }
        return is_typical_type(counts);
    }

    /// <(x)bra | P | (x)ket> for per-copy vectors bra[k], ket[k].
    Complex projected_overlap(std::span<const ComplexVector> bra, std::span<const ComplexVector> ket) const {
        check_copies(bra.size());
        check_copies(ket.size());
        if (empty_) {
            return fallback_overlap(bra) * std::conj(fallback_overlap(ket));
        }
        // w[k][j] = <bra_k|e_j><e_j|ket_k>
        std::vector<std::vector<Complex>> w(n_, std::vector<Complex>(d_));
        for (std::size_t k = 0; k < n_; ++k) {
            const ComplexVector cb = eigvecs_.adjoint() * bra[k];
            const ComplexVector ck = eigvecs_.adjoint() * ket[k];
            for (std::size_t j = 0; j < d_; ++j) {
                w[k][j] = std::conj(cb(static_cast<Eigen::Index>(j))) * ck(static_cast<Eigen::Index>(j));
            }
        }
        // Distribution over partial types, keyed by mixed-radix count code.
        std::map<std::uint64_t, Complex> cur{{0, Complex(1.0)}};
        for (std::size_t k = 0; k < n_; ++k) {
            std::map<std::uint64_t, Complex> next;
            for (const auto &[code, amp] : cur) {
                if (amp == Complex(0.0)) {
                    continue;
                }
                for (std::size_t j = 0; j < d_; ++j) {
                    if (w[k][j] != Complex(0.0)) {
                        next[code + radix_[j]] += amp * w[k][j];
                    }
                }
            }
            cur = std::move(next);
        }
        Complex total = 0.0;
        for (const auto &[code, amp] : cur) {
            if (typical_code_.at(code)) {
                total += amp;
            }
        }
        return total;
    }

    /// <(x)bra | e_fallback>.
    Complex fallback_overlap(std::span<const ComplexVector> bra) const {
        check_copies(bra.size());
        Complex out = 1.0;
        for (std::size_t k = 0; k < n_; ++k) {
            out *= bra[k].dot(eigvecs_.col(static_cast<Eigen::Index>(fallback_[k])));
        }
        return out;
    }

    /// Fidelity of the encode-decode round trip on a product pure state:
    /// m^2 + (1 - m) |<x|fallback>|^2 with m = <x|P|x>.
    double roundtrip_fidelity(std::span<const ComplexVector> x) const {
        const double m = projected_overlap(x, x).real();
        const double f = std::norm(fallback_overlap(x));
        return m * m + (std::max(0.0, 1.0 - m)) * f;
    }

    /// Eigenvector of the sequence s as a d^n vector.
    ComplexVector sequence_vector(const std::vector<std::size_t> &s) const {
        ComplexVector v = eigvecs_.col(static_cast<Eigen::Index>(s[0]));
        for (std::size_t k = 1; k < s.size(); ++k) {
            v = tensor(v, ComplexVector(eigvecs_.col(static_cast<Eigen::Index>(s[k]))));
        }
        return v;
    }

    /// Dense encoder (d^n -> 2^qubits) and decoder (2^qubits -> d^n) channels.
    /// Typical sequences are numbered in lexicographic order; atypical inputs
    /// are sent to the fallback's code word. Limited to small d^n.
    std::pair<QuantumChannel, QuantumChannel> materialize(std::size_t entry_cap = std::size_t{1} << 24) const {
        const double full = std::pow(static_cast<double>(d_), static_cast<double>(n_));
        if (full > 4096.0) {
            throw CapacityError("TypicalCompressor::materialize: d^n = " + std::to_string(full) + " is too large to materialize");
        }
        const auto dim_in = static_cast<std::size_t>(full);
        const std::size_t dim_out = std::size_t{1} << qubits_;
        std::vector<std::size_t> seq(n_, 0);
        std::vector<std::vector<std::size_t>> typical, atypical;
        for (std::size_t idx = 0; idx < dim_in; ++idx) {
            std::size_t rem = idx;
            for (std::size_t k = n_; k-- > 0;) {
                seq[k] = rem % d_;
                rem /= d_;
            }
            (is_typical_sequence(seq) ? typical : atypical).push_back(seq);
        }
        if ((atypical.size() + 1) * dim_in * dim_out > entry_cap || (dim_out + 1) * dim_in * dim_out > entry_cap) {
            throw CapacityError("TypicalCompressor::materialize: Kraus representation too large");
        }
        std::size_t fallback_code = 0;
        for (std::size_t r = 0; r < typical.size(); ++r) {
            if (typical[r] == fallback_) {
                fallback_code = r;
            }
        }
        const auto in = static_cast<Eigen::Index>(dim_in);
        const auto out = static_cast<Eigen::Index>(dim_out);
        std::vector<ComplexMatrix> enc;
        ComplexMatrix iso = ComplexMatrix::Zero(out, in);
        for (std::size_t r = 0; r < typical.size(); ++r) {
            iso.row(static_cast<Eigen::Index>(r)) = sequence_vector(typical[r]).adjoint();
        }
        enc.push_back(iso);
        for (const auto &s : atypical) {
            ComplexMatrix k = ComplexMatrix::Zero(out, in);
            k.row(static_cast<Eigen::Index>(fallback_code)) = sequence_vector(s).adjoint();
            enc.push_back(std::move(k));
        }
        std::vector<ComplexMatrix> dec;
        dec.push_back(iso.adjoint());
        const ComplexVector f = sequence_vector(fallback_);
        for (std::size_t r = typical.size(); r < dim_out; ++r) {
            ComplexMatrix k = ComplexMatrix::Zero(in, out);
            k.col(static_cast<Eigen::Index>(r)) = f;
            dec.push_back(std::move(k));
        }
        return {QuantumChannel(dim_in, dim_out, std::move(enc)), QuantumChannel(dim_out, dim_in, std::move(dec))};
    }

  private:
    void check_copies(std::size_t k) const {
        if (k != n_) {
            throw DimensionError("TypicalCompressor: expected " + std::to_string(n_) + " per-copy vectors");
        }
    }

    void enumerate_types() {
        radix_.assign(d_, 1);
        for (std::size_t j = 1; j < d_; ++j) {
            radix_[j] = radix_[j - 1] * (n_ + 1);
        }
        std::vector<std::size_t> counts(d_, 0);
        typical_dim_ = 0.0;
        typical_mass_ = 0.0;
        double best_logp = -std::numeric_limits<double>::infinity();
        std::vector<std::size_t> best_seq;
        // Most probable overall as a fallback when nothing is typical.
        std::vector<std::size_t> mode_seq(n_, 0);
        visit_types(0, n_, counts, [&](const std::vector<std::size_t> &c) {
            std::uint64_t code = 0;
            double log_mult = std::lgamma(static_cast<double>(n_) + 1.0);
            double logp = 0.0;
            for (std::size_t j = 0; j < d_; ++j) {
                code += c[j] * radix_[j];
                log_mult -= std::lgamma(static_cast<double>(c[j]) + 1.0);
                if (c[j] > 0) {
                    logp += lambda_[j] > 0.0 ? static_cast<double>(c[j]) * std::log2(lambda_[j])
                                             : -std::numeric_limits<double>::infinity();
                }
            }
            const bool typ = is_typical_type(c);
            typical_code_[code] = typ;
            if (!typ) {
                return;
            }
            const double mult = std::round(std::exp(log_mult));
            typical_dim_ += mult;
            if (std::isfinite(logp)) {
                typical_mass_ += mult * std::exp2(logp);
            }
            std::vector<std::size_t> first;
            for (std::size_t j = 0; j < d_; ++j) {
                first.insert(first.end(), c[j], j);
            }
            if (best_seq.empty() || logp > best_logp + 1e-12 || (logp >= best_logp - 1e-12 && first < best_seq)) {
                best_logp = logp;
                best_seq = std::move(first);
            }
        });
        if (typical_dim_ == 0.0) {
            empty_ = true;
            fallback_ = mode_seq;
            typical_dim_ = 1.0;
            double logp = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
                logp += lambda_[0] > 0.0 ? std::log2(lambda_[0]) : -std::numeric_limits<double>::infinity();
            }
            typical_mass_ = std::isfinite(logp) ? std::exp2(logp) : 0.0;
        } else {
            fallback_ = best_seq;
        }
        qubits_ = static_cast<std::size_t>(std::ceil(std::log2(typical_dim_) - 1e-9));
        if (typical_dim_ <= 1.0) {
            qubits_ = 0;
        }
    }

    template <typename F>
    void visit_types(std::size_t j, std::size_t remaining, std::vector<std::size_t> &counts, F &&f) {
        if (j + 1 == d_) {
            counts[j] = remaining;
            f(counts);
            return;
        }
        for (std::size_t c = remaining + 1; c-- > 0;) {
            counts[j] = c;
            visit_types(j + 1, remaining - c, counts, f);
        }
        counts[j] = 0;
    }

    std::size_t d_;
    std::size_t n_;
    double delta_;
    std::vector<double> lambda_;
    ComplexMatrix eigvecs_;
    double entropy_ = 0.0;
    std::vector<std::uint64_t> radix_;
    std::map<std::uint64_t, bool> typical_code_;
    double typical_dim_ = 0.0;
    double typical_mass_ = 0.0;
    std::size_t qubits_ = 0;
    std::vector<std::size_t> fallback_;
    bool empty_ = false;
};

/// Dense typical-subspace encoder of rho^{(x)n} and its rate.
inline std::pair<QuantumChannel, double> schumacher_encoder(const DensityOperator &rho, std::size_t n, double delta,
                                                             const Tolerances &tol = kDefaultTolerances) {
    const TypicalCompressor c(rho, n, delta, tol);
    return {c.materialize().first, c.rate()};
}

}  // namespace dqc
