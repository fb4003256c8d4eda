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

// Exact simulation of local encoding / joint decoding schemes.
//
// Index conventions. A length-n sequence of bipartite states lives on
// A^n (x) B^n in block order: joint index a * d_B^n + b with a and b the
// mixed-radix indices of (a_1..a_n) and (b_1..b_n). Encoders act on A^n and
// B^n separately; the decoder takes enc_A-output (x) enc_B-output and returns
// a state on A^n (x) B^n in the same block order.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "dqc/bellhash.hpp"
#include "dqc/ensembles.hpp"
#include "dqc/matcore.hpp"
#include "dqc/rates.hpp"
#include "dqc/rng.hpp"
#include "dqc/typical.hpp"

namespace dqc {

struct LocalScheme {
    std::size_t n;
    std::size_t d_a;
    std::size_t d_b;
    QuantumChannel enc_a;
    QuantumChannel enc_b;
    QuantumChannel dec;

    void validate() const {
        const double in_a = std::pow(static_cast<double>(d_a), static_cast<double>(n));
        const double in_b = std::pow(static_cast<double>(d_b), static_cast<double>(n));
        if (static_cast<double>(enc_a.dim_in()) != in_a || static_cast<double>(enc_b.dim_in()) != in_b) {
            throw DimensionError("LocalScheme: encoder input dimensions must be d_A^n and d_B^n");
        }
        if (dec.dim_in() != enc_a.dim_out() * enc_b.dim_out()) {
            throw DimensionError("LocalScheme: decoder input must be the product of the encoder outputs");
        }
        if (static_cast<double>(dec.dim_out()) != in_a * in_b) {
            throw DimensionError("LocalScheme: decoder output must be d_A^n d_B^n");
        }
    }

    double rate_a() const {
        return std::log2(static_cast<double>(enc_a.dim_out())) / static_cast<double>(n);
    }
    double rate_b() const {
        return std::log2(static_cast<double>(enc_b.dim_out())) / static_cast<double>(n);
    }
};

enum class FidelityMethod { exact, sampled };

inline const char *method_name(FidelityMethod m) {
    return m == FidelityMethod::exact ? "exact" : "sampled";
}

struct FidelityOptions {
    FidelityMethod method = FidelityMethod::exact;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::uint64_t enumeration_cap = 1000000;
};

struct FidelityReport {
    std::size_t n = 0;
    double average_fidelity = 0.0;
    double worst_fidelity = 1.0;
    std::vector<std::size_t> worst_sequence;
    double rate_a = 0.0;
    double rate_b = 0.0;
    FidelityMethod method = FidelityMethod::exact;
    /// Sequences enumerated (exact) or drawn (sampled).
    std::uint64_t samples = 0;
    /// Zero for exact evaluation.
    double standard_error = 0.0;
};

namespace detail {

inline double power_of(std::size_t base, std::size_t n) {
    return std::pow(static_cast<double>(base), static_cast<double>(n));
}

/// Sequence index k in [0, K^n), most significant copy first.
inline std::vector<std::size_t> sequence_from_index(std::uint64_t idx, std::size_t k, std::size_t n) {
    std::vector<std::size_t> seq(n);
    for (std::size_t c = n; c-- > 0;) {
        seq[c] = static_cast<std::size_t>(idx % k);
        idx /= k;
    }
    return seq;
}

/// Generic driver for exact enumeration or i.i.d. sampling of sequences.
template <typename Eval>
FidelityReport average_over_sequences(const BipartiteEnsemble &e, std::size_t n, const FidelityOptions &opt, Eval &&eval) {
    FidelityReport rep;
    rep.n = n;
    rep.method = opt.method;
    const std::vector<double> p = e.probabilities();
    if (opt.method == FidelityMethod::exact) {
        const double count = power_of(e.size(), n);
        if (count > static_cast<double>(opt.enumeration_cap)) {
            throw CapacityError("scheme_fidelity: K^n = " + std::to_string(count) + " sequences exceeds the exact cap of " +
                                std::to_string(opt.enumeration_cap) + "; use the sampled method");
        }
        const auto total = static_cast<std::uint64_t>(count);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const auto seq = sequence_from_index(idx, e.size(), n);
            double prob = 1.0;
            for (auto s : seq) {
                prob *= p[s];
            }
            const double f = eval(seq);
            rep.average_fidelity += prob * f;
            if (f < rep.worst_fidelity || rep.worst_sequence.empty()) {
                rep.worst_fidelity = f;
                rep.worst_sequence = seq;
            }
        }
        rep.samples = total;
    } else {
        if (opt.samples < 2) {
            throw ContractError("scheme_fidelity: sampled method needs at least two samples");
        }
        Rng rng(opt.seed);
        double sum = 0.0, sum_sq = 0.0;
        for (std::uint64_t t = 0; t < opt.samples; ++t) {
            const auto seq = sample_product_sequence(e, n, rng);
            const double f = eval(seq);
            sum += f;
            sum_sq += f * f;
            if (f < rep.worst_fidelity || rep.worst_sequence.empty()) {
                rep.worst_fidelity = f;
                rep.worst_sequence = seq;
            }
        }
        const auto ns = static_cast<double>(opt.samples);
        rep.average_fidelity = sum / ns;
        const double var = std::max(0.0, (sum_sq - sum * sum / ns) / (ns - 1.0));
        rep.standard_error = std::sqrt(var / ns);
        rep.samples = opt.samples;
    }
    rep.average_fidelity = std::clamp(rep.average_fidelity, 0.0, 1.0);
    rep.worst_fidelity = std::clamp(rep.worst_fidelity, 0.0, 1.0);
    return rep;
}

/// Kronecker product of the coefficient matrices: the block-order state as a d_A^n x d_B^n matrix.
inline ComplexMatrix sequence_coefficients(const BipartiteEnsemble &e, const std::vector<std::size_t> &seq) {
    ComplexMatrix m = e.coefficient_matrix(seq[0]);
    for (std::size_t k = 1; k < seq.size(); ++k) {
        m = tensor(m, e.coefficient_matrix(seq[k]));
    }
    return m;
}

/// Row-major flattening.
inline ComplexVector flatten(const ComplexMatrix &m) {
    ComplexVector v(m.rows() * m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            v(r * m.cols() + c) = m(r, c);
        }
    }
    return v;
}

inline ComplexMatrix unflatten(const ComplexVector &v, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = v(r * cols + c);
        }
    }
    return m;
}

inline QuantumChannel tensor_power(const QuantumChannel &ch, std::size_t n) {
    QuantumChannel out = ch;
    for (std::size_t k = 1; k < n; ++k) {
        out = QuantumChannel::tensor(out, ch);
    }
    return out;
}

/// perm[block_index] = interleaved index, for n copies of an (x, y) pair.
inline std::vector<std::size_t> block_to_interleaved(std::size_t dx, std::size_t dy, std::size_t n) {
    const auto nx = static_cast<std::size_t>(power_of(dx, n));
    const auto ny = static_cast<std::size_t>(power_of(dy, n));
    std::vector<std::size_t> perm(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            const auto xs = sequence_from_index(x, dx, n);
            const auto ys = sequence_from_index(y, dy, n);
            std::size_t idx = 0;
            for (std::size_t k = 0; k < n; ++k) {
                idx = (idx * dx + xs[k]) * dy + ys[k];
            }
            perm[x * ny + y] = idx;
        }
    }
    return perm;
}

}  // namespace detail

/// Ensemble-average fidelity sum_{i^n} p_{i^n} <phi_{i^n}| D o (E_A (x) E_B)(phi_{i^n}) |phi_{i^n}>.
inline FidelityReport scheme_fidelity(const BipartiteEnsemble &e, const LocalScheme &scheme, const FidelityOptions &opt = {}) {
    scheme.validate();
    if (scheme.d_a != e.d_a() || scheme.d_b != e.d_b()) {
        throw DimensionError("scheme_fidelity: scheme and ensemble local dimensions differ");
    }
    const auto out_a = static_cast<Eigen::Index>(scheme.enc_a.dim_out());
    const auto out_b = static_cast<Eigen::Index>(scheme.enc_b.dim_out());
    auto eval = [&](const std::vector<std::size_t> &seq) {
        const ComplexMatrix m = detail::sequence_coefficients(e, seq);
        const ComplexVector phi = detail::flatten(m);
        std::vector<ComplexMatrix> g;
        g.reserve(scheme.dec.kraus().size());
        for (const auto &d : scheme.dec.kraus()) {
            g.push_back(detail::unflatten(d.adjoint() * phi, out_a, out_b).conjugate());
        }
        double f = 0.0;
        for (const auto &ka : scheme.enc_a.kraus()) {
            const ComplexMatrix am = ka * m;
            for (const auto &kb : scheme.enc_b.kraus()) {
                const ComplexMatrix h = am * kb.transpose();
                for (const auto &gd : g) {
                    f += std::norm(gd.cwiseProduct(h).sum());
                }
            }
        }
        return f;
    };
    FidelityReport rep = detail::average_over_sequences(e, scheme.n, opt, eval);
    rep.rate_a = scheme.rate_a();
    rep.rate_b = scheme.rate_b();
    return rep;
}

// ---------------------------------------------------------------------------
// Product codec: per-copy pre-processing, typical-subspace compression on each
// side, per-copy joint post-processing. Evaluated without materializing.
// ---------------------------------------------------------------------------

class ProductCodecScheme {
  public:
    /// pre_a: d_A -> a', pre_b: d_B -> b', post: a' b' -> d_A d_B (joint index a * d_B + b),
    /// compressors built on the average pre-processed local states of e.
    ProductCodecScheme(const BipartiteEnsemble &e, std::size_t n, double delta, QuantumChannel pre_a, QuantumChannel pre_b,
                       QuantumChannel post, const Tolerances &tol = kDefaultTolerances)
        : n_(n), d_a_(e.d_a()), d_b_(e.d_b()), pre_a_(std::move(pre_a)), pre_b_(std::move(pre_b)), post_(std::move(post)),
          comp_a_(pre_average(e, Side::A, pre_a_, tol), n, delta, tol),
          comp_b_(pre_average(e, Side::B, pre_b_, tol), n, delta, tol) {
        if (pre_a_.dim_in() != d_a_ || pre_b_.dim_in() != d_b_) {
            throw DimensionError("ProductCodecScheme: pre-processing inputs must match the local dimensions");
        }
        if (post_.dim_in() != pre_a_.dim_out() * pre_b_.dim_out() || post_.dim_out() != d_a_ * d_b_) {
            throw DimensionError("ProductCodecScheme: post-processing dimensions do not chain");
        }
    }

    std::size_t n() const {
        return n_;
    }
    const TypicalCompressor &compressor_a() const {
        return comp_a_;
    }
    const TypicalCompressor &compressor_b() const {
        return comp_b_;
    }
    double rate_a() const {
        return comp_a_.rate();
    }
    double rate_b() const {
        return comp_b_.rate();
    }

    /// Exact (or sampled) ensemble fidelity; requires a product-state ensemble.
    FidelityReport fidelity(const BipartiteEnsemble &e, const FidelityOptions &opt = {}) const {
        if (e.d_a() != d_a_ || e.d_b() != d_b_) {
            throw DimensionError("ProductCodecScheme::fidelity: ensemble dimensions differ");
        }
        const std::vector<CopyOptions> per_state = copy_options(e);
        auto eval = [&](const std::vector<std::size_t> &seq) { return sequence_fidelity(per_state, seq); };
        FidelityReport rep = detail::average_over_sequences(e, n_, opt, eval);
        rep.rate_a = rate_a();
        rep.rate_b = rate_b();
        return rep;
    }

    /// The same scheme as dense channels, for small n.
    LocalScheme materialize() const {
        const auto [ca_enc, ca_dec] = comp_a_.materialize();
        const auto [cb_enc, cb_dec] = comp_b_.materialize();
        QuantumChannel enc_a = QuantumChannel::compose(ca_enc, detail::tensor_power(pre_a_, n_));
        QuantumChannel enc_b = QuantumChannel::compose(cb_enc, detail::tensor_power(pre_b_, n_));
        const QuantumChannel inner = QuantumChannel::tensor(ca_dec, cb_dec);
        const QuantumChannel post_n = detail::tensor_power(post_, n_);
        const auto perm_in = detail::block_to_interleaved(pre_a_.dim_out(), pre_b_.dim_out(), n_);
        const auto perm_out = detail::block_to_interleaved(d_a_, d_b_, n_);
        std::vector<ComplexMatrix> ks;
        for (const auto &k : post_n.kraus()) {
            ComplexMatrix blk(k.rows(), k.cols());
            for (std::size_t r = 0; r < perm_out.size(); ++r) {
                for (std::size_t c = 0; c < perm_in.size(); ++c) {
                    blk(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        k(static_cast<Eigen::Index>(perm_out[r]), static_cast<Eigen::Index>(perm_in[c]));
                }
            }
            ks.push_back(std::move(blk));
        }
        const QuantumChannel post_block(post_n.dim_in(), post_n.dim_out(), std::move(ks));
        return LocalScheme{n_, d_a_, d_b_, std::move(enc_a), std::move(enc_b), QuantumChannel::compose(post_block, inner)};
    }

  private:
    struct SchmidtTerm {
        double sigma;
        ComplexVector a;
        ComplexVector b;
    };
    /// One nonzero combination of per-copy Kraus choices for one source state.
    struct CopyOption {
        ComplexVector alpha;
        ComplexVector beta;
        std::vector<SchmidtTerm> g;
    };
    using CopyOptions = std::vector<CopyOption>;

    static DensityOperator pre_average(const BipartiteEnsemble &e, Side side, const QuantumChannel &pre, const Tolerances &tol) {
        if (!is_product_ensemble(e)) {
            throw ContractError("ProductCodecScheme: ensemble states must be product states");
        }
        return apply_channel(pre, average_state(reduced_ensemble(e, side, tol), tol), tol);
    }

    std::vector<CopyOptions> copy_options(const BipartiteEnsemble &e) const {
        if (!is_product_ensemble(e)) {
            throw ContractError("ProductCodecScheme::fidelity: ensemble states must be product states");
        }
        const auto da2 = static_cast<Eigen::Index>(pre_a_.dim_out());
        const auto db2 = static_cast<Eigen::Index>(pre_b_.dim_out());
        std::vector<CopyOptions> out;
        for (std::size_t i = 0; i < e.size(); ++i) {
            Eigen::JacobiSVD<ComplexMatrix> svd(e.coefficient_matrix(i), Eigen::ComputeFullU | Eigen::ComputeFullV);
            const ComplexVector phi = svd.matrixU().col(0);
            const ComplexVector psi = svd.matrixV().col(0).conjugate() * svd.singularValues()(0);
            const ComplexVector joint = e[i].state;
            CopyOptions opts;
            std::vector<std::vector<SchmidtTerm>> gs;
            for (const auto &d : post_.kraus()) {
                const ComplexVector g = d.adjoint() * joint;
                if (g.norm() < 1e-14) {
                    continue;
                }
                Eigen::JacobiSVD<ComplexMatrix> gsvd(detail::unflatten(g, da2, db2), Eigen::ComputeFullU | Eigen::ComputeFullV);
                std::vector<SchmidtTerm> terms;
                for (Eigen::Index t = 0; t < gsvd.singularValues().size(); ++t) {
                    const double s = gsvd.singularValues()(t);
                    if (s > 1e-14) {
                        terms.push_back({s, gsvd.matrixU().col(t), gsvd.matrixV().col(t).conjugate()});
                    }
                }
                gs.push_back(std::move(terms));
            }
            for (const auto &ka : pre_a_.kraus()) {
                const ComplexVector alpha = ka * phi;
                if (alpha.norm() < 1e-14) {
                    continue;
                }
                for (const auto &kb : pre_b_.kraus()) {
                    const ComplexVector beta = kb * psi;
                    if (beta.norm() < 1e-14) {
                        continue;
                    }
                    for (const auto &g : gs) {
                        opts.push_back({alpha, beta, g});
                    }
                }
            }
            out.push_back(std::move(opts));
        }
        return out;
    }

    double sequence_fidelity(const std::vector<CopyOptions> &per_state, const std::vector<std::size_t> &seq) const {
        std::vector<std::size_t> choice(n_, 0), term(n_, 0);
        std::vector<ComplexVector> alpha(n_), beta(n_), a(n_), b(n_);
        double total = 0.0;
        // Odometer over per-copy option choices.
        while (true) {
            for (std::size_t k = 0; k < n_; ++k) {
                const CopyOption &o = per_state[seq[k]][choice[k]];
                alpha[k] = o.alpha;
                beta[k] = o.beta;
            }
            const double norm_a = product_norm_sq(alpha);
            const double norm_b = product_norm_sq(beta);
            const double mass_a = comp_a_.projected_overlap(alpha, alpha).real();
            const double mass_b = comp_b_.projected_overlap(beta, beta).real();
            // Coherent sums over Schmidt-term strings.
            Complex pp = 0.0, pf = 0.0, fp = 0.0, ff = 0.0;
            std::fill(term.begin(), term.end(), 0);
            while (true) {
                double sigma = 1.0;
                for (std::size_t k = 0; k < n_; ++k) {
                    const SchmidtTerm &t = per_state[seq[k]][choice[k]].g[term[k]];
                    sigma *= t.sigma;
                    a[k] = t.a;
                    b[k] = t.b;
                }
                const Complex ap = comp_a_.projected_overlap(a, alpha);
                const Complex bp = comp_b_.projected_overlap(b, beta);
                const Complex af = comp_a_.fallback_overlap(a);
                const Complex bf = comp_b_.fallback_overlap(b);
                pp += sigma * ap * bp;
                pf += sigma * ap * bf;
                fp += sigma * af * bp;
                ff += sigma * af * bf;
                if (!advance(term, [&](std::size_t k) { return per_state[seq[k]][choice[k]].g.size(); })) {
                    break;
                }
            }
            const double atyp_a = std::max(0.0, norm_a - mass_a);
            const double atyp_b = std::max(0.0, norm_b - mass_b);
            total += std::norm(pp) + atyp_b * std::norm(pf) + atyp_a * std::norm(fp) + atyp_a * atyp_b * std::norm(ff);
            if (!advance(choice, [&](std::size_t k) { return per_state[seq[k]].size(); })) {
                break;
            }
        }
        return total;
    }

    template <typename Size>
    static bool advance(std::vector<std::size_t> &digits, Size &&size) {
        for (std::size_t k = digits.size(); k-- > 0;) {
            if (++digits[k] < size(k)) {
                return true;
            }
            digits[k] = 0;
        }
        return false;
    }

    static double product_norm_sq(const std::vector<ComplexVector> &v) {
        double out = 1.0;
        for (const auto &x : v) {
            out *= x.squaredNorm();
        }
        return out;
    }

    std::size_t n_;
    std::size_t d_a_;
    std::size_t d_b_;
    QuantumChannel pre_a_;
    QuantumChannel pre_b_;
    QuantumChannel post_;
    TypicalCompressor comp_a_;
    TypicalCompressor comp_b_;
};

/// Per-copy channels of the hidden-orthogonality protocol.
struct HiddenOrthogonalityMaps {
    /// Bob, C^3 -> C^2: project onto |2>; on that outcome output |0>.
    QuantumChannel bob_pre;
    /// Decoder, C^2 (x) C^2 -> C^2 (x) C^3: project onto |10>; on that outcome output |phi_3>|psi_3>.
    QuantumChannel post;
};

inline HiddenOrthogonalityMaps hidden_orthogonality_maps(double alpha, double beta) {
    const auto v = builtin::hidden_orthogonality_vectors(alpha, beta);
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 3), k1 = ComplexMatrix::Zero(2, 3);
    k0(0, 2) = 1.0;
    k1(0, 0) = 1.0;
    k1(1, 1) = 1.0;
    ComplexMatrix d0 = ComplexMatrix::Zero(6, 4), d1 = ComplexMatrix::Zero(6, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (a == 1 && b == 0) {
                continue;
            }
            d0(a * 3 + b, a * 2 + b) = 1.0;
        }
    }
    d1.col(2) = tensor(v.alice[2], v.bob[2]);
    return {QuantumChannel(3, 2, {k0, k1}), QuantumChannel(4, 6, {d0, d1})};
}

/// Alice: Schumacher compression of E_A. Bob: the |2> -> |0> map per copy, then
/// Schumacher compression of the resulting average. Decoder: decompress, then
/// the per-copy |10> projection with the |10> branch replaced by |phi_3>|psi_3>.
/// delta = +infinity gives full-rate (uncompressed) encoders.
inline ProductCodecScheme hidden_orthogonality_scheme(double alpha, double beta, std::size_t n, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
        throw ContractError("hidden_orthogonality_scheme: alpha and beta must lie strictly between 0 and 1");
    }
    const BipartiteEnsemble e = builtin::hidden_orthogonality(alpha, beta);
    HiddenOrthogonalityMaps maps = hidden_orthogonality_maps(alpha, beta);
    return ProductCodecScheme(e, n, delta, QuantumChannel::identity(2), std::move(maps.bob_pre), std::move(maps.post));
}

/// Asymptotic rates of the hidden-orthogonality protocol: S(E_A) and the entropy of
/// Bob's average state after the per-copy |2> -> |0> map.
inline RatePoint hidden_orthogonality_rates(double alpha, double beta, const Tolerances &tol = kDefaultTolerances) {
    const BipartiteEnsemble e = builtin::hidden_orthogonality(alpha, beta);
    const HiddenOrthogonalityMaps maps = hidden_orthogonality_maps(alpha, beta);
    const DensityOperator rho_a = average_state(reduced_ensemble(e, Side::A, tol), tol);
    const DensityOperator rho_b = apply_channel(maps.bob_pre, average_state(reduced_ensemble(e, Side::B, tol), tol), tol);
    return {vn_entropy(rho_a, tol), vn_entropy(rho_b, tol)};
}

// ---------------------------------------------------------------------------
// Erasure correctability
// ---------------------------------------------------------------------------

struct ErasureReport {
    std::size_t position = 0;
    bool correctable = false;
    /// Residuals for I, X, Y, Z at the position.
    std::array<double, 4> residuals{};
};

inline ComplexMatrix pauli(int which) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (which) {
        case 0:
            m(0, 0) = m(1, 1) = 1.0;
            break;
        case 1:
            m(0, 1) = m(1, 0) = 1.0;
            break;
        case 2:
            m(0, 1) = Complex(0.0, -1.0);
            m(1, 0) = Complex(0.0, 1.0);
            break;
        default:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

/// Condition ||P A_q P - (Tr(P A_q P)/Tr P) P||_1 <= 1e-8 for A in {I, X, Y, Z}.
/// Qubit 1 is the most significant.
inline ErasureReport erasure_correctable(std::span<const ComplexVector> basis, std::size_t q,
                                         const Tolerances &tol = kDefaultTolerances) {
    if (basis.empty()) {
        throw ContractError("erasure_correctable: empty code basis");
    }
    const auto dim = static_cast<std::size_t>(basis[0].size());
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < dim) {
        ++qubits;
    }
    if ((std::size_t{1} << qubits) != dim) {
        throw DimensionError("erasure_correctable: vector length is not a power of two");
    }
    if (q < 1 || q > qubits) {
        throw ContractError("erasure_correctable: position " + std::to_string(q) + " outside 1.." + std::to_string(qubits));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (static_cast<std::size_t>(basis[i].size()) != dim) {
            throw DimensionError("erasure_correctable: basis vectors have different lengths");
        }
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(basis[i].dot(basis[j]) - want) > 1e-9) {
                throw ContractError("erasure_correctable: code basis is not orthonormal");
            }
        }
        p += basis[i] * basis[i].adjoint();
    }
    ErasureReport rep{q, true, {}};
    const double trp = p.trace().real();
    for (int w = 0; w < 4; ++w) {
        ComplexMatrix op = ComplexMatrix::Identity(1, 1);
        for (std::size_t k = 1; k <= qubits; ++k) {
            op = tensor(op, k == q ? pauli(w) : ComplexMatrix(ComplexMatrix::Identity(2, 2)));
        }
        const ComplexMatrix pap = p * op * p;
        const Complex c = pap.trace() / trp;
        ComplexMatrix r = pap - c * p;
        r = 0.5 * (r + r.adjoint());
        rep.residuals[static_cast<std::size_t>(w)] = trace_norm_hermitian(r, tol);
        if (rep.residuals[static_cast<std::size_t>(w)] > 1e-8) {
            rep.correctable = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Gentle measurement
// ---------------------------------------------------------------------------

struct GentleMeasurementReport {
    double lambda = 0.0;
    double bound = 0.0;
    std::vector<double> error;
    std::vector<double> disturbance;
    bool within_bound = true;
};

/// For states rho_a identified by effect E_{assignment[a]} with error at most lambda,
/// computes ||rho_a - sum_b sqrt(E_b) rho_a sqrt(E_b)||_1 against sqrt(8 lambda) + lambda.
inline GentleMeasurementReport gentle_measurement_check(std::span<const DensityOperator> states, const Povm &povm,
                                                        std::span<const std::size_t> assignment, double lambda,
                                                        const Tolerances &tol = kDefaultTolerances) {
    if (assignment.size() != states.size()) {
        throw ContractError("gentle_measurement_check: one assignment per state required");
    }
    if (!(lambda >= 0.0)) {
        throw ContractError("gentle_measurement_check: lambda must be non-negative");
    }
    std::vector<ComplexMatrix> roots;
    for (const auto &e : povm.effects()) {
        roots.push_back(psd_sqrt(0.5 * (e + e.adjoint()), tol));
    }
    GentleMeasurementReport rep;
    rep.lambda = lambda;
    rep.bound = std::sqrt(8.0 * lambda) + lambda;
    for (std::size_t a = 0; a < states.size(); ++a) {
        if (states[a].dim() != povm.dim()) {
            throw DimensionError("gentle_measurement_check: state " + std::to_string(a) + " has the wrong dimension");
        }
        if (assignment[a] >= povm.effects().size()) {
            throw ContractError("gentle_measurement_check: assignment of state " + std::to_string(a) + " out of range");
        }
        const double err = 1.0 - (states[a].matrix() * povm.effects()[assignment[a]]).trace().real();
        if (err > lambda + 1e-12) {
            throw ContractError("gentle_measurement_check: state " + std::to_string(a) + " has identification error " +
                                std::to_string(err) + " > lambda = " + std::to_string(lambda));
        }
        ComplexMatrix post = ComplexMatrix::Zero(states[a].matrix().rows(), states[a].matrix().cols());
        for (const auto &r : roots) {
            post += r * states[a].matrix() * r;
        }
        ComplexMatrix diff = states[a].matrix() - post;
        diff = 0.5 * (diff + diff.adjoint());
        const double dist = trace_norm_hermitian(diff, tol);
        rep.error.push_back(err);
        rep.disturbance.push_back(dist);
        if (dist > rep.bound + 1e-8) {
            rep.within_bound = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bell-hashing protocol as a local scheme on qubits
// ---------------------------------------------------------------------------

namespace detail {

/// The compiled gate sequence as one party's n-qubit unitary (qubit i = pair i, qubit 0 most significant).
inline ComplexMatrix party_unitary(std::span<const Gate> gates, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    const double r = 1.0 / std::sqrt(2.0);
    for (const Gate &g : gates) {
        ComplexMatrix gm = ComplexMatrix::Zero(d, d);
        const std::size_t tbit = std::size_t{1} << (n - 1 - g.target);
        if (g.kind == Gate::hadamard) {
            for (std::size_t x = 0; x < dim; ++x) {
                const std::size_t x0 = x & ~tbit;
                const std::size_t x1 = x | tbit;
                const bool one = (x & tbit) != 0;
                gm(static_cast<Eigen::Index>(x0), static_cast<Eigen::Index>(x)) += r;
                gm(static_cast<Eigen::Index>(x1), static_cast<Eigen::Index>(x)) += one ? -r : r;
            }
        } else {
            const std::size_t cbit = std::size_t{1} << (n - 1 - g.control);
            for (std::size_t x = 0; x < dim; ++x) {
                const std::size_t y = (x & cbit) ? (x ^ tbit) : x;
                gm(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = 1.0;
            }
        }
        u = gm * u;
    }
    return u;
}

/// Product of Bell states with the given labels, in block order (Alice's qubits, then Bob's).
inline ComplexVector bell_product_block(const LabelString &x) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < x.n; ++i) {
        const ComplexVector v = label_to_state(x.label(i));
        ComplexMatrix c(2, 2);
        c << v(0), v(1), v(2), v(3);
        m = tensor(m, c);
    }
    return flatten(m);
}

}  // namespace detail

/// The compiled protocol as (E_A, E_B, D): both parties apply the schedule's
/// bilateral gates and discard the W pairs; the decoder measures the channel
/// pairs in the Bell-product basis and prepares the decoded label string. On a
/// tie the decoder prepares the first maximizer.
inline LocalScheme bell_protocol_channel_view(const MaskSchedule &schedule, std::span<const double> p,
                                              const DecodeOptions &opt = {}) {
    if (schedule.mode != MaskMode::compiled) {
        throw ContractError("bell_protocol_channel_view: the qubit-level view requires a compiled schedule");
    }
    const std::size_t n = schedule.n, m = schedule.m;
    if (n > 6) {
        throw CapacityError("bell_protocol_channel_view: n = " + std::to_string(n) + " exceeds the statevector limit of 6");
    }
    const std::size_t dim_n = std::size_t{1} << n;
    const std::size_t dim_c = std::size_t{1} << m;
    const std::size_t dim_w = std::size_t{1} << (n - m);
    const double entries = static_cast<double>(dim_c * dim_c) * static_cast<double>(dim_n * dim_n) * static_cast<double>(dim_c * dim_c);
    if (entries > static_cast<double>(std::size_t{1} << 24)) {
        throw CapacityError("bell_protocol_channel_view: decoder representation too large for n = " + std::to_string(n) +
                            ", m = " + std::to_string(m));
    }
    const auto gates = gate_sequence(schedule);
    const ComplexMatrix u = detail::party_unitary(gates, n);
    std::vector<ComplexMatrix> enc;
    for (std::size_t w = 0; w < dim_w; ++w) {
        ComplexMatrix k(static_cast<Eigen::Index>(dim_c), static_cast<Eigen::Index>(dim_n));
        for (std::size_t c = 0; c < dim_c; ++c) {
            k.row(static_cast<Eigen::Index>(c)) = u.row(static_cast<Eigen::Index>(c * dim_w + w));
        }
        enc.push_back(std::move(k));
    }
    const ObservationSystem sys = compile_protocol(schedule);
    std::vector<ComplexMatrix> dec;
    const std::size_t outcomes = std::size_t{1} << (2 * m);
    for (std::size_t o = 0; o < outcomes; ++o) {
        const BitVec obs = BitVec::from_u64(2 * m, o);
        const DecodeResult r = decode(obs, sys, p, opt);
        const ComplexVector meas = detail::bell_product_block(LabelString(m, obs));
        const ComplexVector prep = detail::bell_product_block(r.candidate);
        dec.push_back(prep * meas.adjoint());
    }
    QuantumChannel enc_a(dim_n, dim_c, enc);
    QuantumChannel enc_b(dim_n, dim_c, std::move(enc));
    return LocalScheme{n, 2, 2, std::move(enc_a), std::move(enc_b), QuantumChannel(dim_c * dim_c, dim_n * dim_n, std::move(dec))};
}

}  // namespace dqc
