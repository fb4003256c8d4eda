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

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "dqc/errors.hpp"

namespace dqc {

/// Fixed-length vector over GF(2), packed into 64-bit words with bit k of the
/// vector stored at bit (k % 64) of word k / 64.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {
    }

    static BitVec from_string(const std::string &bits) {
        BitVec v(bits.size());
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (bits[k] == '1') {
                v.set(k, true);
            } else if (bits[k] != '0') {
                throw ParseError("BitVec: expected only '0' and '1'");
            }
        }
        return v;
    }

    static BitVec from_u64(std::size_t nbits, std::uint64_t value) {
        if (nbits > 64) {
            throw ContractError("BitVec::from_u64: more than 64 bits");
        }
        BitVec v(nbits);
        if (nbits > 0) {
            v.words_[0] = nbits == 64 ? value : value & ((std::uint64_t{1} << nbits) - 1);
        }
        return v;
    }

    std::size_t size() const {
        return nbits_;
    }
    std::size_t num_words() const {
        return words_.size();
    }
    const std::uint64_t *data() const {
        return words_.data();
    }
    std::uint64_t *data() {
        return words_.data();
    }

    bool get(std::size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1u;
    }
    void set(std::size_t k, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (k & 63);
        if (value) {
            words_[k >> 6] |= mask;
        } else {
            words_[k >> 6] &= ~mask;
        }
    }
    void flip(std::size_t k) {
        words_[k >> 6] ^= std::uint64_t{1} << (k & 63);
    }

    BitVec &operator^=(const BitVec &other) {
        require_same(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec &b) {
        a ^= b;
        return a;
    }

    /// Inner product over GF(2).
    bool dot(const BitVec &other) const {
        require_same(other);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            acc ^= words_[w] & other.words_[w];
        }
        return (std::popcount(acc) & 1) != 0;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool none() const {
        for (auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const BitVec &other) const = default;

    /// Bits [offset, offset + len) as a new vector.
    BitVec slice(std::size_t offset, std::size_t len) const {
        if (offset + len > nbits_) {
            throw DimensionError("BitVec::slice: out of range");
        }
        BitVec out(len);
        for (std::size_t k = 0; k < len; ++k) {
            out.set(k, get(offset + k));
        }
        return out;
    }

    std::string str() const {
        std::string s(nbits_, '0');
        for (std::size_t k = 0; k < nbits_; ++k) {
            if (get(k)) {
                s[k] = '1';
            }
        }
        return s;
    }

  private:
    void require_same(const BitVec &other) const {
        if (other.nbits_ != nbits_) {
            throw DimensionError("BitVec: length mismatch " + std::to_string(nbits_) + " vs " + std::to_string(other.nbits_));
        }
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense GF(2) matrix stored as packed rows.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {
    }
    explicit Gf2Matrix(std::vector<BitVec> rows, std::size_t cols) : cols_(cols), rows_(std::move(rows)) {
        for (const auto &r : rows_) {
            if (r.size() != cols_) {
                throw DimensionError("Gf2Matrix: row length mismatch");
            }
        }
    }

    std::size_t rows() const {
        return rows_.size();
    }
    std::size_t cols() const {
        return cols_;
    }
    const BitVec &row(std::size_t r) const {
        return rows_[r];
    }
    BitVec &row(std::size_t r) {
        return rows_[r];
    }
    bool get(std::size_t r, std::size_t c) const {
        return rows_[r].get(c);
    }
    void set(std::size_t r, std::size_t c, bool v) {
        rows_[r].set(c, v);
    }

    BitVec multiply(const BitVec &x) const {
        if (x.size() != cols_) {
            throw ContractError("Gf2Matrix::multiply: expected " + std::to_string(cols_) + " bits, got " +
                                std::to_string(x.size()));
        }
        BitVec out(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            out.set(r, rows_[r].dot(x));
        }
        return out;
    }

    bool operator==(const Gf2Matrix &other) const = default;

  private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Solution set {particular + span(kernel)} of M x = b.
struct AffineSolution {
    bool consistent = false;
    BitVec particular;
    /// One basis vector per free column, with a 1 at that column and 0 at the other free columns.
    std::vector<BitVec> kernel;
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> free_cols;
};

/// Gauss-Jordan elimination on the augmented system, choosing the leftmost pivot in each step.
inline AffineSolution solve_affine(const Gf2Matrix &m, const BitVec &rhs) {
    if (rhs.size() != m.rows()) {
        throw ContractError("solve_affine: rhs has " + std::to_string(rhs.size()) + " bits, matrix has " +
                            std::to_string(m.rows()) + " rows");
    }
    const std::size_t nc = m.cols();
    std::vector<BitVec> a;
    a.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        BitVec row(nc + 1);
        const BitVec &src = m.row(r);
        std::copy(src.data(), src.data() + src.num_words(), row.data());
        row.set(nc, rhs.get(r));
        a.push_back(std::move(row));
    }

    AffineSolution sol;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < nc && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && !a[piv].get(c)) {
            ++piv;
        }
        if (piv == a.size()) {
            continue;
        }
        std::swap(a[rank], a[piv]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r != rank && a[r].get(c)) {
                a[r] ^= a[rank];
            }
        }
        sol.pivot_cols.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < a.size(); ++r) {
        if (a[r].get(nc)) {
            return sol;
        }
    }
    sol.consistent = true;

    std::vector<bool> is_pivot(nc, false);
    for (auto c : sol.pivot_cols) {
        is_pivot[c] = true;
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (!is_pivot[c]) {
            sol.free_cols.push_back(c);
        }
    }
    sol.particular = BitVec(nc);
    for (std::size_t r = 0; r < rank; ++r) {
        sol.particular.set(sol.pivot_cols[r], a[r].get(nc));
    }
    for (auto f : sol.free_cols) {
        BitVec k(nc);
        k.set(f, true);
        for (std::size_t r = 0; r < rank; ++r) {
            if (a[r].get(f)) {
                k.set(sol.pivot_cols[r], true);
            }
        }
        sol.kernel.push_back(std::move(k));
    }
    return sol;
}

inline std::size_t gf2_rank(const Gf2Matrix &m) {
    return solve_affine(m, BitVec(m.rows())).pivot_cols.size();
}

}  // namespace dqc
