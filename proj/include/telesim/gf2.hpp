#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace telesim {

// Dense bit vector over GF(2), packed into 64-bit words.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    size_t num_words() const { return w_.size(); }
    uint64_t word(size_t k) const { return w_[k]; }
    uint64_t &word(size_t k) { return w_[k]; }
    const uint64_t *data() const { return w_.data(); }
    uint64_t *data() { return w_.data(); }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            w_[i >> 6] |= m;
        } else {
            w_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

    BitVec &operator^=(const BitVec &o);
    BitVec &operator&=(const BitVec &o);
    BitVec &operator|=(const BitVec &o);
    friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec &b) { return a &= b; }
    bool operator==(const BitVec &o) const { return n_ == o.n_ && w_ == o.w_; }

    bool any() const;
    size_t popcount() const;
    // Parity of the bitwise AND, i.e. the GF(2) inner product.
    bool dot(const BitVec &o) const;
    std::vector<size_t> ones() const;
    // Index of the lowest set bit, or size() if none.
    size_t first_one() const;
    void clear();
    std::string str() const;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

size_t gf2_rank(std::vector<BitVec> rows);

// Basis of {x : r.x = 0 for every row r}.
std::vector<BitVec> gf2_nullspace(const std::vector<BitVec> &rows, size_t num_vars);

// Reduces a system of linear equations once, then answers many right-hand sides.
// Equation i reads rows[i] . x = rhs[i].
class Gf2Solver {
   public:
    Gf2Solver(const std::vector<BitVec> &rows, size_t num_vars);
    size_t rank() const { return pivots_.size(); }
    std::optional<BitVec> solve(const BitVec &rhs) const;

   private:
    size_t num_vars_;
    size_t num_eqs_;
    std::vector<BitVec> reduced_;    // reduced rows (first rank() are pivot rows)
    std::vector<BitVec> combo_;      // which original equations each reduced row sums
    std::vector<size_t> pivots_;
};

}  // namespace telesim
