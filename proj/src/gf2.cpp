#include "telesim/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace telesim {

BitVec &BitVec::operator^=(const BitVec &o) {
    for (size_t k = 0; k < w_.size(); k++) w_[k] ^= o.w_[k];
    return *this;
}

BitVec &BitVec::operator&=(const BitVec &o) {
    for (size_t k = 0; k < w_.size(); k++) w_[k] &= o.w_[k];
    return *this;
}

BitVec &BitVec::operator|=(const BitVec &o) {
    for (size_t k = 0; k < w_.size(); k++) w_[k] |= o.w_[k];
    return *this;
}

bool BitVec::any() const {
    for (uint64_t w : w_) {
        if (w) return true;
    }
    return false;
}

size_t BitVec::popcount() const {
    size_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
}

bool BitVec::dot(const BitVec &o) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < w_.size(); k++) acc ^= w_[k] & o.w_[k];
    return std::popcount(acc) & 1;
}

std::vector<size_t> BitVec::ones() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < w_.size(); k++) {
        uint64_t w = w_[k];
        while (w) {
            out.push_back(k * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

size_t BitVec::first_one() const {
    for (size_t k = 0; k < w_.size(); k++) {
        if (w_[k]) return k * 64 + std::countr_zero(w_[k]);
    }
    return n_;
}

void BitVec::clear() {
    for (auto &w : w_) w = 0;
}

std::string BitVec::str() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

size_t gf2_rank(std::vector<BitVec> rows) {
    size_t rank = 0;
    if (rows.empty()) return 0;
    size_t n = rows[0].size();
    for (size_t col = 0; col < n && rank < rows.size(); col++) {
        size_t piv = rank;
        while (piv < rows.size() && !rows[piv].get(col)) piv++;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
        }
        rank++;
    }
    return rank;
}

std::vector<BitVec> gf2_nullspace(const std::vector<BitVec> &rows_in, size_t num_vars) {
    std::vector<BitVec> rows = rows_in;
    std::vector<size_t> pivot_of_row;
    std::vector<bool> is_pivot(num_vars, false);
    size_t rank = 0;
    for (size_t col = 0; col < num_vars && rank < rows.size(); col++) {
        size_t piv = rank;
        while (piv < rows.size() && !rows[piv].get(col)) piv++;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
        }
        pivot_of_row.push_back(col);
        is_pivot[col] = true;
        rank++;
    }
    std::vector<BitVec> basis;
    for (size_t f = 0; f < num_vars; f++) {
        if (is_pivot[f]) continue;
        BitVec v(num_vars);
        v.set(f);
        for (size_t r = 0; r < rank; r++) {
            if (rows[r].get(f)) v.set(pivot_of_row[r]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

Gf2Solver::Gf2Solver(const std::vector<BitVec> &rows, size_t num_vars)
    : num_vars_(num_vars), num_eqs_(rows.size()), reduced_(rows) {
    combo_.reserve(num_eqs_);
    for (size_t i = 0; i < num_eqs_; i++) {
        if (rows[i].size() != num_vars) throw std::invalid_argument("Gf2Solver: row width mismatch");
        BitVec c(num_eqs_);
        c.set(i);
        combo_.push_back(std::move(c));
    }
    size_t rank = 0;
    for (size_t col = 0; col < num_vars_ && rank < num_eqs_; col++) {
        size_t piv = rank;
        while (piv < num_eqs_ && !reduced_[piv].get(col)) piv++;
        if (piv == num_eqs_) continue;
        std::swap(reduced_[rank], reduced_[piv]);
        std::swap(combo_[rank], combo_[piv]);
        for (size_t r = 0; r < num_eqs_; r++) {
            if (r != rank && reduced_[r].get(col)) {
                reduced_[r] ^= reduced_[rank];
                combo_[r] ^= combo_[rank];
            }
        }
        pivots_.push_back(col);
        rank++;
    }
}

std::optional<BitVec> Gf2Solver::solve(const BitVec &rhs) const {
    if (rhs.size() != num_eqs_) throw std::invalid_argument("Gf2Solver: rhs size mismatch");
    for (size_t r = pivots_.size(); r < num_eqs_; r++) {
        if (combo_[r].dot(rhs)) return std::nullopt;
    }
    BitVec x(num_vars_);
    for (size_t r = 0; r < pivots_.size(); r++) {
        if (combo_[r].dot(rhs)) x.set(pivots_[r]);
    }
    return x;
}

}  // namespace telesim
