#pragma once

// Small dense state-vector simulator used as an independent oracle in tests.
// Qubit q is bit q of the basis index.

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "telesim/pauli_clifford.hpp"

namespace oracle {

using cd = std::complex<double>;
using State = Eigen::VectorXcd;
using M2 = Eigen::Matrix2cd;

inline M2 dense(const telesim::ExactUnitary2 &u) {
    M2 r;
    double s = std::pow(2.0, -u.k / 2.0);
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) r(i, j) = cd(double(u.m[i][j].re), double(u.m[i][j].im)) * s;
    }
    return r;
}

inline M2 clifford_matrix(telesim::Clifford c) { return dense(telesim::group().rep[c]); }
inline M2 pauli_matrix(telesim::Pauli p) { return dense(telesim::ExactUnitary2::pauli(p)); }

inline State zero_state(int n) {
    State s = State::Zero(Eigen::Index(1) << n);
    s(0) = 1;
    return s;
}

inline void apply1(State &s, int q, const M2 &m) {
    Eigen::Index bit = Eigen::Index(1) << q;
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if (i & bit) continue;
        cd a = s(i), b = s(i | bit);
        s(i) = m(0, 0) * a + m(0, 1) * b;
        s(i | bit) = m(1, 0) * a + m(1, 1) * b;
    }
}

inline void h(State &s, int q) {
    M2 m;
    m << 1, 1, 1, -1;
    apply1(s, q, m / std::sqrt(2.0));
}

inline void cnot(State &s, int c, int t) {
    Eigen::Index cb = Eigen::Index(1) << c, tb = Eigen::Index(1) << t;
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if ((i & cb) && !(i & tb)) std::swap(s(i), s(i | tb));
    }
}

inline void cz(State &s, int a, int b) {
    Eigen::Index ab = Eigen::Index(1) << a, bb = Eigen::Index(1) << b;
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if ((i & ab) && (i & bb)) s(i) = -s(i);
    }
}

inline void bell_pair(State &s, int a, int b) {
    h(s, a);
    cnot(s, a, b);
}

inline double prob_one(const State &s, int q) {
    Eigen::Index bit = Eigen::Index(1) << q;
    double p = 0;
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if (i & bit) p += std::norm(s(i));
    }
    return p;
}

// Projects qubit q onto the given outcome and renormalizes; returns the outcome probability.
inline double collapse(State &s, int q, bool outcome) {
    Eigen::Index bit = Eigen::Index(1) << q;
    double p = 0;
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if (bool(i & bit) != outcome) {
            s(i) = 0;
        } else {
            p += std::norm(s(i));
        }
    }
    if (p > 0) s /= std::sqrt(p);
    return p;
}

inline bool measure(State &s, int q, std::mt19937_64 &rng) {
    double p1 = prob_one(s, q);
    bool out = std::uniform_real_distribution<double>(0, 1)(rng) < p1;
    collapse(s, q, out);
    return out;
}

}  // namespace oracle
