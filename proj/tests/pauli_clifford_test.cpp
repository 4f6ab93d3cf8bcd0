#include "telesim/pauli_clifford.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <set>

using namespace telesim;
using M2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

namespace {

M2 dense(const ExactUnitary2 &u) {
    M2 r;
    double s = std::pow(2.0, -u.k / 2.0);
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) r(i, j) = cd(double(u.m[i][j].re), double(u.m[i][j].im)) * s;
    }
    return r;
}

M2 dense_pauli(Pauli p) {
    M2 r;
    switch (p) {
        case Pauli::I: r << 1, 0, 0, 1; break;
        case Pauli::X: r << 0, 1, 1, 0; break;
        case Pauli::Y: r << 0, cd(0, -1), cd(0, 1), 0; break;
        case Pauli::Z: r << 1, 0, 0, -1; break;
    }
    return r;
}

M2 strip_phase(const M2 &m) {
    for (int i = 0; i < 4; i++) {
        cd v = m(i / 2, i % 2);
        if (std::abs(v) > 1e-6) return m * (std::abs(v) / v);
    }
    return m;
}

// Independent enumeration of the single-qubit Clifford group in floating point.
std::vector<M2> oracle_cliffords() {
    M2 h, s;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    s << 1, 0, 0, cd(0, 1);
    std::vector<M2> out = {M2::Identity()};
    for (size_t i = 0; i < out.size(); i++) {
        for (const M2 &g : {h, s}) {
            M2 c = strip_phase(g * out[i]);
            bool dup = false;
            for (auto &o : out) dup = dup || (c - o).norm() < 1e-9;
            if (!dup) out.push_back(c);
        }
    }
    return out;
}

}  // namespace

TEST(PauliClass, xor_composition_and_phase) {
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            Pauli pa = static_cast<Pauli>(a), pb = static_cast<Pauli>(b);
            M2 prod = dense_pauli(pa) * dense_pauli(pb);
            cd phase = std::pow(cd(0, 1), pauli_product_phase(pa, pb));
            EXPECT_LT((prod - phase * dense_pauli(pa * pb)).norm(), 1e-12);
            EXPECT_EQ(pauli_commute(pa, pb), (prod - dense_pauli(pb) * dense_pauli(pa)).norm() < 1e-12);
        }
    }
    EXPECT_EQ(pauli_from_bits(1, 0), Pauli::Z);
    EXPECT_EQ(pauli_from_bits(0, 1), Pauli::X);
    EXPECT_EQ(pauli_from_bits(1, 1), Pauli::Y);
}

TEST(GroupTable, closure_has_24_classes) {
    EXPECT_EQ(oracle_cliffords().size(), 24u);
    const GroupTable &g = group();
    std::set<std::array<int, 4>> keys;
    for (auto &f : g.form) keys.insert(f.key());
    EXPECT_EQ(keys.size(), 24u);
    EXPECT_EQ(g.identity, 0);
}

TEST(GroupTable, small_identities) {
    const GroupTable &g = group();
    EXPECT_EQ(compose(g.s, g.s), pauli_clifford(Pauli::Z));
    EXPECT_EQ(compose(g.h, g.h), g.identity);
    EXPECT_EQ(conjugate_pauli(g.h, Pauli::X), (SignedPauli{Pauli::Z, false}));
    EXPECT_EQ(conjugate_pauli(g.s, Pauli::X), (SignedPauli{Pauli::Y, false}));
    for (int c = 0; c < 24; c++) EXPECT_EQ(conjugate_pauli(Clifford(c), Pauli::I), (SignedPauli{Pauli::I, false}));
    EXPECT_TRUE(trace_is_zero(pauli_clifford(Pauli::X)));
    EXPECT_FALSE(trace_is_zero(g.identity));
    EXPECT_TRUE(trace_is_zero(g.h));
}

TEST(GroupTable, abs_trace_sq_matches_float_oracle) {
    std::map<int, int> oracle;
    for (auto &m : oracle_cliffords()) oracle[int(std::lround(std::norm(m.trace())))]++;
    std::map<int, int> table;
    for (int c = 0; c < 24; c++) table[abs_trace_sq(Clifford(c))]++;
    EXPECT_EQ(table, oracle);
    // Frozen from the oracle: the order-3 classes have |tr|^2 = 1.
    EXPECT_EQ(table, (std::map<int, int>{{0, 9}, {1, 8}, {2, 6}, {4, 1}}));
    for (int c = 0; c < 24; c++) EXPECT_EQ(trace_is_zero(Clifford(c)), abs_trace_sq(Clifford(c)) == 0);
}

TEST(GroupTable, conj_matches_dense_conjugation) {
    const GroupTable &g = group();
    for (int c = 0; c < 24; c++) {
        M2 u = dense(g.rep[c]);
        for (int p = 0; p < 4; p++) {
            SignedPauli sp = g.conj[c][p];
            M2 want = dense_pauli(sp.p) * (sp.neg ? -1.0 : 1.0);
            EXPECT_LT((u * dense_pauli(Pauli(p)) * u.adjoint() - want).norm(), 1e-12);
        }
        // X, Y, Z are permuted up to sign.
        std::set<int> imgs;
        for (int p = 1; p < 4; p++) imgs.insert(int(g.conj[c][p].p));
        EXPECT_EQ(imgs, (std::set<int>{1, 2, 3}));
    }
}

TEST(GroupTable, random_associativity_and_exact_products) {
    const GroupTable &g = group();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick(0, 23);
    for (int t = 0; t < 10000; t++) {
        Clifford a = pick(rng), b = pick(rng), c = pick(rng);
        ASSERT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
        ExactUnitary2 prod = (g.rep[a] * g.rep[b]).reduced();
        ASSERT_TRUE(prod.phase_equal(g.rep[compose(a, b)]));
        for (int p = 0; p < 4; p++) {
            SignedPauli inner = conjugate_pauli(b, Pauli(p));
            SignedPauli outer = conjugate_pauli(a, inner.p);
            SignedPauli direct = conjugate_pauli(compose(a, b), Pauli(p));
            ASSERT_EQ(direct.p, outer.p);
            ASSERT_EQ(direct.neg, inner.neg != outer.neg);
        }
    }
    for (int c = 0; c < 24; c++) {
        EXPECT_EQ(compose(Clifford(c), inverse(Clifford(c))), g.identity);
        EXPECT_EQ(compose(inverse(Clifford(c)), Clifford(c)), g.identity);
    }
}

TEST(GroupTable, pauli_basis_completeness) {
    for (int c = 0; c < 24; c++) {
        int sum = 0;
        for (int p = 0; p < 4; p++) sum += abs_trace_sq(compose(pauli_clifford(Pauli(p)), Clifford(c)));
        EXPECT_EQ(sum, 4) << "class " << c;
    }
}

TEST(GroupTable, words_reproduce_classes) {
    const GroupTable &g = group();
    for (int c = 0; c < 24; c++) {
        Clifford acc = g.identity;
        for (Gen w : g.word[c]) {
            Clifford gc = w == Gen::H ? g.h : w == Gen::S ? g.s : w == Gen::X ? pauli_clifford(Pauli::X) : pauli_clifford(Pauli::Z);
            acc = compose(gc, acc);
        }
        EXPECT_EQ(acc, c);
        EXPECT_EQ(int(g.word[c].size()), g.bfs_level[c]);
    }
    for (int c = 1; c < 24; c++) EXPECT_LE(g.bfs_level[c - 1], g.bfs_level[c]);
}

TEST(ExactUnitary2, reduction_is_idempotent_and_preserves_trace) {
    const GroupTable &g = group();
    for (int a = 0; a < 24; a++) {
        for (int b = 0; b < 24; b++) {
            ExactUnitary2 p = g.rep[a] * g.rep[b] * ExactUnitary2::hadamard() * ExactUnitary2::hadamard();
            ExactUnitary2 r = p.reduced();
            EXPECT_TRUE(r.reduced() == r);
            EXPECT_EQ(r.abs_trace_sq(), p.abs_trace_sq());
            EXPECT_TRUE(r.phase_equal(p));
        }
    }
    EXPECT_EQ(ExactUnitary2::rotation(Pauli::X).abs_trace_sq(), Dyadic::make(2, 0));
}

TEST(Encoding, iota_completion_and_determinism) {
    EncodingMap e = enc_random(99);
    int in_image = 0;
    for (unsigned x = 0; x < 32; x++) {
        if (EncodingMap::in_image(x)) in_image++;
        EXPECT_LT(enc_apply(e, x), 24);
    }
    EXPECT_EQ(in_image, 24);
    for (int c = 0; c < 24; c++) EXPECT_EQ(enc_apply(e, EncodingMap::iota(Clifford(c))), c);
    EXPECT_EQ(enc_apply(e, EncodingMap::iota(group().h)), group().h);
    EXPECT_EQ(enc_random(99).completion, e.completion);
    EXPECT_EQ(parse_clifford(clifford_bits(group().h)), group().h);
    EXPECT_EQ(parse_clifford("sdg"), group().sdg);
}
