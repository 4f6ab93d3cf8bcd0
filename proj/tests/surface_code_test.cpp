#include "telesim/surface_code.hpp"

#include <gtest/gtest.h>

#include "telesim/rng.hpp"

using namespace telesim;

namespace {

// Logical action of a transversal circuit on X-bar and Z-bar, as signed logical Paulis.
SignedPauli logical_image(const SurfaceCodePatch &p, const LayeredCircuit &c, Pauli in) {
    PauliString a = p.logical(in);
    a.conjugate(c);
    for (Pauli out : {Pauli::X, Pauli::Y, Pauli::Z}) {
        for (bool neg : {false, true}) {
            PauliString b = p.logical(out);
            b.neg = neg;
            if (logically_equal(p, a, b)) return {out, neg};
        }
    }
    return {Pauli::I, false};
}

BitVec sample_codeword(const SurfaceCodePatch &p, Rng &rng) {
    Tableau t = code_state(p, Pauli::Z);
    BitVec x(p.m);
    for (size_t q = 0; q < p.m; q++) x.set(q, t.measure_z(q, rng));
    return x;
}

}  // namespace

TEST(Patch, structure_small_distances) {
    for (int d : {1, 3, 5, 7}) {
        SurfaceCodePatch p = build_patch(d);
        PatchReport r = check_patch(p);
        EXPECT_TRUE(r.ok()) << "d=" << d;
        EXPECT_EQ(p.m, size_t(d * d + (d - 1) * (d - 1)));
        EXPECT_EQ(r.stabilizer_rank, p.m - 1);
        EXPECT_EQ(p.x_logical.size(), size_t(d));
    }
    EXPECT_THROW(build_patch(4), std::invalid_argument);
}

TEST(Patch, minimum_logical_weight_is_d) {
    for (int d : {3, 5}) {
        SurfaceCodePatch p = build_patch(d, false);
        for (bool xt : {true, false}) {
            EXPECT_EQ(min_logical_weight(p, xt, size_t(d)), size_t(d));
            EXPECT_EQ(min_logical_weight(p, xt, size_t(d - 1)), 0u);
        }
    }
}

TEST(Patch, code_state_stabilizers) {
    SurfaceCodePatch p = build_patch(3);
    for (Pauli L : {Pauli::Z, Pauli::X}) {
        Tableau t = code_state(p, L);
        EXPECT_TRUE(t.check_invariants());
        for (size_t i = 0; i < p.x_checks.size(); i++) EXPECT_EQ(t.expectation(p.check_operator(true, i)), 1);
        for (size_t i = 0; i < p.z_checks.size(); i++) EXPECT_EQ(t.expectation(p.check_operator(false, i)), 1);
        EXPECT_EQ(t.expectation(p.logical(L)), 1);
        EXPECT_EQ(t.expectation(p.logical(L == Pauli::Z ? Pauli::X : Pauli::Z)), 0);
    }
}

TEST(Transversal, generators_act_as_logical_gates) {
    for (int d : {1, 3, 5}) {
        SurfaceCodePatch p = build_patch(d);
        struct Case {
            LogicalGate g;
            Clifford c;
        };
        const auto &G = group();
        for (auto [g, c] : {Case{LogicalGate::H, G.h}, Case{LogicalGate::S, G.s},
                            Case{LogicalGate::X, G.pauli_class[int(Pauli::X)]},
                            Case{LogicalGate::Z, G.pauli_class[int(Pauli::Z)]}}) {
            LayeredCircuit circ = transversal_logical(p, {g});
            EXPECT_NO_THROW(circ.validate());
            EXPECT_EQ(circ.depth(), transversal_depth(g));
            for (Pauli in : {Pauli::X, Pauli::Z}) {
                EXPECT_EQ(logical_image(p, circ, in), conjugate_pauli(c, in)) << "d=" << d << " gate " << int(g);
            }
        }
    }
}

TEST(Transversal, words_match_clifford_classes) {
    SurfaceCodePatch p = build_patch(3);
    const auto &G = group();
    for (Clifford c = 0; c < GroupTable::kSize; c++) {
        std::vector<LogicalGate> word;
        for (Gen g : G.word[c]) word.push_back(LogicalGate(uint8_t(g)));
        LayeredCircuit circ = transversal_logical(p, word);
        for (Pauli in : {Pauli::X, Pauli::Z}) EXPECT_EQ(logical_image(p, circ, in), conjugate_pauli(c, in));
    }
    EXPECT_EQ(parse_logical_word("h s,Z").size(), 3u);
    EXPECT_THROW(parse_logical_word("HQ"), std::invalid_argument);
    EXPECT_THROW(transversal_logical(build_patch(3, false), {LogicalGate::H}), std::invalid_argument);
}

TEST(Transversal, hadamard_on_state) {
    SurfaceCodePatch p = build_patch(5);
    Tableau t = code_state(p, Pauli::Z);
    for (const auto &l : transversal_logical(p, parse_logical_word("H")).layers) {
        for (const Gate &g : l.gates) t.apply(g);
    }
    EXPECT_EQ(t.expectation(p.logical(Pauli::X)), 1);
    for (size_t i = 0; i < p.z_checks.size(); i++) EXPECT_EQ(t.expectation(p.check_operator(false, i)), 1);
}

TEST(Readout, corrects_low_weight_flips) {
    Rng rng(11);
    for (int d : {3, 5}) {
        SurfaceCodePatch p = build_patch(d);
        for (DecoderKind k : {DecoderKind::Matching, DecoderKind::UnionFind, DecoderKind::Exhaustive}) {
            Readout ro(p, DecoderChoice{k});
            for (int t = 0; t < 5; t++) {
                BitVec x = sample_codeword(p, rng);
                bool truth = ro.parity(x);
                for (size_t q = 0; q < p.m; q++) {
                    BitVec y = x;
                    y.flip(q);
                    EXPECT_EQ(ro.decode(y), truth);
                    EXPECT_THROW(ro.parity(y), std::invalid_argument);
                    if (d == 5 && k != DecoderKind::UnionFind) {
                        for (size_t r = q + 1; r < p.m; r++) {
                            BitVec w = y;
                            w.flip(r);
                            ASSERT_EQ(ro.decode(w), truth) << q << "," << r;
                        }
                    }
                }
            }
        }
    }
}

TEST(Readout, x_basis_uses_x_checks) {
    SurfaceCodePatch p = build_patch(3);
    Rng rng(12);
    Tableau t = code_state(p, Pauli::X);
    for (size_t q = 0; q < p.m; q++) t.h(q);
    BitVec x(p.m);
    for (size_t q = 0; q < p.m; q++) x.set(q, t.measure_z(q, rng));
    Readout ro(p);
    EXPECT_FALSE(ro.parity(x, true));
    x.flip(4);
    EXPECT_FALSE(ro.decode(x, true));
}

TEST(Readout, larger_distance_wins_below_threshold) {
    Rng rng(13);
    double pf = 0.03;
    auto fail_rate = [&](int d) {
        SurfaceCodePatch p = build_patch(d);
        Readout ro(p);
        int fails = 0, N = 20000;
        for (int t = 0; t < N; t++) {
            BitVec y(p.m);
            for (size_t q = 0; q < p.m; q++) y.set(q, uniform01(rng) < pf);
            fails += ro.decode(y);  // all-zero codeword has parity 0
        }
        return double(fails) / N;
    };
    double f3 = fail_rate(3), f5 = fail_rate(5);
    EXPECT_LT(f5, f3);
    EXPECT_GT(f3, 0.0);
}

TEST(Decoder, all_kinds_return_consistent_corrections) {
    SurfaceCodePatch p = build_patch(5);
    std::vector<std::vector<uint32_t>> fn(p.m);
    for (size_t i = 0; i < p.z_checks.size(); i++) {
        for (uint32_t q : p.z_checks[i]) fn[q].push_back(uint32_t(i));
    }
    DecodingGraph g(p.z_checks.size(), fn);
    Decoder mw(g, {DecoderKind::Matching}), uf(g, {DecoderKind::UnionFind}), ex(g, {DecoderKind::Exhaustive});
    Rng rng(14);
    for (int t = 0; t < 3000; t++) {
        BitVec f(p.m);
        for (size_t q = 0; q < p.m; q++) f.set(q, uniform01(rng) < 0.08);
        BitVec s = g.syndrome(f);
        BitVec a = mw.decode(s), b = uf.decode(s), c = ex.decode(s);
        ASSERT_EQ(g.syndrome(a), s);
        ASSERT_EQ(g.syndrome(b), s);
        ASSERT_EQ(g.syndrome(c), s);
        EXPECT_LE(a.popcount(), f.popcount());
        EXPECT_EQ(a.popcount(), c.popcount());
    }
}

TEST(Decoder, exhaustive_table_is_minimum_weight) {
    SurfaceCodePatch p = build_patch(3);
    std::vector<std::vector<uint32_t>> fn(p.m);
    for (size_t i = 0; i < p.x_checks.size(); i++) {
        for (uint32_t q : p.x_checks[i]) fn[q].push_back(uint32_t(i));
    }
    DecodingGraph g(p.x_checks.size(), fn);
    Decoder ex(g, {DecoderKind::Exhaustive}), mw(g, {DecoderKind::Matching});
    // Independent oracle: brute force over all 2^13 fault sets.
    std::vector<size_t> best(size_t(1) << g.num_nodes(), 99);
    for (uint32_t mask = 0; mask < (1u << p.m); mask++) {
        BitVec f(p.m);
        for (size_t q = 0; q < p.m; q++) f.set(q, (mask >> q) & 1);
        size_t key = size_t(g.syndrome(f).word(0));
        best[key] = std::min(best[key], f.popcount());
    }
    for (size_t key = 1; key < best.size(); key++) {
        BitVec s(g.num_nodes());
        s.word(0) = key;
        EXPECT_EQ(ex.decode(s).popcount(), best[key]);
        EXPECT_EQ(mw.decode(s).popcount(), best[key]);
    }
    EXPECT_THROW(DecodingGraph(2, {{0, 1, 1}}), std::invalid_argument);
    EXPECT_EQ(parse_decoder_kind("uf"), DecoderKind::UnionFind);
    EXPECT_THROW(parse_decoder_kind("bp"), std::invalid_argument);
}
