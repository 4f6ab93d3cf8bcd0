#include "telesim/wedge.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace telesim;

namespace {

const WedgeLayout &wedge3() {
    static auto w = build_wedge(3);
    return *w;
}

bool all_observables_plus(const WedgeLayout &w, const Tableau &t) {
    for (const auto &o : w.observables) {
        if (t.expectation(o) != 1) return false;
    }
    return true;
}

}  // namespace

TEST(Wedge, layout_counts_and_locality) {
    const WedgeLayout &w = wedge3();
    EXPECT_EQ(w.num_qubits(), 95u);
    EXPECT_EQ(w.num_data(), 26u);
    EXPECT_EQ(w.num_aux(), 69u);
    EXPECT_EQ(w.checks.size(), 18u);
    EXPECT_EQ(w.circuit.depth(), 6u);
    EXPECT_EQ(w.observables.size(), 2 * w.patch.m);
    size_t cz = 0;
    for (const auto &l : w.circuit.layers) {
        for (const Gate &g : l.gates) {
            if (g.type != GateType::CZ) continue;
            cz++;
            int dist = 0;
            for (int ax = 0; ax < 3; ax++) dist += std::abs(w.sites[g.a][size_t(ax)] - w.sites[g.b][size_t(ax)]);
            EXPECT_EQ(dist, 1);
        }
    }
    EXPECT_EQ(cz, w.edges.size());
    EXPECT_EQ(w.circuit.layers.back().measure.size(), w.num_aux());
}

TEST(Wedge, larger_and_degenerate_sizes) {
    auto w5 = build_wedge(5);
    EXPECT_EQ(w5->circuit.depth(), 6u);
    EXPECT_EQ(w5->num_data(), 2 * w5->patch.m);
    EXPECT_EQ(w5->checks.size(), 140u);
    auto w1 = build_wedge(1);
    EXPECT_EQ(w1->num_qubits(), 2u);
    EXPECT_EQ(w1->num_aux(), 0u);
    EXPECT_THROW(build_wedge(2), std::invalid_argument);
}

TEST(Wedge, sign_law_matches_tableau_runs) {
    // Independent runs: every observable is deterministic with the predicted sign, and every
    // bulk check has the predicted parity.
    const WedgeLayout &w = wedge3();
    Rng rng(21);
    for (int t = 0; t < 20; t++) {
        Tableau st(0);
        BitVec s = run_ideal(w.circuit, rng, &st);
        for (size_t i = 0; i < w.observables.size(); i++) {
            int want = (w.obs_const.get(i) ^ w.obs_coeff[i].dot(s)) ? -1 : 1;
            ASSERT_EQ(st.expectation(w.observables[i]), want) << i;
        }
        EXPECT_FALSE(wedge_syndrome(w, s).any());
        st.apply_pauli(wedge_rec(w, s));
        EXPECT_TRUE(all_observables_plus(w, st));
    }
}

TEST(Wedge, pure_errors_are_dual_to_observables) {
    const WedgeLayout &w = wedge3();
    for (size_t i = 0; i < w.observables.size(); i++) {
        for (size_t j = 0; j < w.observables.size(); j++) {
            EXPECT_EQ(!w.pure_error[i].commutes(w.observables[j]), i == j);
        }
    }
}

TEST(BellPrep, zero_noise_is_exact) {
    for (int d : {1, 3}) {
        auto w = build_wedge(d);
        Rng rng(22);
        for (int t = 0; t < 50; t++) {
            BellPrepResult r = single_shot_bell_prep(*w, NoiseModel::none(), rng);
            EXPECT_EQ(r.residual.weight(), 0u);
            EXPECT_FALSE(r.logical_failure);
            EXPECT_TRUE(all_observables_plus(*w, r.state));
        }
    }
}

TEST(BellPrep, residual_describes_the_noisy_state) {
    // Undoing the residual on the literal tableau must give the ideal Bell pair.
    const WedgeLayout &w = wedge3();
    Rng rng(23);
    int nontrivial = 0;
    for (int t = 0; t < 40; t++) {
        BellPrepResult r = single_shot_bell_prep(w, NoiseModel::iid(0.02), rng);
        nontrivial += r.residual.weight() > 0;
        r.state.apply_pauli(r.residual);
        EXPECT_TRUE(all_observables_plus(w, r.state));
    }
    EXPECT_GT(nontrivial, 0);
}

TEST(BellPrep, every_single_fault_is_corrected) {
    const WedgeLayout &w = wedge3();
    Rng rng(24);
    size_t slots = w.circuit.depth() + 1, failures = 0, runs = 0;
    for (size_t slot = 0; slot < slots; slot++) {
        for (uint32_t q = 0; q < w.num_qubits(); q++) {
            for (Pauli P : {Pauli::X, Pauli::Y, Pauli::Z}) {
                PauliFrame e(w.num_qubits());
                e.set(q, P);
                BellPrepStats st = bell_prep_monte_carlo(w, NoiseModel::none(), 1, rng, {}, {{slot, e}});
                failures += st.logical_failures;
                runs++;
            }
        }
    }
    EXPECT_EQ(runs, 1995u);
    EXPECT_EQ(failures, 0u);
}

TEST(BellPrep, literal_and_frame_paths_agree_on_planted_errors) {
    const WedgeLayout &w = wedge3();
    Rng rng(25);
    for (int t = 0; t < 60; t++) {
        std::vector<PlantedError> planted;
        for (int k = 0; k < 3; k++) {
            PauliFrame e(w.num_qubits());
            e.set(size_t(rng() % w.num_qubits()), Pauli(1 + rng() % 3));
            planted.push_back({size_t(rng() % 7), e});
        }
        BellPrepResult lit = single_shot_bell_prep(w, NoiseModel::none(), rng, {}, planted);
        BellPrepStats fr = bell_prep_monte_carlo(w, NoiseModel::none(), 1, rng, {}, planted);
        EXPECT_EQ(uint64_t(lit.logical_failure), fr.logical_failures);
        lit.state.apply_pauli(lit.residual);
        EXPECT_TRUE(all_observables_plus(w, lit.state));
    }
}

TEST(BellPrep, decoders_agree_on_sparse_noise) {
    const WedgeLayout &w = wedge3();
    for (DecoderKind k : {DecoderKind::Matching, DecoderKind::UnionFind, DecoderKind::Exhaustive}) {
        Rng rng(26);
        BellPrepStats st = bell_prep_monte_carlo(w, NoiseModel::iid(0.002), 3200, rng, {k});
        EXPECT_EQ(st.trials, 3200u);
        // Faults are rare here, so only a few percent of runs can fail.
        EXPECT_LT(double(st.logical_failures) / double(st.trials), 0.08) << decoder_kind_name(k);
        EXPECT_GE(st.nontrivial_residuals, st.logical_failures);
    }
}
