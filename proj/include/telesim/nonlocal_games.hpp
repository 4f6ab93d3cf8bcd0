#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "telesim/pauli_clifford.hpp"
#include "telesim/rng.hpp"

namespace telesim {

struct Fraction {
    int64_t num = 0;
    int64_t den = 1;
    static Fraction make(int64_t num, int64_t den);
    double value() const { return double(num) / double(den); }
    bool operator==(const Fraction &) const = default;
    bool operator<(const Fraction &o) const { return num * o.den < o.num * den; }
    bool operator>=(const Fraction &o) const { return !(*this < o); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Inputs alpha, beta are 1-based as in the game description.
struct GameConstants {
    std::array<Clifford, 3> u;
    std::array<Clifford, 3> v;
};
const GameConstants &constants_UV();

// Weights of p_{alpha,beta}(P, Q) in units of 1/16, indexed [P][Q] by Pauli code.
using GameWeights = std::array<std::array<int, 4>, 4>;
// Outcome law of the two-Bell-pair circuit: |tr(U_a P V_b^T Q)|^2. Moving V_b from B2
// across the Bell pair onto A2 transposes it.
GameWeights game_weights(int alpha, int beta);
// The closed form with V_b untransposed, |tr(U_a P V_b Q)|^2. Kept for comparison only.
GameWeights game_weights_untransposed(int alpha, int beta);

// Bell outcome P = X^{s2} Z^{s1}: u1 = s1, u2 = s2.
inline std::pair<bool, bool> bell_bits(Pauli p) { return {pauli_s1(p), pauli_s2(p)}; }

using Signs = std::array<int, 3>;
Signs postprocess(int alpha, bool u1, bool u2);
enum class BobTable { Printed, Consistent };
// Consistent differs from Printed in g_2 and g_3 only, where u/v labels are matched to
// the observables Bob actually measures.
Signs postprocess_bob(int beta, bool v1, bool v2, BobTable table = BobTable::Consistent);
bool magic_square_win(int alpha, int beta, const Signs &x, const Signs &y);

Fraction magic_square_classical_value();

// For every F, G : {1,2,3} -> Pauli, some (alpha, beta) has tr(U_a F(a) V_b G(b)) = 0.
struct MainMSReport {
    bool holds = false;
    int min_zero_pairs = 0;  // over all 4096 (F, G)
};
MainMSReport check_cor_mainMS(bool transpose_v = false);
// Best fraction of the nine inputs a deterministic Pauli strategy can answer with a
// nonzero-probability outcome of game_weights.
Fraction game_G_classical_value();

using CliffToPauli = std::array<Pauli, GroupTable::kSize>;
struct GammaResult {
    int count = 0;
    bool ok = false;
};
GammaResult gamma_bound_check(const CliffToPauli &f, const CliffToPauli &g);
// The 16 pairs (U_a P, V_b Q), one per (P, Q), each with tr(...) = 0.
std::vector<std::pair<Clifford, Clifford>> coset_witnesses(const CliffToPauli &f, const CliffToPauli &g);

using BitsToPauli = std::array<Pauli, 32>;
struct EncodedBound {
    int zero_pairs = 0;           // out of 1024
    int in_image_pairs = 0;       // (x1, x2) both in iota(Cliff)
    int in_image_zero_pairs = 0;
    Fraction prob;
    Fraction in_image_fraction;
};
EncodedBound encoded_bound_check(const EncodingMap &e1, const EncodingMap &e2, const BitsToPauli &f,
                                 const BitsToPauli &g);

struct WinRate {
    uint64_t trials = 0;
    uint64_t wins = 0;
    double rate() const { return trials ? double(wins) / double(trials) : 0.0; }
};
WinRate quantum_strategy_winrate(uint64_t trials, Rng &rng, BobTable table = BobTable::Consistent);
// Number of (alpha, beta, P, Q) with nonzero weight whose post-processed output loses.
int support_losses(BobTable table = BobTable::Consistent, bool transposed_law = true);

}  // namespace telesim
