#include "telesim/nonlocal_games.hpp"

#include <numeric>
#include <stdexcept>

namespace telesim {

Fraction Fraction::make(int64_t num, int64_t den) {
    if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
}

const GameConstants &constants_UV() {
    static const GameConstants c = [] {
        const GroupTable &g = group();
        auto r = [](Pauli p) { return ExactUnitary2::rotation(p); };
        ExactUnitary2 z = ExactUnitary2::pauli(Pauli::Z);
        GameConstants out;
        out.u = {g.class_of(r(Pauli::X)), g.class_of(z * r(Pauli::Y).adjoint()), g.class_of(r(Pauli::Z).adjoint())};
        out.v = {g.identity, g.class_of(r(Pauli::Z) * r(Pauli::Y).adjoint()),
                 g.class_of(r(Pauli::X).adjoint() * r(Pauli::Y))};
        return out;
    }();
    return c;
}

namespace {

void check_inputs(int alpha, int beta) {
    if (alpha < 1 || alpha > 3 || beta < 1 || beta > 3) throw std::invalid_argument("game inputs must be in {1,2,3}");
}

Clifford chain(Clifford u, Pauli p, Clifford v, Pauli q) {
    const GroupTable &g = group();
    return g.mult[g.mult[g.mult[u][g.pauli_class[int(p)]]][v]][g.pauli_class[int(q)]];
}

GameWeights weights_with(int alpha, int beta, bool transpose_v) {
    check_inputs(alpha, beta);
    const GameConstants &c = constants_UV();
    Clifford v = c.v[beta - 1];
    if (transpose_v) v = transpose(v);
    GameWeights w{};
    for (int p = 0; p < 4; p++) {
        for (int q = 0; q < 4; q++) w[p][q] = abs_trace_sq(chain(c.u[alpha - 1], Pauli(p), v, Pauli(q)));
    }
    return w;
}

int sgn(bool b) { return b ? -1 : 1; }

}  // namespace

GameWeights game_weights(int alpha, int beta) { return weights_with(alpha, beta, true); }
GameWeights game_weights_untransposed(int alpha, int beta) { return weights_with(alpha, beta, false); }

Signs postprocess(int alpha, bool u1, bool u2) {
    int a = sgn(u1), b = sgn(u2), ab = a * b;
    switch (alpha) {
        case 1: return {a, b, ab};
        case 2: return {ab, a, b};
        case 3: return {b, ab, a};
    }
    throw std::invalid_argument("postprocess: alpha must be in {1,2,3}");
}

Signs postprocess_bob(int beta, bool v1, bool v2, BobTable table) {
    int a = sgn(v1), b = sgn(v2), ab = a * b;
    bool printed = table == BobTable::Printed;
    switch (beta) {
        case 1: return {a, -ab, b};
        // Bob's v1 is the eigenvalue of -X Y and v2 that of Z X.
        case 2: return printed ? Signs{-ab, a, b} : Signs{-ab, b, a};
        // v1 belongs to X Z, v2 to -Z Y.
        case 3: return printed ? Signs{b, b, -ab} : Signs{b, a, -ab};
    }
    throw std::invalid_argument("postprocess_bob: beta must be in {1,2,3}");
}

bool magic_square_win(int alpha, int beta, const Signs &x, const Signs &y) {
    return x[0] * x[1] * x[2] == 1 && y[0] * y[1] * y[2] == -1 && y[alpha - 1] * x[beta - 1] == 1;
}

Fraction magic_square_classical_value() {
    // A deterministic strategy picks, per input, one of four sign triples with the right parity.
    std::vector<Signs> rows, cols;
    for (int m = 0; m < 8; m++) {
        Signs s = {sgn(m & 1), sgn(m & 2), sgn(m & 4)};
        (s[0] * s[1] * s[2] == 1 ? rows : cols).push_back(s);
    }
    int best = 0;
    for (int a = 0; a < 64; a++) {
        std::array<Signs, 3> x = {rows[a & 3], rows[(a >> 2) & 3], rows[(a >> 4) & 3]};
        for (int b = 0; b < 64; b++) {
            std::array<Signs, 3> y = {cols[b & 3], cols[(b >> 2) & 3], cols[(b >> 4) & 3]};
            int wins = 0;
            for (int al = 1; al <= 3; al++) {
                for (int be = 1; be <= 3; be++) wins += magic_square_win(al, be, x[al - 1], y[be - 1]);
            }
            best = std::max(best, wins);
        }
    }
    return Fraction::make(best, 9);
}

MainMSReport check_cor_mainMS(bool transpose_v) {
    bool zero[3][3][4][4];
    for (int a = 1; a <= 3; a++) {
        for (int b = 1; b <= 3; b++) {
            GameWeights w = weights_with(a, b, transpose_v);
            for (int p = 0; p < 4; p++) {
                for (int q = 0; q < 4; q++) zero[a - 1][b - 1][p][q] = w[p][q] == 0;
            }
        }
    }
    MainMSReport rep;
    rep.holds = true;
    rep.min_zero_pairs = 9;
    for (int fcode = 0; fcode < 64; fcode++) {
        for (int gcode = 0; gcode < 64; gcode++) {
            int count = 0;
            for (int a = 0; a < 3; a++) {
                for (int b = 0; b < 3; b++) count += zero[a][b][(fcode >> (2 * a)) & 3][(gcode >> (2 * b)) & 3];
            }
            rep.min_zero_pairs = std::min(rep.min_zero_pairs, count);
            if (count == 0) rep.holds = false;
        }
    }
    return rep;
}

Fraction game_G_classical_value() {
    std::array<GameWeights, 9> w;
    for (int a = 1; a <= 3; a++) {
        for (int b = 1; b <= 3; b++) w[(a - 1) * 3 + b - 1] = game_weights(a, b);
    }
    int best = 0;
    for (int fcode = 0; fcode < 64; fcode++) {
        for (int gcode = 0; gcode < 64; gcode++) {
            int wins = 0;
            for (int a = 0; a < 3; a++) {
                for (int b = 0; b < 3; b++) wins += w[a * 3 + b][(fcode >> (2 * a)) & 3][(gcode >> (2 * b)) & 3] > 0;
            }
            best = std::max(best, wins);
        }
    }
    return Fraction::make(best, 9);
}

GammaResult gamma_bound_check(const CliffToPauli &f, const CliffToPauli &g) {
    GammaResult r;
    for (int u = 0; u < GroupTable::kSize; u++) {
        for (int v = 0; v < GroupTable::kSize; v++) r.count += trace_is_zero(chain(Clifford(u), f[u], Clifford(v), g[v]));
    }
    r.ok = r.count >= 16;
    return r;
}

std::vector<std::pair<Clifford, Clifford>> coset_witnesses(const CliffToPauli &f, const CliffToPauli &g) {
    const GameConstants &c = constants_UV();
    std::vector<std::pair<Clifford, Clifford>> out;
    for (int p = 0; p < 4; p++) {
        for (int q = 0; q < 4; q++) {
            bool found = false;
            for (int a = 0; a < 3 && !found; a++) {
                Clifford up = compose(c.u[a], pauli_clifford(Pauli(p)));
                Pauli fa = Pauli(p) * f[up];
                for (int b = 0; b < 3 && !found; b++) {
                    Clifford vq = compose(c.v[b], pauli_clifford(Pauli(q)));
                    Pauli gb = Pauli(q) * g[vq];
                    if (trace_is_zero(chain(c.u[a], fa, c.v[b], gb))) {
                        out.emplace_back(up, vq);
                        found = true;
                    }
                }
            }
            if (!found) throw std::logic_error("coset_witnesses: no witness; the corollary would be false");
        }
    }
    return out;
}

EncodedBound encoded_bound_check(const EncodingMap &e1, const EncodingMap &e2, const BitsToPauli &f,
                                 const BitsToPauli &g) {
    EncodedBound r;
    for (unsigned x1 = 0; x1 < 32; x1++) {
        for (unsigned x2 = 0; x2 < 32; x2++) {
            bool z = trace_is_zero(chain(e1.apply(x1), f[x1], e2.apply(x2), g[x2]));
            bool in = EncodingMap::in_image(x1) && EncodingMap::in_image(x2);
            r.zero_pairs += z;
            r.in_image_pairs += in;
            r.in_image_zero_pairs += z && in;
        }
    }
    r.prob = Fraction::make(r.zero_pairs, 1024);
    r.in_image_fraction = Fraction::make(r.in_image_pairs, 1024);
    return r;
}

WinRate quantum_strategy_winrate(uint64_t trials, Rng &rng, BobTable table) {
    std::array<GameWeights, 9> w;
    for (int a = 1; a <= 3; a++) {
        for (int b = 1; b <= 3; b++) w[(a - 1) * 3 + b - 1] = game_weights(a, b);
    }
    WinRate r;
    r.trials = trials;
    for (uint64_t t = 0; t < trials; t++) {
        int alpha = 1 + int(uniform_below(rng, 3)), beta = 1 + int(uniform_below(rng, 3));
        const GameWeights &gw = w[(alpha - 1) * 3 + beta - 1];
        int pick = int(uniform_below(rng, 16)), p = 0, q = 0;
        for (int idx = 0; idx < 16; idx++) {
            pick -= gw[idx / 4][idx % 4];
            if (pick < 0) {
                p = idx / 4;
                q = idx % 4;
                break;
            }
        }
        auto [u1, u2] = bell_bits(Pauli(p));
        auto [v1, v2] = bell_bits(Pauli(q));
        r.wins += magic_square_win(alpha, beta, postprocess(alpha, u1, u2), postprocess_bob(beta, v1, v2, table));
    }
    return r;
}

int support_losses(BobTable table, bool transposed_law) {
    int losses = 0;
    for (int a = 1; a <= 3; a++) {
        for (int b = 1; b <= 3; b++) {
            GameWeights w = weights_with(a, b, transposed_law);
            for (int p = 0; p < 4; p++) {
                for (int q = 0; q < 4; q++) {
                    if (w[p][q] == 0) continue;
                    auto [u1, u2] = bell_bits(Pauli(p));
                    auto [v1, v2] = bell_bits(Pauli(q));
                    losses += !magic_square_win(a, b, postprocess(a, u1, u2), postprocess_bob(b, v1, v2, table));
                }
            }
        }
    }
    return losses;
}

}  // namespace telesim
