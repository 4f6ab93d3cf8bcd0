#include "telesim/frame_sim.hpp"

#include "telesim/nonlocal_games.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace telesim {

PauliFrame FrameBatch::shot_frame(size_t shot) const {
    PauliFrame f(x.size());
    for (size_t q = 0; q < x.size(); q++) {
        f.x.set(q, (x[q] >> shot) & 1);
        f.z.set(q, (z[q] >> shot) & 1);
    }
    return f;
}

namespace {

void propagate(const Gate &g, std::vector<uint64_t> &x, std::vector<uint64_t> &z) {
    uint32_t a = g.a, b = g.b;
    switch (g.type) {
        case GateType::H: std::swap(x[a], z[a]); break;
        case GateType::S:
        case GateType::SDG: z[a] ^= x[a]; break;
        case GateType::X:
        case GateType::Y:
        case GateType::Z: break;
        case GateType::CNOT:
            x[b] ^= x[a];
            z[a] ^= z[b];
            break;
        case GateType::CZ:
            z[a] ^= x[b];
            z[b] ^= x[a];
            break;
        case GateType::SWAP:
            std::swap(x[a], x[b]);
            std::swap(z[a], z[b]);
            break;
    }
}

void plant(const std::vector<PlantedError> &planted, size_t slot, std::vector<uint64_t> &x, std::vector<uint64_t> &z) {
    for (const PlantedError &e : planted) {
        if (e.slot != slot) continue;
        if (e.error.size() != x.size()) throw std::invalid_argument("planted error has the wrong size");
        for (size_t q : e.error.x.ones()) x[q] = ~x[q];
        for (size_t q : e.error.z.ones()) z[q] = ~z[q];
    }
}

}  // namespace

FrameBatch run_frames(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng,
                      const std::vector<PlantedError> &planted, bool randomize_reference) {
    size_t n = c.num_qubits;
    FrameBatch fb;
    fb.x.assign(n, 0);
    fb.z.assign(n, 0);
    fb.flips.reserve(c.num_measurements());
    std::vector<uint32_t> live(n);
    for (size_t q = 0; q < n; q++) live[q] = uint32_t(q);
    if (randomize_reference) {
        for (size_t q = 0; q < n; q++) fb.z[q] = rng();
    }
    if (noise.active_at(0)) sample_batch(noise, live, rng, fb.x.data(), fb.z.data());
    plant(planted, 0, fb.x, fb.z);
    for (size_t j = 0; j < c.layers.size(); j++) {
        const Layer &l = c.layers[j];
        for (const Gate &g : l.gates) propagate(g, fb.x, fb.z);
        if (noise.active_at(j + 1)) sample_batch(noise, live, rng, fb.x.data(), fb.z.data());
        plant(planted, j + 1, fb.x, fb.z);
        if (l.measure.empty()) continue;
        for (uint32_t q : l.measure) fb.flips.push_back(fb.x[q]);
        std::vector<uint8_t> gone(n, 0);
        for (uint32_t q : l.measure) gone[q] = 1;
        std::erase_if(live, [&](uint32_t q) { return gone[q]; });
    }
    return fb;
}

std::vector<BitVec> noisy_run_batch(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng,
                                    const std::vector<PlantedError> &planted) {
    BitVec ref = run_ideal(c, rng);
    FrameBatch fb = run_frames(c, noise, rng, planted, true);
    std::vector<BitVec> out(64, ref);
    for (size_t m = 0; m < fb.flips.size(); m++) {
        for (size_t s = 0; s < 64; s++) {
            if (fb.flip(m, s)) out[s].flip(m);
        }
    }
    return out;
}

BitVec noisy_run(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng, const std::vector<PlantedError> &planted) {
    BitVec ref = run_ideal(c, rng);
    FrameBatch fb = run_frames(c, noise, rng, planted, false);
    for (size_t m = 0; m < fb.flips.size(); m++) {
        if (fb.flip(m, 0)) ref.flip(m);
    }
    return ref;
}

namespace {

GateType gen_to_gate(Gen g) {
    switch (g) {
        case Gen::H: return GateType::H;
        case Gen::S: return GateType::S;
        case Gen::X: return GateType::X;
        case Gen::Z: return GateType::Z;
    }
    return GateType::H;
}

// Appends layers applying cliffords[k] to qubits[k] in parallel.
void append_clifford_layers(LayeredCircuit &c, const std::vector<uint32_t> &qubits, const std::vector<Clifford> &cliffords) {
    const GroupTable &g = group();
    size_t len = 0;
    for (Clifford k : cliffords) len = std::max(len, g.word[k].size());
    for (size_t t = 0; t < len; t++) {
        Layer l;
        for (size_t k = 0; k < qubits.size(); k++) {
            const auto &w = g.word[cliffords[k]];
            if (t < w.size()) l.gates.push_back({gen_to_gate(w[t]), qubits[k]});
        }
        c.layers.push_back(std::move(l));
    }
}

}  // namespace

LayeredCircuit build_telep_circuit(const CliffordTuple &cl) {
    size_t n = cl.size();
    if (n == 0) throw std::invalid_argument("telep circuit needs n >= 1");
    LayeredCircuit c;
    c.num_qubits = 2 * n;
    auto a = [](size_t j) { return uint32_t(2 * j); };
    auto b = [](size_t j) { return uint32_t(2 * j + 1); };
    Layer hl, cx;
    for (size_t j = 0; j < n; j++) {
        hl.gates.push_back({GateType::H, a(j)});
        cx.gates.push_back({GateType::CNOT, a(j), b(j)});
    }
    c.layers = {hl, cx};
    std::vector<uint32_t> halves;
    for (size_t j = 0; j < n; j++) halves.push_back(b(j));
    append_clifford_layers(c, halves, cl);
    Layer bx, bh;
    for (size_t j = 0; j < n; j++) {
        bx.gates.push_back({GateType::CNOT, b(j), a((j + 1) % n)});
        bh.gates.push_back({GateType::H, b(j)});
        bh.measure.push_back(b(j));
        bh.measure.push_back(a((j + 1) % n));
    }
    c.layers.push_back(bx);
    c.layers.push_back(bh);
    return c;
}

PauliTuple decode_telep_record(const BitVec &rec, size_t n) {
    PauliTuple p(n);
    for (size_t j = 0; j < n; j++) p[j] = pauli_from_bits(rec.get(2 * j), rec.get(2 * j + 1));
    return p;
}

PauliTuple run_telep_circuit(const CliffordTuple &cl, Rng &rng, const std::optional<NoiseModel> &noise,
                             const std::vector<PlantedError> &planted) {
    LayeredCircuit c = build_telep_circuit(cl);
    BitVec rec = (noise || !planted.empty()) ? noisy_run(c, noise.value_or(NoiseModel::none()), rng, planted)
                                             : run_ideal(c, rng);
    return decode_telep_record(rec, cl.size());
}

LayeredCircuit build_game_circuit(int alpha, int beta) {
    if (alpha < 1 || alpha > 3 || beta < 1 || beta > 3) throw std::invalid_argument("game inputs must be in {1,2,3}");
    const GameConstants &k = constants_UV();
    LayeredCircuit c;
    c.num_qubits = 4;
    c.layers.push_back({{{GateType::H, 0}, {GateType::H, 1}}, {}});
    c.layers.push_back({{{GateType::CNOT, 0, 2}, {GateType::CNOT, 1, 3}}, {}});
    append_clifford_layers(c, {0, 3}, {k.u[alpha - 1], k.v[beta - 1]});
    c.layers.push_back({{{GateType::CNOT, 0, 1}, {GateType::CNOT, 2, 3}}, {}});
    c.layers.push_back({{{GateType::H, 0}, {GateType::H, 2}}, {0, 1, 2, 3}});
    return c;
}

}  // namespace telesim
