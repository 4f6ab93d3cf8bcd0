#include "telesim/uext.hpp"

#include <cmath>
#include <stdexcept>

namespace telesim {

namespace {

std::vector<CtrlStep> steps_of(Clifford c) {
    std::vector<CtrlStep> out;
    for (Gen g : group().word[c]) {
        switch (g) {
            case Gen::H:
                out.push_back(CtrlStep::H1);
                out.push_back(CtrlStep::H2);
                break;
            case Gen::S: out.push_back(CtrlStep::S); break;
            case Gen::X: out.push_back(CtrlStep::X); break;
            case Gen::Z: out.push_back(CtrlStep::Z); break;
        }
    }
    return out;
}

std::vector<uint32_t> face_qubits(const UextLayout &u, size_t j, bool right) {
    const auto &face = right ? u.wedge->right : u.wedge->left;
    std::vector<uint32_t> out;
    for (uint32_t q : face) out.push_back(u.qubit(j, q));
    return out;
}

std::vector<Gate> step_gates(const UextLayout &u, size_t j, CtrlStep s) {
    std::vector<uint32_t> R = face_qubits(u, j, true);
    const SurfaceCodePatch &p = u.wedge->patch;
    switch (s) {
        case CtrlStep::Idle: return {};
        case CtrlStep::H1: return transversal_layers(p, LogicalGate::H, R)[0];
        case CtrlStep::H2: return transversal_layers(p, LogicalGate::H, R)[1];
        case CtrlStep::S: return transversal_layers(p, LogicalGate::S, R)[0];
        case CtrlStep::X: return transversal_layers(p, LogicalGate::X, R)[0];
        case CtrlStep::Z: return transversal_layers(p, LogicalGate::Z, R)[0];
    }
    return {};
}

void masked(const Gate &g, uint64_t mask, std::vector<uint64_t> &x, std::vector<uint64_t> &z) {
    uint32_t a = g.a, b = g.b;
    uint64_t t;
    switch (g.type) {
        case GateType::H:
            t = (x[a] ^ z[a]) & mask;
            x[a] ^= t;
            z[a] ^= t;
            break;
        case GateType::S:
        case GateType::SDG: z[a] ^= x[a] & mask; break;
        case GateType::X:
        case GateType::Y:
        case GateType::Z: break;
        case GateType::CNOT:
            x[b] ^= x[a] & mask;
            z[a] ^= z[b] & mask;
            break;
        case GateType::CZ: {
            uint64_t xa = x[a], xb = x[b];
            z[a] ^= xb & mask;
            z[b] ^= xa & mask;
            break;
        }
        case GateType::SWAP:
            t = (x[a] ^ x[b]) & mask;
            x[a] ^= t;
            x[b] ^= t;
            t = (z[a] ^ z[b]) & mask;
            z[a] ^= t;
            z[b] ^= t;
            break;
    }
}

void plant(const std::vector<PlantedError> &planted, size_t slot, uint64_t shots, std::vector<uint64_t> &x,
           std::vector<uint64_t> &z) {
    for (const PlantedError &e : planted) {
        if (e.slot != slot) continue;
        if (e.error.size() != x.size()) throw std::invalid_argument("planted error has the wrong size");
        for (size_t q : e.error.x.ones()) x[q] ^= shots;
        for (size_t q : e.error.z.ones()) z[q] ^= shots;
    }
}

// Logical outcome pair from the data bits of one Bell measurement (R bits then L bits).
Pauli read_bell(const Readout &ro, const BitVec &bits, size_t m) {
    BitVec r(m), l(m);
    for (size_t i = 0; i < m; i++) {
        r.set(i, bits.get(i));
        l.set(i, bits.get(m + i));
    }
    return pauli_from_bits(ro.decode(r, true), ro.decode(l, false));
}

}  // namespace

std::shared_ptr<const UextLayout> build_uext(size_t n, int d) {
    if (n < 2) throw std::invalid_argument("build_uext: n must be at least 2");
    auto u = std::make_shared<UextLayout>();
    u->n = n;
    u->d = d;
    u->wedge = build_wedge(d);
    u->wedge_depth = u->wedge->circuit.depth();
    for (int c = 0; c < GroupTable::kSize; c++) {
        u->schedule[size_t(c)] = steps_of(Clifford(c));
        u->ctrl_depth = std::max(u->ctrl_depth, u->schedule[size_t(c)].size());
    }
    for (auto &s : u->schedule) s.resize(u->ctrl_depth, CtrlStep::Idle);
    return u;
}

LayeredCircuit uext_circuit(const UextLayout &u, const CliffordTuple &b) {
    if (b.size() != u.n) throw std::invalid_argument("uext_circuit: input has the wrong length");
    const WedgeLayout &w = *u.wedge;
    LayeredCircuit c;
    c.num_qubits = u.num_qubits();
    for (const Layer &wl : w.circuit.layers) {
        Layer l;
        for (size_t j = 0; j < u.n; j++) {
            for (Gate g : wl.gates) {
                g.a = u.qubit(j, g.a);
                if (is_two_qubit(g.type)) g.b = u.qubit(j, g.b);
                l.gates.push_back(g);
            }
            for (uint32_t q : wl.measure) l.measure.push_back(u.qubit(j, q));
        }
        c.layers.push_back(std::move(l));
    }
    for (size_t t = 0; t < u.ctrl_depth; t++) {
        Layer l;
        for (size_t j = 0; j < u.n; j++) {
            if (b[j] >= GroupTable::kSize) throw std::invalid_argument("uext_circuit: bad Clifford index");
            for (const Gate &g : step_gates(u, j, u.schedule[b[j]][t])) l.gates.push_back(g);
        }
        c.layers.push_back(std::move(l));
    }
    Layer cx, hm;
    for (size_t j = 0; j < u.n; j++) {
        auto R = face_qubits(u, j, true), L = face_qubits(u, (j + 1) % u.n, false);
        for (size_t i = 0; i < R.size(); i++) {
            cx.gates.push_back({GateType::CNOT, R[i], L[i]});
            hm.gates.push_back({GateType::H, R[i]});
        }
        hm.measure.insert(hm.measure.end(), R.begin(), R.end());
        hm.measure.insert(hm.measure.end(), L.begin(), L.end());
    }
    c.layers.push_back(std::move(cx));
    c.layers.push_back(std::move(hm));
    return c;
}

ShotRecord split_record(const UextLayout &u, const BitVec &rec, const CliffordTuple &b) {
    if (rec.size() != u.num_measurements()) throw std::invalid_argument("split_record: record has the wrong length");
    ShotRecord r;
    r.b = b;
    size_t na = u.wedge->num_aux(), m2 = 2 * u.wedge->patch.m;
    for (size_t j = 0; j < u.n; j++) {
        BitVec s(na), y(m2);
        for (size_t k = 0; k < na; k++) s.set(k, rec.get(u.aux_record(j) + k));
        for (size_t k = 0; k < m2; k++) y.set(k, rec.get(u.data_record(j) + k));
        r.s.push_back(s);
        r.y.push_back(y);
    }
    return r;
}

PostprocessResult postprocess(const UextLayout &u, const ShotRecord &r, DecoderChoice choice) {
    const WedgeLayout &w = *u.wedge;
    if (r.s.size() != u.n || r.y.size() != u.n) throw std::invalid_argument("postprocess: record arity");
    Decoder dec(*w.graph, choice);
    PauliString F(u.num_qubits());
    for (size_t j = 0; j < u.n; j++) {
        BitVec sd = r.s[j] ^ dec.decode(wedge_syndrome(w, r.s[j]));
        PauliString rec = wedge_rec(w, sd);
        for (uint32_t q : w.data) {
            F.x.set(u.qubit(j, q), rec.x.get(q));
            F.z.set(u.qubit(j, q), rec.z.get(q));
        }
    }
    LayeredCircuit c = uext_circuit(u, r.b);
    for (size_t t = u.wedge_depth; t < c.depth(); t++) {
        for (const Gate &g : c.layers[t].gates) F.conjugate(g);
    }
    PostprocessResult out;
    Readout ro(w.patch, choice);
    size_t m = w.patch.m;
    for (size_t j = 0; j < u.n; j++) {
        auto R = face_qubits(u, j, true), L = face_qubits(u, (j + 1) % u.n, false);
        BitVec f(2 * m), h(2 * m);
        for (size_t i = 0; i < m; i++) {
            f.set(i, F.x.get(R[i]));
            f.set(m + i, F.x.get(L[i]));
            h.set(i, F.z.get(R[i]));
            h.set(m + i, F.z.get(L[i]));
        }
        out.z.push_back(read_bell(ro, r.y[j] ^ f, m));
        out.f.push_back(f);
        out.h.push_back(h);
    }
    return out;
}

PauliTuple run_uext_literal(const UextLayout &u, const CliffordTuple &b, const NoiseModel &noise, Rng &rng,
                            DecoderChoice choice, const std::vector<PlantedError> &planted) {
    LayeredCircuit c = uext_circuit(u, b);
    BitVec rec = noisy_run(c, noise, rng, planted);
    return postprocess(u, split_record(u, rec, b), choice).z;
}

UextBatch uext_frame_batch(const UextLayout &u, const std::vector<CliffordTuple> &b, const NoiseModel &noise,
                           Rng &rng, DecoderChoice choice, const std::vector<PlantedError> &planted) {
    const WedgeLayout &w = *u.wedge;
    size_t shots = b.size();
    if (shots == 0 || shots > 64) throw std::invalid_argument("uext_frame_batch: 1 to 64 shots");
    for (const auto &t : b) {
        if (t.size() != u.n) throw std::invalid_argument("uext_frame_batch: input has the wrong length");
    }
    uint64_t all = shots == 64 ? ~uint64_t{0} : (uint64_t{1} << shots) - 1;
    size_t N = u.num_qubits(), na = w.num_aux(), m = w.patch.m;
    std::vector<uint64_t> x(N, 0), z(N, 0);
    std::vector<uint8_t> dead(N, 0);
    std::vector<uint32_t> live;
    auto refresh_live = [&] {
        live.clear();
        for (uint32_t q = 0; q < N; q++) {
            if (!dead[q]) live.push_back(q);
        }
    };
    refresh_live();
    size_t slot = 0;
    auto noise_slot = [&] {
        if (noise.active_at(slot)) sample_batch(noise, live, rng, x.data(), z.data());
        plant(planted, slot, all, x, z);
        slot++;
    };
    noise_slot();

    // Wedges, then Rec for the decoded bulk outcomes of each shot.
    for (const Layer &wl : w.circuit.layers) {
        for (size_t j = 0; j < u.n; j++) {
            for (Gate g : wl.gates) {
                g.a = u.qubit(j, g.a);
                if (is_two_qubit(g.type)) g.b = u.qubit(j, g.b);
                masked(g, ~uint64_t{0}, x, z);
            }
        }
        noise_slot();
        for (size_t j = 0; j < u.n; j++) {
            for (uint32_t q : wl.measure) dead[u.qubit(j, q)] = 1;
        }
        if (!wl.measure.empty()) refresh_live();
    }
    Decoder dec(*w.graph, choice);
    for (size_t sh = 0; sh < shots; sh++) {
        for (size_t j = 0; j < u.n; j++) {
            BitVec f(na);
            for (size_t a = 0; a < na; a++) f.set(a, (x[u.qubit(j, w.aux[a])] >> sh) & 1);
            BitVec syn(w.checks.size());
            for (size_t c = 0; c < w.checks.size(); c++) {
                bool v = false;
                for (uint32_t a : w.checks[c]) v ^= f.get(a);
                syn.set(c, v);
            }
            PauliString rec = wedge_rec_linear(w, f ^ dec.decode(syn));
            for (size_t q : rec.x.ones()) x[u.qubit(j, uint32_t(q))] ^= uint64_t{1} << sh;
            for (size_t q : rec.z.ones()) z[u.qubit(j, uint32_t(q))] ^= uint64_t{1} << sh;
        }
    }

    // Controlled block: each gate acts on the shots whose input asks for it.
    std::vector<std::array<std::vector<Gate>, 6>> gates(u.n);
    for (size_t j = 0; j < u.n; j++) {
        for (CtrlStep s : {CtrlStep::H1, CtrlStep::H2, CtrlStep::S}) gates[j][size_t(s)] = step_gates(u, j, s);
    }
    for (size_t t = 0; t < u.ctrl_depth; t++) {
        for (size_t j = 0; j < u.n; j++) {
            std::array<uint64_t, 6> mask{};
            for (size_t sh = 0; sh < shots; sh++) mask[size_t(u.schedule[b[sh][j]][t])] |= uint64_t{1} << sh;
            for (CtrlStep s : {CtrlStep::H1, CtrlStep::H2, CtrlStep::S}) {
                if (!mask[size_t(s)]) continue;
                for (const Gate &g : gates[j][size_t(s)]) masked(g, mask[size_t(s)], x, z);
            }
        }
        noise_slot();
    }

    for (size_t j = 0; j < u.n; j++) {
        auto R = face_qubits(u, j, true), L = face_qubits(u, (j + 1) % u.n, false);
        for (size_t i = 0; i < m; i++) masked({GateType::CNOT, R[i], L[i]}, ~uint64_t{0}, x, z);
    }
    noise_slot();
    for (size_t j = 0; j < u.n; j++) {
        for (uint32_t q : face_qubits(u, j, true)) masked({GateType::H, q}, ~uint64_t{0}, x, z);
    }
    noise_slot();

    UextBatch out;
    out.b = b;
    out.dz.assign(shots, PauliTuple(u.n, Pauli::I));
    Readout ro(w.patch, choice);
    for (size_t j = 0; j < u.n; j++) {
        auto R = face_qubits(u, j, true), L = face_qubits(u, (j + 1) % u.n, false);
        for (size_t sh = 0; sh < shots; sh++) {
            BitVec bits(2 * m);
            for (size_t i = 0; i < m; i++) {
                bits.set(i, (x[R[i]] >> sh) & 1);
                bits.set(m + i, (x[L[i]] >> sh) & 1);
            }
            out.dz[sh][j] = read_bell(ro, bits, m);
        }
    }
    return out;
}

std::pair<double, double> wilson_interval(uint64_t k, uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    double N = double(n), ph = double(k) / N, z2 = z * z;
    double den = 1 + z2 / N;
    double mid = (ph + z2 / (2 * N)) / den;
    double half = z * std::sqrt(ph * (1 - ph) / N + z2 / (4 * N * N)) / den;
    return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

SuccessEstimate end_to_end_success(const UextLayout &u, double p, uint64_t trials, Rng &rng,
                                   const EndToEndOptions &opt) {
    NoiseModel noise = p == 0 ? NoiseModel::none()
                              : (opt.kind == NoiseKind::Clustered ? NoiseModel::clustered(p) : NoiseModel::iid(p));
    SuccessEstimate est;
    while (est.trials < trials) {
        size_t shots = size_t(std::min<uint64_t>(64, trials - est.trials));
        std::vector<CliffordTuple> b(shots, CliffordTuple(u.n));
        for (auto &t : b) {
            for (auto &c : t) c = Clifford(uniform_below(rng, GroupTable::kSize));
        }
        if (opt.literal) {
            for (size_t sh = 0; sh < shots; sh++) {
                PauliTuple zz = run_uext_literal(u, b[sh], noise, rng, opt.decoder);
                est.successes += verify(b[sh], zz).valid;
            }
        } else {
            UextBatch batch = uext_frame_batch(u, b, noise, rng, opt.decoder);
            for (size_t sh = 0; sh < shots; sh++) {
                PauliTuple zz = sample_ideal(b[sh], rng);
                for (size_t j = 0; j < u.n; j++) zz[j] = zz[j] * batch.dz[sh][j];
                est.successes += verify(b[sh], zz).valid;
            }
        }
        est.trials += shots;
    }
    est.rate = est.trials ? double(est.successes) / double(est.trials) : 0.0;
    std::tie(est.wilson_lo, est.wilson_hi) = wilson_interval(est.successes, est.trials);
    return est;
}

SuccessEstimate end_to_end_success(size_t n, int d, double p, uint64_t trials, Rng &rng, const EndToEndOptions &opt) {
    if (n > 16 || d > 5) throw std::invalid_argument("end_to_end_success: limited to n <= 16 and d <= 5");
    return end_to_end_success(*build_uext(n, d), p, trials, rng, opt);
}

}  // namespace telesim
