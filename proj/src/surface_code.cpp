#include "telesim/surface_code.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace telesim {

namespace {

PauliString z_string(size_t m, const std::vector<uint32_t> &sup) {
    PauliString p(m);
    for (uint32_t q : sup) p.z.set(q);
    return p;
}

PauliString x_string(size_t m, const std::vector<uint32_t> &sup) {
    PauliString p(m);
    for (uint32_t q : sup) p.x.set(q);
    return p;
}

// a and b agree on the code space whose state is st.
bool equal_in(const SurfaceCodePatch &p, const Tableau &st, const PauliString &a, const PauliString &b) {
    PauliString r = a;
    if (!r.mul_right(b)) return false;
    for (size_t i = 0; i < p.x_checks.size(); i++) {
        if (!r.commutes(p.check_operator(true, i))) return false;
    }
    for (size_t i = 0; i < p.z_checks.size(); i++) {
        if (!r.commutes(p.check_operator(false, i))) return false;
    }
    if (!r.commutes(p.logical(Pauli::X)) || !r.commutes(p.logical(Pauli::Z))) return false;
    return st.expectation(r) == 1;
}

bool maps_correctly(const SurfaceCodePatch &p, const Tableau &st, const LayeredCircuit &c, Pauli from, Pauli to) {
    PauliString a = p.logical(from);
    a.conjugate(c);
    return equal_in(p, st, a, p.logical(to));
}

bool preserves_checks(const SurfaceCodePatch &p, const Tableau &st, const LayeredCircuit &c) {
    PauliString id(p.m);
    for (int t = 0; t < 2; t++) {
        size_t cnt = t ? p.x_checks.size() : p.z_checks.size();
        for (size_t i = 0; i < cnt; i++) {
            PauliString s = p.check_operator(t, i);
            s.conjugate(c);
            if (!equal_in(p, st, s, id)) return false;
        }
    }
    return true;
}

}  // namespace

int SurfaceCodePatch::qubit_at(int a, int b) const {
    if (a < 0 || b < 0 || a >= grid || b >= grid) return -1;
    return index[size_t(a * grid + b)];
}

PauliString SurfaceCodePatch::check_operator(bool x_type, size_t i) const {
    return x_type ? x_string(m, x_checks.at(i)) : z_string(m, z_checks.at(i));
}

PauliString SurfaceCodePatch::logical(Pauli p) const {
    switch (p) {
        case Pauli::I: return PauliString(m);
        case Pauli::X: return x_string(m, x_logical);
        case Pauli::Z: return z_string(m, z_logical);
        case Pauli::Y: {
            // i X Z = Y on the overlap, which is the single qubit (0, 0).
            PauliString y = x_string(m, x_logical);
            for (uint32_t q : z_logical) y.z.flip(q);
            return y;
        }
    }
    return PauliString(m);
}

SurfaceCodePatch build_patch(int d, bool folded) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("build_patch: d must be odd and positive");
    SurfaceCodePatch p;
    p.d = d;
    p.grid = 2 * d - 1;
    p.folded = folded;
    int g = p.grid;
    p.index.assign(size_t(g * g), -1);
    for (int a = 0; a < g; a++) {
        for (int b = 0; b < g; b++) {
            if ((a + b) % 2) continue;
            p.index[size_t(a * g + b)] = int32_t(p.coords.size());
            p.coords.push_back({a, b});
        }
    }
    p.m = p.coords.size();
    const int da[4] = {-1, 1, 0, 0}, db[4] = {0, 0, -1, 1};
    for (int a = 0; a < g; a++) {
        for (int b = 0; b < g; b++) {
            if ((a + b) % 2 == 0) continue;
            std::vector<uint32_t> sup;
            for (int k = 0; k < 4; k++) {
                int q = p.qubit_at(a + da[k], b + db[k]);
                if (q >= 0) sup.push_back(uint32_t(q));
            }
            if (a % 2 == 0) {
                p.x_checks.push_back(sup);
                p.x_check_coords.push_back({a, b});
            } else {
                p.z_checks.push_back(sup);
                p.z_check_coords.push_back({a, b});
            }
        }
    }
    for (int a = 0; a < g; a += 2) p.x_logical.push_back(uint32_t(p.qubit_at(a, 0)));
    for (int b = 0; b < g; b += 2) p.z_logical.push_back(uint32_t(p.qubit_at(0, b)));
    p.fold.resize(p.m);
    for (size_t q = 0; q < p.m; q++) p.fold[q] = uint32_t(p.qubit_at(p.coords[q].second, p.coords[q].first));
    if (!folded) return p;

    // Adjacent diagonal qubits share an X check, and Y Y picks up a sign unless their phases
    // alternate; (0, 0) must get S so that X-bar goes to +Y-bar. Confirmed against the code below.
    p.s_dagger_on_diag.assign(size_t(g), 0);
    for (int k = 1; k < g; k += 2) p.s_dagger_on_diag[size_t(k)] = 1;
    Tableau st = code_state(p, Pauli::Z);
    LayeredCircuit c = transversal_logical(p, {LogicalGate::S});
    if (!maps_correctly(p, st, c, Pauli::X, Pauli::Y) || !maps_correctly(p, st, c, Pauli::Z, Pauli::Z) ||
        !preserves_checks(p, st, c)) {
        throw std::logic_error("build_patch: diagonal phase pattern does not implement logical S");
    }
    return p;
}

PatchReport check_patch(const SurfaceCodePatch &p) {
    PatchReport r;
    std::vector<PauliString> checks;
    for (size_t i = 0; i < p.x_checks.size(); i++) checks.push_back(p.check_operator(true, i));
    for (size_t i = 0; i < p.z_checks.size(); i++) checks.push_back(p.check_operator(false, i));
    PauliString X = p.logical(Pauli::X), Z = p.logical(Pauli::Z);
    r.commute = true;
    for (size_t i = 0; i < checks.size(); i++) {
        for (size_t j = i + 1; j < checks.size(); j++) r.commute &= checks[i].commutes(checks[j]);
        r.commute &= checks[i].commutes(X) && checks[i].commutes(Z);
    }
    r.logicals_anticommute = !X.commutes(Z);
    std::vector<BitVec> rows;
    for (const auto &c : checks) {
        BitVec v(2 * p.m);
        for (size_t q = 0; q < p.m; q++) {
            v.set(q, c.x.get(q));
            v.set(p.m + q, c.z.get(q));
        }
        rows.push_back(v);
    }
    r.stabilizer_rank = gf2_rank(rows);
    r.logical_qubits = p.m - r.stabilizer_rank;
    r.fold_involution = true;
    for (size_t q = 0; q < p.m; q++) r.fold_involution &= p.fold[p.fold[q]] == q;
    auto image = [&](const std::vector<uint32_t> &s) {
        BitVec v(p.m);
        for (uint32_t q : s) v.set(p.fold[q]);
        return v;
    };
    for (const auto &xs : p.x_checks) {
        BitVec im = image(xs);
        bool found = false;
        for (const auto &zs : p.z_checks) {
            BitVec v(p.m);
            for (uint32_t q : zs) v.set(q);
            found |= v == im;
        }
        r.fold_involution &= found;
    }
    return r;
}

size_t min_logical_weight(const SurfaceCodePatch &p, bool x_type, size_t max_weight) {
    // An X-type string is a logical iff it commutes with every Z check and anticommutes with Z-bar.
    const auto &checks = x_type ? p.z_checks : p.x_checks;
    const auto &other = x_type ? p.z_logical : p.x_logical;
    std::vector<BitVec> cols(p.m, BitVec(checks.size() + 1));
    for (size_t i = 0; i < checks.size(); i++) {
        for (uint32_t q : checks[i]) cols[q].set(i);
    }
    for (uint32_t q : other) cols[q].set(checks.size());
    BitVec target(checks.size() + 1);
    target.set(checks.size());
    for (size_t w = 1; w <= std::min(max_weight, p.m); w++) {
        std::vector<size_t> pick(w);
        std::vector<BitVec> acc(w + 1, BitVec(checks.size() + 1));
        // Depth-first over increasing index tuples with running syndromes.
        std::function<bool(size_t, size_t)> rec = [&](size_t depth, size_t start) {
            if (depth == w) return acc[w] == target;
            for (size_t q = start; q + (w - depth) <= p.m; q++) {
                acc[depth + 1] = acc[depth] ^ cols[q];
                if (rec(depth + 1, q + 1)) return true;
            }
            return false;
        };
        if (rec(0, 0)) return w;
    }
    return 0;
}

Tableau code_state(const SurfaceCodePatch &p, Pauli logical_plus) {
    if (logical_plus != Pauli::Z && logical_plus != Pauli::X) throw std::invalid_argument("code_state: X or Z only");
    Tableau t(p.m);
    Rng rng(0);
    if (logical_plus == Pauli::X) {
        for (size_t q = 0; q < p.m; q++) t.h(q);
    }
    for (size_t i = 0; i < p.x_checks.size(); i++) t.measure_pauli(p.check_operator(true, i), rng, 0);
    for (size_t i = 0; i < p.z_checks.size(); i++) t.measure_pauli(p.check_operator(false, i), rng, 0);
    t.measure_pauli(p.logical(logical_plus), rng, 0);
    return t;
}

bool logically_equal(const SurfaceCodePatch &p, const PauliString &a, const PauliString &b) {
    return equal_in(p, code_state(p, Pauli::Z), a, b);
}

std::vector<LogicalGate> parse_logical_word(const std::string &s) {
    std::vector<LogicalGate> out;
    for (char ch : s) {
        switch (std::toupper(static_cast<unsigned char>(ch))) {
            case 'H': out.push_back(LogicalGate::H); break;
            case 'S': out.push_back(LogicalGate::S); break;
            case 'X': out.push_back(LogicalGate::X); break;
            case 'Z': out.push_back(LogicalGate::Z); break;
            case ' ':
            case ',': break;
            default: throw std::invalid_argument(std::string("parse_logical_word: bad letter ") + ch);
        }
    }
    return out;
}

size_t transversal_depth(LogicalGate g) { return g == LogicalGate::H ? 2 : 1; }

std::vector<std::vector<Gate>> transversal_layers(const SurfaceCodePatch &p, LogicalGate g,
                                                  const std::vector<uint32_t> &qubits) {
    if (qubits.size() != p.m) throw std::invalid_argument("transversal_layers: qubit map size");
    if ((g == LogicalGate::H || g == LogicalGate::S) && !p.folded) {
        throw std::invalid_argument("transversal_layers: H and S need a folded patch");
    }
    std::vector<std::vector<Gate>> out;
    switch (g) {
        case LogicalGate::H: {
            std::vector<Gate> l1, l2;
            for (size_t q = 0; q < p.m; q++) {
                l1.push_back({GateType::H, qubits[q]});
                if (q < p.fold[q]) l2.push_back({GateType::SWAP, qubits[q], qubits[p.fold[q]]});
            }
            out = {l1, l2};
            break;
        }
        case LogicalGate::S: {
            std::vector<Gate> l;
            for (size_t q = 0; q < p.m; q++) {
                if (q < p.fold[q]) {
                    l.push_back({GateType::CZ, qubits[q], qubits[p.fold[q]]});
                } else if (q == p.fold[q]) {
                    size_t k = size_t(p.coords[q].first);
                    bool dg = k < p.s_dagger_on_diag.size() && p.s_dagger_on_diag[k];
                    l.push_back({dg ? GateType::SDG : GateType::S, qubits[q]});
                }
            }
            out = {l};
            break;
        }
        case LogicalGate::X:
        case LogicalGate::Z: {
            std::vector<Gate> l;
            const auto &sup = g == LogicalGate::X ? p.x_logical : p.z_logical;
            for (uint32_t q : sup) l.push_back({g == LogicalGate::X ? GateType::X : GateType::Z, qubits[q]});
            out = {l};
            break;
        }
    }
    return out;
}

void append_transversal(LayeredCircuit &c, const SurfaceCodePatch &p, const std::vector<LogicalGate> &word,
                        const std::vector<uint32_t> &qubits) {
    for (LogicalGate g : word) {
        for (auto &l : transversal_layers(p, g, qubits)) c.layers.push_back(Layer{std::move(l), {}});
    }
}

LayeredCircuit transversal_logical(const SurfaceCodePatch &p, const std::vector<LogicalGate> &word) {
    LayeredCircuit c;
    c.num_qubits = p.m;
    std::vector<uint32_t> id(p.m);
    for (size_t q = 0; q < p.m; q++) id[q] = uint32_t(q);
    append_transversal(c, p, word, id);
    return c;
}

Readout::Readout(const SurfaceCodePatch &p, DecoderChoice choice) : p_(&p) {
    if (p.d == 1) return;
    auto graph = [&](const std::vector<std::vector<uint32_t>> &checks) {
        std::vector<std::vector<uint32_t>> fn(p.m);
        for (size_t i = 0; i < checks.size(); i++) {
            for (uint32_t q : checks[i]) fn[q].push_back(uint32_t(i));
        }
        return std::make_unique<DecodingGraph>(checks.size(), fn);
    };
    gz_ = graph(p.z_checks);
    gx_ = graph(p.x_checks);
    dz_ = std::make_unique<Decoder>(*gz_, choice);
    dx_ = std::make_unique<Decoder>(*gx_, choice);
}

BitVec Readout::syndrome(const BitVec &x, bool x_basis) const {
    const auto &checks = x_basis ? p_->x_checks : p_->z_checks;
    BitVec s(checks.size());
    for (size_t i = 0; i < checks.size(); i++) {
        bool v = false;
        for (uint32_t q : checks[i]) v ^= x.get(q);
        s.set(i, v);
    }
    return s;
}

namespace {
bool logical_parity(const SurfaceCodePatch &p, const BitVec &x, bool x_basis) {
    bool v = false;
    for (uint32_t q : x_basis ? p.x_logical : p.z_logical) v ^= x.get(q);
    return v;
}
}  // namespace

bool Readout::parity(const BitVec &x, bool x_basis) const {
    if (x.size() != p_->m) throw std::invalid_argument("Readout: size mismatch");
    if (syndrome(x, x_basis).any()) throw std::invalid_argument("Readout: outcome is not a codeword");
    return logical_parity(*p_, x, x_basis);
}

bool Readout::decode(const BitVec &x, bool x_basis) const {
    if (x.size() != p_->m) throw std::invalid_argument("Readout: size mismatch");
    if (p_->d == 1) return x.get(0);
    const Decoder &dec = x_basis ? *dx_ : *dz_;
    BitVec fixed = x ^ dec.decode(syndrome(x, x_basis));
    return logical_parity(*p_, fixed, x_basis);
}

bool parity(const SurfaceCodePatch &p, const BitVec &x) { return Readout(p).parity(x); }

bool decode_readout(const SurfaceCodePatch &p, const BitVec &x, DecoderChoice choice) {
    return Readout(p, choice).decode(x);
}

}  // namespace telesim
