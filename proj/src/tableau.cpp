#include "telesim/tableau.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace telesim {

const char *gate_name(GateType t) {
    switch (t) {
        case GateType::H: return "H";
        case GateType::S: return "S";
        case GateType::SDG: return "SDG";
        case GateType::X: return "X";
        case GateType::Y: return "Y";
        case GateType::Z: return "Z";
        case GateType::CNOT: return "CNOT";
        case GateType::CZ: return "CZ";
        case GateType::SWAP: return "SWAP";
    }
    return "?";
}

size_t LayeredCircuit::num_measurements() const {
    size_t m = 0;
    for (const Layer &l : layers) m += l.measure.size();
    return m;
}

void LayeredCircuit::validate() const {
    std::vector<uint8_t> dead(num_qubits, 0);
    std::vector<size_t> stamp(num_qubits, SIZE_MAX);
    for (size_t li = 0; li < layers.size(); li++) {
        auto touch = [&](uint32_t q) {
            if (q >= num_qubits) throw std::invalid_argument("circuit: qubit out of range");
            if (dead[q]) throw std::invalid_argument("circuit: gate on a measured qubit");
            if (stamp[q] == li) throw std::invalid_argument("circuit: overlapping gates in one layer");
            stamp[q] = li;
        };
        for (const Gate &g : layers[li].gates) {
            touch(g.a);
            if (is_two_qubit(g.type)) touch(g.b);
        }
        for (uint32_t q : layers[li].measure) {
            if (q >= num_qubits || dead[q]) throw std::invalid_argument("circuit: bad measurement");
            dead[q] = 1;
        }
    }
}

void LayeredCircuit::append(const LayeredCircuit &other) {
    if (other.num_qubits != num_qubits) throw std::invalid_argument("circuit: qubit count mismatch");
    layers.insert(layers.end(), other.layers.begin(), other.layers.end());
}

int pauli_mul_phase(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2, const uint64_t *z2, size_t words) {
    int plus = 0, minus = 0;
    for (size_t k = 0; k < words; k++) {
        uint64_t a = x1[k], b = z1[k], c = x2[k], d = z2[k];
        uint64_t y1 = a & b, xo = a & ~b, zo = ~a & b;
        uint64_t p = (y1 & d & ~c) | (xo & d & c) | (zo & c & ~d);
        uint64_t m = (y1 & c & ~d) | (xo & d & ~c) | (zo & c & d);
        plus += std::popcount(p);
        minus += std::popcount(m);
    }
    return ((plus - minus) % 4 + 4) % 4;
}

namespace {

inline bool bit(const uint64_t *w, size_t q) { return (w[q >> 6] >> (q & 63)) & 1; }
inline void put(uint64_t *w, size_t q, bool v) {
    uint64_t m = uint64_t{1} << (q & 63);
    w[q >> 6] = v ? (w[q >> 6] | m) : (w[q >> 6] & ~m);
}

// Heisenberg update of one Pauli row.
void conj_row(uint64_t *x, uint64_t *z, uint8_t &r, GateType t, size_t a, size_t b) {
    bool xa = bit(x, a), za = bit(z, a);
    switch (t) {
        case GateType::H:
            r ^= xa & za;
            put(x, a, za);
            put(z, a, xa);
            return;
        case GateType::S:
            r ^= xa & za;
            put(z, a, za ^ xa);
            return;
        case GateType::SDG:
            r ^= xa & !za;
            put(z, a, za ^ xa);
            return;
        case GateType::X: r ^= za; return;
        case GateType::Z: r ^= xa; return;
        case GateType::Y: r ^= xa ^ za; return;
        default: break;
    }
    bool xb = bit(x, b), zb = bit(z, b);
    switch (t) {
        case GateType::CNOT:
            r ^= xa & zb & (xb ^ za ^ 1);
            put(x, b, xb ^ xa);
            put(z, a, za ^ zb);
            return;
        case GateType::CZ:
            r ^= xa & xb & (za ^ zb);
            put(z, a, za ^ xb);
            put(z, b, zb ^ xa);
            return;
        case GateType::SWAP:
            put(x, a, xb);
            put(x, b, xa);
            put(z, a, zb);
            put(z, b, za);
            return;
        default: break;
    }
}

GateType gen_gate(Gen g) {
    switch (g) {
        case Gen::H: return GateType::H;
        case Gen::S: return GateType::S;
        case Gen::X: return GateType::X;
        case Gen::Z: return GateType::Z;
    }
    return GateType::H;
}

}  // namespace

PauliString PauliString::from_string(const std::string &s) {
    size_t start = 0;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        start = 1;
    }
    PauliString p(s.size() - start);
    p.neg = neg;
    for (size_t i = start; i < s.size(); i++) p.set(i - start, pauli_from_char(s[i]));
    return p;
}

void PauliString::set(size_t q, Pauli p) {
    x.set(q, pauli_s2(p));
    z.set(q, pauli_s1(p));
}

size_t PauliString::weight() const {
    BitVec u = x;
    u |= z;
    return u.popcount();
}

bool PauliString::commutes(const PauliString &o) const { return x.dot(o.z) == z.dot(o.x); }

bool PauliString::mul_right(const PauliString &o) {
    if (o.size() != size()) throw std::invalid_argument("PauliString: size mismatch");
    int ph = size() ? pauli_mul_phase(x.data(), z.data(), o.x.data(), o.z.data(), x.num_words()) : 0;
    ph = (ph + 2 * neg + 2 * o.neg) % 4;
    x ^= o.x;
    z ^= o.z;
    neg = ph == 2;
    return ph % 2 == 0;
}

std::string PauliString::str() const {
    std::string s(1, neg ? '-' : '+');
    for (size_t q = 0; q < size(); q++) s += pauli_char(get(q));
    return s;
}

void PauliString::conjugate(const Gate &g) {
    uint8_t r = neg;
    conj_row(x.data(), z.data(), r, g.type, g.a, g.b);
    neg = r & 1;
}

void PauliString::conjugate(const LayeredCircuit &c) {
    for (const Layer &l : c.layers) {
        for (const Gate &g : l.gates) conjugate(g);
    }
}

Tableau::Tableau(size_t n) : n_(n), words_((n + 63) / 64), x_((2 * n + 1) * words_, 0), z_((2 * n + 1) * words_, 0), r_(2 * n + 1, 0) {
    for (size_t q = 0; q < n; q++) {
        put(xrow(q), q, true);
        put(zrow(n + q), q, true);
    }
}

void Tableau::apply(const Gate &g) {
    if (g.a >= n_ || (is_two_qubit(g.type) && (g.b >= n_ || g.b == g.a))) throw std::invalid_argument("Tableau: bad gate");
    for (size_t i = 0; i < 2 * n_; i++) conj_row(xrow(i), zrow(i), r_[i], g.type, g.a, g.b);
}

void Tableau::h(size_t q) { apply({GateType::H, uint32_t(q)}); }
void Tableau::s(size_t q) { apply({GateType::S, uint32_t(q)}); }
void Tableau::sdg(size_t q) { apply({GateType::SDG, uint32_t(q)}); }
void Tableau::x(size_t q) { apply({GateType::X, uint32_t(q)}); }
void Tableau::y(size_t q) { apply({GateType::Y, uint32_t(q)}); }
void Tableau::z(size_t q) { apply({GateType::Z, uint32_t(q)}); }
void Tableau::cnot(size_t c, size_t t) { apply({GateType::CNOT, uint32_t(c), uint32_t(t)}); }
void Tableau::cz(size_t a, size_t b) { apply({GateType::CZ, uint32_t(a), uint32_t(b)}); }
void Tableau::swap(size_t a, size_t b) { apply({GateType::SWAP, uint32_t(a), uint32_t(b)}); }

void Tableau::apply_pauli(size_t q, Pauli p) {
    // A Pauli flips the sign of every row it anticommutes with.
    bool px = pauli_s2(p), pz = pauli_s1(p);
    for (size_t i = 0; i < 2 * n_; i++) r_[i] ^= (xbit(i, q) & pz) ^ (zbit(i, q) & px);
}

void Tableau::apply_pauli(const PauliString &p) {
    for (size_t q = 0; q < p.size(); q++) {
        if (p.get(q) != Pauli::I) apply_pauli(q, p.get(q));
    }
}

void Tableau::apply_clifford(size_t q, Clifford c) {
    for (Gen g : group().word[c]) apply({gen_gate(g), uint32_t(q)});
}

void Tableau::rowcopy(size_t dst, size_t src) {
    for (size_t k = 0; k < words_; k++) {
        xrow(dst)[k] = xrow(src)[k];
        zrow(dst)[k] = zrow(src)[k];
    }
    r_[dst] = r_[src];
}

void Tableau::rowsum(size_t h, size_t i) {
    int ph = (pauli_mul_phase(xrow(i), zrow(i), xrow(h), zrow(h), words_) + 2 * r_[h] + 2 * r_[i]) % 4;
    r_[h] = ph == 2;
    for (size_t k = 0; k < words_; k++) {
        xrow(h)[k] ^= xrow(i)[k];
        zrow(h)[k] ^= zrow(i)[k];
    }
}

bool Tableau::measure_z(size_t q, Rng &rng, bool *was_random) {
    if (q >= n_) throw std::invalid_argument("Tableau: qubit out of range");
    size_t p = 2 * n_;
    for (size_t i = n_; i < 2 * n_; i++) {
        if (xbit(i, q)) {
            p = i;
            break;
        }
    }
    if (was_random) *was_random = p != 2 * n_;
    if (p != 2 * n_) {
        for (size_t i = 0; i < 2 * n_; i++) {
            if (i != p && xbit(i, q)) rowsum(i, p);
        }
        rowcopy(p - n_, p);
        for (size_t k = 0; k < words_; k++) xrow(p)[k] = zrow(p)[k] = 0;
        put(zrow(p), q, true);
        bool out = rng() & 1;
        r_[p] = out;
        return out;
    }
    size_t s = 2 * n_;
    for (size_t k = 0; k < words_; k++) xrow(s)[k] = zrow(s)[k] = 0;
    r_[s] = 0;
    for (size_t i = 0; i < n_; i++) {
        if (xbit(i, q)) rowsum(s, i + n_);
    }
    return r_[s];
}

bool Tableau::row_anticommutes(size_t i, const PauliString &p) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < words_; k++) acc ^= (xrow(i)[k] & p.z.data()[k]) ^ (zrow(i)[k] & p.x.data()[k]);
    return std::popcount(acc) & 1;
}

bool Tableau::measure_pauli(const PauliString &p, Rng &rng, int forced) {
    if (p.size() != n_) throw std::invalid_argument("Tableau: size mismatch");
    size_t piv = 2 * n_;
    for (size_t i = n_; i < 2 * n_; i++) {
        if (row_anticommutes(i, p)) {
            piv = i;
            break;
        }
    }
    if (piv != 2 * n_) {
        for (size_t i = 0; i < 2 * n_; i++) {
            if (i != piv && row_anticommutes(i, p)) rowsum(i, piv);
        }
        rowcopy(piv - n_, piv);
        for (size_t k = 0; k < words_; k++) {
            xrow(piv)[k] = p.x.data()[k];
            zrow(piv)[k] = p.z.data()[k];
        }
        bool out = forced >= 0 ? bool(forced) : bool(rng() & 1);
        r_[piv] = out ^ p.neg;
        return out;
    }
    int e = expectation(p);
    bool out = e < 0;
    if (forced >= 0 && bool(forced) != out) throw std::runtime_error("Tableau: forced outcome has probability zero");
    return out;
}

Pauli Tableau::bell_measure(size_t q1, size_t q2, Rng &rng) {
    cnot(q1, q2);
    h(q1);
    bool s1 = measure_z(q1, rng);
    bool s2 = measure_z(q2, rng);
    return pauli_from_bits(s1, s2);
}

PauliString Tableau::stabilizer(size_t i) const {
    PauliString p(n_);
    for (size_t k = 0; k < words_; k++) {
        p.x.word(k) = xrow(n_ + i)[k];
        p.z.word(k) = zrow(n_ + i)[k];
    }
    p.neg = r_[n_ + i];
    return p;
}

PauliString Tableau::destabilizer(size_t i) const {
    PauliString p(n_);
    for (size_t k = 0; k < words_; k++) {
        p.x.word(k) = xrow(i)[k];
        p.z.word(k) = zrow(i)[k];
    }
    p.neg = r_[i];
    return p;
}

int Tableau::expectation(const PauliString &p) const {
    if (p.size() != n_) throw std::invalid_argument("Tableau: size mismatch");
    PauliString acc(n_);
    for (size_t i = 0; i < n_; i++) {
        PauliString st = stabilizer(i);
        if (!st.commutes(p)) return 0;
        if (!destabilizer(i).commutes(p)) acc.mul_right(st);
    }
    if (acc.x == p.x && acc.z == p.z) return acc.neg == p.neg ? 1 : -1;
    throw std::logic_error("Tableau: stabilizer group is not maximal");
}

bool Tableau::check_invariants() const {
    std::vector<PauliString> rows;
    for (size_t i = 0; i < n_; i++) rows.push_back(destabilizer(i));
    for (size_t i = 0; i < n_; i++) rows.push_back(stabilizer(i));
    for (size_t i = 0; i < 2 * n_; i++) {
        for (size_t j = i + 1; j < 2 * n_; j++) {
            bool should_anti = j == i + n_;
            if (rows[i].commutes(rows[j]) == should_anti) return false;
        }
    }
    return true;
}

std::string Tableau::dump() const {
    std::string s;
    for (size_t i = 0; i < n_; i++) s += "D" + std::to_string(i) + " " + destabilizer(i).str() + "\n";
    for (size_t i = 0; i < n_; i++) s += "S" + std::to_string(i) + " " + stabilizer(i).str() + "\n";
    return s;
}

BitVec run_ideal(const LayeredCircuit &c, Rng &rng, Tableau *final_state) {
    Tableau t(c.num_qubits);
    BitVec rec(c.num_measurements());
    size_t m = 0;
    for (const Layer &l : c.layers) {
        for (const Gate &g : l.gates) t.apply(g);
        for (uint32_t q : l.measure) rec.set(m++, t.measure_z(q, rng));
    }
    if (final_state) *final_state = std::move(t);
    return rec;
}

}  // namespace telesim
