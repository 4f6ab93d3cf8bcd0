#include "telesim/pauli_clifford.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>

namespace telesim {

int pauli_product_phase(Pauli a, Pauli b) {
    int x1 = pauli_s2(a), z1 = pauli_s1(a), x2 = pauli_s2(b), z2 = pauli_s1(b);
    int x3 = x1 ^ x2, z3 = z1 ^ z2;
    // Y = i X Z, so a Pauli with bits (x, z) is i^{xz} X^x Z^z.
    int k = x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3;
    return ((k % 4) + 4) % 4;
}

char pauli_char(Pauli p) { return "IZXY"[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': case 'i': case '_': return Pauli::I;
        case 'X': case 'x': return Pauli::X;
        case 'Y': case 'y': return Pauli::Y;
        case 'Z': case 'z': return Pauli::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli: ") + c);
}

Dyadic Dyadic::make(int64_t num, int log2den) {
    if (num == 0) return {0, 0};
    while (log2den > 0 && num % 2 == 0) {
        num /= 2;
        log2den--;
    }
    while (log2den < 0) {
        num *= 2;
        log2den++;
    }
    return {num, log2den};
}

double Dyadic::value() const { return std::ldexp(double(num), -log2den); }

std::string Dyadic::str() const {
    if (log2den == 0) return std::to_string(num);
    if (log2den < 63) return std::to_string(num) + "/" + std::to_string(uint64_t{1} << log2den);
    return std::to_string(num) + "/2^" + std::to_string(log2den);
}

ExactUnitary2 ExactUnitary2::identity() {
    ExactUnitary2 u;
    u.m[0][0] = {1, 0};
    u.m[1][1] = {1, 0};
    return u;
}

ExactUnitary2 ExactUnitary2::hadamard() {
    ExactUnitary2 u;
    u.m = {{{GaussInt{1, 0}, GaussInt{1, 0}}, {GaussInt{1, 0}, GaussInt{-1, 0}}}};
    u.k = 1;
    return u;
}

ExactUnitary2 ExactUnitary2::phase_s() {
    ExactUnitary2 u;
    u.m[0][0] = {1, 0};
    u.m[1][1] = {0, 1};
    return u;
}

ExactUnitary2 ExactUnitary2::pauli(Pauli p) {
    ExactUnitary2 u;
    switch (p) {
        case Pauli::I:
            return identity();
        case Pauli::X:
            u.m[0][1] = {1, 0};
            u.m[1][0] = {1, 0};
            break;
        case Pauli::Y:
            u.m[0][1] = {0, -1};
            u.m[1][0] = {0, 1};
            break;
        case Pauli::Z:
            u.m[0][0] = {1, 0};
            u.m[1][1] = {-1, 0};
            break;
    }
    return u;
}

ExactUnitary2 ExactUnitary2::rotation(Pauli p) {
    ExactUnitary2 pm = pauli(p);
    ExactUnitary2 u = identity();
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) u.m[r][c] = u.m[r][c] - GaussInt{0, 1} * pm.m[r][c];
    }
    u.k = 1;
    return u;
}

ExactUnitary2 ExactUnitary2::operator*(const ExactUnitary2 &o) const {
    ExactUnitary2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    }
    r.k = k + o.k;
    return r;
}

ExactUnitary2 ExactUnitary2::adjoint() const {
    ExactUnitary2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) r.m[i][j] = m[j][i].conj();
    }
    r.k = k;
    return r;
}

ExactUnitary2 ExactUnitary2::transpose() const {
    ExactUnitary2 r = *this;
    std::swap(r.m[0][1], r.m[1][0]);
    return r;
}

ExactUnitary2 ExactUnitary2::negated() const {
    ExactUnitary2 r = *this;
    for (auto &row : r.m) {
        for (auto &e : row) e = -e;
    }
    return r;
}

ExactUnitary2 ExactUnitary2::reduced() const {
    ExactUnitary2 r = *this;
    auto divisible = [](GaussInt g) { return ((g.re + g.im) & 1) == 0; };
    while (r.k > 0) {
        bool all = true;
        for (auto &row : r.m) {
            for (auto &e : row) all = all && divisible(e);
        }
        if (!all) break;
        for (auto &row : r.m) {
            for (auto &e : row) e = GaussInt{(e.re + e.im) / 2, (e.im - e.re) / 2};
        }
        r.k--;
    }
    return r;
}

Dyadic ExactUnitary2::abs_trace_sq() const { return Dyadic::make(trace_raw().norm(), k); }

bool ExactUnitary2::operator==(const ExactUnitary2 &o) const {
    int diff = k - o.k;
    if (diff % 2 != 0) return false;
    const ExactUnitary2 &lo = diff < 0 ? *this : o;
    const ExactUnitary2 &hi = diff < 0 ? o : *this;
    int64_t f = int64_t{1} << (std::abs(diff) / 2);
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            if (!(GaussInt{lo.m[i][j].re * f, lo.m[i][j].im * f} == hi.m[i][j])) return false;
        }
    }
    return true;
}

bool ExactUnitary2::phase_equal(const ExactUnitary2 &o) const {
    ExactUnitary2 p = *this * o.adjoint();
    return p.m[0][1].zero() && p.m[1][0].zero() && p.m[0][0] == p.m[1][1] && !p.m[0][0].zero();
}

SignedPauli ExactUnitary2::conjugate(Pauli p) const {
    ExactUnitary2 r = *this * pauli(p) * adjoint();
    for (int q = 0; q < 4; q++) {
        ExactUnitary2 qm = pauli(static_cast<Pauli>(q));
        if (r == qm) return {static_cast<Pauli>(q), false};
        if (r == qm.negated()) return {static_cast<Pauli>(q), true};
    }
    throw std::logic_error("conjugate: operator does not normalize the Pauli group");
}

namespace {

int form_slot(const CliffordForm &f) {
    return int(f.x_img.p) * 16 + int(f.x_img.neg) * 8 + int(f.z_img.p) * 2 + int(f.z_img.neg);
}

CliffordForm form_of(const ExactUnitary2 &u) { return {u.conjugate(Pauli::X), u.conjugate(Pauli::Z)}; }

ExactUnitary2 gen_matrix(Gen g) {
    switch (g) {
        case Gen::H: return ExactUnitary2::hadamard();
        case Gen::S: return ExactUnitary2::phase_s();
        case Gen::X: return ExactUnitary2::pauli(Pauli::X);
        case Gen::Z: return ExactUnitary2::pauli(Pauli::Z);
    }
    return ExactUnitary2::identity();
}

}  // namespace

Clifford GroupTable::index_of(const CliffordForm &f) const {
    int v = lookup_[form_slot(f)];
    if (v < 0) throw std::invalid_argument("index_of: not a Clifford form");
    return Clifford(v);
}

Clifford GroupTable::class_of(const ExactUnitary2 &u) const { return index_of(form_of(u)); }

GroupTable build_group_table() {
    struct Node {
        ExactUnitary2 u;
        CliffordForm f;
        std::vector<Gen> word;
        int level;
    };
    std::vector<Node> nodes;
    std::map<std::array<int, 4>, int> seen;
    ExactUnitary2 id = ExactUnitary2::identity();
    nodes.push_back({id, form_of(id), {}, 0});
    seen[nodes[0].f.key()] = 0;
    std::vector<int> frontier = {0};
    int level = 0;
    while (!frontier.empty()) {
        level++;
        std::map<std::array<int, 4>, Node> fresh;
        for (int idx : frontier) {
            for (Gen g : {Gen::H, Gen::S, Gen::X, Gen::Z}) {
                ExactUnitary2 u = (gen_matrix(g) * nodes[idx].u).reduced();
                CliffordForm f = form_of(u);
                if (seen.count(f.key()) || fresh.count(f.key())) continue;
                std::vector<Gen> w = nodes[idx].word;
                w.push_back(g);
                fresh.emplace(f.key(), Node{u, f, w, level});
            }
        }
        frontier.clear();
        // std::map iterates in key order, which is the documented tie-break.
        for (auto &kv : fresh) {
            seen[kv.first] = int(nodes.size());
            frontier.push_back(int(nodes.size()));
            nodes.push_back(kv.second);
        }
    }
    if (nodes.size() != GroupTable::kSize) {
        throw std::logic_error("build_group_table: closure has " + std::to_string(nodes.size()) +
                               " classes, expected 24");
    }

    GroupTable t;
    t.lookup_.fill(-1);
    for (int i = 0; i < GroupTable::kSize; i++) {
        t.rep[i] = nodes[i].u;
        t.form[i] = nodes[i].f;
        t.word[i] = nodes[i].word;
        t.bfs_level[i] = nodes[i].level;
        t.lookup_[form_slot(nodes[i].f)] = int16_t(i);
    }
    for (int a = 0; a < GroupTable::kSize; a++) {
        for (int b = 0; b < GroupTable::kSize; b++) t.mult[a][b] = t.class_of(t.rep[a] * t.rep[b]);
        for (int p = 0; p < 4; p++) t.conj[a][p] = t.rep[a].conjugate(static_cast<Pauli>(p));
        Dyadic ats = t.rep[a].abs_trace_sq();
        if (ats.log2den != 0) throw std::logic_error("build_group_table: non-integral |tr|^2");
        t.abs_trace_sq[a] = int(ats.num);
        t.traceless[a] = t.rep[a].trace_is_zero();
        t.transp[a] = t.class_of(t.rep[a].transpose());
    }
    t.identity = t.class_of(ExactUnitary2::identity());
    for (int a = 0; a < GroupTable::kSize; a++) {
        int found = 0;
        for (int b = 0; b < GroupTable::kSize; b++) {
            if (t.mult[a][b] == t.identity) {
                t.inv[a] = Clifford(b);
                found++;
            }
        }
        if (found != 1) throw std::logic_error("build_group_table: inverse not unique");
    }
    for (int p = 0; p < 4; p++) t.pauli_class[p] = t.class_of(ExactUnitary2::pauli(static_cast<Pauli>(p)));
    t.h = t.class_of(ExactUnitary2::hadamard());
    t.s = t.class_of(ExactUnitary2::phase_s());
    t.sdg = t.inv[t.s];
    return t;
}

const GroupTable &group() {
    static const GroupTable table = build_group_table();
    return table;
}

Clifford rotation_clifford(Pauli p) { return group().class_of(ExactUnitary2::rotation(p)); }

bool clifford_is_pauli(Clifford c, Pauli *out) {
    for (int p = 0; p < 4; p++) {
        if (group().pauli_class[p] == c) {
            if (out) *out = static_cast<Pauli>(p);
            return true;
        }
    }
    return false;
}

Clifford parse_clifford(const std::string &tok) {
    const GroupTable &g = group();
    std::string up;
    for (char ch : tok) up.push_back(char(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "I") return g.identity;
    if (up == "X") return g.pauli_class[int(Pauli::X)];
    if (up == "Y") return g.pauli_class[int(Pauli::Y)];
    if (up == "Z") return g.pauli_class[int(Pauli::Z)];
    if (up == "H") return g.h;
    if (up == "S") return g.s;
    if (up == "SDG") return g.sdg;
    if (tok.size() == 5 && tok.find_first_not_of("01") == std::string::npos) {
        unsigned v = std::stoul(tok, nullptr, 2);
        if (v >= GroupTable::kSize) throw std::invalid_argument("bit string outside iota image: " + tok);
        return Clifford(v);
    }
    if (up.size() >= 2 && up[0] == 'C' && up.find_first_not_of("0123456789", 1) == std::string::npos) {
        unsigned v = std::stoul(up.substr(1));
        if (v < GroupTable::kSize) return Clifford(v);
    }
    throw std::invalid_argument("unrecognized Clifford token: " + tok);
}

std::string clifford_bits(Clifford c) {
    std::string s(EncodingMap::kBits, '0');
    for (unsigned b = 0; b < EncodingMap::kBits; b++) {
        if ((c >> b) & 1) s[EncodingMap::kBits - 1 - b] = '1';
    }
    return s;
}

std::string clifford_name(Clifford c) {
    const GroupTable &g = group();
    if (c == g.identity) return "I";
    if (c == g.h) return "H";
    if (c == g.s) return "S";
    if (c == g.sdg) return "SDG";
    Pauli p;
    if (clifford_is_pauli(c, &p)) return std::string(1, pauli_char(p));
    return clifford_bits(c);
}

EncodingMap enc_random(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, GroupTable::kSize - 1);
    EncodingMap e;
    for (auto &c : e.completion) c = Clifford(pick(rng));
    return e;
}

}  // namespace telesim
