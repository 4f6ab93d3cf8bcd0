#include "telesim/telep_relation.hpp"

#include <stdexcept>

namespace telesim {

Clifford trace_product_class(const CliffordTuple &c, const PauliTuple &p) {
    if (c.size() != p.size()) throw std::invalid_argument("verify: length mismatch");
    if (c.empty()) throw std::invalid_argument("verify: n must be at least 1");
    const GroupTable &g = group();
    Clifford acc = g.identity;
    for (size_t i = 0; i < c.size(); i++) {
        acc = g.mult[c[i]][acc];
        acc = g.mult[g.pauli_class[int(p[i])]][acc];
    }
    return acc;
}

RelationOutcome outcome_from_class(Clifford product, size_t n) {
    int ats = abs_trace_sq(product);
    Dyadic d = Dyadic::make(ats, int(2 * n));
    return {ats != 0, d.num, d.log2den};
}

RelationOutcome verify(const CliffordTuple &c, const PauliTuple &p) {
    return outcome_from_class(trace_product_class(c, p), c.size());
}

PauliTuple pauli_tuple_from_index(uint64_t index, size_t n) {
    PauliTuple p(n);
    for (size_t i = 0; i < n; i++) {
        p[i] = static_cast<Pauli>(index & 3);
        index >>= 2;
    }
    return p;
}

uint64_t pauli_tuple_index(const PauliTuple &p) {
    uint64_t idx = 0;
    for (size_t i = p.size(); i-- > 0;) idx = (idx << 2) | static_cast<uint64_t>(p[i]);
    return idx;
}

std::vector<uint32_t> full_distribution_weights(const CliffordTuple &c) {
    size_t n = c.size();
    if (n == 0 || n > kMaxEnumerationN) throw std::invalid_argument("full_distribution: need 1 <= n <= 8");
    uint64_t total = uint64_t{1} << (2 * n);
    std::vector<uint32_t> w(total);
    for (uint64_t idx = 0; idx < total; idx++) {
        w[idx] = uint32_t(abs_trace_sq(trace_product_class(c, pauli_tuple_from_index(idx, n))));
    }
    return w;
}

std::vector<Dyadic> full_distribution(const CliffordTuple &c) {
    std::vector<uint32_t> w = full_distribution_weights(c);
    std::vector<Dyadic> out;
    out.reserve(w.size());
    for (uint32_t v : w) out.push_back(Dyadic::make(v, int(2 * c.size())));
    return out;
}

PauliTuple sample_ideal(const CliffordTuple &c, Rng &rng) {
    size_t n = c.size();
    if (n == 0) throw std::invalid_argument("sample_ideal: n must be at least 1");
    const GroupTable &g = group();
    PauliTuple p(n);
    Clifford acc = g.identity;
    for (size_t i = 0; i + 1 < n; i++) {
        p[i] = static_cast<Pauli>(uniform_below(rng, 4));
        acc = g.mult[g.pauli_class[int(p[i])]][g.mult[c[i]][acc]];
    }
    Clifford a = g.mult[c[n - 1]][acc];
    // Weights |tr(P A)|^2 over the four Paulis sum to 4.
    int r = int(uniform_below(rng, 4));
    for (int q = 0; q < 4; q++) {
        r -= g.abs_trace_sq[g.mult[g.pauli_class[q]][a]];
        if (r < 0) {
            p[n - 1] = static_cast<Pauli>(q);
            return p;
        }
    }
    throw std::logic_error("sample_ideal: weights do not sum to 4");
}

namespace {

struct ArcForm {
    Pauli q = Pauli::I;  // product of the conjugated Paulis, below the top one
    int phase = 0;
    Clifford cliff = 0;  // C_top ... C_bottom
};

// Arc listed bottom to top. Rewrites P_top C_top ... P_bot C_bot as i^phase P_top Q A.
ArcForm regroup_arc(const std::vector<size_t> &idx, const CliffordTuple &c, const PauliTuple &p) {
    const GroupTable &g = group();
    ArcForm out;
    size_t top = idx.size() - 1;
    Clifford suffix = c[idx[top]];
    for (size_t s = top; s-- > 0;) {
        SignedPauli moved = g.conj[suffix][int(p[idx[s]])];
        out.phase += pauli_product_phase(out.q, moved.p) + (moved.neg ? 2 : 0);
        out.q = out.q * moved.p;
        suffix = g.mult[suffix][c[idx[s]]];
    }
    out.cliff = suffix;
    out.phase %= 4;
    return out;
}

}  // namespace

NormalFormTrace normal_form_trace(const CliffordTuple &c, const PauliTuple &p, size_t j, size_t k) {
    size_t n = c.size();
    if (p.size() != n) throw std::invalid_argument("normal_form_trace: length mismatch");
    if (!(j < k && k < n)) throw std::invalid_argument("normal_form_trace: need j < k < n");
    std::vector<size_t> arc1, arc2;
    for (size_t s = j + 1; s <= k; s++) arc1.push_back(s);
    for (size_t s = k + 1; s < k + 1 + (n - (k - j)); s++) arc2.push_back(s % n);
    const GroupTable &g = group();
    ArcForm a1 = regroup_arc(arc1, c, p), a2 = regroup_arc(arc2, c, p);
    // Trace of [P_k Q' A][P_j Q'' B], cyclically equal to the original trace.
    NormalFormTrace out;
    out.phase = (a1.phase + a2.phase + pauli_product_phase(p[k], a1.q) + pauli_product_phase(p[j], a2.q)) % 4;
    Clifford left = g.mult[g.pauli_class[int(p[k] * a1.q)]][a1.cliff];
    Clifford right = g.mult[g.pauli_class[int(p[j] * a2.q)]][a2.cliff];
    out.regrouped = g.mult[left][right];
    out.q_prime = a1.q;
    out.q_dprime = a2.q;
    out.outcome = outcome_from_class(out.regrouped, n);
    return out;
}

std::vector<size_t> CliffordRestriction::active_list() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < assignment.size(); i++) {
        if (!assignment[i]) out.push_back(i);
    }
    return out;
}

CliffordTuple splice(const CliffordRestriction &xi, const CliffordTuple &d) {
    std::vector<size_t> active = xi.active_list();
    if (d.size() != active.size()) throw std::invalid_argument("verify_restricted: arity mismatch");
    CliffordTuple full(xi.assignment.size());
    size_t t = 0;
    for (size_t i = 0; i < full.size(); i++) full[i] = xi.assignment[i] ? *xi.assignment[i] : d[t++];
    return full;
}

RelationOutcome verify_restricted(const CliffordRestriction &xi, const CliffordTuple &d, const PauliTuple &p) {
    return verify(splice(xi, d), p);
}

}  // namespace telesim
