#pragma once

#include <optional>
#include <vector>

#include "telesim/pauli_clifford.hpp"
#include "telesim/rng.hpp"

namespace telesim {

using CliffordTuple = std::vector<Clifford>;
using PauliTuple = std::vector<Pauli>;

struct RelationOutcome {
    bool valid = false;
    int64_t prob_num = 0;
    int prob_den_log2 = 0;
    Dyadic prob() const { return {prob_num, prob_den_log2}; }
    bool operator==(const RelationOutcome &) const = default;
};

// Class of P_{n-1} C_{n-1} ... P_0 C_0.
Clifford trace_product_class(const CliffordTuple &c, const PauliTuple &p);
RelationOutcome outcome_from_class(Clifford product, size_t n);
RelationOutcome verify(const CliffordTuple &c, const PauliTuple &p);

// Outcome tuples are indexed in base 4: index = sum_i code(P_i) 4^i.
PauliTuple pauli_tuple_from_index(uint64_t index, size_t n);
uint64_t pauli_tuple_index(const PauliTuple &p);
constexpr size_t kMaxEnumerationN = 8;
// Probability of every outcome, as multiples of 4^{-n} (so entries sum to 4^n).
std::vector<uint32_t> full_distribution_weights(const CliffordTuple &c);
std::vector<Dyadic> full_distribution(const CliffordTuple &c);

PauliTuple sample_ideal(const CliffordTuple &c, Rng &rng);

struct NormalFormTrace {
    RelationOutcome outcome;
    Clifford regrouped;  // class of P_k Q' A P_j Q'' B
    int phase = 0;       // i^phase collected while moving Paulis left
    Pauli q_prime = Pauli::I;
    Pauli q_dprime = Pauli::I;
};
// |trace| recomputed after commuting all Paulis of the two arcs (j, k] and (k, j]
// to the left end of their arc.
NormalFormTrace normal_form_trace(const CliffordTuple &c, const PauliTuple &p, size_t j, size_t k);

struct CliffordRestriction {
    std::vector<std::optional<Clifford>> assignment;  // nullopt = active
    std::vector<size_t> active_list() const;
};
CliffordTuple splice(const CliffordRestriction &xi, const CliffordTuple &d);
RelationOutcome verify_restricted(const CliffordRestriction &xi, const CliffordTuple &d, const PauliTuple &p);

}  // namespace telesim
