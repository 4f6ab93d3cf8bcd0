#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/gf2.hpp"
#include "telesim/pauli_clifford.hpp"
#include "telesim/rng.hpp"

namespace telesim {

// Hermitian Pauli string (-1)^neg * prod_q sigma(x_q, z_q), with sigma(1,1) = Y.
struct PauliString {
    BitVec x;
    BitVec z;
    bool neg = false;

    PauliString() = default;
    explicit PauliString(size_t n) : x(n), z(n) {}
    static PauliString from_string(const std::string &s);  // e.g. "+XIZY" or "-ZZ"

    size_t size() const { return x.size(); }
    Pauli get(size_t q) const { return pauli_from_bits(z.get(q), x.get(q)); }
    void set(size_t q, Pauli p);
    size_t weight() const;
    bool commutes(const PauliString &o) const;
    // this <- this * o; returns false if the product is not Hermitian (only when they anticommute).
    bool mul_right(const PauliString &o);
    bool operator==(const PauliString &o) const { return neg == o.neg && x == o.x && z == o.z; }
    std::string str() const;

    // Heisenberg update P <- G P G^dagger.
    void conjugate(const Gate &g);
    void conjugate(const LayeredCircuit &c);
};

// i-exponent of prod over qubits of sigma(x1,z1) sigma(x2,z2) relative to sigma(x1^x2, z1^z2),
// computed a word at a time.
int pauli_mul_phase(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2, const uint64_t *z2, size_t words);

// Aaronson-Gottesman stabilizer tableau, row-major and bit-packed.
// Rows 0..n-1 are destabilizers, n..2n-1 stabilizers, row 2n is scratch.
class Tableau {
   public:
    explicit Tableau(size_t n);

    size_t num_qubits() const { return n_; }

    void h(size_t q);
    void s(size_t q);
    void sdg(size_t q);
    void x(size_t q);
    void y(size_t q);
    void z(size_t q);
    void cnot(size_t c, size_t t);
    void cz(size_t a, size_t b);
    void swap(size_t a, size_t b);
    void apply(const Gate &g);
    void apply_pauli(size_t q, Pauli p);
    void apply_pauli(const PauliString &p);
    // Applies a Clifford class through its generator word.
    void apply_clifford(size_t q, Clifford c);

    // Z measurement; fair coin from rng when the outcome is random.
    bool measure_z(size_t q, Rng &rng, bool *was_random = nullptr);
    // Measures a Pauli observable; forced = 0 or 1 selects the outcome when it is random
    // (postselection) and throws if a deterministic outcome disagrees.
    bool measure_pauli(const PauliString &p, Rng &rng, int forced = -1);
    // CNOT(q1 -> q2), H(q1), measure both; returns X^{s2} Z^{s1}.
    Pauli bell_measure(size_t q1, size_t q2, Rng &rng);

    // +1 or -1 if the state is an eigenstate of p, 0 if the outcome would be random.
    int expectation(const PauliString &p) const;
    PauliString stabilizer(size_t i) const;
    PauliString destabilizer(size_t i) const;
    bool check_invariants() const;
    std::string dump() const;

   private:
    size_t n_;
    size_t words_;
    std::vector<uint64_t> x_, z_;
    std::vector<uint8_t> r_;

    uint64_t *xrow(size_t i) { return x_.data() + i * words_; }
    uint64_t *zrow(size_t i) { return z_.data() + i * words_; }
    const uint64_t *xrow(size_t i) const { return x_.data() + i * words_; }
    const uint64_t *zrow(size_t i) const { return z_.data() + i * words_; }
    bool xbit(size_t i, size_t q) const { return (xrow(i)[q >> 6] >> (q & 63)) & 1; }
    bool zbit(size_t i, size_t q) const { return (zrow(i)[q >> 6] >> (q & 63)) & 1; }
    bool row_anticommutes(size_t i, const PauliString &p) const;
    void rowsum(size_t h, size_t i);
    void rowcopy(size_t dst, size_t src);
};

// Runs the circuit without noise from |0...0>; returns the measurement record in circuit order.
BitVec run_ideal(const LayeredCircuit &c, Rng &rng, Tableau *final_state = nullptr);

}  // namespace telesim
