#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "telesim/gf2.hpp"
#include "telesim/rng.hpp"
#include "telesim/tableau.hpp"

namespace telesim {

// Pauli error without a sign; composition is XOR of the masks.
using PauliFrame = PauliString;

enum class NoiseKind { None, Iid, Clustered };

struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double p = 0.0;
    // Noise slots (0 = before the first layer, j = after layer j) that receive noise; empty means all.
    std::vector<size_t> slots;

    static NoiseModel none() { return {}; }
    static NoiseModel iid(double p) { return {NoiseKind::Iid, p, {}}; }
    // Qubits 2k and 2k+1 form a block. Each block is hit as a whole with probability p^2/2,
    // and every qubit is also hit alone with probability p/2.
    static NoiseModel clustered(double p) { return {NoiseKind::Clustered, p, {}}; }

    bool active_at(size_t slot) const;
    std::string kind_name() const;
    std::string to_json() const;
    static NoiseModel from_json(const std::string &text);
};

NoiseKind parse_noise_kind(const std::string &s);

// One error on n qubits.
PauliFrame sample(const NoiseModel &m, size_t n, Rng &rng);
// XORs errors for 64 shots into per-qubit frame words; only the listed qubits are touched.
void sample_batch(const NoiseModel &m, const std::vector<uint32_t> &live, Rng &rng, uint64_t *x, uint64_t *z);

// Probability that every qubit of F is hit by some error event. Exact support probability for
// the iid model; an upper bound on it for the clustered one (hits may cancel).
double event_cover_probability(const NoiseModel &m, const std::vector<uint32_t> &F);

struct SubsetCheck {
    std::vector<uint32_t> F;
    uint64_t hits = 0;
    double empirical = 0, bound = 0, sigma = 0;
    bool violation = false;
};

struct LocalStochasticReport {
    uint64_t samples = 0;
    double p = 0;
    std::vector<SubsetCheck> checks;
    size_t violations = 0;
    bool ok() const { return violations == 0; }
};

// Accumulates support masks and tests Pr[F in supp] <= p^|F| + 3 sigma for each subset.
class LocalStochasticVerifier {
   public:
    LocalStochasticVerifier(size_t n, std::vector<std::vector<uint32_t>> subsets);
    void add(const BitVec &support);
    LocalStochasticReport report(double p) const;

   private:
    size_t n_;
    std::vector<std::vector<uint32_t>> subsets_;
    std::vector<BitVec> masks_;
    std::vector<uint64_t> hits_;
    uint64_t samples_ = 0;
};

std::vector<std::vector<uint32_t>> subsets_up_to(size_t n, size_t k);

LocalStochasticReport verify_local_stochastic(const std::function<BitVec(Rng &)> &sampler, size_t n, double p,
                                              const std::vector<std::vector<uint32_t>> &subsets, uint64_t samples,
                                              Rng &rng);
LocalStochasticReport verify_local_stochastic(const NoiseModel &m, size_t n,
                                              const std::vector<std::vector<uint32_t>> &subsets, uint64_t samples,
                                              Rng &rng);

BitVec support_of(const PauliFrame &e);

}  // namespace telesim
