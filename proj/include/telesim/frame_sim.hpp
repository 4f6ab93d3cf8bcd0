#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/noise_model.hpp"
#include "telesim/tableau.hpp"
#include "telesim/telep_relation.hpp"

namespace telesim {

// A fixed error inserted in noise slot `slot` of every shot (slot 0 precedes layer 1).
struct PlantedError {
    size_t slot;
    PauliFrame error;
};

// Pauli frames for 64 shots; bit s of each word belongs to shot s.
struct FrameBatch {
    std::vector<uint64_t> flips;  // one word per measurement, circuit order
    std::vector<uint64_t> x, z;   // frame left on each qubit after the last layer

    bool flip(size_t m, size_t shot) const { return (flips[m] >> shot) & 1; }
    PauliFrame shot_frame(size_t shot) const;
};

// Propagates noise frames through the circuit by conjugation. With randomize_reference, a
// random Z frame is put on every qubit first, which resamples random measurement outcomes.
FrameBatch run_frames(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng,
                      const std::vector<PlantedError> &planted = {}, bool randomize_reference = false);

// 64 noisy records sharing one ideal tableau run.
std::vector<BitVec> noisy_run_batch(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng,
                                    const std::vector<PlantedError> &planted = {});
BitVec noisy_run(const LayeredCircuit &c, const NoiseModel &noise, Rng &rng,
                 const std::vector<PlantedError> &planted = {});

// Ring of n Bell pairs (a_j = 2j, b_j = 2j+1). C_j acts on b_j, then (b_j, a_{j+1}) is
// Bell-measured; record bits 2j and 2j+1 are s1 and s2 of outcome P_j.
LayeredCircuit build_telep_circuit(const CliffordTuple &c);
PauliTuple decode_telep_record(const BitVec &rec, size_t n);
PauliTuple run_telep_circuit(const CliffordTuple &c, Rng &rng, const std::optional<NoiseModel> &noise = std::nullopt,
                             const std::vector<PlantedError> &planted = {});

// Two Bell pairs (A1,B1) = (0,2), (A2,B2) = (1,3); U_alpha on A1, V_beta on B2, then Bell
// measurements on (A1,A2) and (B1,B2). Record: u1, u2, v1, v2.
LayeredCircuit build_game_circuit(int alpha, int beta);

}  // namespace telesim
