#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/noise_model.hpp"
#include "telesim/telep_relation.hpp"
#include "telesim/wedge.hpp"

namespace telesim {

// One layer of a transversal generator on a right face, as used by the controlled block.
enum class CtrlStep : uint8_t { Idle, H1, H2, S, X, Z };

// Ring of n wedges. Wedge j owns qubits [j * N, (j + 1) * N) with its left face L_j and right
// face R_j. Layers: the wedge circuits in parallel (bulk measured at the end), a fixed-depth
// block applying C-bar_j to R_j under control of the input, a transversal CNOT R_j -> L_{j+1},
// and H on every R_j followed by measurement of all data qubits.
//
// Record: bulk outcomes of wedges 0..n-1, then for each j the m bits of R_j followed by the
// m bits of L_{j+1}.
struct UextLayout {
    size_t n = 0;
    int d = 0;
    std::shared_ptr<const WedgeLayout> wedge;
    size_t wedge_depth = 0;
    size_t ctrl_depth = 0;
    std::array<std::vector<CtrlStep>, GroupTable::kSize> schedule;  // class -> step per ctrl layer

    size_t wedge_qubits() const { return wedge->num_qubits(); }
    size_t num_qubits() const { return n * wedge_qubits(); }
    uint32_t qubit(size_t j, uint32_t local) const { return uint32_t(j * wedge_qubits() + local); }
    size_t depth() const { return wedge_depth + ctrl_depth + 2; }
    size_t aux_record(size_t j) const { return j * wedge->num_aux(); }
    size_t data_record(size_t j) const { return n * wedge->num_aux() + 2 * j * wedge->patch.m; }
    size_t num_measurements() const { return n * (wedge->num_aux() + 2 * wedge->patch.m); }
};

std::shared_ptr<const UextLayout> build_uext(size_t n, int d);
// The physical circuit for input b (one Clifford class per wedge).
LayeredCircuit uext_circuit(const UextLayout &u, const CliffordTuple &b);

struct ShotRecord {
    std::vector<BitVec> s;  // bulk outcomes per wedge
    std::vector<BitVec> y;  // 2m data outcomes per Bell measurement (R_j then L_{j+1})
    CliffordTuple b;
};
ShotRecord split_record(const UextLayout &u, const BitVec &rec, const CliffordTuple &b);

struct PostprocessResult {
    PauliTuple z;
    std::vector<BitVec> f, h;  // X and Z parts of the propagated Rec on each measured block
};
// Decodes each bulk, applies Rec, pushes it through the rest of the circuit, and decodes each
// logical Bell measurement: s1 from R_j (X basis), s2 from L_{j+1} (Z basis).
PostprocessResult postprocess(const UextLayout &u, const ShotRecord &r, DecoderChoice choice = {});

// Full tableau run of the noisy circuit followed by postprocess.
PauliTuple run_uext_literal(const UextLayout &u, const CliffordTuple &b, const NoiseModel &noise, Rng &rng,
                            DecoderChoice choice = {}, const std::vector<PlantedError> &planted = {});

// Frame-only pipeline for 64 shots with their own inputs. dz[shot] is the change of the
// output relative to the ideal circuit with the same measurement randomness; the output is
// z_ideal * dz, with z_ideal distributed as the noiseless circuit.
struct UextBatch {
    std::vector<CliffordTuple> b;
    std::vector<PauliTuple> dz;
};
UextBatch uext_frame_batch(const UextLayout &u, const std::vector<CliffordTuple> &b, const NoiseModel &noise,
                           Rng &rng, DecoderChoice choice = {}, const std::vector<PlantedError> &planted = {});

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials, double z = 1.96);

struct SuccessEstimate {
    uint64_t trials = 0;
    uint64_t successes = 0;
    double rate = 0, wilson_lo = 0, wilson_hi = 0;
};

struct EndToEndOptions {
    NoiseKind kind = NoiseKind::Iid;
    DecoderChoice decoder{};
    bool literal = false;  // tableau runs instead of the frame pipeline
};

// Pr[(b, z) in R] over uniform b. Guarded to n <= 16 and d <= 5.
SuccessEstimate end_to_end_success(size_t n, int d, double p, uint64_t trials, Rng &rng,
                                   const EndToEndOptions &opt = {});
SuccessEstimate end_to_end_success(const UextLayout &u, double p, uint64_t trials, Rng &rng,
                                   const EndToEndOptions &opt = {});

}  // namespace telesim
