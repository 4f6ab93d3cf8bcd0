#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/decoder.hpp"
#include "telesim/frame_sim.hpp"
#include "telesim/surface_code.hpp"

namespace telesim {

// Cluster-state wedge on the cube [0, K-1]^3 with K = 2d - 1. A lattice point (a, b, k) holds a
// qubit when an odd number of 1 or 2 of (a, b+1, k) is odd; qubits on the faces k = 0 and
// k = K - 1 with a + b even are the data qubits of the left and right patches, everything else
// is measured in the X basis. The circuit is H, four CZ colours, then H on the bulk and a
// measurement of the bulk. After the Pauli correction Rec(s) the faces hold a logical Bell pair
// with X-bar X-bar = Z-bar Z-bar = +1.
//
// d = 1 collapses to two qubits prepared by H and CNOT.
struct WedgeLayout {
    int d = 0;
    int K = 0;
    SurfaceCodePatch patch;
    std::vector<std::array<int, 3>> sites;  // qubit -> lattice point
    std::vector<uint8_t> is_data;
    std::vector<uint32_t> data, aux;         // qubit ids; aux is also the measurement order
    std::vector<int32_t> data_pos, aux_pos;  // qubit -> position in data / aux, or -1
    std::vector<uint32_t> left, right;       // patch qubit -> wedge qubit
    std::vector<std::pair<uint32_t, uint32_t>> edges;  // every CZ of the circuit
    LayeredCircuit circuit;

    // Observables fixed by the preparation: the checks of both faces, then X-bar X-bar and
    // Z-bar Z-bar. Sign bit of observable i is obs_const[i] xor obs_coeff[i] . s.
    std::vector<PauliString> observables;  // over wedge qubits
    std::vector<BitVec> obs_coeff;         // over aux positions
    BitVec obs_const;
    // Pure errors: pure_error[i] anticommutes with observable i only (data support).
    std::vector<PauliString> pure_error;
    // Linear part of Rec for a single flipped aux outcome.
    std::vector<PauliString> rec_unit;

    // Bulk checks: aux sets whose outcome parity is fixed (check_const) without noise.
    std::vector<std::vector<uint32_t>> checks;  // aux positions
    BitVec check_const;
    std::unique_ptr<DecodingGraph> graph;

    size_t num_qubits() const { return sites.size(); }
    size_t num_aux() const { return aux.size(); }
    size_t num_data() const { return data.size(); }
};

std::shared_ptr<const WedgeLayout> build_wedge(int d);

// Rec(s) for a given aux record, from the affine sign law (with constants).
PauliString wedge_rec(const WedgeLayout &w, const BitVec &s);
// Syndrome of the bulk checks for an aux record.
BitVec wedge_syndrome(const WedgeLayout &w, const BitVec &s);
// Linear part of Rec: product of rec_unit over the set bits of delta.
PauliString wedge_rec_linear(const WedgeLayout &w, const BitVec &delta);

// Logical content of a data-qubit Pauli after perfect-syndrome minimum-weight correction on
// each face: {X on left, Z on left, X on right, Z on right}.
struct FaceLogicals {
    std::array<bool, 4> bits{};
    // A Pauli of the form P-bar (x) P-bar fixes the Bell pair.
    bool bell_preserving() const { return bits[0] == bits[2] && bits[1] == bits[3]; }
};

class WedgeClassifier {
   public:
    explicit WedgeClassifier(const WedgeLayout &w);
    FaceLogicals classify(const PauliString &residual) const;

   private:
    const WedgeLayout *w_;
    Readout ro_;
};

struct BellPrepResult {
    BitVec s;              // noisy aux outcomes
    BitVec s_decoded;      // after the bulk decoder
    PauliString rec;       // Rec applied to the faces
    PauliString residual;  // data Pauli left on the ideal Bell pair
    FaceLogicals logicals;
    bool logical_failure = false;
    Tableau state{0};      // the wedge after correction
};

// Runs the wedge once: an ideal tableau run supplies the reference outcomes, the noise frame is
// propagated alongside, and Rec(decoded s) is applied to the noisy state.
BellPrepResult single_shot_bell_prep(const WedgeLayout &w, const NoiseModel &noise, Rng &rng,
                                     DecoderChoice choice = {}, const std::vector<PlantedError> &planted = {});

// Frame-only Monte Carlo of the same process, 64 shots per batch.
struct BellPrepStats {
    uint64_t trials = 0;
    uint64_t logical_failures = 0;
    uint64_t nontrivial_residuals = 0;  // residual outside the stabilizer group of the Bell pair
};
BellPrepStats bell_prep_monte_carlo(const WedgeLayout &w, const NoiseModel &noise, uint64_t trials, Rng &rng,
                                    DecoderChoice choice = {}, const std::vector<PlantedError> &planted = {});

}  // namespace telesim
