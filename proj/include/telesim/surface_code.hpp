#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/decoder.hpp"
#include "telesim/gf2.hpp"
#include "telesim/tableau.hpp"

namespace telesim {

// Unrotated planar surface code on a (2d-1) x (2d-1) grid. Data qubits sit at (a, b) with a+b
// even, X checks at (even, odd), Z checks at (odd, even). Z-bar runs along row a = 0 and X-bar
// down column b = 0. The fold is the transpose (a, b) -> (b, a); it swaps the two check types.
struct SurfaceCodePatch {
    int d = 0;
    int grid = 0;  // 2d - 1
    size_t m = 0;
    std::vector<std::pair<int, int>> coords;  // data qubit -> (a, b)
    std::vector<int32_t> index;               // a * grid + b -> data qubit or -1
    std::vector<std::vector<uint32_t>> x_checks, z_checks;
    std::vector<std::pair<int, int>> x_check_coords, z_check_coords;
    std::vector<uint32_t> x_logical, z_logical;
    std::vector<uint32_t> fold;  // involution on data qubits
    bool folded = true;
    // Diagonal qubits that get S-dagger instead of S in the logical S circuit.
    std::vector<uint8_t> s_dagger_on_diag;

    int qubit_at(int a, int b) const;
    PauliString check_operator(bool x_type, size_t i) const;
    PauliString logical(Pauli p) const;  // X-bar, Z-bar or Y-bar = i X-bar Z-bar, as Hermitian strings
};

SurfaceCodePatch build_patch(int d, bool folded = true);

struct PatchReport {
    bool commute = false;          // checks commute, logicals commute with checks
    bool logicals_anticommute = false;
    size_t stabilizer_rank = 0;
    size_t logical_qubits = 0;     // m - rank
    bool fold_involution = false;  // fold^2 = id and fold maps X-check supports onto Z-check supports
    bool ok() const { return commute && logicals_anticommute && logical_qubits == 1 && fold_involution; }
};
PatchReport check_patch(const SurfaceCodePatch &p);

// Smallest weight of an X-type (or Z-type) logical, by exhaustive enumeration up to max_weight.
// Returns 0 if none is found.
size_t min_logical_weight(const SurfaceCodePatch &p, bool x_type, size_t max_weight);

// Stabilizer state of the patch with all checks +1 and the given logical (Z-bar or X-bar) +1.
Tableau code_state(const SurfaceCodePatch &p, Pauli logical_plus = Pauli::Z);
// True if a * b^dagger acts trivially on the code space (so a and b agree as logical operators,
// including sign).
bool logically_equal(const SurfaceCodePatch &p, const PauliString &a, const PauliString &b);

enum class LogicalGate : uint8_t { H, S, X, Z };
std::vector<LogicalGate> parse_logical_word(const std::string &s);  // e.g. "H S S", "HSZ"

// Constant-depth physical circuit for the word (in time order). H-bar is H on every qubit then
// SWAP across the fold; S-bar is CZ across the fold with S or S-dagger on the diagonal.
// Qubits are mapped through `qubits` (patch index -> circuit qubit); circuit has num_qubits.
LayeredCircuit transversal_logical(const SurfaceCodePatch &p, const std::vector<LogicalGate> &word);
void append_transversal(LayeredCircuit &c, const SurfaceCodePatch &p, const std::vector<LogicalGate> &word,
                        const std::vector<uint32_t> &qubits);
// Per-layer form used by U^ext: one entry per layer.
std::vector<std::vector<Gate>> transversal_layers(const SurfaceCodePatch &p, LogicalGate g,
                                                  const std::vector<uint32_t> &qubits);
size_t transversal_depth(LogicalGate g);

// Readout. Z-basis outcomes are corrected with the Z checks, X-basis outcomes with the X checks.
class Readout {
   public:
    Readout(const SurfaceCodePatch &p, DecoderChoice choice = {});
    // x must satisfy every check parity of the chosen basis; throws otherwise.
    bool parity(const BitVec &x, bool x_basis = false) const;
    bool decode(const BitVec &x, bool x_basis = false) const;
    BitVec syndrome(const BitVec &x, bool x_basis = false) const;
    const SurfaceCodePatch &patch() const { return *p_; }

   private:
    const SurfaceCodePatch *p_;
    std::unique_ptr<DecodingGraph> gz_, gx_;
    std::unique_ptr<Decoder> dz_, dx_;
};

// Convenience wrappers matching the operation names.
bool parity(const SurfaceCodePatch &p, const BitVec &x);
bool decode_readout(const SurfaceCodePatch &p, const BitVec &x, DecoderChoice choice = {});

}  // namespace telesim
