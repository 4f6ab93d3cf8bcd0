#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace telesim {

enum class GateType : uint8_t { H, S, SDG, X, Y, Z, CNOT, CZ, SWAP };

inline bool is_two_qubit(GateType t) { return t == GateType::CNOT || t == GateType::CZ || t == GateType::SWAP; }
const char *gate_name(GateType t);

struct Gate {
    GateType type;
    uint32_t a;
    uint32_t b = 0;  // target for two-qubit gates
};

// Gates act first, then the layer's noise slot, then the Z measurements listed here.
// A measured qubit is dead for the rest of the circuit.
struct Layer {
    std::vector<Gate> gates;
    std::vector<uint32_t> measure;
};

struct LayeredCircuit {
    size_t num_qubits = 0;
    std::vector<Layer> layers;

    size_t depth() const { return layers.size(); }
    size_t num_measurements() const;
    // Throws std::invalid_argument on overlapping supports, out-of-range qubits or gates on
    // dead qubits.
    void validate() const;
    // Appends the layers of `other` (same qubit count).
    void append(const LayeredCircuit &other);
};

}  // namespace telesim
