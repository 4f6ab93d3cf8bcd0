#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telesim/pauli_clifford.hpp"
#include "telesim/rng.hpp"

namespace telesim {

// Classical circuit over bits. Nodes are in topological order: inputs first, then gates whose
// operands all have smaller indices. A gate with fan-in k carries a 2^k-entry truth table; entry
// sum_i v_i << i is its output on operand values v_0..v_{k-1}.
struct DagNode {
    std::vector<uint32_t> in;  // empty for inputs and constants
    uint64_t table = 0;
    bool is_input = false;
};

struct CircuitDag {
    static constexpr size_t kMaxFanIn = 6;

    size_t n_in = 0;
    size_t fan_in = 2;  // bound K
    std::vector<DagNode> nodes;
    std::vector<uint32_t> outputs;

    static CircuitDag with_inputs(size_t n_in, size_t fan_in);
    uint32_t add_gate(std::vector<uint32_t> in, uint64_t table);
    size_t n_out() const { return outputs.size(); }

    void validate() const;  // throws std::invalid_argument
    size_t depth() const;   // longest input-to-output path in gates

    // 64 evaluations at once: bit s of in[i] is input i of evaluation s.
    std::vector<uint64_t> eval64(const std::vector<uint64_t> &in) const;
    std::vector<bool> eval(const std::vector<bool> &in) const;

    std::string to_json() const;
    static CircuitDag from_json(const std::string &text);  // validates
};

// Layered random dag: `depth` layers of `width` gates (the last has n_out), each gate reading
// `fan_in` distinct nodes of the previous layer, with uniformly random truth tables.
CircuitDag random_layered_dag(size_t n_in, size_t n_out, size_t depth, size_t fan_in, Rng &rng, size_t width = 0);

inline constexpr size_t kEncBits = EncodingMap::kBits;

enum class ConeMode { Semantic, Structural };

// forward[i]: outputs depending on input i; backward[o]: inputs output o depends on. Both sorted.
// Semantic cones test dependence exhaustively when the structural backward cone of an output has
// at most kSemanticLimit inputs; other outputs keep the structural cone (a superset) and are
// marked in `exact`.
struct LightCones {
    static constexpr size_t kSemanticLimit = 20;

    std::vector<std::vector<uint32_t>> forward, backward;
    std::vector<bool> exact;  // per output: cone is semantic
    ConeMode mode = ConeMode::Semantic;
    bool all_exact() const;
    size_t max_backward() const;
};
LightCones light_cones(const CircuitDag &dag, ConeMode mode = ConeMode::Semantic);

// Groups bits into blocks: input block j = bits [in_block*j, in_block*(j+1)), likewise outputs.
LightCones block_cones(const LightCones &bits, size_t in_block, size_t out_block);

// j minimises |forward(j)| (smallest index on ties); k is the smallest input outside
// backward(forward(j)) and different from j. The pair is returned as (min, max).
std::optional<std::pair<uint32_t, uint32_t>> find_nonsignaling_pair(const LightCones &cones);

// Depth allowed by c * log n / log K for the 35/36 ceiling, with c fixed to kCeilingC.
constexpr double kCeilingC = 0.3;
size_t ceiling_depth_bound(size_t n, size_t fan_in, double c = kCeilingC);

// Input block j (5 bits, most significant first) encodes C_j = enc(x_j); output bits 2j and
// 2j + 1 are s1 and s2 of z_j.
struct CeilingReport {
    uint64_t trials = 0, successes = 0;
    double rate = 0, wilson_lo = 0, wilson_hi = 0;
    bool cones_exact = false;
    std::optional<std::pair<uint32_t, uint32_t>> pair;  // non-signaling Clifford inputs
    // Distinct values (x_j, x_k) of the pair seen in at least one failing trial.
    uint64_t pair_failure_witnesses = 0;
};
CeilingReport nc0_ceiling_experiment(const CircuitDag &strategy, size_t n, uint64_t trials, Rng &rng,
                                     const EncodingMap &enc = {});

}  // namespace telesim
