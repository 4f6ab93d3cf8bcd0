#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "telesim/circuit_dag.hpp"
#include "telesim/rng.hpp"

namespace telesim {

enum class RVal : uint8_t { Zero, One, Star };

struct BitRestriction {
    std::vector<RVal> a;

    static BitRestriction all_free(size_t n) { return {std::vector<RVal>(n, RVal::Star)}; }
    size_t size() const { return a.size(); }
    size_t num_free() const;
    std::vector<uint32_t> free_positions() const;  // increasing
    std::string str() const;                       // '0', '1', '*'
    bool operator==(const BitRestriction &) const = default;
};

inline constexpr size_t kBlockBits = kEncBits;

// Active blocks are nullopt; fixed blocks carry their 5-bit value, most significant bit first.
struct BlockRestriction {
    std::vector<std::optional<uint8_t>> blocks;

    size_t num_active() const;
    BitRestriction to_bits() const;
    bool operator==(const BlockRestriction &) const = default;
};

// Each position is * with probability p, otherwise a uniform bit.
BitRestriction sample_rp(size_t n, double p, Rng &rng);
// First rho, then eta on the free positions of rho. Throws unless eta.size() == rho.num_free().
BitRestriction concat(const BitRestriction &rho, const BitRestriction &eta);

struct ToBlock {
    std::optional<BlockRestriction> block;
    size_t offending_block = 0;  // first partially fixed block when rejected
};
ToBlock to_block(const BitRestriction &rho);

// Fully free blocks of a bit restriction (its size must be a multiple of 5).
size_t free_blocks(const BitRestriction &rho);

struct SwitchingParams {
    size_t n = 0;  // Clifford inputs; the bit circuit has 5n inputs and 2n outputs
    double s = 0;  // circuit size
    int d = 0;     // circuit depth
    int q = 0;
    double p_star = 0;
    double t = 0;
    double p_star_lower_bound = 0;  // valid under the size assumption
    bool size_assumption = false;   // ln s <= n^(1/(20d))
    bool s_le_2_pow_t_half = false;
};
SwitchingParams switching_params(size_t n, double s, int d);

// Behaviour of the set E(rho): subsets T of the free bits, |T| <= 2t, such that fixing T in any
// way leaves an NC0 circuit. T holds indices into rho's free list (the domain of eta).
struct EOracleResult {
    enum class Status { NonEmpty, Empty, Failed } status = Status::Failed;
    std::vector<uint32_t> T;
    std::string error;
};
struct EOracle {
    std::string mode;
    std::function<EOracleResult(const BitRestriction &rho, double t, Rng &rng)> query;
};

// Declares E(rho) non-empty and returns a uniformly random T of size min(floor(2t), N(rho)).
EOracle stub_oracle();
// Searches T by increasing size over the free bits of a toy dag (at most 24 of them). The NC0
// test is the locality criterion: after fixing T in any way, every output depends on at most
// `locality` free bits. Larger searches report Failed.
EOracle exhaustive_oracle(const CircuitDag &dag, size_t locality, uint64_t budget = uint64_t(1) << 32);

struct ProcessDiagnostics {
    size_t rho_free_bits = 0;
    size_t rho_free_blocks = 0;  // N(rho) in the block count
    double t = 0;
    size_t T_size = 0;
    size_t partially_fixed = 0;
    size_t xi_free_blocks = 0;  // N(xi^block)
    std::string oracle_mode;
    EOracleResult::Status oracle_status = EOracleResult::Status::Failed;
    std::string oracle_error;
    bool uniform_path = false;  // every fixed value beyond rho came from uniform bits on a chosen T
    bool bound_holds = false;   // N(xi^block) >= N(rho) - 2t
};

struct ProcessResult {
    BlockRestriction xi;
    BitRestriction rho, eta;
    ProcessDiagnostics diag;
};

// n Clifford blocks (5n bits). Step 1 samples rho ~ R_{p_*}; step 2 asks the oracle for T and
// fixes it with uniform bits (an empty or failed oracle gives eta uniform over {0,1,*} on every
// free bit); step 3 fixes the free bits of partially fixed blocks with uniform bits.
ProcessResult block_restriction_process(size_t n, const SwitchingParams &params, const EOracle &oracle, Rng &rng);

}  // namespace telesim
