#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telesim/gf2.hpp"

namespace telesim {

// Syndrome graph: nodes are checks, each fault toggles one or two of them.
// A fault touching a single check is an edge to the virtual boundary node.
class DecodingGraph {
   public:
    DecodingGraph(size_t num_nodes, const std::vector<std::vector<uint32_t>> &fault_nodes);

    size_t num_nodes() const { return n_; }
    size_t num_faults() const { return fault_nodes_.size(); }
    size_t boundary() const { return n_; }
    const std::vector<uint32_t> &fault_nodes(size_t f) const { return fault_nodes_[f]; }
    BitVec syndrome(const BitVec &faults) const;

    // Shortest-path data over nodes plus the boundary (unit weights).
    int dist(size_t u, size_t v) const { return dist_[u * (n_ + 1) + v]; }
    // Faults on a shortest path from u to v.
    std::vector<uint32_t> path(size_t u, size_t v) const;

    struct Edge {
        uint32_t u, v;  // v == boundary() for boundary edges
        uint32_t fault;
    };
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<std::vector<uint32_t>> &adjacency() const { return adj_; }  // node -> edge ids

   private:
    size_t n_;
    std::vector<std::vector<uint32_t>> fault_nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<uint32_t>> adj_;
    std::vector<int> dist_;
    std::vector<int32_t> next_edge_;  // first edge on a shortest path u -> v
};

enum class DecoderKind { Exhaustive, UnionFind, Matching };

struct DecoderChoice {
    DecoderKind kind = DecoderKind::Matching;
    // Matching is exact (subset DP) up to this many defects, greedy beyond.
    size_t exact_limit = 14;
    // Exhaustive builds a full lookup table when the graph has at most this many faults.
    size_t exhaustive_fault_limit = 20;
};

DecoderKind parse_decoder_kind(const std::string &s);
std::string decoder_kind_name(DecoderKind k);

class Decoder {
   public:
    Decoder(const DecodingGraph &g, DecoderChoice choice = {});
    // Returns a fault set whose syndrome equals the input.
    BitVec decode(const BitVec &syndrome) const;
    const DecodingGraph &graph() const { return *g_; }
    DecoderChoice choice() const { return choice_; }

   private:
    const DecodingGraph *g_;
    DecoderChoice choice_;
    std::vector<BitVec> table_;  // exhaustive: syndrome index -> min-weight fault set

    BitVec matching(const std::vector<uint32_t> &defects, bool exact) const;
    BitVec union_find(const BitVec &syndrome) const;
};

}  // namespace telesim
