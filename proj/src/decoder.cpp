#include "telesim/decoder.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace telesim {

namespace {
constexpr int kInf = INT_MAX / 4;
}

DecoderKind parse_decoder_kind(const std::string &s) {
    if (s == "exhaustive") return DecoderKind::Exhaustive;
    if (s == "union-find" || s == "uf") return DecoderKind::UnionFind;
    if (s == "matching") return DecoderKind::Matching;
    throw std::invalid_argument("unknown decoder: " + s);
}

std::string decoder_kind_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::Exhaustive: return "exhaustive";
        case DecoderKind::UnionFind: return "union-find";
        case DecoderKind::Matching: return "matching";
    }
    return "?";
}

DecodingGraph::DecodingGraph(size_t num_nodes, const std::vector<std::vector<uint32_t>> &fault_nodes)
    : n_(num_nodes), fault_nodes_(fault_nodes), adj_(num_nodes + 1) {
    for (size_t f = 0; f < fault_nodes_.size(); f++) {
        const auto &fn = fault_nodes_[f];
        if (fn.empty() || fn.size() > 2) throw std::invalid_argument("DecodingGraph: a fault must touch one or two nodes");
        for (uint32_t u : fn) {
            if (u >= n_) throw std::invalid_argument("DecodingGraph: node out of range");
        }
        Edge e{fn[0], fn.size() == 2 ? fn[1] : uint32_t(n_), uint32_t(f)};
        adj_[e.u].push_back(uint32_t(edges_.size()));
        adj_[e.v].push_back(uint32_t(edges_.size()));
        edges_.push_back(e);
    }
    size_t N = n_ + 1;
    dist_.assign(N * N, kInf);
    next_edge_.assign(N * N, -1);
    for (size_t s = 0; s < N; s++) {
        // BFS from s; next_edge_[w * N + s] is the edge that leads from w back toward s.
        std::deque<size_t> q{s};
        std::vector<char> seen(N, 0);
        seen[s] = 1;
        dist_[s * N + s] = 0;
        while (!q.empty()) {
            size_t u = q.front();
            q.pop_front();
            for (uint32_t ei : adj_[u]) {
                const Edge &e = edges_[ei];
                size_t w = e.u == u ? e.v : e.u;
                if (seen[w]) continue;
                seen[w] = 1;
                dist_[w * N + s] = dist_[u * N + s] + 1;
                next_edge_[w * N + s] = int32_t(ei);
                q.push_back(w);
            }
        }
    }
}

BitVec DecodingGraph::syndrome(const BitVec &faults) const {
    BitVec s(n_);
    for (size_t f : faults.ones()) {
        for (uint32_t u : fault_nodes_[f]) s.flip(u);
    }
    return s;
}

std::vector<uint32_t> DecodingGraph::path(size_t u, size_t v) const {
    size_t N = n_ + 1;
    if (dist_[u * N + v] >= kInf) throw std::runtime_error("DecodingGraph: nodes are disconnected");
    std::vector<uint32_t> out;
    while (u != v) {
        const Edge &e = edges_[size_t(next_edge_[u * N + v])];
        out.push_back(e.fault);
        u = e.u == u ? e.v : e.u;
    }
    return out;
}

Decoder::Decoder(const DecodingGraph &g, DecoderChoice choice) : g_(&g), choice_(choice) {
    if (choice_.kind != DecoderKind::Exhaustive) return;
    size_t nf = g.num_faults(), nn = g.num_nodes();
    if (nf > choice_.exhaustive_fault_limit || nn > 24) return;  // too large for a table: exact matching instead
    table_.assign(size_t(1) << nn, BitVec());
    size_t filled = 0, need = size_t(1) << nn;
    // Enumerate fault sets in order of weight; the first hit per syndrome is a minimum-weight one.
    std::vector<uint32_t> pick;
    for (size_t w = 0; w <= nf && filled < need; w++) {
        pick.assign(w, 0);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            BitVec f(nf);
            for (uint32_t k : pick) f.set(k);
            BitVec s = g.syndrome(f);
            size_t key = nn ? size_t(s.word(0)) : 0;
            if (table_[key].size() == 0) {
                table_[key] = f;
                filled++;
            }
            // next combination
            size_t i = w;
            while (i > 0 && pick[i - 1] == nf - w + i - 1) i--;
            if (i == 0) break;
            pick[i - 1]++;
            for (size_t j = i; j < w; j++) pick[j] = pick[j - 1] + 1;
        }
    }
}

BitVec Decoder::decode(const BitVec &syndrome) const {
    if (syndrome.size() != g_->num_nodes()) throw std::invalid_argument("Decoder: syndrome size mismatch");
    if (!syndrome.any()) return BitVec(g_->num_faults());
    std::vector<uint32_t> defects;
    for (size_t u : syndrome.ones()) defects.push_back(uint32_t(u));
    switch (choice_.kind) {
        case DecoderKind::Exhaustive:
            if (!table_.empty()) {
                const BitVec &f = table_[size_t(syndrome.word(0))];
                if (f.size() == 0) throw std::runtime_error("Decoder: syndrome not reachable");
                return f;
            }
            return matching(defects, defects.size() <= 20);
        case DecoderKind::UnionFind: return union_find(syndrome);
        case DecoderKind::Matching: return matching(defects, defects.size() <= choice_.exact_limit);
    }
    return BitVec(g_->num_faults());
}

BitVec Decoder::matching(const std::vector<uint32_t> &defects, bool exact) const {
    const DecodingGraph &g = *g_;
    size_t k = defects.size(), B = g.boundary();
    std::vector<std::pair<size_t, size_t>> pairs;  // second == B for boundary
    if (exact) {
        size_t full = (size_t(1) << k) - 1;
        std::vector<int> best(full + 1, kInf);
        std::vector<int32_t> choice(full + 1, -1);  // partner index or k for boundary
        best[0] = 0;
        for (size_t mask = 1; mask <= full; mask++) {
            size_t i = size_t(__builtin_ctzll(mask));
            size_t rest = mask & ~(size_t(1) << i);
            int c = g.dist(defects[i], B);
            if (c < kInf && best[rest] < kInf && c + best[rest] < best[mask]) {
                best[mask] = c + best[rest];
                choice[mask] = int32_t(k);
            }
            for (size_t j = i + 1; j < k; j++) {
                if (!(rest >> j & 1)) continue;
                size_t r2 = rest & ~(size_t(1) << j);
                int cj = g.dist(defects[i], defects[j]);
                if (cj < kInf && best[r2] < kInf && cj + best[r2] < best[mask]) {
                    best[mask] = cj + best[r2];
                    choice[mask] = int32_t(j);
                }
            }
        }
        if (best[full] >= kInf) throw std::runtime_error("Decoder: no valid matching");
        for (size_t mask = full; mask;) {
            size_t i = size_t(__builtin_ctzll(mask));
            size_t j = size_t(choice[mask]);
            mask &= ~(size_t(1) << i);
            if (j == k) {
                pairs.push_back({defects[i], B});
            } else {
                pairs.push_back({defects[i], defects[j]});
                mask &= ~(size_t(1) << j);
            }
        }
    } else {
        // Greedy: repeatedly take the globally closest pair or defect-boundary link.
        std::vector<char> used(k, 0);
        size_t left = k;
        while (left) {
            int bc = kInf;
            size_t bi = 0, bj = k;
            for (size_t i = 0; i < k; i++) {
                if (used[i]) continue;
                int c = g.dist(defects[i], B);
                if (c < bc) bc = c, bi = i, bj = k;
                for (size_t j = i + 1; j < k; j++) {
                    if (used[j]) continue;
                    int cj = g.dist(defects[i], defects[j]);
                    if (cj < bc) bc = cj, bi = i, bj = j;
                }
            }
            if (bc >= kInf) throw std::runtime_error("Decoder: no valid matching");
            used[bi] = 1;
            left--;
            if (bj == k) {
                pairs.push_back({defects[bi], B});
            } else {
                used[bj] = 1;
                left--;
                pairs.push_back({defects[bi], defects[bj]});
            }
        }
    }
    BitVec out(g.num_faults());
    for (auto [u, v] : pairs) {
        for (uint32_t f : g.path(u, v)) out.flip(f);
    }
    return out;
}

BitVec Decoder::union_find(const BitVec &syndrome) const {
    const DecodingGraph &g = *g_;
    size_t N = g.num_nodes() + 1, B = g.boundary();
    const auto &edges = g.edges();
    std::vector<uint32_t> parent(N), size(N, 1);
    std::vector<uint8_t> parity(N, 0), boundary(N, 0), support(edges.size(), 0);
    std::iota(parent.begin(), parent.end(), 0);
    for (size_t u : syndrome.ones()) parity[u] = 1;
    boundary[B] = 1;
    auto find = [&](uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        parity[a] ^= parity[b];
        boundary[a] |= boundary[b];
    };
    auto active = [&](uint32_t x) {
        uint32_t r = find(x);
        return parity[r] && !boundary[r];
    };
    while (true) {
        bool any = false;
        std::vector<uint32_t> grown;
        for (size_t ei = 0; ei < edges.size(); ei++) {
            if (support[ei] >= 2) continue;
            const auto &e = edges[ei];
            int inc = 0;
            bool au = active(e.u), av = active(e.v);
            if (au) inc++;
            if (av && (!au || find(e.u) != find(e.v))) inc++;
            if (!inc) continue;
            any = true;
            support[ei] = uint8_t(std::min(2, support[ei] + inc));
            if (support[ei] == 2) grown.push_back(uint32_t(ei));
        }
        for (uint32_t ei : grown) unite(edges[ei].u, edges[ei].v);
        if (!any) break;
    }
    for (size_t u : syndrome.ones()) {
        if (active(uint32_t(u))) throw std::runtime_error("Decoder: union-find left an odd cluster");
    }
    // Peel a spanning forest of the grown edges, starting from the boundary.
    std::vector<std::vector<uint32_t>> adj(N);
    for (size_t ei = 0; ei < edges.size(); ei++) {
        if (support[ei] == 2) {
            adj[edges[ei].u].push_back(uint32_t(ei));
            adj[edges[ei].v].push_back(uint32_t(ei));
        }
    }
    std::vector<int32_t> via(N, -1);
    std::vector<uint8_t> seen(N, 0);
    std::vector<uint32_t> order;
    auto bfs = [&](uint32_t root) {
        seen[root] = 1;
        size_t head = order.size();
        order.push_back(root);
        while (head < order.size()) {
            uint32_t u = order[head++];
            for (uint32_t ei : adj[u]) {
                uint32_t w = edges[ei].u == u ? edges[ei].v : edges[ei].u;
                if (seen[w]) continue;
                seen[w] = 1;
                via[w] = int32_t(ei);
                order.push_back(w);
            }
        }
    };
    bfs(uint32_t(B));
    for (size_t u = 0; u < N; u++) {
        if (!seen[u] && !adj[u].empty()) bfs(uint32_t(u));
    }
    std::vector<uint8_t> def(N, 0);
    for (size_t u : syndrome.ones()) def[u] = 1;
    BitVec out(g.num_faults());
    for (size_t i = order.size(); i-- > 0;) {
        uint32_t u = order[i];
        if (via[u] < 0 || !def[u]) continue;
        const auto &e = edges[size_t(via[u])];
        out.flip(e.fault);
        def[u] = 0;
        uint32_t w = e.u == u ? e.v : e.u;
        def[w] ^= 1;
    }
    return out;
}

}  // namespace telesim
