#include "telesim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace telesim {

namespace {

constexpr double kSheetOffset = 0.25;

std::pair<uint32_t, uint32_t> norm(uint32_t u, uint32_t v) { return u < v ? std::make_pair(u, v) : std::make_pair(v, u); }

void finish_edges(Layout3D &l) {
    for (auto &e : l.edges) e = norm(e.first, e.second);
    std::sort(l.edges.begin(), l.edges.end());
    l.edges.erase(std::unique(l.edges.begin(), l.edges.end()), l.edges.end());
}

SiteRole role_of(const WedgeLayout &w, uint32_t q, const std::vector<int8_t> &face) {
    if (!w.is_data[q]) return SiteRole::Bulk;
    return face[q] == 0 ? SiteRole::DataLeft : SiteRole::DataRight;
}

// 0 for left-face qubits, 1 for right-face qubits, -1 otherwise.
std::vector<int8_t> face_map(const WedgeLayout &w) {
    std::vector<int8_t> f(w.num_qubits(), -1);
    for (uint32_t q : w.left) f[q] = 0;
    for (uint32_t q : w.right) f[q] = 1;
    return f;
}

void wedge_edges(const WedgeLayout &w, uint32_t base, std::vector<std::pair<uint32_t, uint32_t>> &out) {
    for (auto [u, v] : w.edges) out.push_back({base + u, base + v});
    const auto &p = w.patch;
    for (size_t i = 0; i < p.m; i++) {
        if (i < p.fold[i]) out.push_back({base + w.right[i], base + w.right[p.fold[i]]});
    }
}

double dist(const std::array<double, 3> &a, const std::array<double, 3> &b) {
    double s = 0;
    for (int k = 0; k < 3; k++) s += (a[size_t(k)] - b[size_t(k)]) * (a[size_t(k)] - b[size_t(k)]);
    return std::sqrt(s);
}

}  // namespace

const char *site_role_name(SiteRole r) {
    switch (r) {
        case SiteRole::DataLeft: return "data-left";
        case SiteRole::DataRight: return "data-right";
        case SiteRole::Bulk: return "bulk";
    }
    return "?";
}

bool Layout3D::has_edge(uint32_t u, uint32_t v) const { return std::binary_search(edges.begin(), edges.end(), norm(u, v)); }

std::string Layout3D::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["L"] = L;
    j["delta_out"] = delta_out;
    j["delta_in"] = delta_in;
    j["delta_r"] = delta_r;
    j["r_out"] = r_out;
    j["r_in"] = r_in;
    auto &s = j["sites"] = nlohmann::json::array();
    for (const Site &x : sites) {
        s.push_back({{"id", x.id}, {"pos", x.pos}, {"role", site_role_name(x.role)}, {"wedge", x.wedge}});
    }
    auto &e = j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edges) e.push_back({u, v});
    return j.dump();
}

std::array<double, 3> folded_coords(const std::array<int, 3> &s, double sheet_offset) {
    int a = s[0], b = s[1];
    return {double(std::min(a, b)), double(std::max(a, b)) + (a > b ? sheet_offset : 0.0), double(s[2])};
}

Layout3D wedge_layout(const WedgeLayout &w) {
    Layout3D l;
    l.d = w.d;
    auto face = face_map(w);
    for (uint32_t q = 0; q < w.num_qubits(); q++) {
        l.sites.push_back({q, folded_coords(w.sites[q], kSheetOffset), role_of(w, q, face), 0});
    }
    wedge_edges(w, 0, l.edges);
    finish_edges(l);
    return l;
}

double colosseum_delta_in(size_t n, double delta_out, double delta_r) {
    return delta_out - 2 * std::numbers::pi * delta_r / double(n);
}

Layout3D colosseum_layout(size_t n, int d, double delta_out, double delta_r) {
    if (n < 3) throw std::invalid_argument("colosseum_layout: n must be at least 3");
    if (!(delta_out > 0) || !(delta_r > 0)) throw std::invalid_argument("colosseum_layout: spacings must be positive");
    auto wp = build_wedge(d);
    const WedgeLayout &w = *wp;
    int width = 0;
    for (const auto &s : w.sites) width = std::max(width, s[2] + 1);
    Layout3D l;
    l.n = n;
    l.d = d;
    l.L = size_t(width);
    l.delta_out = delta_out;
    l.delta_r = delta_r;
    double ring = double(l.L * n);
    l.r_out = delta_out * ring / (2 * std::numbers::pi);
    l.r_in = l.r_out - double(l.L) * delta_r;
    l.delta_in = 2 * std::numbers::pi * l.r_in / ring;
    if (!(l.delta_in > 0)) throw std::invalid_argument("colosseum_layout: inner spacing is not positive; increase n");

    auto face = face_map(w);
    uint32_t N = uint32_t(w.num_qubits());
    for (uint32_t j = 0; j < n; j++) {
        for (uint32_t q = 0; q < N; q++) {
            auto f = folded_coords(w.sites[q], kSheetOffset);
            double theta = 2 * std::numbers::pi * (double(j) * double(l.L) + f[2] + 0.5) / ring;
            double r = l.r_out - f[0] * delta_r;
            l.sites.push_back({j * N + q, {r * std::cos(theta), r * std::sin(theta), f[1] * delta_out}, role_of(w, q, face), j});
        }
        wedge_edges(w, j * N, l.edges);
        uint32_t next = uint32_t((j + 1) % n) * N;
        for (size_t i = 0; i < w.patch.m; i++) l.edges.push_back({j * N + w.right[i], next + w.left[i]});
    }
    finish_edges(l);
    return l;
}

LocalityReport check_locality(const Layout3D &layout, double kappa, size_t occupancy_bound) {
    if (!(kappa > 0)) throw std::invalid_argument("check_locality: kappa must be positive");
    LocalityReport r;
    r.kappa = kappa;
    r.occupancy_bound = occupancy_bound;
    const auto &S = layout.sites;
    for (auto [u, v] : layout.edges) r.max_edge_length = std::max(r.max_edge_length, dist(S.at(u).pos, S.at(v).pos));

    // Grid hashing with cell size kappa: neighbours within kappa are in the 27 surrounding cells.
    auto cell = [&](const std::array<double, 3> &p) {
        return std::array<int64_t, 3>{int64_t(std::floor(p[0] / kappa)), int64_t(std::floor(p[1] / kappa)),
                                      int64_t(std::floor(p[2] / kappa))};
    };
    auto key = [](const std::array<int64_t, 3> &c) {
        return uint64_t(c[0] & 0x1fffff) << 42 | uint64_t(c[1] & 0x1fffff) << 21 | uint64_t(c[2] & 0x1fffff);
    };
    std::unordered_map<uint64_t, std::vector<uint32_t>> grid;
    for (uint32_t i = 0; i < S.size(); i++) grid[key(cell(S[i].pos))].push_back(i);
    r.min_site_distance = std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < S.size(); i++) {
        auto c = cell(S[i].pos);
        size_t occ = 0;
        for (int64_t dx = -1; dx <= 1; dx++) {
            for (int64_t dy = -1; dy <= 1; dy++) {
                for (int64_t dz = -1; dz <= 1; dz++) {
                    auto it = grid.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
                    if (it == grid.end()) continue;
                    for (uint32_t k : it->second) {
                        double dd = dist(S[i].pos, S[k].pos);
                        if (dd <= kappa) occ++;
                        if (k != i) r.min_site_distance = std::min(r.min_site_distance, dd);
                    }
                }
            }
        }
        r.max_ball_occupancy = std::max(r.max_ball_occupancy, occ);
    }
    r.pass = r.max_edge_length <= kappa && r.max_ball_occupancy <= occupancy_bound;
    return r;
}

std::vector<std::pair<uint32_t, uint32_t>> nonlocal_gates(const Layout3D &layout, const LayeredCircuit &c) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (const Layer &l : c.layers) {
        for (const Gate &g : l.gates) {
            if (is_two_qubit(g.type) && !layout.has_edge(g.a, g.b)) out.push_back({g.a, g.b});
        }
    }
    return out;
}

}  // namespace telesim
