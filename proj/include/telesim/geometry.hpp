#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/wedge.hpp"

namespace telesim {

enum class SiteRole : uint8_t { DataLeft, DataRight, Bulk };
const char *site_role_name(SiteRole r);

struct Site {
    uint32_t id;
    std::array<double, 3> pos;
    SiteRole role;
    uint32_t wedge;
};

struct Layout3D {
    std::vector<Site> sites;
    std::vector<std::pair<uint32_t, uint32_t>> edges;

    // Placement parameters (zero for a single wedge).
    size_t n = 0;
    int d = 0;
    size_t L = 0;  // sites per wedge along the ring
    double delta_out = 0, delta_in = 0, delta_r = 0, r_out = 0, r_in = 0;

    bool has_edge(uint32_t u, uint32_t v) const;
    std::string to_json() const;
};

// Wedge coordinates folded along the plane a = b: (a, b, k) -> (min, max, k), with the a > b
// sheet lifted by `sheet_offset`. Fold partners end up `sheet_offset` apart.
std::array<double, 3> folded_coords(const std::array<int, 3> &site, double sheet_offset);

// One wedge in its own frame (unit lattice spacing).
Layout3D wedge_layout(const WedgeLayout &w);

// n wedges around an annulus. The ring direction carries L = (wedge width) sites per wedge at
// spacing delta_out on the outer circle, the radial direction has spacing delta_r, and
// r_in = r_out - L * delta_r. Sites and edges use the U^ext qubit numbering; edges are the
// cluster bonds, the fold pairs of every right face and the Bell pairs between wedges.
Layout3D colosseum_layout(size_t n, int d, double delta_out, double delta_r);
// Closed form of the inner spacing.
double colosseum_delta_in(size_t n, double delta_out, double delta_r);

struct LocalityReport {
    double max_edge_length = 0;
    double min_site_distance = 0;
    size_t max_ball_occupancy = 0;  // sites within distance kappa of a site, itself included
    double kappa = 0;
    size_t occupancy_bound = 0;
    bool pass = false;
};
LocalityReport check_locality(const Layout3D &layout, double kappa, size_t occupancy_bound = 40);

// Two-qubit gates of c that are not edges of the layout.
std::vector<std::pair<uint32_t, uint32_t>> nonlocal_gates(const Layout3D &layout, const LayeredCircuit &c);

}  // namespace telesim
