#pragma once

#include <map>

#include "tt/maps.hpp"

namespace tt {

// Gates: per vertex, the partition of incident directions under the stable
// relation d ~ d' iff Df^k(d) = Df^k(d') for some k >= 1. A turn is legal when
// its directions lie in distinct gates.
struct GateStructure {
    std::map<int, int> gate_of;   // direction -> gate id (global numbering)
    std::map<int, int> dmap;      // direction -> first edge of its image
    std::vector<std::vector<std::vector<int>>> gates_at;  // per vertex, list of gates

    bool same_gate(int d1, int d2) const { return gate_of.at(d1) == gate_of.at(d2); }
    bool legal_turn(int d1, int d2) const { return d1 != d2 && !same_gate(d1, d2); }
    int gate_count(int v) const { return static_cast<int>(gates_at[v].size()); }
};

// Throws collapsed_edge_image if some edge maps to a vertex.
GateStructure gate_structure(const GraphMap& f);

// Number of interior illegal turns of a tight path.
int illegal_count(const EdgePath& rho, const MarkedGraph& g, const GateStructure& gates);

bool path_legal(const EdgePath& rho, const MarkedGraph& g, const GateStructure& gates);

// Maximal legal segments of a tight path (split at illegal turns).
std::vector<EdgePath> legal_segments(const EdgePath& rho, const MarkedGraph& g,
                                     const GateStructure& gates);

// Train track conditions: every edge image legal; >= 2 gates per vertex;
// distinct gates map into distinct gates (automatic for the stable relation,
// re-verified anyway).
struct TrainTrackCheck {
    bool edge_images_legal = false;
    bool two_gates_everywhere = false;
    bool gate_map_injective = false;
    bool ok() const { return edge_images_legal && two_gates_everywhere && gate_map_injective; }
};
TrainTrackCheck check_train_track(const GraphMap& f);

}  // namespace tt
