#pragma once

#include <optional>
#include <string>

#include "tt/gates.hpp"
#include "tt/spectral.hpp"

namespace tt {

struct MoveRecord {
    std::string kind;
    std::string detail;
    double lambda_before = 0, radius_before = 0;
    double lambda_after = 0, radius_after = 0;
};

struct MoveLog {
    std::vector<MoveRecord> moves;
};

// Subdivision: splits edge e at the interior point mapping to the image-path
// vertex after `prefix_len` edges. Throws not_a_vertex_image for endpoint
// positions. Stretch factor is unchanged.
GraphMap subdivide(const GraphMap& f, int e, int prefix_len);

// Splits the edge underlying direction d so that the origin-side half maps to
// the first `prefix_len` edges of d's image; returns the half's direction.
struct SubdivideResult {
    GraphMap map;
    int half_dir;  // origin-side half of d, as a direction from the turn vertex
};
SubdivideResult subdivide_dir(const GraphMap& f, int d, int prefix_len);

// Folding: identifies the maximal common initial segments of the images of the
// two turn directions (subdividing first when they are proper prefixes), then
// collapses any maximal invariant subforest with bounded components and
// tightens. Throws illegal_fold_request if the images share no initial segment;
// throws injectivity_anomaly when the identification would kill a loop.
GraphMap fold(const GraphMap& f, const Turn& turn);

// Collapses every pretrivial edge: edges whose forward orbit under the image
// relation never meets a cycle of the transition digraph, restricted to
// tree components. Iterates to a fixed point.
GraphMap collapse_pretrivial(const GraphMap& f);

GraphMap remove_valence_one(const GraphMap& f, int v);

// Requires the PF metric on f.g; collapses the incident edge with the larger
// eigenvector entry (ties toward the lower edge index) and stretches the other
// over it, then collapses bounded invariant forest and tightens.
GraphMap remove_valence_two(const GraphMap& f, int v);

// Repairs a vertex whose directions form a single gate by folding collision
// pairs at their one-step-degenerate level until the vertex has >= 2 gates or
// disappears. Throws not_one_gate if v has >= 2 gates.
GraphMap fix_one_gate_vertex(const GraphMap& f, int v);

struct TrainTrackSuccess {
    GraphMap map;
    PerronData perron;
    MoveLog log;
};

struct TrainTrackOutcome {
    enum class Status { success, not_irreducible, budget_exhausted };
    Status status;
    std::optional<TrainTrackSuccess> result;   // success
    std::vector<int> witness;                  // not_irreducible
    std::optional<GraphMap> state;             // budget_exhausted (resumable)
    MoveLog log;
};

// Driver: normalization, gate repair, and folds of stably illegal turns
// taken by edge images, within a move budget.
TrainTrackOutcome train_track_algorithm(const Endomorphism& phi, int budget = 10000,
                                        double tol = kDefaultTol);
TrainTrackOutcome train_track_algorithm_from(GraphMap f, int budget, double tol = kDefaultTol);

}  // namespace tt
