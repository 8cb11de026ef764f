#pragma once

#include "tt/maps.hpp"

namespace tt {

// Witness concatenation alpha . beta realizing the maximal junction cancellation.
struct BccWitness {
    EdgePath alpha, beta;
    double cancellation = 0;
};

// Exact bounded cancellation constant in the metric carried by f.g: the least C
// such that tightening f(alpha) . f(beta) cancels at most C across the junction,
// over all tight concatenations alpha . beta. Computed by propagating common
// image prefixes through successive directions until they stop; a cycle in the
// propagation (unbounded cancellation) throws unbounded_cancellation.
double bcc_constant(const GraphMap& f, BccWitness* witness = nullptr);

// Metric length of the junction cancellation when tightening f(alpha) . f(beta).
double junction_cancellation(const GraphMap& f, const EdgePath& alpha, const EdgePath& beta);

}  // namespace tt
