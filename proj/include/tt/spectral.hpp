#pragma once

#include "tt/maps.hpp"

namespace tt {

// Perron-Frobenius data with a certified Collatz-Wielandt enclosure:
// min_j (Av)_j / v_j <= lambda <= max_j (Av)_j / v_j for the returned v.
struct PerronData {
    double lambda = 0;
    double radius = 0;  // half-width of the certified enclosure
    std::vector<double> eigenvector;
    double tol = 0;

    double lo() const { return lambda - radius; }
    double hi() const { return lambda + radius; }
};

constexpr double kDefaultTol = 1e-9;

// Right PF eigenvector of an irreducible nonnegative integer matrix.
// Throws not_irreducible (callers split via the is_irreducible witness first).
PerronData pf_eigen(const TransitionMatrix& m, double tol = kDefaultTol);

// -1 / 0 / +1 once the enclosures separate; tightens both by 10x down to 1e-14
// while they overlap, then declares equality.
int compare_lambda(const TransitionMatrix& ma, PerronData& a, const TransitionMatrix& mb,
                   PerronData& b);

// PF metric: edge lengths from the PF vector of the transpose (so that the
// metric length of every edge image is lambda times the edge length),
// normalized so the shortest edge has length 1.
MarkedGraph assign_metric(const GraphMap& f, const PerronData& pf_of_transpose);

// convenience: metric lengths for f (computes the transpose eigenvector)
std::vector<double> pf_metric_lengths(const GraphMap& f, double tol = kDefaultTol);

// spectral radius of a possibly reducible nonnegative matrix: max PF value
// over strongly connected components (0 for an all-zero matrix)
double spectral_radius_upper(const TransitionMatrix& m, double tol = kDefaultTol);

}  // namespace tt
