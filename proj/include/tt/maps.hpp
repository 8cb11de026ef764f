#pragma once

#include <cstdint>
#include <vector>

#include "tt/graphs.hpp"

namespace tt {

// Tight self-map of a marked graph: vertices to vertices, edges to tight edge
// paths (possibly empty, when an edge is collapsed to a vertex). The image of
// -e is the reverse of the image of +e.
struct GraphMap {
    MarkedGraph g;
    std::vector<int> vimage;        // per vertex
    std::vector<EdgePath> eimage;   // per positive edge
    Endomorphism phi;               // represented endomorphism

    const EdgePath& image_of_edge(int e) const { return eimage[e - 1]; }
    EdgePath image_of_dir(int d) const {
        return d > 0 ? eimage[d - 1] : reverse_path(eimage[d - 1]);
    }
    // concat of edge images, tightened
    EdgePath image_of_path(const EdgePath& p) const;

    // first edge of the image of direction d, 0 if the image is empty
    int dmap(int d) const {
        const EdgePath& im = eimage[std::abs(d) - 1];
        if (im.empty()) return 0;
        return d > 0 ? im.front() : -im.back();
    }

    void validate() const;  // endpoint consistency, tightness, marking words

    // exact check: word(f(marking loop_i)) == c * phi(g_i) * c^-1 with the single
    // conjugator c = word(path base -> f(base))
    bool marking_compatible() const;
};

GraphMap rose_representative(const Endomorphism& phi);

struct TransitionMatrix {
    std::vector<std::vector<std::int64_t>> a;  // a[i][j] = crossings of e_{i+1} by image of e_{j+1}
    int size() const { return static_cast<int>(a.size()); }
    bool operator==(const TransitionMatrix&) const = default;
};

TransitionMatrix transition_matrix(const GraphMap& f);
TransitionMatrix matrix_power(const TransitionMatrix& m, int k);
TransitionMatrix transpose(const TransitionMatrix& m);

// Strong connectivity of the digraph with an edge x_j -> x_i per a_ij > 0.
// On failure `witness` is a sink component: a proper nonempty set of edge
// orbits (1-based) closed under the image relation. Throws zero_matrix.
struct IrreducibilityResult {
    bool irreducible = false;
    std::vector<int> witness;
};
IrreducibilityResult is_irreducible(const TransitionMatrix& m);

// Iterated substitution then tightening; represents phi^k.
GraphMap power(const GraphMap& f, int k);

}  // namespace tt
