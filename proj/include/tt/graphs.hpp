#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tt/words.hpp"

namespace tt {

// Oriented edge: +e traverses edge orbit e forwards, -e backwards (1-based).
using EdgePath = std::vector<int>;

EdgePath reverse_path(const EdgePath& p);

// Turn: ordered pair of oriented edges with a common origin vertex.
struct Turn {
    int d1 = 0;
    int d2 = 0;
    bool degenerate() const { return d1 == d2; }
};

// Finite graph with a marking identifying pi_1 with the free group on `alphabet`.
//
// Each positive edge e carries a word eword[e-1]; the word of an edge path is the
// reduced product, and the marking invariant is word_of_path(marking[i]) == generator i.
// This realizes the homotopy inverse graph -> rose, so pi_1 computations are exact.
struct MarkedGraph {
    struct Vertex {
        bool free = true;
        std::string label;  // non-free tag
    };

    Alphabet alphabet;
    std::vector<Vertex> verts;
    std::vector<int> eorig, eterm;   // endpoints of +e, 0-based vertex ids
    std::vector<double> elen;        // metric, strictly positive
    std::vector<Word> eword;         // marking word of +e
    int base = 0;
    std::vector<EdgePath> marking;   // per generator, loop at base
    bool marking_ok = true;          // false after a rank-collapsing identification

    int num_vertices() const { return static_cast<int>(verts.size()); }
    int num_edges() const { return static_cast<int>(eorig.size()); }

    int origin(int d) const { return d > 0 ? eorig[d - 1] : eterm[-d - 1]; }
    int terminus(int d) const { return d > 0 ? eterm[d - 1] : eorig[-d - 1]; }
    double length(int d) const { return elen[std::abs(d) - 1]; }
    Word word_of_dir(int d) const { return d > 0 ? eword[d - 1] : inverse(eword[-d - 1]); }

    bool is_path(const EdgePath& p) const;
    bool is_tight(const EdgePath& p) const;
    double path_length(const EdgePath& p) const;
    Word word_of_path(const EdgePath& p) const;

    // directions (oriented edges) whose origin is v
    std::vector<int> directions_at(int v) const;
    int valence(int v) const { return static_cast<int>(directions_at(v).size()); }

    // some path u -> v (BFS, shortest in edge count); empty if u == v
    EdgePath connect(int u, int v) const;

    bool connected() const;
    // edges - vertices + 1, the free rank when all vertices are free
    int euler_rank() const { return num_edges() - num_vertices() + 1; }

    // checks connectivity, metric positivity, marking loop words; when
    // strict_valence, also no free valence-one vertices and no valence-two
    // vertices with two distinct incident edge orbits
    void validate(bool strict_valence) const;
};

// Removes backtracking; same endpoints, minimal length in its homotopy class.
EdgePath tighten(const EdgePath& p);

// Cyclic tightening of a loop: removes backtracks across the wraparound as well.
// Returns the cyclic core; the dropped prefix conjugates it back to the input.
EdgePath tighten_cyclic(const EdgePath& loop);

// One free vertex, one edge pair per generator, identity marking, unit metric.
MarkedGraph rose(const Alphabet& ab);

}  // namespace tt
