#pragma once

#include <optional>
#include <vector>

#include "tt/words.hpp"

namespace tt {

// Folded graph with edges labeled by letters 1..num_labels (and their inverses).
// Represents a finitely generated subgroup when based; the basepoint-free core
// supports conjugacy-robust queries. Labels are free-group generators for
// subgroups of F, or edge orbits when a core is realized inside a marked graph.
struct CoreGraph {
    int num_labels = 0;
    // adj[v][lab + num_labels]: target of the edge labeled `lab` leaving v, or -1.
    // lab ranges over -num_labels..-1, 1..num_labels (index shifted, slot for 0 unused).
    std::vector<std::vector<int>> adj;
    int base = -1;  // -1 for basepoint-free form

    int num_vertices() const { return static_cast<int>(adj.size()); }
    int step(int v, int lab) const { return adj[v][lab + num_labels]; }

    int add_vertex();
    void set_arrow(int u, int lab, int v);  // also sets the inverse arrow

    // follows `w` from `from`; -1 when the walk leaves the graph
    int walk(int from, const std::vector<Letter>& w) const;

    bool loops_at_base(const Word& w) const;  // membership for based cores

    // true if the cyclic word (assumed cyclically reduced) reads a closed loop
    // somewhere in the graph; detects conjugates into the subgroup
    bool reads_cyclic_word(const Word& cyc) const;

    int degree(int v) const;
};

// Folded based core of <generators>; throws empty_generator_set.
CoreGraph stallings_core(int num_labels, const std::vector<Word>& generators);

// Basepoint-free core: iteratively strips valence-one vertices (the base too).
// tail = word read from the old base into the surviving core (empty if base kept).
struct FreeCore {
    CoreGraph core;    // base set to the attachment vertex
    Word tail;         // old base -> attachment
};
FreeCore basepoint_free(const CoreGraph& based);

// All locally injective label-preserving morphisms domain -> target, encoded as
// vertex maps. Both graphs must be folded; domain must be connected.
std::vector<std::vector<int>> immersions(const CoreGraph& domain, const CoreGraph& target);

// If some conjugate g Q g^-1 contains P, returns a shortest-then-lex such g.
std::optional<Word> subgroup_conjugate_into(int num_labels, const std::vector<Word>& gens_p,
                                            const std::vector<Word>& gens_q);

// Fiber product components meeting both projections nontrivially witness
// intersections g P g^-1 \cap Q; used by the malnormality check.
struct OverlapWitness {
    Word loop;  // nontrivial element of some g P g^-1 \cap Q (as read in Q)
};
// Pairs (P,Q) of basepoint-free cores; for P==Q the diagonal is ignored.
std::optional<OverlapWitness> malnormal_overlap(const CoreGraph& p_free, const CoreGraph& q_free,
                                                bool same_subgroup);

}  // namespace tt
