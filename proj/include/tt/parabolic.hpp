#pragma once

#include <optional>

#include "tt/core_graph.hpp"
#include "tt/gates.hpp"

namespace tt {

// Finite family of finitely generated subgroups given by Stallings cores.
struct ParabolicFamily {
    Alphabet alphabet;
    std::vector<std::vector<Word>> subgroup_gens;
    std::vector<CoreGraph> based_cores;  // over the free-group letters
    std::vector<FreeCore> free_cores;

    int size() const { return static_cast<int>(subgroup_gens.size()); }
    bool trivial() const { return subgroup_gens.empty(); }
};

ParabolicFamily make_family(const Alphabet& ab, const std::vector<std::vector<Word>>& gens);

// Malnormality is checked, not assumed: first overlapping pair, if any.
struct MalnormalityReport {
    bool malnormal = true;
    int i = -1, j = -1;  // overlapping pair (i == j for a self-overlap)
    Word witness;
};
MalnormalityReport check_malnormality(const ParabolicFamily& family);

// The family realized inside a marked graph: cores labeled by graph edges,
// built from the subgroup generators pushed through the marking.
struct RealizedFamily {
    std::vector<CoreGraph> cores;  // basepoint-free, labels = edge orbits
    bool trivial() const { return cores.empty(); }
};
RealizedFamily realize_family(const ParabolicFamily& family, const MarkedGraph& g);

// Coned-off length: each maximal subpath lifting into a core translate costs 1,
// everything else keeps its metric length. Minimal-cost parsing by DP.
double coned_length(const EdgePath& rho, const MarkedGraph& g, const RealizedFamily& fam);

// True when the cyclic word of the loop lifts into some core (the element is
// conjugate into the family).
bool conjugate_into_family(const Word& w, const ParabolicFamily& family);

// Least C >= 1 with coned(rho) >= metric(rho)/C over all legal paths: computed
// as 1 + the longest metric length of a legal path inside any realized core.
// Throws legal_cycle_in_parabolic when a legal loop lies inside a core.
double transversality_constant(const GraphMap& f, const RealizedFamily& fam,
                               const GateStructure& gates);

// phi(P_i) <= g P_j g^-1 witnesses, per subgroup.
struct StpResult {
    bool ok = true;
    int failing_index = -1;  // 1-based, set when !ok
    std::vector<std::optional<std::pair<int, Word>>> targets;  // (j 1-based, g)
};
StpResult check_strictly_type_preserving(const Endomorphism& phi, const ParabolicFamily& family);

struct OrbitReport {
    int K = 1;  // lcm of the periods of the periodic subfamily
    std::vector<int> target;       // i -> j (1-based)
    std::vector<Word> conjugator;  // per-step conjugator g_i
    std::vector<bool> periodic;
    std::vector<int> period;       // 0 for pre-periodic entries
    std::vector<Word> hnn_conjugator;  // accumulated g for periodic entries
    std::vector<std::string> description;
};
OrbitReport parabolic_orbits(const Endomorphism& phi, const ParabolicFamily& family, int k_max);

// Invariant free factor system from reducibility witnesses of rose
// representatives of powers of phi. Returns nullopt when irreducible at all
// tested powers; throws depth_exhausted when a chain does not stabilize.
struct InvariantFactorChainStep {
    int power = 0;
    std::vector<int> witness_letters;  // 1-based generator indices
    int component_count = 0;
    int complexity = 0;  // free rank of the invariant subgraph
};
struct InvariantFactorResult {
    std::vector<std::vector<Word>> subgroup_gens;
    std::vector<InvariantFactorChainStep> chain;
};
std::optional<InvariantFactorResult> find_invariant_factor_system(const Endomorphism& phi,
                                                                  int depth);

}  // namespace tt
