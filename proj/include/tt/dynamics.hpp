#pragma once

#include <optional>
#include <string>

#include "tt/constants.hpp"
#include "tt/parabolic.hpp"

namespace tt {

// --- growth classification ---------------------------------------------------

struct GrowthVerdict {
    enum class Kind { exponential, polynomial_up_to_horizon } kind;
    std::vector<long long> lengths;  // ||phi^n(g)||, n = 0..horizon (may stop early on blowup)
    // exponential certificate
    int certificate_iterate = -1;
    EdgePath certificate_segment;
    double certificate_length = 0;
    bool growth_guarantee = false;  // nu > 0, so the bcl-appl rate applies
    // polynomial fit
    int horizon = 0;
    int fitted_degree = -1;
    bool fit_stabilized = false;
};

// Realizes g as a cyclically reduced loop via the marking, iterates, and looks
// for a maximal legal segment of (coned) length >= C(f). Throws trivial_element.
GrowthVerdict classify_growth(const GraphMap& f, const GateStructure& gates,
                              const std::optional<Constants>& constants, const Word& g,
                              int horizon, const RealizedFamily* fam = nullptr);

// --- Nielsen paths -----------------------------------------------------------

struct NielsenPath {
    EdgePath path;
    int period = 0;
    Word translation;  // deck element g with [f^N(rho)] = g rho
};

struct NielsenReport {
    std::vector<NielsenPath> paths;
    double search_bound = 0;   // metric length cap used for candidate legs
    int m_nielsen = 1;         // max observed concatenation + 1
    bool chain_saturated = false;
};

// Enumerates tight beta-bar . beta' candidates with one illegal turn and legal
// legs, tests periodicity up to period_max. Throws non_expanding when the
// stretch factor is 1.
NielsenReport enumerate_nielsen_paths(const GraphMap& f, const GateStructure& gates,
                                      int period_max, double tol = kDefaultTol);

// --- atoroidality ------------------------------------------------------------

struct AtoroidalWitness {
    Word g;
    int k = 0;
    int d = 0;
    bool baumslag_solitar = false;  // d >= 2
};

// Exhaustive scan over cyclically reduced g with ||g|| <= len_max, k <= k_max,
// d <= d_max, testing phi^k([g]) == [g^d]; first witness in (len, k, d) order.
std::optional<AtoroidalWitness> atoroidal_scan(const Endomorphism& phi, int k_max, int d_max,
                                               int len_max);

// --- flaring -----------------------------------------------------------------

struct FlareCandidate {
    Word word;
    bool cyclic = true;  // fundamental segment of a cyclic word vs. plain segment
    double l0 = 0, lM = 0, l2M = 0;
    bool satisfied = false;
    double leg = 0;
    int proof_case = 0;  // 1..4
};

struct FlareCertificate {
    double lambda_flare = 0;
    int M = 0;              // least M <= M_max satisfying (**) for every candidate
    bool valid = false;
    int max_word_length = 0;
    int candidate_count = 0;
    std::vector<FlareCandidate> failures;  // at the reported M (empty when valid)
    int case_counts[5] = {0, 0, 0, 0, 0};  // index 1..4
    int fresh_samples = 0;
    int fresh_violations = 0;
    std::string note;  // evidence disclaimer
};

// Checks lambda * l([f^M rho]) <= max{l(rho), l([f^2M rho])} in the coned
// metric over fundamental segments of hyperbolic cyclic words of length <= L
// (plus plain segments up to a smaller cap), then re-samples fresh random
// words at the certified M. Throws group_is_z on rank 1 and
// no_critical_constant when the critical constant is undefined.
FlareCertificate flare_certificate(const GraphMap& f, const GateStructure& gates,
                                   const Constants& constants, const ParabolicFamily& family,
                                   const RealizedFamily& fam, double lambda_flare, int m_max,
                                   int max_len, int fresh_samples = 500, unsigned seed = 12345);

// canonical representative of a cyclic word up to rotation and inversion
Word cyclic_canonical(const Word& w);

// canonical representative up to rotation only (conjugacy of cyclic words)
Word cyclic_rotation_canonical(const Word& w);

// all canonical cyclically reduced words of length <= max_len
std::vector<Word> canonical_cyclic_words(const Alphabet& ab, int max_len);

}  // namespace tt
