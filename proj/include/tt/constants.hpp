#pragma once

#include <functional>

#include "tt/cancellation.hpp"
#include "tt/gates.hpp"
#include "tt/spectral.hpp"

namespace tt {

// The derived constants of a train track map, computed at a power f^k chosen so
// that the growth estimates apply: lambda^k / c_tr > 1 and, when attainable
// within the power budget, nu > 0.
struct Constants {
    int power = 1;          // constants live on power(f, k)
    PerronData perron;      // of the powered map
    double lambda = 1;      // perron.lambda
    double c_bcl = 0;       // exact bounded cancellation constant of the powered map
    double c_tr = 1;        // transversality constant (1 when the family is trivial)
    bool expanding = false; // lambda > 1
    bool critical_defined = false;  // lambda / c_tr > 1
    double critical = 0;    // C(f) = 2 c_bcl / (lambda / c_tr - 1)
    double nu = 1;          // 1 - 2 c_bcl / (lambda / c_tr - 1)
    bool nu_ok = false;     // nu > 0 (growth guarantee available)
    double k_li = 1;        // length-illegal comparison constant (verified candidate)
    int m_nielsen = 0;      // concatenation bound, filled by the Nielsen enumeration
};

struct ConstantsResult {
    GraphMap map;  // the powered map, PF metric assigned
    Constants c;
};

constexpr int kDefaultPowerBudget = 8;

// Computes all constants for a train track map. Raises the power until
// lambda^k/c_tr > 1 and nu > 0; if no k within the budget achieves nu > 0 but
// some k defines the critical constant, returns that k with nu_ok = false.
// Throws power_budget_exhausted when even lambda^k/c_tr > 1 fails for k <= budget.
ConstantsResult compute_constants(const GraphMap& f, double c_tr = 1.0,
                                  int power_budget = kDefaultPowerBudget,
                                  double tol = kDefaultTol);

// Fraction of rho carried by maximal legal segments of length >= C(f).
// `measure` defaults to the PF-metric path length; pass a coned length for
// computations relative to a parabolic family. Throws zero_length on the empty
// path and no_critical_constant when the critical constant is undefined.
double leg_fraction(const EdgePath& rho, const GraphMap& g_powered, const GateStructure& gates,
                    const Constants& c,
                    const std::function<double(const EdgePath&)>& measure = nullptr);

// Empirical check of K_li^-1 i(rho) <= l(rho) <= K_li i(rho) over sampled tight
// paths whose maximal legal segments are all shorter than C(f). Violations
// tighten k_li; the returned report must end with zero violations.
struct KliReport {
    double k_li = 1;
    int sampled = 0;      // qualifying paths found
    int tightened = 0;    // times the candidate was raised
    int violations = 0;   // after the final pass
};
KliReport verify_kli(const GraphMap& g_powered, const GateStructure& gates, Constants& c,
                     int samples, unsigned seed);

}  // namespace tt
