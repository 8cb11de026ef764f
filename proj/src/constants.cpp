#include "tt/constants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tt {

ConstantsResult compute_constants(const GraphMap& f, double c_tr, int power_budget, double tol) {
    TransitionMatrix m = transition_matrix(f);
    double upper = spectral_radius_upper(m, tol);
    if (upper <= 1 + 10 * tol) {
        // isometric case: nothing expands, nothing cancels; keep the unit metric
        ConstantsResult r{f, {}};
        r.c.power = 1;
        r.c.perron.lambda = upper;
        r.c.perron.radius = tol;
        r.c.perron.tol = tol;
        r.c.lambda = upper;
        r.c.c_bcl = bcc_constant(r.map);
        r.c.c_tr = c_tr;
        r.c.expanding = false;
        r.c.critical_defined = false;
        r.c.nu_ok = false;
        r.c.k_li = 1;
        return r;
    }

    std::optional<ConstantsResult> fallback;
    for (int k = 1; k <= power_budget; ++k) {
        GraphMap g = power(f, k);
        TransitionMatrix mk = transition_matrix(g);
        PerronData pk = pf_eigen(mk, tol);
        g.g = assign_metric(g, pf_eigen(transpose(mk), tol));
        double cap = pk.lambda / c_tr;
        if (cap <= 1) continue;
        double c_bcl = bcc_constant(g);
        double critical = 2 * c_bcl / (cap - 1);
        double nu = 1 - critical;
        ConstantsResult r{std::move(g), {}};
        r.c.power = k;
        r.c.perron = pk;
        r.c.lambda = pk.lambda;
        r.c.c_bcl = c_bcl;
        r.c.c_tr = c_tr;
        r.c.expanding = true;
        r.c.critical_defined = true;
        r.c.critical = critical;
        r.c.nu = nu;
        r.c.nu_ok = nu > 0;
        r.c.k_li = std::max(critical, 1.0);
        if (r.c.nu_ok) return r;
        if (!fallback) fallback = std::move(r);
    }
    if (fallback) return *std::move(fallback);
    throw power_budget_exhausted("lambda^k/c_tr <= 1 for every k <= " +
                                 std::to_string(power_budget));
}

double leg_fraction(const EdgePath& rho, const GraphMap& g_powered, const GateStructure& gates,
                    const Constants& c, const std::function<double(const EdgePath&)>& measure) {
    if (rho.empty()) throw zero_length();
    if (!c.critical_defined) throw no_critical_constant("critical constant undefined");
    auto len = measure ? measure
                       : std::function<double(const EdgePath&)>(
                             [&](const EdgePath& p) { return g_powered.g.path_length(p); });
    double total = len(rho);
    if (total <= 0) throw zero_length();
    double qualifying = 0;
    for (const EdgePath& seg : legal_segments(rho, g_powered.g, gates)) {
        double l = len(seg);
        if (l >= c.critical) qualifying += l;
    }
    return std::min(1.0, qualifying / total);
}

namespace {

// random tight path of the requested edge count
EdgePath random_tight_path(const MarkedGraph& g, int len, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> vdist(0, g.num_vertices() - 1);
    EdgePath p;
    int v = vdist(rng);
    for (int i = 0; i < len; ++i) {
        auto dirs = g.directions_at(v);
        std::vector<int> ok;
        for (int d : dirs)
            if (p.empty() || d != -p.back()) ok.push_back(d);
        if (ok.empty()) break;
        int d = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
        p.push_back(d);
        v = g.terminus(d);
    }
    return p;
}

}  // namespace

KliReport verify_kli(const GraphMap& g_powered, const GateStructure& gates, Constants& c,
                     int samples, unsigned seed) {
    KliReport rep;
    rep.k_li = c.k_li;
    std::mt19937_64 rng(seed);
    std::vector<EdgePath> qualifying;
    int attempts = samples * 200;
    std::uniform_int_distribution<int> ldist(2, 40);
    for (int t = 0; t < attempts && static_cast<int>(qualifying.size()) < samples; ++t) {
        EdgePath p = random_tight_path(g_powered.g, ldist(rng), rng);
        if (illegal_count(p, g_powered.g, gates) == 0) continue;
        bool all_short = true;
        for (const EdgePath& seg : legal_segments(p, g_powered.g, gates))
            if (g_powered.g.path_length(seg) >= c.critical) all_short = false;
        if (all_short) qualifying.push_back(std::move(p));
    }
    rep.sampled = static_cast<int>(qualifying.size());
    for (int pass = 0; pass < 3; ++pass) {
        rep.violations = 0;
        for (const EdgePath& p : qualifying) {
            double l = g_powered.g.path_length(p);
            double i = illegal_count(p, g_powered.g, gates);
            if (l > rep.k_li * i || l < i / rep.k_li) {
                ++rep.violations;
                rep.k_li = std::max({rep.k_li, l / i, i / l}) * (1 + 1e-12);
            }
        }
        if (rep.violations == 0) break;
        ++rep.tightened;
    }
    // final verification pass
    rep.violations = 0;
    for (const EdgePath& p : qualifying) {
        double l = g_powered.g.path_length(p);
        double i = illegal_count(p, g_powered.g, gates);
        if (l > rep.k_li * i || l < i / rep.k_li) ++rep.violations;
    }
    c.k_li = rep.k_li;
    return rep;
}

}  // namespace tt
