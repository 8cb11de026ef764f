#include "tt/parabolic.hpp"

#include <algorithm>
#include <map>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>

namespace tt {

ParabolicFamily make_family(const Alphabet& ab, const std::vector<std::vector<Word>>& gens) {
    ParabolicFamily fam;
    fam.alphabet = ab;
    fam.subgroup_gens = gens;
    for (const auto& g : gens) {
        fam.based_cores.push_back(stallings_core(ab.rank, g));
        fam.free_cores.push_back(basepoint_free(fam.based_cores.back()));
    }
    return fam;
}

MalnormalityReport check_malnormality(const ParabolicFamily& family) {
    MalnormalityReport rep;
    for (int i = 0; i < family.size(); ++i) {
        for (int j = i; j < family.size(); ++j) {
            auto overlap = malnormal_overlap(family.free_cores[i].core, family.free_cores[j].core,
                                             i == j);
            if (overlap) {
                rep.malnormal = false;
                rep.i = i + 1;
                rep.j = j + 1;
                rep.witness = overlap->loop;
                return rep;
            }
        }
    }
    return rep;
}

RealizedFamily realize_family(const ParabolicFamily& family, const MarkedGraph& g) {
    RealizedFamily out;
    for (const auto& gens : family.subgroup_gens) {
        std::vector<Word> loops;
        for (const Word& w : gens) {
            EdgePath p;
            for (Letter x : w.letters) {
                const EdgePath& m = g.marking[std::abs(x) - 1];
                EdgePath piece = x > 0 ? m : reverse_path(m);
                p.insert(p.end(), piece.begin(), piece.end());
            }
            p = tighten(p);
            loops.emplace_back(std::vector<Letter>(p.begin(), p.end()));
        }
        CoreGraph based = stallings_core(g.num_edges(), loops);
        out.cores.push_back(basepoint_free(based).core);
    }
    return out;
}

double coned_length(const EdgePath& rho, const MarkedGraph& g, const RealizedFamily& fam) {
    int n = static_cast<int>(rho.size());
    if (fam.trivial()) return g.path_length(rho);
    std::vector<double> dp(n + 1, std::numeric_limits<double>::infinity());
    dp[0] = 0;
    for (const CoreGraph& core : fam.cores)
        if (core.num_vertices() > 64)
            throw error("parabolic core too large for the coned-length parser");
    for (int i = 0; i < n; ++i) {
        dp[i + 1] = std::min(dp[i + 1], dp[i] + g.length(rho[i]));
        // runs starting at i readable inside a core translate
        for (const CoreGraph& core : fam.cores) {
            int nv = core.num_vertices();
            std::uint64_t frontier =
                nv == 64 ? ~0ull : ((1ull << nv) - 1);
            for (int j = i; j < n; ++j) {
                std::uint64_t next = 0;
                for (std::uint64_t rest = frontier; rest;) {
                    int v = __builtin_ctzll(rest);
                    rest &= rest - 1;
                    int u = core.step(v, rho[j]);
                    if (u >= 0) next |= 1ull << u;
                }
                frontier = next;
                if (!frontier) break;
                dp[j + 1] = std::min(dp[j + 1], dp[i] + 1);
            }
        }
    }
    return dp[n];
}

bool conjugate_into_family(const Word& w, const ParabolicFamily& family) {
    Word core = cyclic_reduce(w).core;
    if (core.empty()) return true;
    for (const auto& fc : family.free_cores)
        if (fc.core.reads_cyclic_word(core)) return true;
    return false;
}

namespace {

struct LegalDfs {
    const GraphMap& f;
    const CoreGraph& core;
    const GateStructure& gates;
    // state: (core vertex, arrival direction); value: longest legal extension
    std::map<std::pair<int, int>, double> memo;
    std::map<std::pair<int, int>, int> mark;

    double longest_from(int cv, int arrival) {
        auto key = std::make_pair(cv, arrival);
        if (mark[key] == 2) return memo[key];
        if (mark[key] == 1)
            throw legal_cycle_in_parabolic("a legal loop lies inside a parabolic core");
        mark[key] = 1;
        double best = 0;
        int v = f.g.terminus(arrival);
        for (int d : f.g.directions_at(v)) {
            if (d == -arrival) continue;
            if (!gates.legal_turn(-arrival, d)) continue;
            int u = core.step(cv, d);
            if (u < 0) continue;
            best = std::max(best, f.g.length(d) + longest_from(u, d));
        }
        mark[key] = 2;
        memo[key] = best;
        return best;
    }
};

}  // namespace

double transversality_constant(const GraphMap& f, const RealizedFamily& fam,
                               const GateStructure& gates) {
    if (fam.trivial()) return 1.0;
    double longest = 0;
    for (const CoreGraph& core : fam.cores) {
        LegalDfs dfs{f, core, gates, {}, {}};
        for (int cv = 0; cv < core.num_vertices(); ++cv) {
            for (int e = 1; e <= f.g.num_edges(); ++e) {
                for (int d : {e, -e}) {
                    int u = core.step(cv, d);
                    if (u < 0) continue;
                    longest = std::max(longest, f.g.length(d) + dfs.longest_from(u, d));
                }
            }
        }
    }
    return 1.0 + longest;
}

StpResult check_strictly_type_preserving(const Endomorphism& phi, const ParabolicFamily& family) {
    StpResult res;
    for (int i = 0; i < family.size(); ++i) {
        std::vector<Word> image_gens;
        for (const Word& w : family.subgroup_gens[i]) image_gens.push_back(apply_endo(phi, w));
        std::optional<std::pair<int, Word>> found;
        for (int j = 0; j < family.size() && !found; ++j) {
            auto g = subgroup_conjugate_into(phi.alphabet.rank, image_gens,
                                             family.subgroup_gens[j]);
            if (g) found = std::make_pair(j + 1, *g);
        }
        res.targets.push_back(found);
        if (!found && res.ok) {
            res.ok = false;
            res.failing_index = i + 1;
        }
    }
    return res;
}

OrbitReport parabolic_orbits(const Endomorphism& phi, const ParabolicFamily& family, int k_max) {
    OrbitReport rep;
    int q = family.size();
    if (q == 0) return rep;
    StpResult stp = check_strictly_type_preserving(phi, family);
    if (!stp.ok)
        throw horizon_exceeded("subgroup " + std::to_string(stp.failing_index) +
                               " has no parabolic target");
    rep.target.resize(q);
    rep.conjugator.resize(q);
    for (int i = 0; i < q; ++i) {
        rep.target[i] = stp.targets[i]->first;
        rep.conjugator[i] = stp.targets[i]->second;
    }
    rep.periodic.assign(q, false);
    rep.period.assign(q, 0);
    rep.hnn_conjugator.assign(q, Word{});
    rep.description.assign(q, "");

    for (int i = 0; i < q; ++i) {
        // follow the target walk; a repeat within k_max steps closes the orbit
        std::vector<int> seen_at(q + 1, -1);
        int cur = i + 1;
        int step = 0;
        seen_at[cur] = 0;
        while (step < k_max) {
            cur = rep.target[cur - 1];
            ++step;
            if (seen_at[cur] >= 0) break;
            seen_at[cur] = step;
        }
        if (step >= k_max && seen_at[cur] < 0)
            throw horizon_exceeded("orbit of subgroup " + std::to_string(i + 1) +
                                   " did not close within k_max");
        if (cur == i + 1 && seen_at[cur] == 0) {
            // i itself is periodic with period = step
            rep.periodic[i] = true;
            rep.period[i] = step;
        }
    }
    // accumulated conjugators for periodic entries:
    // G_{k+1}(i) = phi^k(g_i) * G_k(target(i)), with G_1(i) = g_i
    for (int i = 0; i < q; ++i) {
        if (!rep.periodic[i]) continue;
        int p = rep.period[i];
        Word acc;
        int cur = i + 1;
        for (int s = 0; s < p; ++s) {
            Word step_word = rep.conjugator[cur - 1];
            for (int t = 0; t < p - 1 - s; ++t) step_word = apply_endo(phi, step_word);
            acc = concat(acc, step_word);
            cur = rep.target[cur - 1];
        }
        rep.hnn_conjugator[i] = acc;
        std::string g_str = format_word(phi.alphabet, acc);
        rep.description[i] = "<P_" + std::to_string(i + 1) + ", " +
                             (g_str.empty() ? "" : "(" + g_str + ")^-1 ") + "t^" +
                             std::to_string(p) + ">";
    }
    for (int i = 0; i < q; ++i) {
        if (rep.periodic[i]) continue;
        rep.description[i] = "pre-periodic: enters the periodic subfamily via P_" +
                             std::to_string(rep.target[i]);
    }
    std::vector<int> periods;
    for (int i = 0; i < q; ++i)
        if (rep.periodic[i]) periods.push_back(rep.period[i]);
    rep.K = 1;
    for (int p : periods) rep.K = std::lcm(rep.K, p);
    return rep;
}

std::optional<InvariantFactorResult> find_invariant_factor_system(const Endomorphism& phi,
                                                                  int depth) {
    InvariantFactorResult res;
    std::vector<int> last_witness;
    for (int m = 1; m <= depth; ++m) {
        Endomorphism pw = endo_power(phi, m);
        GraphMap f = rose_representative(pw);
        TransitionMatrix mat = transition_matrix(f);
        IrreducibilityResult irr = [&] {
            try {
                return is_irreducible(mat);
            } catch (const zero_matrix&) {
                return IrreducibilityResult{false, {}};
            }
        }();
        if (irr.irreducible) continue;
        InvariantFactorChainStep step;
        step.power = m;
        step.witness_letters = irr.witness;
        step.component_count = 1;  // sub-rose on the witness petals is connected
        step.complexity = static_cast<int>(irr.witness.size());
        res.chain.push_back(step);
        if (!last_witness.empty() && irr.witness == last_witness) {
            std::vector<Word> gens;
            for (int l : irr.witness) gens.push_back(Word({l}));
            res.subgroup_gens = {gens};
            return res;
        }
        last_witness = irr.witness;
    }
    if (res.chain.empty()) return std::nullopt;
    throw depth_exhausted("invariant factor chain with " + std::to_string(res.chain.size()) +
                          " reducible powers did not stabilize within depth " +
                          std::to_string(depth));
}

}  // namespace tt
