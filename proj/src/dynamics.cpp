#include "tt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace tt {

namespace {

constexpr long long kLengthCap = 2'000'000;

EdgePath loop_path(const MarkedGraph& g, const Word& w) {
    EdgePath p;
    for (Letter x : w.letters) {
        const EdgePath& m = g.marking[std::abs(x) - 1];
        EdgePath piece = x > 0 ? m : reverse_path(m);
        p.insert(p.end(), piece.begin(), piece.end());
    }
    return tighten_cyclic(tighten(p));
}

// illegal turns of the axis period: interior turns plus the wraparound turn
int cyclic_illegal_count(const EdgePath& loop, const MarkedGraph& g, const GateStructure& gates) {
    if (loop.empty()) return 0;
    int count = illegal_count(loop, g, gates);
    if (loop.size() >= 1 && !gates.legal_turn(-loop.back(), loop.front())) ++count;
    return count;
}

}  // namespace

GrowthVerdict classify_growth(const GraphMap& f, const GateStructure& gates,
                              const std::optional<Constants>& constants, const Word& g,
                              int horizon, const RealizedFamily* fam) {
    if (g.empty()) throw trivial_element();
    GrowthVerdict verdict{};
    verdict.kind = GrowthVerdict::Kind::polynomial_up_to_horizon;
    verdict.horizon = horizon;

    // exact conjugacy lengths via the endomorphism
    Word w = g;
    verdict.lengths.push_back(static_cast<long long>(conjugacy_length(w)));
    for (int n = 1; n <= horizon; ++n) {
        if (static_cast<long long>(w.size()) > kLengthCap) break;
        w = apply_endo(f.phi, w);
        verdict.lengths.push_back(static_cast<long long>(conjugacy_length(w)));
    }

    // graph-side scan for a long legal segment
    if (constants && constants->critical_defined) {
        EdgePath rho = loop_path(f.g, g);
        int last_illegal = -1;
        for (int n = 0; n <= horizon && !rho.empty(); ++n) {
            if (static_cast<long long>(rho.size()) > kLengthCap) break;
            int illegal = cyclic_illegal_count(rho, f.g, gates);
            if (last_illegal >= 0 && illegal > last_illegal)
                throw error("illegal turn count increased along an iteration trace");
            last_illegal = illegal;
            // wrap the loop so interior turns include the wraparound
            EdgePath doubled = rho;
            doubled.insert(doubled.end(), rho.begin(), rho.end());
            doubled = tighten(doubled);
            for (const EdgePath& seg : legal_segments(doubled, f.g, gates)) {
                double len = fam ? coned_length(seg, f.g, *fam) : f.g.path_length(seg);
                if (len >= constants->critical) {
                    verdict.kind = GrowthVerdict::Kind::exponential;
                    verdict.certificate_iterate = n;
                    verdict.certificate_segment = seg;
                    verdict.certificate_length = len;
                    verdict.growth_guarantee = constants->nu_ok;
                    return verdict;
                }
            }
            rho = tighten_cyclic(f.image_of_path(rho));
        }
    }

    // iterated finite differences with a 10% stabilization threshold
    std::vector<double> seq(verdict.lengths.begin(), verdict.lengths.end());
    for (int deg = 0; deg < static_cast<int>(seq.size()) - 1 && deg <= 8; ++deg) {
        double mx = 0, mn = 0;
        bool first = true;
        for (double x : seq) {
            if (first) {
                mx = mn = x;
                first = false;
            }
            mx = std::max(mx, x);
            mn = std::min(mn, x);
        }
        double scale = std::max(1.0, std::abs(mx));
        if (mx - mn <= 0.1 * scale) {
            verdict.fitted_degree = deg;
            verdict.fit_stabilized = true;
            return verdict;
        }
        std::vector<double> diff;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) diff.push_back(seq[i + 1] - seq[i]);
        seq = std::move(diff);
    }
    verdict.fitted_degree = static_cast<int>(verdict.lengths.size());
    verdict.fit_stabilized = false;
    return verdict;
}

namespace {

// legal paths from a starting direction with metric length cap
void legal_extensions(const GraphMap& f, const GateStructure& gates, EdgePath& cur, double len,
                      double cap, std::vector<EdgePath>& out) {
    out.push_back(cur);
    int last = cur.back();
    for (int d : f.g.directions_at(f.g.terminus(last))) {
        if (d == -last || !gates.legal_turn(-last, d)) continue;
        if (len + f.g.length(d) > cap) continue;
        cur.push_back(d);
        legal_extensions(f, gates, cur, len + f.g.length(d), cap, out);
        cur.pop_back();
    }
}

}  // namespace

NielsenReport enumerate_nielsen_paths(const GraphMap& f, const GateStructure& gates,
                                      int period_max, double tol) {
    TransitionMatrix m = transition_matrix(f);
    if (spectral_radius_upper(m, tol) <= 1 + 10 * tol)
        throw non_expanding("stretch factor 1: nothing expands");
    PerronData pf = pf_eigen(m, tol);

    NielsenReport rep;
    // per-period candidate bound: (lambda^N - 1) l(rho) <= 2 C_bcl(f^N)
    double bound = 0;
    std::vector<GraphMap> powers;
    for (int n = 1; n <= period_max; ++n) {
        powers.push_back(power(f, n));
        double cb = bcc_constant(powers.back());
        double ln = std::pow(pf.lambda, n);
        bound = std::max(bound, 2 * cb / (ln - 1));
    }
    rep.search_bound = bound + 1e-9;

    // candidates: beta-bar . beta' with one illegal junction turn, legal legs
    std::vector<EdgePath> candidates;
    for (int v = 0; v < f.g.num_vertices(); ++v) {
        auto dirs = f.g.directions_at(v);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                if (gates.legal_turn(dirs[i], dirs[j])) continue;  // junction must be illegal
                std::vector<EdgePath> legs_a, legs_b;
                EdgePath cur{dirs[i]};
                if (f.g.length(dirs[i]) <= rep.search_bound)
                    legal_extensions(f, gates, cur, f.g.length(dirs[i]), rep.search_bound, legs_a);
                cur = {dirs[j]};
                if (f.g.length(dirs[j]) <= rep.search_bound)
                    legal_extensions(f, gates, cur, f.g.length(dirs[j]), rep.search_bound, legs_b);
                for (const EdgePath& a : legs_a)
                    for (const EdgePath& b : legs_b) {
                        if (f.g.path_length(a) + f.g.path_length(b) > rep.search_bound) continue;
                        EdgePath rho = reverse_path(a);
                        rho.insert(rho.end(), b.begin(), b.end());
                        candidates.push_back(std::move(rho));
                    }
            }
        }
    }

    // periodicity test with exact deck-translation bookkeeping
    for (const EdgePath& rho : candidates) {
        EdgePath image = rho;
        EdgePath s_n;  // path base -> f^n(base)
        for (int n = 1; n <= period_max; ++n) {
            EdgePath step = f.g.connect(f.g.base, f.vimage[f.g.base]);
            // s_n = s_{n-1} . f^{n-1}(sigma_1); compute f^{n-1}(sigma_1) by iterating
            EdgePath fs = step;
            for (int t = 0; t < n - 1; ++t) fs = f.image_of_path(fs);
            s_n.insert(s_n.end(), fs.begin(), fs.end());
            s_n = tighten(s_n);
            image = f.image_of_path(image);
            if (image == rho) {
                EdgePath c = f.g.connect(f.g.base, f.g.origin(rho.front()));
                EdgePath fc = c;
                for (int t = 0; t < n; ++t) fc = f.image_of_path(fc);
                EdgePath total = s_n;
                total.insert(total.end(), fc.begin(), fc.end());
                Word g_word = concat(f.g.word_of_path(tighten(total)),
                                     inverse(f.g.word_of_path(c)));
                rep.paths.push_back({rho, n, g_word});
                break;
            }
        }
    }

    // drop duplicates up to reversal
    std::vector<NielsenPath> unique_paths;
    for (const auto& np : rep.paths) {
        bool dup = false;
        for (const auto& seen : unique_paths)
            if (seen.path == np.path || seen.path == reverse_path(np.path)) dup = true;
        if (!dup) unique_paths.push_back(np);
    }
    rep.paths = std::move(unique_paths);

    // longest tight concatenation of the found paths
    int cap = 2 * static_cast<int>(rep.paths.size()) + 4;
    int longest = rep.paths.empty() ? 0 : 1;
    std::vector<std::pair<int, int>> stack;  // (index, chain length)
    for (std::size_t i = 0; i < rep.paths.size(); ++i) stack.push_back({static_cast<int>(i), 1});
    while (!stack.empty()) {
        auto [i, len] = stack.back();
        stack.pop_back();
        longest = std::max(longest, len);
        if (len >= cap) {
            rep.chain_saturated = true;
            break;
        }
        const EdgePath& pi = rep.paths[i].path;
        for (std::size_t j = 0; j < rep.paths.size(); ++j) {
            const EdgePath& pj = rep.paths[j].path;
            if (f.g.terminus(pi.back()) != f.g.origin(pj.front())) continue;
            if (pj.front() == -pi.back()) continue;
            stack.push_back({static_cast<int>(j), len + 1});
        }
    }
    rep.m_nielsen = longest + 1;
    return rep;
}

namespace {

// letter order +1 < -1 < +2 < -2 < ...
bool letters_less(const std::vector<Letter>& a, const std::vector<Letter>& b) {
    auto key = [](Letter l) { return 2 * std::abs(l) - (l > 0 ? 1 : 0); };
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (key(a[i]) != key(b[i])) return key(a[i]) < key(b[i]);
    }
    return a.size() < b.size();
}

}  // namespace

Word cyclic_rotation_canonical(const Word& w) {
    Word core = cyclic_reduce(w).core;
    if (core.empty()) return core;
    auto best = core.letters;
    auto v = core.letters;
    int n = static_cast<int>(v.size());
    for (int r = 0; r < n; ++r) {
        std::rotate(v.begin(), v.begin() + 1, v.end());
        if (letters_less(v, best)) best = v;
    }
    return Word(best);
}

Word cyclic_canonical(const Word& w) {
    Word core = cyclic_reduce(w).core;
    if (core.empty()) return core;
    Word a = cyclic_rotation_canonical(core);
    Word b = cyclic_rotation_canonical(inverse(core));
    return letters_less(a.letters, b.letters) ? a : b;
}

std::vector<Word> canonical_cyclic_words(const Alphabet& ab, int max_len) {
    std::vector<Word> out;
    std::vector<Letter> cur;
    std::vector<Letter> order;
    for (int i = 1; i <= ab.rank; ++i) {
        order.push_back(i);
        order.push_back(-i);
    }
    // enumerate cyclically reduced words, keep canonical representatives
    auto emit = [&]() {
        if (cur.empty()) return;
        if (cur.front() == inv(cur.back()) && cur.size() > 1) return;  // not cyclically reduced
        Word w{std::vector<Letter>(cur)};
        if (cyclic_canonical(w) == w) out.push_back(w);
    };
    std::function<void(int)> rec = [&](int remaining) {
        emit();
        if (remaining == 0) return;
        for (Letter x : order) {
            if (!cur.empty() && cur.back() == inv(x)) continue;
            cur.push_back(x);
            rec(remaining - 1);
            cur.pop_back();
        }
    };
    rec(max_len);
    std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return letters_less(a.letters, b.letters);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<AtoroidalWitness> atoroidal_scan(const Endomorphism& phi, int k_max, int d_max,
                                               int len_max) {
    auto words = canonical_cyclic_words(phi.alphabet, len_max);
    for (const Word& g : words) {
        if (g.empty()) continue;
        Word iter = g;
        for (int k = 1; k <= k_max; ++k) {
            iter = apply_endo(phi, iter);
            Word core = cyclic_rotation_canonical(iter);
            for (int d = 1; d <= d_max; ++d) {
                if (core.size() != g.size() * static_cast<std::size_t>(d)) continue;
                // g^d is already cyclically reduced (g cyclically reduced, nontrivial)
                std::vector<Letter> rep;
                for (int t = 0; t < d; ++t)
                    rep.insert(rep.end(), g.letters.begin(), g.letters.end());
                // conjugacy of cyclically reduced words is rotation equality
                if (cyclic_rotation_canonical(Word(rep)) == core)
                    return AtoroidalWitness{g, k, d, d >= 2};
            }
        }
    }
    return std::nullopt;
}

namespace {

struct CandidateTrace {
    Word word;
    bool cyclic;
    std::vector<double> coned;  // 0..2*m_max
    std::vector<EdgePath> iterates;
};

}  // namespace

FlareCertificate flare_certificate(const GraphMap& f, const GateStructure& gates,
                                   const Constants& constants, const ParabolicFamily& family,
                                   const RealizedFamily& fam, double lambda_flare, int m_max,
                                   int max_len, int fresh_samples, unsigned seed) {
    if (f.g.alphabet.rank < 2) throw group_is_z();
    if (!constants.critical_defined)
        throw no_critical_constant("lambda^k/c_tr <= 1 at every tested power");

    FlareCertificate cert;
    cert.lambda_flare = lambda_flare;
    cert.max_word_length = max_len;
    cert.note = "bounded-sample evidence, not a proof of relative hyperbolicity";

    auto coned = [&](const EdgePath& p) { return coned_length(p, f.g, fam); };

    auto trace_of = [&](const Word& w, bool cyclic) {
        CandidateTrace t{w, cyclic, {}, {}};
        EdgePath rho = loop_path(f.g, w);
        if (!cyclic) {
            // plain segment: realize the reduced word as a path, ends coned
            rho.clear();
            for (Letter x : w.letters) {
                const EdgePath& m = f.g.marking[std::abs(x) - 1];
                EdgePath piece = x > 0 ? m : reverse_path(m);
                rho.insert(rho.end(), piece.begin(), piece.end());
            }
            rho = tighten(rho);
        }
        int last_illegal = -1;
        for (int n = 0; n <= 2 * m_max; ++n) {
            int illegal = cyclic ? cyclic_illegal_count(rho, f.g, gates)
                                 : illegal_count(rho, f.g, gates);
            if (last_illegal >= 0 && illegal > last_illegal)
                throw error("illegal turn count increased along a flare trace");
            last_illegal = illegal;
            t.coned.push_back(rho.empty() ? 0.0 : coned(rho));
            t.iterates.push_back(rho);
            rho = cyclic ? tighten_cyclic(f.image_of_path(rho)) : f.image_of_path(rho);
        }
        return t;
    };

    std::vector<CandidateTrace> traces;
    for (const Word& w : canonical_cyclic_words(f.g.alphabet, max_len)) {
        if (w.empty()) continue;
        if (!family.trivial() && conjugate_into_family(w, family)) continue;  // elliptic
        traces.push_back(trace_of(w, true));
    }
    int plain_cap = std::min(max_len, 6);
    for (const Word& w : canonical_cyclic_words(f.g.alphabet, plain_cap)) {
        if (w.empty()) continue;
        if (!family.trivial() && conjugate_into_family(w, family)) continue;
        traces.push_back(trace_of(w, false));
    }
    cert.candidate_count = static_cast<int>(traces.size());

    int found_m = 0;
    for (int M = 1; M <= m_max && !found_m; ++M) {
        bool all_ok = true;
        for (const auto& t : traces) {
            double lhs = lambda_flare * t.coned[M];
            double rhs = std::max(t.coned[0], t.coned[2 * M]);
            if (lhs > rhs + 1e-9) {
                all_ok = false;
                break;
            }
        }
        if (all_ok) found_m = M;
    }
    cert.M = found_m;
    cert.valid = found_m > 0;

    int report_m = found_m > 0 ? found_m : m_max;
    int m_bound = std::max(1, constants.m_nielsen);
    for (const auto& t : traces) {
        FlareCandidate c;
        c.word = t.word;
        c.cyclic = t.cyclic;
        c.l0 = t.coned[0];
        c.lM = t.coned[report_m];
        c.l2M = t.coned[2 * report_m];
        c.satisfied = lambda_flare * c.lM <= std::max(c.l0, c.l2M) + 1e-9;
        const EdgePath& at_m = t.iterates[report_m];
        if (!at_m.empty()) {
            try {
                c.leg = leg_fraction(at_m, f, gates, constants,
                                     [&](const EdgePath& p) { return coned_length(p, f.g, fam); });
            } catch (const zero_length&) {
                c.leg = 0;
            }
            int illegal = illegal_count(at_m, f.g, gates);
            if (c.leg > 0)
                c.proof_case = 1;
            else if (illegal < m_bound)
                c.proof_case = 2;
            else
                c.proof_case = 3;
        } else {
            c.proof_case = 4;
        }
        cert.case_counts[c.proof_case]++;
        if (!c.satisfied) cert.failures.push_back(c);
    }

    // fresh random samples at the certified M
    if (cert.valid && fresh_samples > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> ldist(1, max_len);
        std::uniform_int_distribution<int> gen(1, f.g.alphabet.rank);
        std::uniform_int_distribution<int> sign(0, 1);
        int done = 0;
        while (done < fresh_samples) {
            int len = ldist(rng);
            std::vector<Letter> raw;
            while (static_cast<int>(raw.size()) < len) {
                Letter x = gen(rng) * (sign(rng) ? 1 : -1);
                if (!raw.empty() && raw.back() == inv(x)) continue;
                raw.push_back(x);
            }
            Word w = cyclic_canonical(Word(std::move(raw)));
            if (w.empty()) continue;
            if (!family.trivial() && conjugate_into_family(w, family)) continue;
            ++done;
            auto t = trace_of(w, true);
            double lhs = lambda_flare * t.coned[cert.M];
            double rhs = std::max(t.coned[0], t.coned[2 * cert.M]);
            if (lhs > rhs + 1e-9) cert.fresh_violations++;
        }
        cert.fresh_samples = done;
    }
    return cert;
}

}  // namespace tt
