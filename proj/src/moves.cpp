#include "tt/moves.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tt {

namespace {

EdgePath image_of_dir_raw(const GraphMap& f, int d) {
    return d > 0 ? f.eimage[d - 1] : reverse_path(f.eimage[-d - 1]);
}

// Rebuild helper: applies an edge substitution (old signed edge -> new path),
// a vertex remap, and compaction to every stored path.
struct Rewrite {
    std::map<int, EdgePath> esub;   // for positive old edges; negatives derived
    std::vector<int> vmap;          // old vertex -> new vertex (-1 = deleted)

    EdgePath apply(const EdgePath& p) const {
        EdgePath out;
        for (int d : p) {
            auto it = esub.find(std::abs(d));
            EdgePath piece;
            if (it == esub.end())
                piece = {d};
            else
                piece = d > 0 ? it->second : reverse_path(it->second);
            for (int x : piece) {
                if (!out.empty() && out.back() == -x)
                    out.pop_back();
                else
                    out.push_back(x);
            }
        }
        return out;
    }
};

}  // namespace

GraphMap subdivide(const GraphMap& f, int e, int prefix_len) {
    const EdgePath& im = f.eimage[e - 1];
    int n = static_cast<int>(im.size());
    if (prefix_len <= 0 || prefix_len >= n)
        throw not_a_vertex_image("split position must be interior to the image path");

    GraphMap g = f;
    int w = g.g.num_vertices();
    g.g.verts.push_back({});
    int e2 = g.g.num_edges() + 1;

    int old_term = g.g.eterm[e - 1];
    g.g.eterm[e - 1] = w;
    g.g.eorig.push_back(w);
    g.g.eterm.push_back(old_term);
    double half = g.g.elen[e - 1] / 2;
    g.g.elen[e - 1] = half;
    g.g.elen.push_back(half);
    g.g.eword.push_back(Word{});  // first half keeps the word, second reads nothing

    EdgePath pre(im.begin(), im.begin() + prefix_len);
    EdgePath suf(im.begin() + prefix_len, im.end());
    int w_image = f.g.terminus(pre.back());

    Rewrite rw;
    rw.esub[e] = {e, e2};
    rw.vmap.resize(g.g.num_vertices());
    for (int i = 0; i < g.g.num_vertices(); ++i) rw.vmap[i] = i;

    g.eimage[e - 1] = rw.apply(pre);
    g.eimage.push_back(rw.apply(suf));
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e || x == e2) continue;
        g.eimage[x - 1] = rw.apply(g.eimage[x - 1]);
    }
    for (auto& loop : g.g.marking) loop = rw.apply(loop);
    g.vimage.push_back(w_image);
    return g;
}

SubdivideResult subdivide_dir(const GraphMap& f, int d, int prefix_len) {
    int e = std::abs(d);
    int n = static_cast<int>(f.eimage[e - 1].size());
    if (d > 0) {
        GraphMap g = subdivide(f, e, prefix_len);
        return {std::move(g), e};
    }
    GraphMap g = subdivide(f, e, n - prefix_len);
    int e2 = g.g.num_edges();
    return {std::move(g), -e2};
}

namespace {

// Identify the edges under directions d1, d2 (same origin, equal images).
GraphMap identify_equal_dirs(const GraphMap& f, int d1, int d2) {
    if (std::abs(d1) == std::abs(d2))
        throw illegal_fold_request("cannot identify an edge with its own reverse");
    if (image_of_dir_raw(f, d1) != image_of_dir_raw(f, d2))
        throw error("internal: identify requires equal images");
    int v = f.g.origin(d1);
    if (f.g.origin(d2) != v) throw error("internal: identify requires a common origin");

    int t1 = f.g.terminus(d1), t2 = f.g.terminus(d2);
    int e_del = std::abs(d2);

    GraphMap g = f;
    bool merge = t1 != t2;
    int z = t1, u = t2;
    bool jump_via_d1_first = false;  // pi = [-d1, d2] runs t1 -> v -> t2
    if (merge) {
        // survivor preference: base, then the turn vertex, then min index
        auto better = [&](int cand, int other) {
            if (cand == g.g.base) return true;
            if (other == g.g.base) return false;
            if (cand == v) return true;
            if (other == v) return false;
            return cand < other;
        };
        if (better(t2, t1)) {
            z = t2;
            u = t1;
            jump_via_d1_first = false;
        } else {
            z = t1;
            u = t2;
            jump_via_d1_first = true;
        }
        Word wpi = jump_via_d1_first
                       ? concat(inverse(g.g.word_of_dir(d1)), g.g.word_of_dir(d2))
                       : concat(inverse(g.g.word_of_dir(d2)), g.g.word_of_dir(d1));
        for (int x = 1; x <= g.g.num_edges(); ++x) {
            if (x == e_del) continue;
            Word wx = g.g.eword[x - 1];
            if (g.g.eorig[x - 1] == u) wx = concat(wpi, wx);
            if (g.g.eterm[x - 1] == u) wx = concat(wx, inverse(wpi));
            g.g.eword[x - 1] = wx;
        }
        for (int x = 1; x <= g.g.num_edges(); ++x) {
            if (g.g.eorig[x - 1] == u) g.g.eorig[x - 1] = z;
            if (g.g.eterm[x - 1] == u) g.g.eterm[x - 1] = z;
        }
    } else {
        // identifying two edges with the same endpoints kills a loop
        g.g.marking_ok = false;
    }

    // substitution d2 -> d1 as directions, then compaction
    Rewrite rw;
    rw.esub[e_del] = {d2 > 0 ? d1 : -d1};

    int old_nv = g.g.num_vertices();
    rw.vmap.assign(old_nv, -1);
    int next = 0;
    for (int i = 0; i < old_nv; ++i) {
        if (merge && i == u) continue;
        rw.vmap[i] = next++;
    }
    if (merge) rw.vmap[u] = rw.vmap[z];

    MarkedGraph ng;
    ng.alphabet = g.g.alphabet;
    ng.marking_ok = g.g.marking_ok;
    ng.verts.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (!(merge && i == u)) ng.verts[rw.vmap[i]] = g.g.verts[i];
    ng.base = rw.vmap[g.g.base];

    std::vector<int> emap(g.g.num_edges() + 1, 0);
    int ne = 0;
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e_del) continue;
        emap[x] = ++ne;
        ng.eorig.push_back(rw.vmap[g.g.eorig[x - 1]]);
        ng.eterm.push_back(rw.vmap[g.g.eterm[x - 1]]);
        ng.elen.push_back(g.g.elen[x - 1]);
        ng.eword.push_back(g.g.eword[x - 1]);
    }
    auto remap_path = [&](const EdgePath& p) {
        EdgePath q = rw.apply(p);
        for (int& x : q) x = x > 0 ? emap[x] : -emap[-x];
        return q;
    };
    for (const auto& loop : g.g.marking) ng.marking.push_back(remap_path(loop));

    GraphMap out;
    out.g = std::move(ng);
    out.phi = g.phi;
    out.vimage.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (!(merge && i == u)) out.vimage[rw.vmap[i]] = rw.vmap[g.vimage[i]];
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e_del) continue;
        out.eimage.push_back(remap_path(g.eimage[x - 1]));
    }
    return out;
}

int common_prefix_len(const EdgePath& a, const EdgePath& b) {
    std::size_t m = 0;
    while (m < a.size() && m < b.size() && a[m] == b[m]) ++m;
    return static_cast<int>(m);
}

}  // namespace

GraphMap fold(const GraphMap& f, const Turn& turn) {
    int d1 = turn.d1, d2 = turn.d2;
    if (d1 == d2) throw illegal_fold_request("degenerate turn");
    if (f.g.origin(d1) != f.g.origin(d2)) throw illegal_fold_request("not a turn");
    EdgePath im1 = image_of_dir_raw(f, d1);
    EdgePath im2 = image_of_dir_raw(f, d2);
    int m = common_prefix_len(im1, im2);
    if (m == 0) throw illegal_fold_request("images share no initial segment");

    GraphMap g = f;
    if (m < static_cast<int>(im1.size())) {
        auto r = subdivide_dir(g, d1, m);
        g = std::move(r.map);
        d1 = r.half_dir;
        // d2 is unaffected by index reuse in subdivide
        im2 = image_of_dir_raw(g, d2);
        im1 = image_of_dir_raw(g, d1);
        m = common_prefix_len(im1, im2);
    }
    if (m < static_cast<int>(im2.size())) {
        auto r = subdivide_dir(g, d2, m);
        g = std::move(r.map);
        d2 = r.half_dir;
    }
    if (image_of_dir_raw(g, d1) != image_of_dir_raw(g, d2))
        throw error("internal: fold halves disagree after subdivision");
    GraphMap folded = identify_equal_dirs(g, d1, d2);
    if (!folded.g.marking_ok)
        return folded;  // rank collapsed; caller decides how to report
    return collapse_pretrivial(folded);
}

namespace {

// edges from which no transition-digraph cycle is reachable
std::vector<char> acyclic_tail_edges(const GraphMap& f) {
    int m = f.g.num_edges();
    std::vector<std::set<int>> succ(m + 1);
    for (int e = 1; e <= m; ++e)
        for (int d : f.eimage[e - 1]) succ[e].insert(std::abs(d));
    // an edge is "cyclic" if it reaches itself through >= 1 step
    std::vector<char> reaches_cycle(m + 1, 0);
    for (int e = 1; e <= m; ++e) {
        // BFS from e
        std::set<int> seen;
        std::vector<int> stack(succ[e].begin(), succ[e].end());
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (x == e) {
                reaches_cycle[e] = 1;  // cycle through e itself
            }
            if (seen.count(x)) continue;
            seen.insert(x);
            for (int y : succ[x]) stack.push_back(y);
        }
        if (!reaches_cycle[e]) {
            // reaches a cycle elsewhere?
            for (int x : seen) {
                std::set<int> seen2;
                std::vector<int> stack2(succ[x].begin(), succ[x].end());
                bool self = false;
                while (!stack2.empty() && !self) {
                    int y = stack2.back();
                    stack2.pop_back();
                    if (y == x) self = true;
                    if (seen2.count(y)) continue;
                    seen2.insert(y);
                    for (int z : succ[y]) stack2.push_back(z);
                }
                if (self) {
                    reaches_cycle[e] = 1;
                    break;
                }
            }
        }
    }
    std::vector<char> tail(m + 1, 0);
    for (int e = 1; e <= m; ++e) tail[e] = !reaches_cycle[e];
    return tail;
}

GraphMap collapse_one_edge(const GraphMap& f, int e);

}  // namespace

GraphMap collapse_pretrivial(const GraphMap& f) {
    GraphMap g = f;
    while (true) {
        int m = g.g.num_edges();
        std::vector<char> in_set(m + 1, 0);
        {
            auto tail = acyclic_tail_edges(g);
            for (int e = 1; e <= m; ++e) in_set[e] = tail[e];
        }
        // restrict to tree components, re-imposing invariance
        bool changed = true;
        while (changed) {
            changed = false;
            // components of the subgraph on edges in_set
            std::vector<int> comp(g.g.num_vertices(), -1);
            int nc = 0;
            for (int s = 0; s < g.g.num_vertices(); ++s) {
                if (comp[s] >= 0) continue;
                comp[s] = nc;
                std::vector<int> stack{s};
                while (!stack.empty()) {
                    int x = stack.back();
                    stack.pop_back();
                    for (int d : g.g.directions_at(x)) {
                        if (!in_set[std::abs(d)]) continue;
                        int y = g.g.terminus(d);
                        if (comp[y] < 0) {
                            comp[y] = nc;
                            stack.push_back(y);
                        }
                    }
                }
                ++nc;
            }
            std::vector<int> verts_in(nc, 0), edges_in(nc, 0);
            std::vector<char> vertex_used(g.g.num_vertices(), 0);
            for (int e = 1; e <= m; ++e) {
                if (!in_set[e]) continue;
                edges_in[comp[g.g.eorig[e - 1]]]++;
                vertex_used[g.g.eorig[e - 1]] = vertex_used[g.g.eterm[e - 1]] = 1;
            }
            for (int v = 0; v < g.g.num_vertices(); ++v)
                if (vertex_used[v]) verts_in[comp[v]]++;
            for (int e = 1; e <= m; ++e) {
                if (!in_set[e]) continue;
                if (edges_in[comp[g.g.eorig[e - 1]]] >= verts_in[comp[g.g.eorig[e - 1]]]) {
                    in_set[e] = 0;  // component has a cycle
                    changed = true;
                }
            }
            // invariance: image must stay inside the set
            for (int e = 1; e <= m; ++e) {
                if (!in_set[e]) continue;
                for (int d : g.eimage[e - 1])
                    if (!in_set[std::abs(d)]) {
                        in_set[e] = 0;
                        changed = true;
                        break;
                    }
            }
        }
        int pick = 0;
        for (int e = 1; e <= m; ++e)
            if (in_set[e]) pick = e;
        if (!pick) return g;
        g = collapse_one_edge(g, pick);
    }
}

namespace {

GraphMap collapse_one_edge(const GraphMap& f, int e) {
    int o = f.g.eorig[e - 1], t = f.g.eterm[e - 1];
    if (o == t) throw error("internal: cannot collapse a loop");
    GraphMap g = f;
    // survivor preference: base, then min index
    int z = o, u = t;
    if (t == g.g.base || (o != g.g.base && t < o)) {
        z = t;
        u = o;
    }
    int d = (g.g.eorig[e - 1] == z) ? e : -e;  // z -> u
    Word wpi = g.g.word_of_dir(d);
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e) continue;
        Word wx = g.g.eword[x - 1];
        if (g.g.eorig[x - 1] == u) wx = concat(wpi, wx);
        if (g.g.eterm[x - 1] == u) wx = concat(wx, inverse(wpi));
        g.g.eword[x - 1] = wx;
    }
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (g.g.eorig[x - 1] == u) g.g.eorig[x - 1] = z;
        if (g.g.eterm[x - 1] == u) g.g.eterm[x - 1] = z;
    }

    Rewrite rw;
    rw.esub[e] = {};
    int old_nv = g.g.num_vertices();
    rw.vmap.assign(old_nv, -1);
    int next = 0;
    for (int i = 0; i < old_nv; ++i) {
        if (i == u) continue;
        rw.vmap[i] = next++;
    }
    rw.vmap[u] = rw.vmap[z];

    MarkedGraph ng;
    ng.alphabet = g.g.alphabet;
    ng.marking_ok = g.g.marking_ok;
    ng.verts.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != u) ng.verts[rw.vmap[i]] = g.g.verts[i];
    ng.base = rw.vmap[g.g.base];

    std::vector<int> emap(g.g.num_edges() + 1, 0);
    int ne = 0;
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e) continue;
        emap[x] = ++ne;
        ng.eorig.push_back(rw.vmap[g.g.eorig[x - 1]]);
        ng.eterm.push_back(rw.vmap[g.g.eterm[x - 1]]);
        ng.elen.push_back(g.g.elen[x - 1]);
        ng.eword.push_back(g.g.eword[x - 1]);
    }
    auto remap_path = [&](const EdgePath& p) {
        EdgePath q = rw.apply(p);
        for (int& x : q) x = x > 0 ? emap[x] : -emap[-x];
        return q;
    };
    for (const auto& loop : g.g.marking) ng.marking.push_back(remap_path(loop));

    GraphMap out;
    out.g = std::move(ng);
    out.phi = g.phi;
    out.vimage.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != u) out.vimage[rw.vmap[i]] = rw.vmap[g.vimage[i]];
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e) continue;
        out.eimage.push_back(remap_path(g.eimage[x - 1]));
    }
    return out;
}

// conjugates every edge word so that word(loop at the new base) is preserved
void rebase(GraphMap& g, int new_base) {
    if (new_base == g.g.base) return;
    EdgePath pi = g.g.connect(g.g.base, new_base);
    Word c = g.g.word_of_path(pi);
    for (Word& w : g.g.eword) w = concat(concat(inverse(c), w), c);
    EdgePath rev = reverse_path(pi);
    for (EdgePath& loop : g.g.marking) {
        EdgePath nl = rev;
        nl.insert(nl.end(), loop.begin(), loop.end());
        nl.insert(nl.end(), pi.begin(), pi.end());
        loop = tighten(nl);
    }
    g.g.base = new_base;
}

}  // namespace

GraphMap remove_valence_one(const GraphMap& f, int v) {
    if (!f.g.verts[v].free) throw not_valence_one("non-free vertices are never removed");
    auto dirs = f.g.directions_at(v);
    if (dirs.size() != 1) throw not_valence_one("vertex has valence " + std::to_string(dirs.size()));
    GraphMap g = f;
    int d = dirs[0];  // v -> u
    int u = g.g.terminus(d);
    if (v == g.g.base) rebase(g, u);
    int e = std::abs(d);

    Rewrite rw;
    rw.esub[e] = {};
    int old_nv = g.g.num_vertices();
    rw.vmap.assign(old_nv, -1);
    int next = 0;
    for (int i = 0; i < old_nv; ++i) {
        if (i == v) continue;
        rw.vmap[i] = next++;
    }
    rw.vmap[v] = rw.vmap[u];  // image retraction target

    MarkedGraph ng;
    ng.alphabet = g.g.alphabet;
    ng.marking_ok = g.g.marking_ok;
    ng.verts.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != v) ng.verts[rw.vmap[i]] = g.g.verts[i];
    ng.base = rw.vmap[g.g.base];

    std::vector<int> emap(g.g.num_edges() + 1, 0);
    int ne = 0;
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e) continue;
        emap[x] = ++ne;
        ng.eorig.push_back(rw.vmap[g.g.eorig[x - 1]]);
        ng.eterm.push_back(rw.vmap[g.g.eterm[x - 1]]);
        ng.elen.push_back(g.g.elen[x - 1]);
        ng.eword.push_back(g.g.eword[x - 1]);
    }
    auto remap_path = [&](const EdgePath& p) {
        EdgePath q = rw.apply(p);
        for (int& x : q) x = x > 0 ? emap[x] : -emap[-x];
        return q;
    };
    for (const auto& loop : g.g.marking) ng.marking.push_back(remap_path(loop));

    GraphMap out;
    out.g = std::move(ng);
    out.phi = g.phi;
    out.vimage.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != v) out.vimage[rw.vmap[i]] = rw.vmap[g.vimage[i]];
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e) continue;
        out.eimage.push_back(remap_path(g.eimage[x - 1]));
    }
    return collapse_pretrivial(out);
}

GraphMap remove_valence_two(const GraphMap& f, int v) {
    if (!f.g.verts[v].free) throw not_valence_two("non-free vertex");
    auto dirs = f.g.directions_at(v);
    if (dirs.size() != 2) throw not_valence_two("vertex has valence " + std::to_string(dirs.size()));
    if (std::abs(dirs[0]) == std::abs(dirs[1]))
        throw not_valence_two("loop vertex cannot be straightened");

    GraphMap g = f;
    if (v == g.g.base) {
        rebase(g, g.g.terminus(dirs[0]));
        // rebasing does not change indices or incidences
    }
    // collapse the direction along the edge with the larger metric entry
    int a = dirs[0], b = dirs[1];
    double la = g.g.length(a), lb = g.g.length(b);
    int d_col, d_keep;
    if (la > lb || (la == lb && std::abs(a) < std::abs(b))) {
        d_col = a;
        d_keep = b;
    } else {
        d_col = b;
        d_keep = a;
    }
    int y = g.g.terminus(d_col);

    // H1 first: image paths meeting v are pushed off along d_col
    auto fix_path = [&](EdgePath p, int from_v, int to_v) {
        // from_v/to_v: endpoints of the underlying domain path, before the move
        if (from_v == v) {
            EdgePath q{-d_col};
            q.insert(q.end(), p.begin(), p.end());
            p = tighten(q);
        }
        if (to_v == v) {
            p.push_back(d_col);
            p = tighten(p);
        }
        return p;
    };
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        int fo = g.vimage[g.g.eorig[x - 1]], ft = g.vimage[g.g.eterm[x - 1]];
        g.eimage[x - 1] = fix_path(g.eimage[x - 1], fo, ft);
    }
    for (int i = 0; i < g.g.num_vertices(); ++i)
        if (g.vimage[i] == v) g.vimage[i] = y;

    // assemble the new edge e' spanning terminus(d_keep) -> terminus(d_col)
    int e_keep = std::abs(d_keep), e_col = std::abs(d_col);
    EdgePath new_image = tighten([&] {
        EdgePath p = image_of_dir_raw(g, -d_keep);
        EdgePath q = image_of_dir_raw(g, d_col);
        p.insert(p.end(), q.begin(), q.end());
        return p;
    }());
    Word new_word = concat(inverse(g.g.word_of_dir(d_keep)), g.g.word_of_dir(d_col));
    double new_len = g.g.length(d_keep) + g.g.length(d_col);
    int new_orig = g.g.terminus(d_keep), new_term = y;

    // pair substitution through v: (-d_keep, d_col) -> e'
    int old_nv = g.g.num_vertices();
    std::vector<int> vmap(old_nv, -1);
    int next = 0;
    for (int i = 0; i < old_nv; ++i) {
        if (i == v) continue;
        vmap[i] = next++;
    }

    MarkedGraph ng;
    ng.alphabet = g.g.alphabet;
    ng.marking_ok = g.g.marking_ok;
    ng.verts.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != v) ng.verts[vmap[i]] = g.g.verts[i];
    ng.base = vmap[g.g.base];

    std::vector<int> emap(g.g.num_edges() + 1, 0);
    int ne = 0;
    int eprime = 0;
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e_keep || x == e_col) {
            if (!eprime) {
                emap[x] = ++ne;
                eprime = ne;
                ng.eorig.push_back(vmap[new_orig]);
                ng.eterm.push_back(vmap[new_term]);
                ng.elen.push_back(new_len);
                ng.eword.push_back(new_word);
            }
            continue;
        }
        emap[x] = ++ne;
        ng.eorig.push_back(vmap[g.g.eorig[x - 1]]);
        ng.eterm.push_back(vmap[g.g.eterm[x - 1]]);
        ng.elen.push_back(g.g.elen[x - 1]);
        ng.eword.push_back(g.g.eword[x - 1]);
    }

    auto remap_path = [&](const EdgePath& p) {
        EdgePath q;
        for (std::size_t i = 0; i < p.size(); ++i) {
            int d = p[i];
            if (d == -d_keep) {
                // must be followed by d_col (valence two)
                if (i + 1 >= p.size() || p[i + 1] != d_col)
                    throw error("internal: dangling transit at a valence-two vertex");
                q.push_back(eprime);
                ++i;
            } else if (d == -d_col) {
                if (i + 1 >= p.size() || p[i + 1] != d_keep)
                    throw error("internal: dangling transit at a valence-two vertex");
                q.push_back(-eprime);
                ++i;
            } else if (d == d_keep || d == d_col || d == -d_keep || d == -d_col) {
                throw error("internal: unpaired edge at a valence-two vertex");
            } else {
                q.push_back(d > 0 ? emap[d] : -emap[-d]);
            }
        }
        return tighten(q);
    };
    for (const auto& loop : g.g.marking) ng.marking.push_back(remap_path(loop));

    GraphMap out;
    out.g = std::move(ng);
    out.phi = g.phi;
    out.vimage.resize(next);
    for (int i = 0; i < old_nv; ++i)
        if (i != v) out.vimage[vmap[i]] = vmap[g.vimage[i]];
    bool placed = false;
    for (int x = 1; x <= g.g.num_edges(); ++x) {
        if (x == e_keep || x == e_col) {
            if (!placed) {
                out.eimage.push_back(remap_path(new_image));
                placed = true;
            }
            continue;
        }
        out.eimage.push_back(remap_path(g.eimage[x - 1]));
    }
    return collapse_pretrivial(out);
}

namespace {

// first one-step-degenerate pair along the Df orbit of a colliding pair
std::optional<Turn> degenerate_level(const GraphMap& f, int d1, int d2, int max_iter) {
    for (int k = 0; k < max_iter; ++k) {
        int x = f.dmap(d1), y = f.dmap(d2);
        if (x == 0 || y == 0) return std::nullopt;
        if (x == y) return Turn{d1, d2};
        d1 = x;
        d2 = y;
        if (d1 == d2) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

GraphMap fix_one_gate_vertex(const GraphMap& f, int v) {
    {
        GateStructure gs = gate_structure(f);
        if (gs.gate_count(v) != 1) throw not_one_gate("vertex has >= 2 gates");
    }
    GraphMap g = f;
    int guard = 0;
    while (true) {
        if (++guard > 200) throw error("one-gate repair did not terminate");
        if (v >= g.g.num_vertices()) return g;
        GateStructure gs = gate_structure(g);
        if (gs.gate_count(v) != 1) return g;
        auto dirs = g.g.directions_at(v);
        int bound = 4 * g.g.num_edges() * g.g.num_edges() + 8;
        std::optional<Turn> target;
        for (std::size_t i = 0; i < dirs.size() && !target; ++i)
            for (std::size_t j = i + 1; j < dirs.size() && !target; ++j)
                target = degenerate_level(g, dirs[i], dirs[j], bound);
        if (!target) throw error("one-gate vertex without a foldable collision");
        GraphMap folded = fold(g, *target);
        if (!folded.g.marking_ok) return folded;  // rank collapsed; surface as-is
        g = std::move(folded);
        // the vertex may have been renumbered away; detect by revalidating
        if (v >= g.g.num_vertices()) return g;
    }
}

namespace {

struct Normalized {
    GraphMap map;
    int moves_used = 0;
    bool rank_collapsed = false;
};

Normalized normalize(GraphMap g, MoveLog& log, double tol) {
    Normalized out{std::move(g)};
    bool changed = true;
    while (changed) {
        changed = false;
        out.map = collapse_pretrivial(out.map);
        // free valence-one vertices
        for (int v = 0; v < out.map.g.num_vertices(); ++v) {
            auto dirs = out.map.g.directions_at(v);
            if (out.map.g.verts[v].free && dirs.size() == 1) {
                double before = spectral_radius_upper(transition_matrix(out.map), tol);
                out.map = remove_valence_one(out.map, v);
                double after = spectral_radius_upper(transition_matrix(out.map), tol);
                log.moves.push_back({"valence_one", "vertex " + std::to_string(v), before, tol,
                                     after, tol});
                ++out.moves_used;
                changed = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace

TrainTrackOutcome train_track_algorithm(const Endomorphism& phi, int budget, double tol) {
    return train_track_algorithm_from(rose_representative(phi), budget, tol);
}

TrainTrackOutcome train_track_algorithm_from(GraphMap f, int budget, double tol) {
    TrainTrackOutcome out{TrainTrackOutcome::Status::budget_exhausted, std::nullopt, {}, {}, {}};
    int used = 0;
    int stagnant = 0;
    double last_lambda = -1;

    while (used <= budget) {
        auto norm = normalize(std::move(f), out.log, tol);
        f = std::move(norm.map);
        used += norm.moves_used;
        if (!f.g.marking_ok) throw injectivity_anomaly("rank collapsed during normalization");
        for (int e = 1; e <= f.g.num_edges(); ++e)
            if (f.eimage[e - 1].empty())
                throw injectivity_anomaly("edge image collapsed outside a pretrivial forest");

        TransitionMatrix m = transition_matrix(f);
        IrreducibilityResult irr = is_irreducible(m);
        if (!irr.irreducible) {
            out.status = TrainTrackOutcome::Status::not_irreducible;
            out.witness = irr.witness;
            out.state = f;
            return out;
        }
        PerronData pf = pf_eigen(m, tol);
        if (pf.hi() <= 1 + 10 * tol) {
            // stretch factor 1: every edge maps to a single edge, all images legal
            f.g = assign_metric(f, pf_eigen(transpose(m), tol));
            out.status = TrainTrackOutcome::Status::success;
            out.result = TrainTrackSuccess{f, pf, out.log};
            return out;
        }
        f.g = assign_metric(f, pf_eigen(transpose(m), tol));

        // valence-two straightening (metric-guided)
        bool moved = false;
        for (int v = 0; v < f.g.num_vertices() && !moved; ++v) {
            auto dirs = f.g.directions_at(v);
            if (f.g.verts[v].free && dirs.size() == 2 && std::abs(dirs[0]) != std::abs(dirs[1])) {
                double before = pf.lambda;
                f = remove_valence_two(f, v);
                double after = spectral_radius_upper(transition_matrix(f), tol);
                out.log.moves.push_back({"valence_two", "vertex " + std::to_string(v), before,
                                         pf.radius, after, tol});
                ++used;
                moved = true;
            }
        }
        if (moved) continue;

        GateStructure gs = gate_structure(f);
        for (int v = 0; v < f.g.num_vertices() && !moved; ++v) {
            if (gs.gate_count(v) == 1) {
                double before = pf.lambda;
                f = fix_one_gate_vertex(f, v);
                if (!f.g.marking_ok)
                    throw injectivity_anomaly("rank collapsed while repairing a one-gate vertex");
                double after = spectral_radius_upper(transition_matrix(f), tol);
                out.log.moves.push_back(
                    {"fix_one_gate", "vertex " + std::to_string(v), before, pf.radius, after, tol});
                ++used;
                moved = true;
            }
        }
        if (moved) continue;

        // fold a stably illegal turn found inside an edge image
        std::optional<Turn> offender;
        int bound = 4 * f.g.num_edges() * f.g.num_edges() + 8;
        for (int e = 1; e <= f.g.num_edges() && !offender; ++e) {
            const EdgePath& im = f.eimage[e - 1];
            for (std::size_t i = 0; i + 1 < im.size() && !offender; ++i) {
                int x = -im[i], y = im[i + 1];
                if (!gs.legal_turn(x, y)) offender = degenerate_level(f, x, y, bound);
            }
        }
        if (offender) {
            double before = pf.lambda;
            GraphMap folded = fold(f, *offender);
            if (!folded.g.marking_ok)
                throw injectivity_anomaly("rank collapsed while folding an illegal turn");
            f = std::move(folded);
            double after = spectral_radius_upper(transition_matrix(f), tol);
            out.log.moves.push_back({"fold",
                                     "turn (" + std::to_string(offender->d1) + "," +
                                         std::to_string(offender->d2) + ")",
                                     before, pf.radius, after, tol});
            ++used;
            if (std::abs(after - last_lambda) <= 2 * tol) {
                if (++stagnant > 50) {
                    // keep going; the budget bounds the total work
                    stagnant = 0;
                }
            } else {
                stagnant = 0;
            }
            last_lambda = after;
            continue;
        }

        // no offending turn: verify and return
        TrainTrackCheck check = check_train_track(f);
        if (!check.ok()) throw error("internal: driver exit without train track conditions");
        out.status = TrainTrackOutcome::Status::success;
        out.result = TrainTrackSuccess{f, pf, out.log};
        return out;
    }
    out.status = TrainTrackOutcome::Status::budget_exhausted;
    out.state = f;
    return out;
}

}  // namespace tt
