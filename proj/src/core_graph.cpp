#include "tt/core_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace tt {

int CoreGraph::add_vertex() {
    adj.emplace_back(2 * num_labels + 1, -1);
    return num_vertices() - 1;
}

void CoreGraph::set_arrow(int u, int lab, int v) {
    adj[u][lab + num_labels] = v;
    adj[v][-lab + num_labels] = u;
}

int CoreGraph::walk(int from, const std::vector<Letter>& w) const {
    int v = from;
    for (Letter x : w) {
        v = step(v, x);
        if (v < 0) return -1;
    }
    return v;
}

bool CoreGraph::loops_at_base(const Word& w) const { return walk(base, w.letters) == base; }

bool CoreGraph::reads_cyclic_word(const Word& cyc) const {
    for (int v = 0; v < num_vertices(); ++v)
        if (walk(v, cyc.letters) == v) return true;
    return false;
}

int CoreGraph::degree(int v) const {
    int d = 0;
    for (int lab = -num_labels; lab <= num_labels; ++lab)
        if (lab != 0 && step(v, lab) >= 0) ++d;
    return d;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

// multi-graph before folding: arrows as (u, lab, v)
struct RawArrow {
    int u, lab, v;
};

CoreGraph fold(int num_labels, int nv, std::vector<RawArrow> arrows, int base) {
    UnionFind uf(nv);
    bool changed = true;
    while (changed) {
        changed = false;
        // group arrows by (source class, label) and merge targets
        std::vector<RawArrow> canon;
        canon.reserve(arrows.size());
        for (const auto& a : arrows) {
            RawArrow c{uf.find(a.u), a.lab, uf.find(a.v)};
            if (c.lab < 0) c = RawArrow{c.v, -c.lab, c.u};
            canon.push_back(c);
        }
        std::sort(canon.begin(), canon.end(), [](const RawArrow& x, const RawArrow& y) {
            return std::tie(x.u, x.lab, x.v) < std::tie(y.u, y.lab, y.v);
        });
        canon.erase(std::unique(canon.begin(), canon.end(),
                                [](const RawArrow& x, const RawArrow& y) {
                                    return std::tie(x.u, x.lab, x.v) == std::tie(y.u, y.lab, y.v);
                                }),
                    canon.end());
        for (std::size_t i = 0; i + 1 < canon.size(); ++i) {
            if (canon[i].u == canon[i + 1].u && canon[i].lab == canon[i + 1].lab) {
                if (uf.unite(canon[i].v, canon[i + 1].v)) changed = true;
            }
        }
        // fold at target side as well
        std::sort(canon.begin(), canon.end(), [](const RawArrow& x, const RawArrow& y) {
            return std::tie(x.v, x.lab, x.u) < std::tie(y.v, y.lab, y.u);
        });
        for (std::size_t i = 0; i + 1 < canon.size(); ++i) {
            if (canon[i].v == canon[i + 1].v && canon[i].lab == canon[i + 1].lab) {
                if (uf.unite(canon[i].u, canon[i + 1].u)) changed = true;
            }
        }
        arrows = std::move(canon);
    }
    std::vector<int> id(nv, -1);
    CoreGraph g;
    g.num_labels = num_labels;
    auto get = [&](int x) {
        x = uf.find(x);
        if (id[x] < 0) id[x] = g.add_vertex();
        return id[x];
    };
    int b = get(base);
    for (const auto& a : arrows) g.set_arrow(get(a.u), a.lab, get(a.v));
    g.base = b;
    return g;
}

}  // namespace

CoreGraph stallings_core(int num_labels, const std::vector<Word>& generators) {
    std::vector<Word> gens;
    for (const Word& w : generators)
        if (!w.empty()) gens.push_back(w);
    if (gens.empty()) throw empty_generator_set();

    int nv = 1;
    std::vector<RawArrow> arrows;
    for (const Word& w : gens) {
        int prev = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            int next = (i + 1 == w.size()) ? 0 : nv++;
            arrows.push_back({prev, w.letters[i], next});
            prev = next;
        }
    }
    return fold(num_labels, nv, std::move(arrows), 0);
}

FreeCore basepoint_free(const CoreGraph& based) {
    CoreGraph g = based;
    Word tail;
    std::vector<bool> dead(g.num_vertices(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (dead[v]) continue;
            int deg = 0, lab = 0;
            for (int l = -g.num_labels; l <= g.num_labels; ++l) {
                if (l != 0 && g.step(v, l) >= 0) {
                    ++deg;
                    lab = l;
                }
            }
            if (deg == 1) {
                int u = g.step(v, lab);
                if (v == g.base) {
                    tail = concat(tail, Word({lab}));
                    g.base = u;
                }
                g.adj[u][-lab + g.num_labels] = -1;
                g.adj[v][lab + g.num_labels] = -1;
                dead[v] = true;
                changed = true;
            }
        }
    }
    // compact
    std::vector<int> id(g.num_vertices(), -1);
    CoreGraph out;
    out.num_labels = g.num_labels;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!dead[v]) id[v] = out.add_vertex();
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (dead[v]) continue;
        for (int l = 1; l <= g.num_labels; ++l) {
            int u = g.step(v, l);
            if (u >= 0) out.set_arrow(id[v], l, id[u]);
        }
    }
    out.base = id[g.base];
    return FreeCore{std::move(out), std::move(tail)};
}

std::vector<std::vector<int>> immersions(const CoreGraph& domain, const CoreGraph& target) {
    std::vector<std::vector<int>> found;
    if (domain.num_vertices() == 0) return found;
    for (int start = 0; start < target.num_vertices(); ++start) {
        std::vector<int> img(domain.num_vertices(), -1);
        img[0] = start;
        std::deque<int> q{0};
        bool ok = true;
        while (ok && !q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int l = -domain.num_labels; l <= domain.num_labels && ok; ++l) {
                if (l == 0) continue;
                int u = domain.step(v, l);
                if (u < 0) continue;
                int tu = target.step(img[v], l);
                if (tu < 0) {
                    ok = false;
                } else if (img[u] < 0) {
                    img[u] = tu;
                    q.push_back(u);
                } else if (img[u] != tu) {
                    ok = false;
                }
            }
        }
        // folded target makes every label-preserving morphism locally injective
        if (ok && std::none_of(img.begin(), img.end(), [](int x) { return x < 0; }))
            found.push_back(std::move(img));
    }
    return found;
}

namespace {

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters < b.letters;
}

// shortest word from `from` to `to` in a core graph (BFS over labels in order)
Word core_path_word(const CoreGraph& g, int from, int to) {
    if (from == to) return Word{};
    std::vector<int> prev_v(g.num_vertices(), -1), prev_l(g.num_vertices(), 0);
    std::deque<int> q{from};
    std::vector<bool> seen(g.num_vertices(), false);
    seen[from] = true;
    std::vector<int> order;
    for (int i = 1; i <= g.num_labels; ++i) {
        order.push_back(i);
        order.push_back(-i);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int l : order) {
            int u = g.step(v, l);
            if (u < 0 || seen[u]) continue;
            seen[u] = true;
            prev_v[u] = v;
            prev_l[u] = l;
            if (u == to) {
                std::vector<Letter> w;
                for (int x = to; x != from; x = prev_v[x]) w.push_back(prev_l[x]);
                std::reverse(w.begin(), w.end());
                return Word(std::move(w));
            }
            q.push_back(u);
        }
    }
    throw error("core graph not connected");
}

}  // namespace

std::optional<Word> subgroup_conjugate_into(int num_labels, const std::vector<Word>& gens_p,
                                            const std::vector<Word>& gens_q) {
    CoreGraph p = stallings_core(num_labels, gens_p);
    CoreGraph q = stallings_core(num_labels, gens_q);
    FreeCore pf = basepoint_free(p);
    FreeCore qf = basepoint_free(q);

    std::optional<Word> best;
    for (const auto& img : immersions(pf.core, qf.core)) {
        // g = tail_p * sigma^-1 * tail_q^-1 where sigma runs from Q's attachment
        // vertex to the image of P's attachment vertex inside Q's free core
        Word sigma = core_path_word(qf.core, qf.core.base, img[pf.core.base]);
        Word g = concat(concat(pf.tail, inverse(sigma)), inverse(qf.tail));
        // validate directly: every generator of P, conjugated by g^-1, lies in Q
        bool ok = true;
        for (const Word& w : gens_p) {
            Word c = concat(concat(inverse(g), w), g);
            if (q.walk(q.base, c.letters) != q.base) {
                ok = false;
                break;
            }
        }
        if (ok && (!best || word_less(g, *best))) best = g;
    }
    return best;
}

std::optional<OverlapWitness> malnormal_overlap(const CoreGraph& p_free, const CoreGraph& q_free,
                                                bool same_subgroup) {
    int L = p_free.num_labels;
    int np = p_free.num_vertices(), nq = q_free.num_vertices();
    if (np == 0 || nq == 0) return std::nullopt;
    // fiber product: vertices (u,v), arrows on shared labels
    auto id = [&](int u, int v) { return u * nq + v; };
    // a component carries a nontrivial loop iff #edges >= #vertices within it
    std::vector<int> comp(np * nq, -1);
    int ncomp = 0;
    for (int s = 0; s < np * nq; ++s) {
        if (comp[s] >= 0) continue;
        std::deque<int> stack{s};
        comp[s] = ncomp;
        std::vector<int> members{s};
        long long edges2 = 0;  // arrows counted from both sides
        while (!stack.empty()) {
            int x = stack.front();
            stack.pop_front();
            int u = x / nq, v = x % nq;
            for (int l = -L; l <= L; ++l) {
                if (l == 0) continue;
                int u2 = p_free.step(u, l), v2 = q_free.step(v, l);
                if (u2 < 0 || v2 < 0) continue;
                ++edges2;
                int y = id(u2, v2);
                if (comp[y] < 0) {
                    comp[y] = ncomp;
                    members.push_back(y);
                    stack.push_back(y);
                }
            }
        }
        bool diagonal = false;
        if (same_subgroup)
            for (int m : members)
                if (m / nq == m % nq) diagonal = true;
        long long edges = edges2 / 2;
        if (!diagonal && edges >= static_cast<long long>(members.size())) {
            // find an explicit loop: walk a spanning tree, take a chord
            int root = members.front();
            std::vector<Word> path_to(np * nq);
            std::vector<bool> seen(np * nq, false);
            seen[root] = true;
            std::deque<int> q2{root};
            std::optional<OverlapWitness> witness;
            while (!q2.empty() && !witness) {
                int x = q2.front();
                q2.pop_front();
                int u = x / nq, v = x % nq;
                for (int l = -L; l <= L && !witness; ++l) {
                    if (l == 0) continue;
                    int u2 = p_free.step(u, l), v2 = q_free.step(v, l);
                    if (u2 < 0 || v2 < 0) continue;
                    int y = id(u2, v2);
                    if (!seen[y]) {
                        seen[y] = true;
                        path_to[y] = concat(path_to[x], Word({l}));
                        q2.push_back(y);
                    } else {
                        Word loop = concat(concat(path_to[x], Word({l})), inverse(path_to[y]));
                        if (!loop.empty()) witness = OverlapWitness{loop};
                    }
                }
            }
            if (witness) return witness;
        }
        ++ncomp;
    }
    return std::nullopt;
}

}  // namespace tt
