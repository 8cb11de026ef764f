#include "tt/maps.hpp"

#include <algorithm>

namespace tt {

EdgePath GraphMap::image_of_path(const EdgePath& p) const {
    EdgePath out;
    for (int d : p) {
        const EdgePath& im = eimage[std::abs(d) - 1];
        if (d > 0) {
            for (int x : im) {
                if (!out.empty() && out.back() == -x)
                    out.pop_back();
                else
                    out.push_back(x);
            }
        } else {
            for (auto it = im.rbegin(); it != im.rend(); ++it) {
                int x = -*it;
                if (!out.empty() && out.back() == -x)
                    out.pop_back();
                else
                    out.push_back(x);
            }
        }
    }
    return out;
}

void GraphMap::validate() const {
    g.validate(false);
    if (static_cast<int>(vimage.size()) != g.num_vertices())
        throw error("vertex image table size mismatch");
    if (static_cast<int>(eimage.size()) != g.num_edges())
        throw error("edge image table size mismatch");
    for (int e = 1; e <= g.num_edges(); ++e) {
        const EdgePath& im = eimage[e - 1];
        if (!g.is_tight(im)) throw error("edge image must be a tight path");
        int o = vimage[g.eorig[e - 1]], t = vimage[g.eterm[e - 1]];
        if (im.empty()) {
            if (o != t) throw error("collapsed edge with distinct endpoint images");
        } else {
            if (g.origin(im.front()) != o || g.terminus(im.back()) != t)
                throw error("edge image endpoints disagree with vertex images");
        }
    }
}

bool GraphMap::marking_compatible() const {
    Word c = g.word_of_path(g.connect(g.base, vimage[g.base]));
    for (int i = 1; i <= g.alphabet.rank; ++i) {
        Word lhs = g.word_of_path(image_of_path(g.marking[i - 1]));
        Word rhs = concat(concat(c, apply_endo(phi, Word({i}))), inverse(c));
        if (lhs != rhs) return false;
    }
    return true;
}

GraphMap rose_representative(const Endomorphism& phi) {
    GraphMap f;
    f.g = rose(phi.alphabet);
    f.phi = phi;
    f.vimage = {0};
    for (int i = 1; i <= phi.alphabet.rank; ++i) {
        EdgePath im;
        for (Letter x : phi.image(i).letters) im.push_back(x);
        f.eimage.push_back(std::move(im));
    }
    f.validate();
    return f;
}

TransitionMatrix transition_matrix(const GraphMap& f) {
    int m = f.g.num_edges();
    TransitionMatrix t;
    t.a.assign(m, std::vector<std::int64_t>(m, 0));
    for (int j = 1; j <= m; ++j)
        for (int d : f.eimage[j - 1]) t.a[std::abs(d) - 1][j - 1]++;
    return t;
}

TransitionMatrix matrix_power(const TransitionMatrix& m, int k) {
    int n = m.size();
    TransitionMatrix r;
    r.a.assign(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) r.a[i][i] = 1;
    TransitionMatrix base = m;
    int e = k;
    while (e > 0) {
        auto mul = [n](const TransitionMatrix& x, const TransitionMatrix& y) {
            TransitionMatrix z;
            z.a.assign(n, std::vector<std::int64_t>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    if (!x.a[i][l]) continue;
                    for (int j = 0; j < n; ++j) z.a[i][j] += x.a[i][l] * y.a[l][j];
                }
            return z;
        };
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

TransitionMatrix transpose(const TransitionMatrix& m) {
    int n = m.size();
    TransitionMatrix t;
    t.a.assign(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.a[i][j] = m.a[j][i];
    return t;
}

namespace {

// iterative Tarjan; graph[j] lists successors of j
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& graph) {
    int n = static_cast<int>(graph.size());
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        std::vector<Frame> call{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < graph[f.v].size()) {
                int w = graph[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                    } while (w != f.v);
                    std::sort(comp.begin(), comp.end());
                    sccs.push_back(std::move(comp));
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return sccs;
}

}  // namespace

IrreducibilityResult is_irreducible(const TransitionMatrix& m) {
    int n = m.size();
    bool all_zero = true;
    for (int i = 0; i < n && all_zero; ++i)
        for (int j = 0; j < n && all_zero; ++j)
            if (m.a[i][j]) all_zero = false;
    if (all_zero) throw zero_matrix();

    // digraph edge x_j -> x_i for a_ij > 0
    std::vector<std::vector<int>> graph(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.a[i][j]) graph[j].push_back(i);

    auto sccs = strongly_connected_components(graph);
    if (sccs.size() == 1) {
        // a single component is irreducible unless it is one vertex with no loop
        if (n == 1 && m.a[0][0] == 0) throw zero_matrix();
        return {true, {}};
    }
    // deterministic sink component: no edge leaving it, smallest member first
    std::vector<int> comp_of(n, -1);
    for (std::size_t c = 0; c < sccs.size(); ++c)
        for (int v : sccs[c]) comp_of[v] = static_cast<int>(c);
    std::vector<std::vector<int>> sinks;
    for (const auto& comp : sccs) {
        bool sink = true;
        for (int v : comp)
            for (int w : graph[v])
                if (comp_of[w] != comp_of[v]) sink = false;
        if (sink) sinks.push_back(comp);
    }
    std::sort(sinks.begin(), sinks.end());
    IrreducibilityResult r;
    r.irreducible = false;
    for (int v : sinks.front()) r.witness.push_back(v + 1);
    return r;
}

GraphMap power(const GraphMap& f, int k) {
    if (k < 1) throw error("power requires k >= 1");
    GraphMap g = f;
    for (int i = 1; i < k; ++i) {
        GraphMap next = g;
        for (int e = 1; e <= g.g.num_edges(); ++e)
            next.eimage[e - 1] = f.image_of_path(g.eimage[e - 1]);
        for (int v = 0; v < g.g.num_vertices(); ++v) next.vimage[v] = f.vimage[g.vimage[v]];
        next.phi = compose(f.phi, g.phi);
        g = std::move(next);
    }
    return g;
}

}  // namespace tt
