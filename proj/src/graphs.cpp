#include "tt/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace tt {

EdgePath reverse_path(const EdgePath& p) {
    EdgePath out(p.rbegin(), p.rend());
    for (int& d : out) d = -d;
    return out;
}

bool MarkedGraph::is_path(const EdgePath& p) const {
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (terminus(p[i]) != origin(p[i + 1])) return false;
    return true;
}

bool MarkedGraph::is_tight(const EdgePath& p) const {
    if (!is_path(p)) return false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i + 1] == -p[i]) return false;
    return true;
}

double MarkedGraph::path_length(const EdgePath& p) const {
    double s = 0;
    for (int d : p) s += length(d);
    return s;
}

Word MarkedGraph::word_of_path(const EdgePath& p) const {
    Word w;
    for (int d : p) w = concat(w, word_of_dir(d));
    return w;
}

std::vector<int> MarkedGraph::directions_at(int v) const {
    std::vector<int> out;
    for (int e = 1; e <= num_edges(); ++e) {
        if (eorig[e - 1] == v) out.push_back(e);
        if (eterm[e - 1] == v) out.push_back(-e);
    }
    return out;
}

EdgePath MarkedGraph::connect(int u, int v) const {
    if (u == v) return {};
    std::vector<int> prev_dir(num_vertices(), 0);
    std::vector<int> prev_vert(num_vertices(), -1);
    std::deque<int> q{u};
    std::vector<bool> seen(num_vertices(), false);
    seen[u] = true;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int d : directions_at(x)) {
            int y = terminus(d);
            if (seen[y]) continue;
            seen[y] = true;
            prev_dir[y] = d;
            prev_vert[y] = x;
            if (y == v) {
                EdgePath out;
                for (int z = v; z != u; z = prev_vert[z]) out.push_back(prev_dir[z]);
                std::reverse(out.begin(), out.end());
                return out;
            }
            q.push_back(y);
        }
    }
    throw error("graph is not connected");
}

bool MarkedGraph::connected() const {
    if (num_vertices() == 0) return false;
    std::vector<bool> seen(num_vertices(), false);
    std::deque<int> q{0};
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int d : directions_at(x)) {
            int y = terminus(d);
            if (!seen[y]) {
                seen[y] = true;
                ++count;
                q.push_back(y);
            }
        }
    }
    return count == num_vertices();
}

void MarkedGraph::validate(bool strict_valence) const {
    if (!connected()) throw error("marked graph must be connected");
    for (double l : elen)
        if (!(l > 0)) throw error("edge lengths must be strictly positive");
    if (static_cast<int>(marking.size()) != alphabet.rank)
        throw error("marking must have one loop per generator");
    if (!marking_ok) return;
    bool all_free = true;
    for (const auto& v : verts)
        if (!v.free) all_free = false;
    if (all_free && euler_rank() != alphabet.rank)
        throw error("Euler characteristic disagrees with the alphabet rank");
    for (int i = 1; i <= alphabet.rank; ++i) {
        const EdgePath& m = marking[i - 1];
        if (!is_path(m)) throw error("marking loop is not a path");
        if (!m.empty() && (origin(m.front()) != base || terminus(m.back()) != base))
            throw error("marking loop is not based at the base vertex");
        if (word_of_path(m) != Word({i}))
            throw error("marking loop for generator " + alphabet.name(i) +
                        " does not read that generator");
    }
    if (strict_valence) {
        for (int v = 0; v < num_vertices(); ++v) {
            auto dirs = directions_at(v);
            if (!verts[v].free) continue;
            if (dirs.size() == 1) throw error("free valence-one vertex after normalization");
            if (dirs.size() == 2 && std::abs(dirs[0]) != std::abs(dirs[1]))
                throw error("redundant valence-two vertex after normalization");
        }
    }
}

EdgePath tighten(const EdgePath& p) {
    EdgePath out;
    out.reserve(p.size());
    for (int d : p) {
        if (!out.empty() && out.back() == -d)
            out.pop_back();
        else
            out.push_back(d);
    }
    return out;
}

EdgePath tighten_cyclic(const EdgePath& loop) {
    EdgePath p = tighten(loop);
    std::size_t a = 0, b = p.size();
    while (b - a >= 2 && p[a] == -p[b - 1]) {
        ++a;
        --b;
    }
    return EdgePath(p.begin() + a, p.begin() + b);
}

MarkedGraph rose(const Alphabet& ab) {
    MarkedGraph g;
    g.alphabet = ab;
    g.verts.resize(1);
    g.base = 0;
    for (int i = 1; i <= ab.rank; ++i) {
        g.eorig.push_back(0);
        g.eterm.push_back(0);
        g.elen.push_back(1.0);
        g.eword.push_back(Word({i}));
        g.marking.push_back({i});
    }
    return g;
}

}  // namespace tt
