#include "tt/cancellation.hpp"

#include <algorithm>
#include <map>

namespace tt {

namespace {

// Stream position: inside the image of `dir` at `off`; off == image length
// means "at the boundary after dir", where a continuation is chosen.
struct Pos {
    int dir;
    int off;
    auto operator<=>(const Pos&) const = default;
};

struct State {
    Pos a, b;
    auto operator<=>(const State&) const = default;
};

struct Automaton {
    const GraphMap& f;
    std::map<State, double> memo;
    std::map<State, int> mark;  // 1 = on stack, 2 = done
    std::map<State, std::pair<int, int>> choice;  // argmax continuations (0 = none)

    explicit Automaton(const GraphMap& fm) : f(fm) {}

    static State canon(Pos a, Pos b) { return a <= b ? State{a, b} : State{b, a}; }

    int image_len(int dir) const { return static_cast<int>(f.eimage[std::abs(dir) - 1].size()); }
    int image_edge(int dir, int off) const {
        const EdgePath& im = f.eimage[std::abs(dir) - 1];
        int n = static_cast<int>(im.size());
        return dir > 0 ? im[off] : -im[n - 1 - off];
    }

    // continuations keeping the domain path tight and the image stream tight
    std::vector<int> continuations(int dir) const {
        std::vector<int> out;
        int u = f.g.terminus(dir);
        int blocked = f.dmap(-dir);
        for (int d : f.g.directions_at(u)) {
            if (d == -dir) continue;
            if (f.dmap(d) == blocked) continue;
            out.push_back(d);
        }
        return out;
    }

    double value(Pos pa, Pos pb) {
        State s = canon(pa, pb);
        if (mark[s] == 2) return memo[s];
        if (mark[s] == 1)
            throw unbounded_cancellation("cancellation propagation cycles; map folds a line");
        mark[s] = 1;
        Pos a = s.a, b = s.b;

        double best = 0;
        std::pair<int, int> best_choice{0, 0};
        bool a_end = a.off == image_len(a.dir);
        bool b_end = b.off == image_len(b.dir);
        if (!a_end && !b_end) {
            int x = image_edge(a.dir, a.off);
            int y = image_edge(b.dir, b.off);
            if (x == y)
                best = f.g.length(x) + value(Pos{a.dir, a.off + 1}, Pos{b.dir, b.off + 1});
        } else if (a_end && !b_end) {
            for (int d : continuations(a.dir)) {
                double v = value(Pos{d, 0}, b);
                if (v > best) {
                    best = v;
                    best_choice = {d, 0};
                }
            }
        } else if (!a_end && b_end) {
            for (int d : continuations(b.dir)) {
                double v = value(a, Pos{d, 0});
                if (v > best) {
                    best = v;
                    best_choice = {0, d};
                }
            }
        } else {
            bool same_vertex = f.g.terminus(a.dir) == f.g.terminus(b.dir);
            for (int da : continuations(a.dir))
                for (int db : continuations(b.dir)) {
                    if (same_vertex && da == db)
                        throw unbounded_cancellation(
                            "streams merge: images of two distinct rays coincide");
                    double v = value(Pos{da, 0}, Pos{db, 0});
                    if (v > best) {
                        best = v;
                        best_choice = {da, db};
                    }
                }
        }
        mark[s] = 2;
        memo[s] = best;
        choice[s] = best_choice;
        return best;
    }

    // replay argmax choices, collecting the direction sequences of both streams
    void witness_paths(Pos a, Pos b, std::vector<int>& dirs_a, std::vector<int>& dirs_b) {
        while (true) {
            State s = canon(a, b);
            bool swapped = canon(a, b).a != a || canon(a, b).b != b;
            swapped = !(a <= b);
            bool a_end = a.off == image_len(a.dir);
            bool b_end = b.off == image_len(b.dir);
            if (!a_end && !b_end) {
                int x = image_edge(a.dir, a.off);
                int y = image_edge(b.dir, b.off);
                if (x != y || memo[s] == 0) return;
                a.off++;
                b.off++;
                continue;
            }
            auto it = choice.find(s);
            if (it == choice.end()) return;
            auto [ca, cb] = it->second;  // for the canonical (s.a, s.b) order
            if (swapped) std::swap(ca, cb);
            if (ca == 0 && cb == 0) return;
            if (ca != 0) {
                dirs_a.push_back(ca);
                a = Pos{ca, 0};
            }
            if (cb != 0) {
                dirs_b.push_back(cb);
                b = Pos{cb, 0};
            }
        }
    }
};

}  // namespace

double bcc_constant(const GraphMap& f, BccWitness* witness) {
    Automaton aut(f);
    double best = 0;
    std::pair<int, int> best_turn{0, 0};
    for (int v = 0; v < f.g.num_vertices(); ++v) {
        auto dirs = f.g.directions_at(v);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                double val = aut.value(Pos{dirs[i], 0}, Pos{dirs[j], 0});
                if (val > best || best_turn.first == 0) {
                    best = val;
                    best_turn = {dirs[i], dirs[j]};
                }
            }
    }
    if (witness && best_turn.first != 0) {
        std::vector<int> da{best_turn.first}, db{best_turn.second};
        aut.witness_paths(Pos{best_turn.first, 0}, Pos{best_turn.second, 0}, da, db);
        witness->alpha = reverse_path(da);
        witness->beta = db;
        witness->cancellation = best;
    }
    return best;
}

double junction_cancellation(const GraphMap& f, const EdgePath& alpha, const EdgePath& beta) {
    EdgePath fa = f.image_of_path(alpha);
    EdgePath fb = f.image_of_path(beta);
    EdgePath joined = fa;
    for (int d : fb) {
        if (!joined.empty() && joined.back() == -d)
            joined.pop_back();
        else
            joined.push_back(d);
    }
    double la = f.g.path_length(fa), lb = f.g.path_length(fb), lj = f.g.path_length(joined);
    return (la + lb - lj) / 2;
}

}  // namespace tt
