#include "tt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tt {

namespace {

std::vector<double> mat_vec(const TransitionMatrix& m, const std::vector<double>& v) {
    int n = m.size();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j)
            if (m.a[i][j]) s += static_cast<double>(m.a[i][j]) * v[j];
        out[i] = s;
    }
    return out;
}

}  // namespace

PerronData pf_eigen(const TransitionMatrix& m, double tol) {
    auto irr = is_irreducible(m);
    if (!irr.irreducible) throw not_irreducible(irr.witness);
    int n = m.size();
    PerronData pd;
    pd.tol = tol;
    if (n == 1) {
        pd.lambda = static_cast<double>(m.a[0][0]);
        pd.radius = 0;
        pd.eigenvector = {1.0};
        return pd;
    }
    // power iteration on M + I (primitive when M is irreducible), bounds on M;
    // iterate well past the requested tolerance so the midpoint digits settle
    std::vector<double> v(n, 1.0);
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    double target = std::max(tol / 64, 1e-15);
    for (int iter = 0; iter < 400000; ++iter) {
        std::vector<double> mv = mat_vec(m, v);
        lo = std::numeric_limits<double>::infinity();
        hi = 0;
        for (int i = 0; i < n; ++i) {
            double r = mv[i] / v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi - lo <= 2 * target * std::max(1.0, lo)) break;
        double norm = 0;
        for (int i = 0; i < n; ++i) {
            mv[i] += v[i];  // shift by I
            norm = std::max(norm, mv[i]);
        }
        for (int i = 0; i < n; ++i) v[i] = mv[i] / norm;
    }
    pd.lambda = (lo + hi) / 2;
    pd.radius = (hi - lo) / 2;
    pd.eigenvector = std::move(v);
    double mx = *std::max_element(pd.eigenvector.begin(), pd.eigenvector.end());
    for (double& x : pd.eigenvector) x /= mx;
    return pd;
}

int compare_lambda(const TransitionMatrix& ma, PerronData& a, const TransitionMatrix& mb,
                   PerronData& b) {
    while (true) {
        if (a.hi() < b.lo()) return -1;
        if (b.hi() < a.lo()) return 1;
        double tol = std::min(a.tol, b.tol) / 10;
        if (tol < 1e-14) return 0;
        a = pf_eigen(ma, tol);
        b = pf_eigen(mb, tol);
    }
}

MarkedGraph assign_metric(const GraphMap& f, const PerronData& pf_of_transpose) {
    MarkedGraph g = f.g;
    const auto& u = pf_of_transpose.eigenvector;
    if (static_cast<int>(u.size()) != g.num_edges()) throw error("metric vector size mismatch");
    double mn = *std::min_element(u.begin(), u.end());
    if (!(mn > 0)) throw error("PF eigenvector must be strictly positive");
    for (int e = 0; e < g.num_edges(); ++e) g.elen[e] = u[e] / mn;
    return g;
}

std::vector<double> pf_metric_lengths(const GraphMap& f, double tol) {
    PerronData pd = pf_eigen(transpose(transition_matrix(f)), tol);
    double mn = *std::min_element(pd.eigenvector.begin(), pd.eigenvector.end());
    std::vector<double> out = pd.eigenvector;
    for (double& x : out) x /= mn;
    return out;
}

double spectral_radius_upper(const TransitionMatrix& m, double tol) {
    int n = m.size();
    // component-wise PF over the condensation
    std::vector<std::vector<int>> graph(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.a[i][j]) graph[j].push_back(i);
    // reuse is_irreducible fast path
    try {
        auto irr = is_irreducible(m);
        if (irr.irreducible) return pf_eigen(m, tol).lambda;
    } catch (const zero_matrix&) {
        return 0;
    }
    // mark components via repeated restriction: simple n^2 approach
    std::vector<int> comp(n, -1);
    int nc = 0;
    // reachability closure
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : graph[x])
                if (!reach[s][y]) {
                    reach[s][y] = true;
                    stack.push_back(y);
                }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        for (int j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i]) comp[j] = nc;
        ++nc;
    }
    double best = 0;
    for (int c = 0; c < nc; ++c) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (comp[i] == c) members.push_back(i);
        TransitionMatrix sub;
        int k = static_cast<int>(members.size());
        sub.a.assign(k, std::vector<std::int64_t>(k, 0));
        bool nonzero = false;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                sub.a[i][j] = m.a[members[i]][members[j]];
                if (sub.a[i][j]) nonzero = true;
            }
        if (!nonzero) continue;
        try {
            auto irr = is_irreducible(sub);
            if (irr.irreducible) best = std::max(best, pf_eigen(sub, tol).lambda);
        } catch (const zero_matrix&) {
        }
    }
    return best;
}

}  // namespace tt
