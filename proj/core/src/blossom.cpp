#include "tbcodes/blossom.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <utility>

#include "tbcodes/error.hpp"

namespace tb {

namespace {

// Maximum-weight matching by the primal-dual blossom method on a dense
// graph. Real vertices are 1..n and contracted blossoms take ids in
// n+1..2n; st maps every vertex to the root of the blossom currently
// containing it. A zero weight marks a non-edge, so callers must shift
// genuine weights to be strictly positive. With every pair connected and
// all weights positive, the maximum-weight matching is perfect: two free
// vertices could otherwise extend it.
class MaxWeightMatcher {
  public:
    explicit MaxWeightMatcher(int n) : n_(n), n_x_(n), cap_(2 * n + 1) {
        g_.assign(static_cast<size_t>(cap_) * cap_, Edge{});
        for (int u = 0; u < cap_; ++u)
            for (int v = 0; v < cap_; ++v) edge(u, v) = Edge{u, v, 0};
        lab_.assign(cap_, 0);
        match_.assign(cap_, 0);
        slack_.assign(cap_, 0);
        st_.assign(cap_, 0);
        pa_.assign(cap_, 0);
        s_.assign(cap_, -1);
        vis_.assign(cap_, 0);
        flower_.assign(cap_, {});
        from_.assign(static_cast<size_t>(cap_) * (n_ + 1), 0);
    }

    void set_weight(int u, int v, int64_t w) {
        edge(u, v).w = w;
        edge(v, u).w = w;
    }

    // Runs phases until no augmenting path remains; returns the matched
    // weight and the number of matched pairs.
    std::pair<int64_t, int> solve() {
        for (int u = 0; u <= n_; ++u) st_[u] = u;
        int64_t w_max = 0;
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                from(u, v) = (u == v ? u : 0);
                w_max = std::max(w_max, edge(u, v).w);
            }
        for (int u = 0; u <= n_; ++u) lab_[u] = w_max;
        int pairs = 0;
        while (matching()) ++pairs;
        int64_t total = 0;
        for (int u = 1; u <= n_; ++u)
            if (match_[u] && match_[u] < u) total += edge(u, match_[u]).w;
        return {total, pairs};
    }

    int mate(int u) const { return match_[u]; }

  private:
    struct Edge {
        int u = 0, v = 0;
        int64_t w = 0;
    };

    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

    Edge& edge(int u, int v) { return g_[static_cast<size_t>(u) * cap_ + v]; }
    int& from(int b, int v) { return from_[static_cast<size_t>(b) * (n_ + 1) + v]; }

    int64_t e_delta(const Edge& e) const { return lab_[e.u] + lab_[e.v] - 2 * e.w; }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(edge(u, x)) < e_delta(edge(slack_[x], x)))
            slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (edge(u, x).w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int i : flower_[x]) q_push(i);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int i : flower_[x]) set_st(i, b);
    }

    // Position of sub-blossom xr in b's cycle, reorienting the cycle when
    // the path from the base would otherwise have odd length.
    int get_pr(int b, int xr) {
        auto& f = flower_[b];
        int pr = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
        if (pr % 2 == 1) {
            std::reverse(f.begin() + 1, f.end());
            return static_cast<int>(f.size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        Edge& e = edge(u, v);
        match_[u] = e.v;
        if (u > n_) {
            int xr = from(u, e.u);
            int pr = get_pr(u, xr);
            for (int i = 0; i < pr; ++i)
                set_match(flower_[u][i], flower_[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
        }
    }

    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++stamp_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == stamp_) return u;
            vis_[u] = stamp_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        s_[b] = 0;
        match_[b] = match_[lca];
        auto& f = flower_[b];
        f.clear();
        f.push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            f.push_back(x);
            f.push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(f.begin() + 1, f.end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            f.push_back(x);
            f.push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
        for (int x = 1; x <= n_; ++x) from(b, x) = 0;
        for (int xs : f) {
            // The contracted vertex inherits, per outside vertex, the
            // tightest edge leaving any sub-blossom.
            for (int x = 1; x <= n_x_; ++x)
                if (edge(b, x).w == 0 ||
                    (edge(xs, x).w > 0 && e_delta(edge(xs, x)) < e_delta(edge(b, x)))) {
                    edge(b, x) = edge(xs, x);
                    edge(x, b) = edge(x, xs);
                }
            for (int x = 1; x <= n_; ++x)
                if (from(xs, x)) from(b, x) = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int i : flower_[b]) set_st(i, i);
        int xr = from(b, edge(b, pa_[b]).u);
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][i];
            int xns = flower_[b][i + 1];
            pa_[xs] = edge(xns, xs).u;
            s_[xs] = 1;
            s_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        s_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < flower_[b].size(); ++i) {
            int xs = flower_[b][i];
            s_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }

    bool on_found_edge(const Edge& e) {
        int u = st_[e.u];
        int v = st_[e.v];
        if (s_[v] == -1) {
            pa_[v] = e.u;
            s_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            s_[nu] = 0;
            q_push(nu);
        } else if (s_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool matching() {
        std::fill(s_.begin(), s_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                s_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        for (;;) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (s_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (edge(u, v).w > 0 && st_[u] != st_[v]) {
                        if (e_delta(edge(u, v)) == 0) {
                            if (on_found_edge(edge(u, v))) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            int64_t d = kInf;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (s_[x] == -1)
                        d = std::min(d, e_delta(edge(slack_[x], x)));
                    else if (s_[x] == 0)
                        d = std::min(d, e_delta(edge(slack_[x], x)) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (s_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (s_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (s_[b] == 0)
                        lab_[b] += 2 * d;
                    else if (s_[b] == 1)
                        lab_[b] -= 2 * d;
                }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(edge(slack_[x], x)) == 0)
                    if (on_found_edge(edge(slack_[x], x))) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
        }
    }

    int n_, n_x_, cap_;
    std::vector<Edge> g_;
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_, s_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<int> from_;
    std::deque<int> q_;
    int stamp_ = 0;
};

}  // namespace

MatchingResult min_weight_perfect_matching(size_t n,
                                           const std::vector<int64_t>& weights) {
    require(n % 2 == 0, ErrorKind::validation,
            "perfect matching needs an even number of nodes");
    require(weights.size() == n * n, ErrorKind::shape,
            "weight matrix size does not match node count");
    MatchingResult res;
    res.mate.assign(n, -1);
    if (n == 0) return res;
    require(n <= 5000, ErrorKind::capacity, "matching instance too large");

    int64_t w_max = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            int64_t w = weights[i * n + j];
            require(w >= 0, ErrorKind::validation, "matching weights must be nonnegative");
            require(w == weights[j * n + i], ErrorKind::validation,
                    "matching weight matrix must be symmetric");
            w_max = std::max(w_max, w);
        }
    require(w_max < std::numeric_limits<int64_t>::max() / (8 * static_cast<int64_t>(n)),
            ErrorKind::capacity, "matching weights too large");

    // Reflect weights so minimizing the original sum maximizes the shifted
    // one, keeping every edge strictly positive.
    int64_t shift = w_max + 1;
    MaxWeightMatcher matcher(static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            matcher.set_weight(static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                               shift - weights[i * n + j]);
    auto [total, pairs] = matcher.solve();
    require(pairs == static_cast<int>(n / 2), ErrorKind::contract,
            "blossom matching failed to pair all nodes");
    res.total_weight = static_cast<int64_t>(n / 2) * shift - total;
    for (size_t u = 0; u < n; ++u) {
        int m = matcher.mate(static_cast<int>(u) + 1);
        require(m >= 1 && m <= static_cast<int>(n), ErrorKind::contract,
                "blossom matching left a node unpaired");
        res.mate[u] = m - 1;
    }
    for (size_t u = 0; u < n; ++u)
        require(res.mate[static_cast<size_t>(res.mate[u])] == static_cast<int32_t>(u),
                ErrorKind::contract, "blossom mate array is not an involution");
    return res;
}

}  // namespace tb
