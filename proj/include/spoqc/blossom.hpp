#pragma once

// Exact maximum/minimum weight perfect matching on general graphs via the
// primal-dual blossom algorithm, O(n^3). Dense formulation: suits the
// decoder's complete graphs over flagged detectors. Vertices are 1-indexed
// internally; 0 is the null sentinel.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spoqc {

class MaxWeightPerfectMatching {
 public:
  // weights[u][v] for u,v in [0,n): nonnegative; kAbsent marks a non-edge.
  // n must be even. Weights are doubled internally to keep duals integral.
  static constexpr long long kAbsent = -1;

  explicit MaxWeightPerfectMatching(const std::vector<std::vector<long long>>& weights)
      : n_(static_cast<int>(weights.size())), cap_(2 * n_ + 1) {
    if (n_ % 2 != 0)
      throw std::invalid_argument("perfect matching needs an even vertex count");
    g_.assign(static_cast<std::size_t>(cap_) * cap_, Edge{});
    flower_from_.assign(static_cast<std::size_t>(cap_) * cap_, 0);
    lab_.assign(static_cast<std::size_t>(cap_), 0);
    match_.assign(static_cast<std::size_t>(cap_), 0);
    slack_.assign(static_cast<std::size_t>(cap_), 0);
    st_.assign(static_cast<std::size_t>(cap_), 0);
    pa_.assign(static_cast<std::size_t>(cap_), 0);
    state_.assign(static_cast<std::size_t>(cap_), -1);
    vis_.assign(static_cast<std::size_t>(cap_), 0);
    flower_.assign(static_cast<std::size_t>(cap_), {});

    long long max_weight = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) {
        const long long w = weights[static_cast<std::size_t>(u - 1)]
                                   [static_cast<std::size_t>(v - 1)];
        Edge& e = edge(u, v);
        e.u = u;
        e.v = v;
        if (u != v && w != kAbsent) {
          if (w < 0) throw std::invalid_argument("negative matching weight");
          e.w = 2 * w;  // keep slack parities even
          max_weight = std::max(max_weight, e.w);
        }
        flower_from(u, v) = (u == v) ? u : 0;
      }
    n_x_ = n_;
    for (int u = 0; u <= n_; ++u) st_[static_cast<std::size_t>(u)] = u;
    for (int u = 1; u <= n_; ++u) lab_[static_cast<std::size_t>(u)] = max_weight;
  }

  // Returns mate[u] (0-indexed) or throws if no perfect matching exists.
  std::vector<int> solve() {
    int matches = 0;
    while (matching()) ++matches;
    if (2 * matches != n_)
      throw std::runtime_error("graph admits no perfect matching");
    std::vector<int> mate(static_cast<std::size_t>(n_));
    for (int u = 1; u <= n_; ++u)
      mate[static_cast<std::size_t>(u - 1)] = match_[static_cast<std::size_t>(u)] - 1;
    return mate;
  }

 private:
  struct Edge {
    int u = 0, v = 0;
    long long w = 0;
  };

  Edge& edge(int u, int v) {
    return g_[static_cast<std::size_t>(u) * cap_ + static_cast<std::size_t>(v)];
  }
  int& flower_from(int b, int x) {
    return flower_from_[static_cast<std::size_t>(b) * cap_ + static_cast<std::size_t>(x)];
  }

  long long edge_delta(const Edge& e) {
    return lab_[static_cast<std::size_t>(e.u)] + lab_[static_cast<std::size_t>(e.v)] -
           edge(e.u, e.v).w * 2;
  }

  void update_slack(int u, int x) {
    if (!slack_[static_cast<std::size_t>(x)] ||
        edge_delta(edge(u, x)) <
            edge_delta(edge(slack_[static_cast<std::size_t>(x)], x)))
      slack_[static_cast<std::size_t>(x)] = u;
  }

  void set_slack(int x) {
    slack_[static_cast<std::size_t>(x)] = 0;
    for (int u = 1; u <= n_; ++u)
      if (edge(u, x).w > 0 && st_[static_cast<std::size_t>(u)] != x &&
          state_[static_cast<std::size_t>(st_[static_cast<std::size_t>(u)])] == 0)
        update_slack(u, x);
  }

  void queue_push(int x) {
    if (x <= n_) {
      queue_.push_back(x);
      return;
    }
    for (int i : flower_[static_cast<std::size_t>(x)]) queue_push(i);
  }

  void set_st(int x, int b) {
    st_[static_cast<std::size_t>(x)] = b;
    if (x > n_)
      for (int i : flower_[static_cast<std::size_t>(x)]) set_st(i, b);
  }

  int get_pr(int b, int xr) {
    auto& f = flower_[static_cast<std::size_t>(b)];
    const int pr = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
    if (pr % 2 == 1) {
      std::reverse(f.begin() + 1, f.end());
      return static_cast<int>(f.size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    Edge e = edge(u, v);
    match_[static_cast<std::size_t>(u)] = e.v;
    if (u <= n_) return;
    const int xr = flower_from(u, e.u);
    const int pr = get_pr(u, xr);
    auto& f = flower_[static_cast<std::size_t>(u)];
    for (int i = 0; i < pr; ++i) set_match(f[static_cast<std::size_t>(i)],
                                           f[static_cast<std::size_t>(i ^ 1)]);
    set_match(xr, v);
    std::rotate(f.begin(), f.begin() + pr, f.end());
  }

  void augment(int u, int v) {
    while (true) {
      const int xnv = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(u)])];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(xnv)])]);
      u = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(xnv)])];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++timestamp_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[static_cast<std::size_t>(u)] == timestamp_) return u;
      vis_[static_cast<std::size_t>(u)] = timestamp_;
      u = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(u)])];
      if (u) u = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(u)])];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[static_cast<std::size_t>(b)]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[static_cast<std::size_t>(b)] = 0;
    state_[static_cast<std::size_t>(b)] = 0;
    match_[static_cast<std::size_t>(b)] = match_[static_cast<std::size_t>(lca)];
    auto& f = flower_[static_cast<std::size_t>(b)];
    f.clear();
    f.push_back(lca);
    for (int x = u, y; x != lca; x = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(y)])]) {
      f.push_back(x);
      f.push_back(y = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(x)])]);
      queue_push(y);
    }
    std::reverse(f.begin() + 1, f.end());
    for (int x = v, y; x != lca; x = st_[static_cast<std::size_t>(pa_[static_cast<std::size_t>(y)])]) {
      f.push_back(x);
      f.push_back(y = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(x)])]);
      queue_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
    for (int x = 1; x <= n_; ++x) flower_from(b, x) = 0;
    for (const int xs : f) {
      for (int x = 1; x <= n_x_; ++x)
        // Only a present child edge may represent the blossom's edge to x.
        if (edge(xs, x).w > 0 &&
            (edge(b, x).w == 0 || edge_delta(edge(xs, x)) < edge_delta(edge(b, x)))) {
          edge(b, x) = edge(xs, x);
          edge(x, b) = edge(x, xs);
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from(xs, x)) flower_from(b, x) = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    auto& f = flower_[static_cast<std::size_t>(b)];
    for (const int i : f) set_st(i, i);
    const int xr = flower_from(b, edge(b, pa_[static_cast<std::size_t>(b)]).u);
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = f[static_cast<std::size_t>(i)];
      const int xns = f[static_cast<std::size_t>(i + 1)];
      pa_[static_cast<std::size_t>(xs)] = edge(xns, xs).u;
      state_[static_cast<std::size_t>(xs)] = 1;
      state_[static_cast<std::size_t>(xns)] = 0;
      slack_[static_cast<std::size_t>(xs)] = 0;
      set_slack(xns);
      queue_push(xns);
    }
    state_[static_cast<std::size_t>(xr)] = 1;
    pa_[static_cast<std::size_t>(xr)] = pa_[static_cast<std::size_t>(b)];
    for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < f.size(); ++i) {
      state_[static_cast<std::size_t>(f[i])] = -1;
      set_slack(f[i]);
    }
    st_[static_cast<std::size_t>(b)] = 0;
  }

  bool on_found_edge(const Edge& e) {
    const int u = st_[static_cast<std::size_t>(e.u)];
    const int v = st_[static_cast<std::size_t>(e.v)];
    if (state_[static_cast<std::size_t>(v)] == -1) {
      pa_[static_cast<std::size_t>(v)] = e.u;
      state_[static_cast<std::size_t>(v)] = 1;
      const int nu = st_[static_cast<std::size_t>(match_[static_cast<std::size_t>(v)])];
      slack_[static_cast<std::size_t>(v)] = 0;
      slack_[static_cast<std::size_t>(nu)] = 0;
      state_[static_cast<std::size_t>(nu)] = 0;
      queue_push(nu);
    } else if (state_[static_cast<std::size_t>(v)] == 0) {
      const int lca = get_lca(u, v);
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
    std::fill(state_.begin() + 1, state_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
    queue_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[static_cast<std::size_t>(x)] == x && !match_[static_cast<std::size_t>(x)]) {
        pa_[static_cast<std::size_t>(x)] = 0;
        state_[static_cast<std::size_t>(x)] = 0;
        queue_push(x);
      }
    if (queue_.empty()) return false;

    while (true) {
      while (!queue_.empty()) {
        const int u = queue_.front();
        queue_.pop_front();
        if (state_[static_cast<std::size_t>(st_[static_cast<std::size_t>(u)])] == 1)
          continue;
        for (int v = 1; v <= n_; ++v)
          if (edge(u, v).w > 0 &&
              st_[static_cast<std::size_t>(u)] != st_[static_cast<std::size_t>(v)]) {
            if (edge_delta(edge(u, v)) == 0) {
              if (on_found_edge(edge(u, v))) return true;
            } else {
              update_slack(u, st_[static_cast<std::size_t>(v)]);
            }
          }
      }

      constexpr long long kNoBound = std::numeric_limits<long long>::max();
      long long d = kNoBound;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[static_cast<std::size_t>(b)] == b && state_[static_cast<std::size_t>(b)] == 1)
          d = std::min(d, lab_[static_cast<std::size_t>(b)] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[static_cast<std::size_t>(x)] == x && slack_[static_cast<std::size_t>(x)]) {
          const Edge& e = edge(slack_[static_cast<std::size_t>(x)], x);
          if (state_[static_cast<std::size_t>(x)] == -1)
            d = std::min(d, edge_delta(e));
          else if (state_[static_cast<std::size_t>(x)] == 0)
            d = std::min(d, edge_delta(e) / 2);
        }
      // No dual bound: the alternating forest cannot grow, so some exposed
      // vertex has no augmenting path and no perfect matching exists.
      if (d == kNoBound) return false;

      for (int u = 1; u <= n_; ++u) {
        const int root = st_[static_cast<std::size_t>(u)];
        if (state_[static_cast<std::size_t>(root)] == 0) {
          lab_[static_cast<std::size_t>(u)] -= d;
        } else if (state_[static_cast<std::size_t>(root)] == 1) {
          lab_[static_cast<std::size_t>(u)] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[static_cast<std::size_t>(b)] == b) {
          if (state_[static_cast<std::size_t>(b)] == 0)
            lab_[static_cast<std::size_t>(b)] += 2 * d;
          else if (state_[static_cast<std::size_t>(b)] == 1)
            lab_[static_cast<std::size_t>(b)] -= 2 * d;
        }

      queue_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[static_cast<std::size_t>(x)] == x && slack_[static_cast<std::size_t>(x)] &&
            st_[static_cast<std::size_t>(slack_[static_cast<std::size_t>(x)])] != x &&
            edge_delta(edge(slack_[static_cast<std::size_t>(x)], x)) == 0)
          if (on_found_edge(edge(slack_[static_cast<std::size_t>(x)], x))) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[static_cast<std::size_t>(b)] == b &&
            state_[static_cast<std::size_t>(b)] == 1 &&
            lab_[static_cast<std::size_t>(b)] == 0)
          expand_blossom(b);
    }
  }

  int n_;
  int cap_;
  int n_x_ = 0;
  int timestamp_ = 0;
  std::vector<Edge> g_;
  std::vector<int> flower_from_;
  std::vector<long long> lab_;
  std::vector<int> match_, slack_, st_, pa_;
  std::vector<signed char> state_;  // -1 unvisited, 0 even, 1 odd
  std::vector<int> vis_;
  std::vector<std::vector<int>> flower_;
  std::deque<int> queue_;
};

struct PerfectMatching {
  std::vector<int> mate;
  long long total_weight = 0;
};

// Minimum-weight perfect matching: complement weights against the largest
// present cost so the maximizer solves the minimization. Edges marked
// kAbsent stay absent.
inline PerfectMatching min_weight_perfect_matching(
    const std::vector<std::vector<long long>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  long long max_cost = 0;
  for (const auto& row : cost)
    for (const long long c : row)
      if (c != MaxWeightPerfectMatching::kAbsent) max_cost = std::max(max_cost, c);

  std::vector<std::vector<long long>> flipped(
      static_cast<std::size_t>(n),
      std::vector<long long>(static_cast<std::size_t>(n),
                             MaxWeightPerfectMatching::kAbsent));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] !=
                        MaxWeightPerfectMatching::kAbsent)
        flipped[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
            max_cost + 1 -
            cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];

  MaxWeightPerfectMatching solver(flipped);
  PerfectMatching result;
  result.mate = solver.solve();
  for (int u = 0; u < n; ++u) {
    const int v = result.mate[static_cast<std::size_t>(u)];
    if (v > u)
      result.total_weight +=
          cost[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
  }
  return result;
}

}  // namespace spoqc
