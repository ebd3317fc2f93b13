#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "json.hpp"

#include "spoqc/blossom.hpp"
#include "spoqc/error_model.hpp"
#include "spoqc/frame.hpp"

namespace spoqc {

// XOR combination of independent flip probabilities.
inline double combine_flip_probs(double p1, double p2) {
  return p1 * (1.0 - p2) + p2 * (1.0 - p1);
}

// Matching weight ln((1-p)/p); p = 0 gives +infinity, p = 1/2 gives 0.
inline double edge_weight_from_prob(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) throw std::domain_error("edge_weight_from_prob: p must be < 1");
  return std::log((1.0 - p) / p);
}

struct MatchingEdge {
  int u;  // family-local node
  int v;  // family-local node, or the boundary node
  double probability;  // combined non-heralded probability
  double weight;       // ln((1-p)/p); infinite while probability == 0
  bool flip;           // flips the tracked logical observable
  std::vector<int> mechanisms;  // indices into the mechanism list
};

// Weighted decoding graph for one CSS family (the detectors of checks of
// that kind). Herald sites map to the edges they erase when fired.
class MatchingGraph {
 public:
  CheckKind family = CheckKind::Z;
  std::vector<int> detector_ids;          // local node -> global detector id
  std::vector<int> local_of_global;       // global detector id -> local or -1
  std::vector<MatchingEdge> edges;
  std::vector<std::vector<int>> herald_edges;  // herald id -> edge indices

  int node_count() const { return static_cast<int>(detector_ids.size()); }
  int boundary_node() const { return node_count(); }

  // CSR adjacency over node_count()+1 nodes (boundary included).
  std::vector<int> adj_offset;
  std::vector<int> adj_edge;
  std::vector<int> adj_other;

  void build_adjacency() {
    const int nodes = node_count() + 1;
    adj_offset.assign(static_cast<std::size_t>(nodes) + 1, 0);
    for (const auto& e : edges) {
      ++adj_offset[static_cast<std::size_t>(e.u) + 1];
      ++adj_offset[static_cast<std::size_t>(e.v) + 1];
    }
    for (int i = 0; i < nodes; ++i)
      adj_offset[static_cast<std::size_t>(i) + 1] +=
          adj_offset[static_cast<std::size_t>(i)];
    adj_edge.assign(adj_offset.back(), 0);
    adj_other.assign(adj_offset.back(), 0);
    std::vector<int> cursor(adj_offset.begin(), adj_offset.end() - 1);
    for (int idx = 0; idx < static_cast<int>(edges.size()); ++idx) {
      const auto& e = edges[static_cast<std::size_t>(idx)];
      adj_edge[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)])] = idx;
      adj_other[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = e.v;
      adj_edge[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)])] = idx;
      adj_other[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = e.u;
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["family"] = std::string(1, check_kind_char(family));
    j["detectors"] = detector_ids;
    j["boundary"] = boundary_node();
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges)
      j["edges"].push_back({{"u", e.u},
                            {"v", e.v},
                            {"probability", e.probability},
                            {"weight", std::isinf(e.weight) ? -1.0 : e.weight},
                            {"flip", e.flip},
                            {"mechanisms", e.mechanisms}});
    return j;
  }
};

namespace detail {

struct EdgeKey {
  int u, v;
  bool flip;
  auto operator<=>(const EdgeKey&) const = default;
};

}  // namespace detail

// Builds the decoding graph of one family from the mechanism list. The
// base weights include only non-heralded mechanisms; heralded mechanisms
// register the edges a fired herald erases (p = 1/2). With
// `fold_heralds_blind`, heralded mechanisms are instead folded into the
// base weights at their unconditional marginal p_F/2 (the herald-ignoring
// decoder of the accuracy comparison).
inline MatchingGraph build_base_graph(const SyndromeCircuit& c,
                                      const std::vector<ErrorMechanism>& mechanisms,
                                      CheckKind family,
                                      bool fold_heralds_blind = false) {
  MatchingGraph g;
  g.family = family;
  g.local_of_global.assign(static_cast<std::size_t>(c.detector_count), -1);
  for (int d = 0; d < c.detector_count; ++d)
    if (c.detectors[static_cast<std::size_t>(d)].family == family) {
      g.local_of_global[static_cast<std::size_t>(d)] =
          static_cast<int>(g.detector_ids.size());
      g.detector_ids.push_back(d);
    }

  std::map<detail::EdgeKey, int> edge_index;
  const int boundary = g.boundary_node();

  for (int m = 0; m < static_cast<int>(mechanisms.size()); ++m) {
    const auto& mech = mechanisms[static_cast<std::size_t>(m)];
    std::vector<int> local;
    for (int d : mech.detectors) {
      const int l = g.local_of_global[static_cast<std::size_t>(d)];
      if (l >= 0) local.push_back(l);
    }
    if (local.empty()) {
      if (mech.flips_observable &&
          static_cast<int>(local.size()) == static_cast<int>(mech.detectors.size()))
        throw std::logic_error("build_base_graph: undetectable logical mechanism");
      continue;  // acts on the other family only
    }
    if (local.size() > 2)
      throw std::logic_error(
          "build_base_graph: mechanism flips more than two detectors in one family");
    const int u = local[0];
    const int v = (local.size() == 2) ? local[1] : boundary;

    const detail::EdgeKey key{std::min(u, v), std::max(u, v), mech.flips_observable};
    auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(g.edges.size()));
    if (inserted) {
      g.edges.push_back({key.u, key.v, 0.0,
                         std::numeric_limits<double>::infinity(),
                         mech.flips_observable, {}});
    }
    MatchingEdge& e = g.edges[static_cast<std::size_t>(it->second)];
    e.mechanisms.push_back(m);

    double p = 0.0;
    if (!mech.heralded()) {
      p = mech.probability;
    } else if (fold_heralds_blind) {
      const double site_pf =
          c.herald_sites[static_cast<std::size_t>(mech.herald)].failure_prob;
      p = site_pf * mech.probability;
    }
    if (p > 0.0) {
      e.probability = combine_flip_probs(e.probability, p);
      e.weight = edge_weight_from_prob(e.probability);
    }
  }

  g.herald_edges.assign(static_cast<std::size_t>(c.herald_count()), {});
  if (!fold_heralds_blind) {
    for (int m = 0; m < static_cast<int>(mechanisms.size()); ++m) {
      const auto& mech = mechanisms[static_cast<std::size_t>(m)];
      if (!mech.heralded()) continue;
      // Find this mechanism's edge again via its signature.
      std::vector<int> local;
      for (int d : mech.detectors) {
        const int l = g.local_of_global[static_cast<std::size_t>(d)];
        if (l >= 0) local.push_back(l);
      }
      if (local.empty()) continue;
      const int u = local[0];
      const int v = (local.size() == 2) ? local[1] : boundary;
      const detail::EdgeKey key{std::min(u, v), std::max(u, v), mech.flips_observable};
      g.herald_edges[static_cast<std::size_t>(mech.herald)].push_back(
          edge_index.at(key));
    }
  }

  g.build_adjacency();
  return g;
}

// Per-shot view of the base graph with fired heralds incorporated at
// p = 1/2 (weight-zero edges); XOR-combining any base probability with 1/2
// is absorbing, so fired edges are simply zeroed.
struct HeraldOverlay {
  const MatchingGraph* graph;
  std::vector<double> weights;  // per edge
};

inline HeraldOverlay apply_heralds(const MatchingGraph& g,
                                   std::span<const std::uint8_t> heralds) {
  if (heralds.size() != g.herald_edges.size())
    throw std::invalid_argument("apply_heralds: herald vector length mismatch");
  HeraldOverlay overlay;
  overlay.graph = &g;
  overlay.weights.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    overlay.weights[e] = g.edges[e].weight;
  for (std::size_t h = 0; h < heralds.size(); ++h)
    if (heralds[h])
      for (int e : g.herald_edges[h]) overlay.weights[static_cast<std::size_t>(e)] = 0.0;
  return overlay;
}

struct DecodeResult {
  bool observable_flip = false;
  double matching_weight = 0.0;
};

namespace detail {

// Reusable per-thread decode workspace.
struct DecodeScratch {
  std::vector<double> dist;
  std::vector<std::uint8_t> parity;
  std::vector<int> visited_epoch;
  int epoch = 0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Fixed-point scale for blossom weights.
inline constexpr double kWeightScale = 1048576.0;  // 2^20

}  // namespace detail

// Exact MWPM decode of one family. `detector_bits` is the global detector
// bit vector of a shot; weights come from the overlay (or the base graph).
//
// Construction: Dijkstra from every flagged detector over the (reweighted)
// family graph gives pairwise path costs and path flip parities; flagged
// detectors plus one boundary copy each form a complete graph solved by
// the exact blossom matcher. Pairs (i,j) with d_ij >= d_iB + d_jB are
// weakly dominated by matching both to the boundary and are pruned, which
// splits the instance into independent clusters without changing the
// optimum.
inline DecodeResult mwpm_decode(const MatchingGraph& g,
                                std::span<const double> weights,
                                std::span<const std::uint8_t> detector_bits) {
  thread_local detail::DecodeScratch scratch;
  const int nodes = g.node_count() + 1;  // + boundary
  if (static_cast<int>(scratch.dist.size()) < nodes) {
    scratch.dist.assign(static_cast<std::size_t>(nodes), detail::kInf);
    scratch.parity.assign(static_cast<std::size_t>(nodes), 0);
    scratch.visited_epoch.assign(static_cast<std::size_t>(nodes), 0);
    scratch.epoch = 0;
  }

  std::vector<int> flagged;
  for (std::size_t l = 0; l < g.detector_ids.size(); ++l)
    if (detector_bits[static_cast<std::size_t>(g.detector_ids[l])])
      flagged.push_back(static_cast<int>(l));
  if (flagged.empty()) return {};

  const int f = static_cast<int>(flagged.size());
  std::vector<int> flag_index(static_cast<std::size_t>(nodes), -1);
  for (int i = 0; i < f; ++i)
    flag_index[static_cast<std::size_t>(flagged[static_cast<std::size_t>(i)])] = i;

  // Dijkstra from each flagged node; record distances and flip parities to
  // the other flagged nodes and to the boundary.
  std::vector<std::vector<double>> dist_to(static_cast<std::size_t>(f),
                                           std::vector<double>(static_cast<std::size_t>(f),
                                                               detail::kInf));
  std::vector<std::vector<std::uint8_t>> parity_to(
      static_cast<std::size_t>(f),
      std::vector<std::uint8_t>(static_cast<std::size_t>(f), 0));
  std::vector<double> boundary_dist(static_cast<std::size_t>(f), detail::kInf);
  std::vector<std::uint8_t> boundary_parity(static_cast<std::size_t>(f), 0);

  using QueueItem = std::pair<double, int>;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
  for (int i = 0; i < f; ++i) {
    const int source = flagged[static_cast<std::size_t>(i)];
    ++scratch.epoch;
    auto& dist = scratch.dist;
    auto& parity = scratch.parity;
    auto& seen = scratch.visited_epoch;
    dist[static_cast<std::size_t>(source)] = 0.0;
    parity[static_cast<std::size_t>(source)] = 0;
    seen[static_cast<std::size_t>(source)] = scratch.epoch;
    queue.push({0.0, source});
    while (!queue.empty()) {
      const auto [d, node] = queue.top();
      queue.pop();
      if (d > dist[static_cast<std::size_t>(node)]) continue;
      for (int k = g.adj_offset[static_cast<std::size_t>(node)];
           k < g.adj_offset[static_cast<std::size_t>(node) + 1]; ++k) {
        const int edge = g.adj_edge[static_cast<std::size_t>(k)];
        const double w = weights[static_cast<std::size_t>(edge)];
        if (std::isinf(w)) continue;
        const int other = g.adj_other[static_cast<std::size_t>(k)];
        const double nd = d + w;
        const bool fresh = seen[static_cast<std::size_t>(other)] != scratch.epoch;
        if (fresh || nd < dist[static_cast<std::size_t>(other)]) {
          seen[static_cast<std::size_t>(other)] = scratch.epoch;
          dist[static_cast<std::size_t>(other)] = nd;
          parity[static_cast<std::size_t>(other)] =
              parity[static_cast<std::size_t>(node)] ^
              (g.edges[static_cast<std::size_t>(edge)].flip ? 1 : 0);
          queue.push({nd, other});
        }
      }
    }
    for (int j = 0; j < f; ++j) {
      const int target = flagged[static_cast<std::size_t>(j)];
      if (seen[static_cast<std::size_t>(target)] == scratch.epoch) {
        dist_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            dist[static_cast<std::size_t>(target)];
        parity_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            parity[static_cast<std::size_t>(target)];
      }
    }
    const int boundary = g.boundary_node();
    if (seen[static_cast<std::size_t>(boundary)] == scratch.epoch) {
      boundary_dist[static_cast<std::size_t>(i)] = dist[static_cast<std::size_t>(boundary)];
      boundary_parity[static_cast<std::size_t>(i)] =
          parity[static_cast<std::size_t>(boundary)];
    }
  }

  // Cluster flagged detectors through non-dominated candidate edges.
  std::vector<int> component(static_cast<std::size_t>(f));
  for (int i = 0; i < f; ++i) component[static_cast<std::size_t>(i)] = i;
  const auto find_root = [&](int x) {
    while (component[static_cast<std::size_t>(x)] != x) {
      component[static_cast<std::size_t>(x)] =
          component[static_cast<std::size_t>(component[static_cast<std::size_t>(x)])];
      x = component[static_cast<std::size_t>(x)];
    }
    return x;
  };
  const auto dominated = [&](int i, int j) {
    const double direct = dist_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const double via = boundary_dist[static_cast<std::size_t>(i)] +
                       boundary_dist[static_cast<std::size_t>(j)];
    return direct >= via;
  };
  for (int i = 0; i < f; ++i)
    for (int j = i + 1; j < f; ++j)
      if (!dominated(i, j)) {
        const int a = find_root(i), b = find_root(j);
        if (a != b) component[static_cast<std::size_t>(a)] = b;
      }

  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < f; ++i) clusters[find_root(i)].push_back(i);

  DecodeResult result;
  for (const auto& [root, members] : clusters) {
    const int m = static_cast<int>(members.size());
    const int size = 2 * m;  // members + one boundary copy each
    std::vector<std::vector<long long>> cost(
        static_cast<std::size_t>(size),
        std::vector<long long>(static_cast<std::size_t>(size),
                               MaxWeightPerfectMatching::kAbsent));
    const auto scaled = [](double w) {
      return static_cast<long long>(std::llround(w * detail::kWeightScale));
    };
    for (int a = 0; a < m; ++a) {
      const int i = members[static_cast<std::size_t>(a)];
      for (int b = a + 1; b < m; ++b) {
        const int j = members[static_cast<std::size_t>(b)];
        const double w = dist_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (!std::isinf(w) && !dominated(i, j))
          cost[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
              cost[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = scaled(w);
      }
      const double bw = boundary_dist[static_cast<std::size_t>(i)];
      if (!std::isinf(bw))
        cost[static_cast<std::size_t>(a)][static_cast<std::size_t>(m + a)] =
            cost[static_cast<std::size_t>(m + a)][static_cast<std::size_t>(a)] = scaled(bw);
      for (int b = a + 1; b < m; ++b)
        cost[static_cast<std::size_t>(m + a)][static_cast<std::size_t>(m + b)] =
            cost[static_cast<std::size_t>(m + b)][static_cast<std::size_t>(m + a)] = 0;
    }

    PerfectMatching matching;
    try {
      matching = min_weight_perfect_matching(cost);
    } catch (const std::runtime_error&) {
      throw std::runtime_error(
          "mwpm_decode: odd syndrome cluster disconnected from boundary");
    }
    for (int a = 0; a < size; ++a) {
      const int b = matching.mate[static_cast<std::size_t>(a)];
      if (b <= a) continue;
      if (a < m && b < m) {
        const int i = members[static_cast<std::size_t>(a)];
        const int j = members[static_cast<std::size_t>(b)];
        result.matching_weight +=
            dist_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        result.observable_flip ^=
            parity_to[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      } else if (a < m && b == m + a) {
        const int i = members[static_cast<std::size_t>(a)];
        result.matching_weight += boundary_dist[static_cast<std::size_t>(i)];
        result.observable_flip ^= boundary_parity[static_cast<std::size_t>(i)];
      }
      // boundary-copy pairs carry zero weight and no flip
    }
  }
  return result;
}

inline DecodeResult mwpm_decode(const MatchingGraph& g,
                                std::span<const std::uint8_t> detector_bits) {
  std::vector<double> weights(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) weights[e] = g.edges[e].weight;
  return mwpm_decode(g, weights, detector_bits);
}

inline DecodeResult mwpm_decode(const HeraldOverlay& overlay,
                                std::span<const std::uint8_t> detector_bits) {
  return mwpm_decode(*overlay.graph, overlay.weights, detector_bits);
}

// Only the CSS family acting on the measured observable decides logical
// success: X errors flip a Z-basis memory and are caught by Z-type checks.
inline CheckKind observable_family(Basis basis) {
  return basis == Basis::Z ? CheckKind::Z : CheckKind::X;
}

struct DecodeOptions {
  bool herald_aware = true;
  int workers = 0;
};

struct LogicalErrorRate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t shots = 0;
  std::int64_t errors = 0;
};

// Samples `shots` shots and decodes the observable family; the estimate is
// the fraction of shots whose predicted flip disagrees with the sampled
// observable. Deterministic for fixed (circuit, seed) at any worker count.
inline LogicalErrorRate logical_error_rate(const SyndromeCircuit& c,
                                           std::int64_t shots, std::uint64_t seed,
                                           const DecodeOptions& options = {}) {
  if (shots < 1)
    throw std::invalid_argument("logical_error_rate: shots must be >= 1");
  const auto mechanisms = derive_error_model(c);
  const MatchingGraph graph = build_base_graph(
      c, mechanisms, observable_family(c.basis), !options.herald_aware);

  std::atomic<std::int64_t> errors{0};
  std::atomic<std::int64_t> next{0};
  const int workers = resolve_workers(options.workers);
  constexpr std::int64_t kChunk = 128;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      FrameSampler sampler(c);
      std::vector<double> weights(graph.edges.size());
      std::int64_t local_errors = 0;
      while (true) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= shots) break;
        const std::int64_t end = std::min(shots, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
          Rng rng = shot_rng(seed, static_cast<std::uint64_t>(i));
          const ShotRecord& record = sampler.sample(rng);
          for (std::size_t e = 0; e < graph.edges.size(); ++e)
            weights[e] = graph.edges[e].weight;
          if (options.herald_aware)
            for (std::size_t h = 0; h < record.heralds.size(); ++h)
              if (record.heralds[h])
                for (int e : graph.herald_edges[h])
                  weights[static_cast<std::size_t>(e)] = 0.0;
          const DecodeResult decoded =
              mwpm_decode(graph, weights, record.detectors);
          if (decoded.observable_flip != (record.observable != 0)) ++local_errors;
        }
      }
      errors.fetch_add(local_errors);
    });
  }
  for (auto& t : pool) t.join();

  LogicalErrorRate out;
  out.shots = shots;
  out.errors = errors.load();
  out.estimate = static_cast<double>(out.errors) / static_cast<double>(shots);
  out.std_error =
      std::sqrt(std::max(out.estimate * (1.0 - out.estimate), 1.0 / shots) /
                static_cast<double>(shots));
  return out;
}

struct PairedDecodeComparison {
  std::int64_t shots = 0;
  std::int64_t aware_errors = 0;
  std::int64_t blind_errors = 0;
  std::int64_t disagreements = 0;  // shots where exactly one decoder errs
  double improvement = 0.0;        // blind rate - aware rate
  double improvement_std_error = 0.0;
};

// Decodes the same shots with and without herald information; the paired
// design makes the accuracy comparison tight.
inline PairedDecodeComparison compare_herald_decoding(const SyndromeCircuit& c,
                                                      std::int64_t shots,
                                                      std::uint64_t seed,
                                                      int workers = 0) {
  const auto mechanisms = derive_error_model(c);
  const MatchingGraph aware_graph =
      build_base_graph(c, mechanisms, observable_family(c.basis), false);
  const MatchingGraph blind_graph =
      build_base_graph(c, mechanisms, observable_family(c.basis), true);

  std::atomic<std::int64_t> aware_errors{0}, blind_errors{0}, both_errors{0};
  std::atomic<std::int64_t> next{0};
  constexpr std::int64_t kChunk = 128;
  std::vector<std::thread> pool;
  for (int w = 0; w < resolve_workers(workers); ++w) {
    pool.emplace_back([&]() {
      FrameSampler sampler(c);
      std::vector<double> weights(aware_graph.edges.size());
      std::int64_t la = 0, lb = 0, lboth = 0;
      while (true) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= shots) break;
        const std::int64_t end = std::min(shots, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
          Rng rng = shot_rng(seed, static_cast<std::uint64_t>(i));
          const ShotRecord& record = sampler.sample(rng);
          const bool actual = record.observable != 0;

          for (std::size_t e = 0; e < aware_graph.edges.size(); ++e)
            weights[e] = aware_graph.edges[e].weight;
          for (std::size_t h = 0; h < record.heralds.size(); ++h)
            if (record.heralds[h])
              for (int e : aware_graph.herald_edges[h])
                weights[static_cast<std::size_t>(e)] = 0.0;
          const bool aware_err =
              mwpm_decode(aware_graph, weights, record.detectors).observable_flip !=
              actual;
          const bool blind_err =
              mwpm_decode(blind_graph, record.detectors).observable_flip != actual;
          la += aware_err;
          lb += blind_err;
          lboth += aware_err && blind_err;
        }
      }
      aware_errors.fetch_add(la);
      blind_errors.fetch_add(lb);
      both_errors.fetch_add(lboth);
    });
  }
  for (auto& t : pool) t.join();

  PairedDecodeComparison out;
  out.shots = shots;
  out.aware_errors = aware_errors.load();
  out.blind_errors = blind_errors.load();
  out.disagreements = out.aware_errors + out.blind_errors - 2 * both_errors.load();
  const double n = static_cast<double>(shots);
  out.improvement = (out.blind_errors - out.aware_errors) / n;
  // Paired variance of (blind - aware) indicator difference.
  const double mean_sq = out.disagreements / n;
  const double var = std::max(mean_sq - out.improvement * out.improvement, 0.0);
  out.improvement_std_error = std::sqrt(var / n);
  return out;
}

}  // namespace spoqc
