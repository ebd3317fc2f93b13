#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace spoqc {

enum class CheckKind : std::uint8_t { X, Z, Mixed };
enum class EdgeLabel : std::uint8_t { X, Y, Z };

inline char check_kind_char(CheckKind k) { return "XZM"[static_cast<int>(k)]; }
inline char edge_label_char(EdgeLabel l) { return "XYZ"[static_cast<int>(l)]; }

struct Coord {
  int x = 0, y = 0;
  bool operator==(const Coord&) const = default;
};

// Bipartite data/check graph with Pauli-typed edges. Vertex ids are dense:
// data qubits take [0, data_count), checks take [data_count, vertex_count).
struct TannerGraph {
  struct Check {
    int id;  // dense vertex id
    CheckKind kind;
  };
  struct Edge {
    int data;
    int check;
    EdgeLabel label;
  };

  int data_count = 0;
  std::vector<Check> checks;
  std::vector<Edge> edges;
  // Planar coordinates, present for geometric codes; indexed by vertex id.
  std::vector<Coord> coords;

  int check_count() const { return static_cast<int>(checks.size()); }
  int vertex_count() const { return data_count + check_count(); }
  bool has_coords() const {
    return static_cast<int>(coords.size()) == vertex_count();
  }

  bool is_data(int vertex) const { return vertex >= 0 && vertex < data_count; }

  const Check& check_at(int vertex) const {
    return checks.at(static_cast<std::size_t>(vertex - data_count));
  }

  // Structural invariants: bipartiteness, id ranges, duplicate (data,check)
  // pairs, and per-check label purity for checks declared X or Z.
  void validate() const {
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (checks[i].id != data_count + static_cast<int>(i))
        throw std::invalid_argument("TannerGraph: check ids must be dense, data first");
    }
    for (const Edge& e : edges) {
      if (!is_data(e.data))
        throw std::invalid_argument("TannerGraph: edge data endpoint is not a data vertex");
      if (e.check < data_count || e.check >= vertex_count())
        throw std::invalid_argument("TannerGraph: edge check endpoint is not a check vertex");
      if (!seen.insert({e.data, e.check}).second)
        throw std::invalid_argument("TannerGraph: duplicate (data, check) edge");
      const CheckKind kind = check_at(e.check).kind;
      if (kind == CheckKind::X && e.label != EdgeLabel::X)
        throw std::invalid_argument("TannerGraph: X-type check with non-X edge");
      if (kind == CheckKind::Z && e.label != EdgeLabel::Z)
        throw std::invalid_argument("TannerGraph: Z-type check with non-Z edge");
    }
  }
};

struct CodeParams {
  int n = 0;
  int k = 0;
  int d = 0;

  void validate() const {
    if (d < 1 || k < 1 || n < k)
      throw std::invalid_argument("CodeParams: require n >= k >= 1, d >= 1");
  }
};

struct LogicalOperators {
  std::vector<int> z_support;  // data ids
  std::vector<int> x_support;
};

struct RotatedSurfaceCode {
  TannerGraph graph;
  CodeParams params;
  LogicalOperators logicals;
};

// Rotated surface code layout. Data qubits sit on odd-odd coordinates of a
// (2d+1)x(2d+1) grid, check vertices on even-even plaquette centers with a
// checkerboard kind assignment; X-type half-plaquettes close the left/right
// boundaries and Z-type ones the top/bottom. The Z logical is the leftmost
// data column (x = 1), the X logical the top data row (y = 1).
inline RotatedSurfaceCode build_rotated_surface_code(int d) {
  if (d < 3 || d % 2 == 0)
    throw std::invalid_argument("build_rotated_surface_code: d must be odd and >= 3");

  RotatedSurfaceCode code;
  TannerGraph& g = code.graph;
  g.data_count = d * d;
  g.coords.resize(static_cast<std::size_t>(g.data_count));

  const auto data_id = [d](int i, int j) { return j * d + i; };  // i: column, j: row
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      g.coords[static_cast<std::size_t>(data_id(i, j))] = {2 * i + 1, 2 * j + 1};

  for (int cj = 0; cj <= d; ++cj) {
    for (int ci = 0; ci <= d; ++ci) {
      const bool x_kind = ((ci + cj) % 2) == 1;
      const bool bulk = ci >= 1 && ci <= d - 1 && cj >= 1 && cj <= d - 1;
      const bool left_right = (ci == 0 || ci == d) && cj >= 1 && cj <= d - 1;
      const bool top_bottom = (cj == 0 || cj == d) && ci >= 1 && ci <= d - 1;
      const bool keep = bulk || (left_right && x_kind) || (top_bottom && !x_kind);
      if (!keep) continue;

      const int check_id = g.vertex_count();
      g.checks.push_back({check_id, x_kind ? CheckKind::X : CheckKind::Z});
      g.coords.push_back({2 * ci, 2 * cj});
      for (int dj : {-1, 1}) {
        for (int di : {-1, 1}) {
          // Data neighbor at coordinate (2*ci + di, 2*cj + dj).
          const int gx = (di == 1) ? ci : ci - 1;
          const int gy = (dj == 1) ? cj : cj - 1;
          if (gx < 0 || gx >= d || gy < 0 || gy >= d) continue;
          g.edges.push_back({data_id(gx, gy), check_id,
                             x_kind ? EdgeLabel::X : EdgeLabel::Z});
        }
      }
    }
  }
  g.validate();

  code.params = {d * d, 1, d};
  for (int j = 0; j < d; ++j) code.logicals.z_support.push_back(data_id(0, j));
  for (int i = 0; i < d; ++i) code.logicals.x_support.push_back(data_id(i, 0));
  return code;
}

struct LdpcReport {
  int max_degree = 0;
  std::vector<std::pair<int, int>> over_degree;  // (vertex, degree)
  std::vector<int> non_css_checks;
  std::vector<int> disconnected_data;

  bool passed() const {
    return over_degree.empty() && non_css_checks.empty() &&
           disconnected_data.empty();
  }
};

inline std::vector<int> vertex_degrees(const TannerGraph& g) {
  std::vector<int> degree(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& e : g.edges) {
    ++degree[static_cast<std::size_t>(e.data)];
    ++degree[static_cast<std::size_t>(e.check)];
  }
  return degree;
}

inline LdpcReport validate_ldpc(const TannerGraph& g, int max_degree) {
  LdpcReport report;
  report.max_degree = max_degree;
  const auto degree = vertex_degrees(g);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (degree[static_cast<std::size_t>(v)] > max_degree)
      report.over_degree.push_back({v, degree[static_cast<std::size_t>(v)]});

  std::vector<std::set<EdgeLabel>> labels(g.checks.size());
  for (const auto& e : g.edges)
    labels[static_cast<std::size_t>(e.check - g.data_count)].insert(e.label);
  for (std::size_t c = 0; c < g.checks.size(); ++c) {
    const bool mixed_kind = g.checks[c].kind == CheckKind::Mixed;
    if (labels[c].size() > 1 || mixed_kind ||
        (labels[c].size() == 1 && *labels[c].begin() == EdgeLabel::Y))
      report.non_css_checks.push_back(g.checks[c].id);
  }
  for (int q = 0; q < g.data_count; ++q)
    if (degree[static_cast<std::size_t>(q)] == 0)
      report.disconnected_data.push_back(q);
  return report;
}

// Splits a CSS graph into its X and Z classical Tanner subgraphs. Both keep
// every data vertex; check ids are re-densified per subgraph.
inline std::pair<TannerGraph, TannerGraph> css_subgraphs(const TannerGraph& g) {
  for (const auto& e : g.edges)
    if (e.label == EdgeLabel::Y)
      throw std::invalid_argument("css_subgraphs: Y-labeled edge in graph");
  for (const auto& c : g.checks)
    if (c.kind == CheckKind::Mixed)
      throw std::invalid_argument("css_subgraphs: mixed check in graph");

  TannerGraph gx, gz;
  gx.data_count = gz.data_count = g.data_count;
  std::vector<int> remap(g.checks.size(), -1);
  for (const auto& c : g.checks) {
    TannerGraph& target = (c.kind == CheckKind::X) ? gx : gz;
    remap[static_cast<std::size_t>(c.id - g.data_count)] = target.vertex_count();
    target.checks.push_back({target.vertex_count(), c.kind});
  }
  for (const auto& e : g.edges) {
    const auto kind = g.check_at(e.check).kind;
    TannerGraph& target = (kind == CheckKind::X) ? gx : gz;
    target.edges.push_back(
        {e.data, remap[static_cast<std::size_t>(e.check - g.data_count)], e.label});
  }
  gx.validate();
  gz.validate();
  return {std::move(gx), std::move(gz)};
}

// Per-vertex fanout; the maximum over vertices is the photon-router output
// count the layout needs.
inline std::vector<int> router_fanout(const TannerGraph& g) {
  return vertex_degrees(g);
}

inline int max_router_fanout(const TannerGraph& g) {
  const auto deg = router_fanout(g);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

struct LayoutParams {
  double module_volume = 1.0;      // V, length^3
  double attenuation_length = 1.0; // L_att
  int dimension = 3;               // D in {1,2,3}
  std::int64_t qubit_count = 1;    // N
  std::int64_t trials = 1;         // k
};

struct LayoutOverhead {
  double loss_estimate;     // probability
  double latency_estimate;  // in units of V^(1/3) / c
};

// Channel-length scaling for a D-dimensional packing of N modules: photon
// paths grow like N^(1/D) * V^(1/3), so loss approaches 1 - exp(-path/L_att)
// and per-gate latency grows with the k round trips.
inline LayoutOverhead layout_overhead(const LayoutParams& p) {
  if (!(p.module_volume > 0.0) || !(p.attenuation_length > 0.0) ||
      p.qubit_count <= 0 || p.trials <= 0)
    throw std::domain_error("layout_overhead: parameters must be positive");
  if (p.dimension < 1 || p.dimension > 3)
    throw std::domain_error("layout_overhead: dimension must be 1, 2 or 3");

  const double span = std::pow(static_cast<double>(p.qubit_count),
                               1.0 / static_cast<double>(p.dimension));
  const double path = span * std::cbrt(p.module_volume) / p.attenuation_length;
  return {1.0 - std::exp(-path), static_cast<double>(p.trials) * span};
}

inline nlohmann::json to_json(const TannerGraph& g) {
  nlohmann::json j;
  j["data"] = nlohmann::json::array();
  for (int q = 0; q < g.data_count; ++q) j["data"].push_back(q);
  j["checks"] = nlohmann::json::array();
  for (const auto& c : g.checks)
    j["checks"].push_back({{"id", c.id}, {"kind", std::string(1, check_kind_char(c.kind))}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({e.data, e.check, std::string(1, edge_label_char(e.label))});
  if (g.has_coords()) {
    j["coords"] = nlohmann::json::array();
    for (const auto& c : g.coords) j["coords"].push_back({c.x, c.y});
  }
  return j;
}

inline TannerGraph tanner_from_json(const nlohmann::json& j) {
  TannerGraph g;
  g.data_count = static_cast<int>(j.at("data").size());
  for (const auto& c : j.at("checks")) {
    const std::string kind = c.at("kind").get<std::string>();
    CheckKind k = CheckKind::Mixed;
    if (kind == "X") k = CheckKind::X;
    else if (kind == "Z") k = CheckKind::Z;
    else if (kind != "M")
      throw std::invalid_argument("tanner_from_json: unknown check kind " + kind);
    g.checks.push_back({c.at("id").get<int>(), k});
  }
  for (const auto& e : j.at("edges")) {
    const std::string label = e.at(2).get<std::string>();
    EdgeLabel l;
    if (label == "X") l = EdgeLabel::X;
    else if (label == "Y") l = EdgeLabel::Y;
    else if (label == "Z") l = EdgeLabel::Z;
    else
      throw std::invalid_argument("tanner_from_json: unknown edge label " + label);
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), l});
  }
  if (j.contains("coords"))
    for (const auto& c : j.at("coords"))
      g.coords.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  g.validate();
  return g;
}

}  // namespace spoqc
