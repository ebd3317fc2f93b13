#include "spoqc/tanner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace spoqc {
namespace {

// Test-side support map: data id -> Pauli label, for one check or logical.
using Support = std::map<int, EdgeLabel>;

Support check_support(const TannerGraph& g, int check_id) {
  Support s;
  for (const auto& e : g.edges)
    if (e.check == check_id) s[e.data] = e.label;
  return s;
}

Support logical_support(const std::vector<int>& qubits, EdgeLabel label) {
  Support s;
  for (int q : qubits) s[q] = label;
  return s;
}

// Pauli operators commute iff they anticommute on an even number of qubits.
bool commutes(const Support& a, const Support& b) {
  int anti = 0;
  for (const auto& [q, label] : a) {
    auto it = b.find(q);
    if (it != b.end() && it->second != label) ++anti;
  }
  return anti % 2 == 0;
}

TEST(RotatedSurfaceCode, D3Counts) {
  const auto code = build_rotated_surface_code(3);
  EXPECT_EQ(code.graph.data_count, 9);
  EXPECT_EQ(code.graph.check_count(), 8);
  int x_checks = 0, z_checks = 0;
  for (const auto& c : code.graph.checks)
    (c.kind == CheckKind::X ? x_checks : z_checks)++;
  EXPECT_EQ(x_checks, 4);
  EXPECT_EQ(z_checks, 4);
  EXPECT_EQ(max_router_fanout(code.graph), 4);
  EXPECT_EQ(code.params.n, 9);
  EXPECT_EQ(code.params.k, 1);
  EXPECT_EQ(code.params.d, 3);
}

TEST(RotatedSurfaceCode, LogicalSupports) {
  for (int d : {3, 5, 7}) {
    const auto code = build_rotated_surface_code(d);
    EXPECT_EQ(static_cast<int>(code.logicals.z_support.size()), d);
    EXPECT_EQ(static_cast<int>(code.logicals.x_support.size()), d);
    std::set<int> zs(code.logicals.z_support.begin(), code.logicals.z_support.end());
    int overlap = 0;
    for (int q : code.logicals.x_support) overlap += zs.count(q);
    EXPECT_EQ(overlap, 1) << "d=" << d;
  }
}

// Independent recount of the d = 5 lattice from the edge list alone.
TEST(RotatedSurfaceCode, D5Enumeration) {
  const auto code = build_rotated_surface_code(5);
  EXPECT_EQ(code.graph.data_count, 25);
  EXPECT_EQ(code.graph.check_count(), 24);
  std::map<int, int> degree;
  for (const auto& e : code.graph.edges) {
    degree[e.data]++;
    degree[e.check]++;
  }
  for (const auto& [v, deg] : degree) EXPECT_LE(deg, 4) << "vertex " << v;
}

TEST(RotatedSurfaceCode, EdgeCountMatchesLattice) {
  for (int d : {3, 5, 7}) {
    const auto code = build_rotated_surface_code(d);
    // Sum of check weights: (d-1)^2 bulk checks of weight 4 plus 2(d-1)
    // boundary checks of weight 2.
    const int expected = 4 * (d - 1) * (d - 1) + 4 * (d - 1);
    EXPECT_EQ(static_cast<int>(code.graph.edges.size()), expected);
    int x_edges = 0;
    for (const auto& e : code.graph.edges)
      if (e.label == EdgeLabel::X) ++x_edges;
    EXPECT_EQ(x_edges, expected / 2);
  }
}

TEST(RotatedSurfaceCode, RejectsBadDistance) {
  EXPECT_THROW(build_rotated_surface_code(2), std::invalid_argument);
  EXPECT_THROW(build_rotated_surface_code(4), std::invalid_argument);
  EXPECT_THROW(build_rotated_surface_code(1), std::invalid_argument);
}

TEST(RotatedSurfaceCode, StabilizersAndLogicalsCommute) {
  for (int d : {3, 5, 7, 9, 11, 13}) {
    const auto code = build_rotated_surface_code(d);
    const auto& g = code.graph;
    EXPECT_TRUE(validate_ldpc(g, 4).passed()) << "d=" << d;

    std::vector<Support> supports;
    for (const auto& c : g.checks) supports.push_back(check_support(g, c.id));
    for (std::size_t a = 0; a < supports.size(); ++a)
      for (std::size_t b = a + 1; b < supports.size(); ++b)
        ASSERT_TRUE(commutes(supports[a], supports[b]))
            << "d=" << d << " checks " << a << "," << b;

    const auto zl = logical_support(code.logicals.z_support, EdgeLabel::Z);
    const auto xl = logical_support(code.logicals.x_support, EdgeLabel::X);
    for (const auto& s : supports) {
      ASSERT_TRUE(commutes(s, zl)) << "d=" << d;
      ASSERT_TRUE(commutes(s, xl)) << "d=" << d;
    }
    EXPECT_FALSE(commutes(zl, xl));
  }
}

TEST(ValidateLdpc, EmptyGraphPassesVacuously) {
  TannerGraph g;
  EXPECT_TRUE(validate_ldpc(g, 4).passed());
}

TEST(ValidateLdpc, FlagsOverDegreeCheck) {
  TannerGraph g;
  g.data_count = 5;
  g.checks.push_back({5, CheckKind::X});
  for (int q = 0; q < 5; ++q) g.edges.push_back({q, 5, EdgeLabel::X});
  const auto report = validate_ldpc(g, 4);
  EXPECT_FALSE(report.passed());
  ASSERT_EQ(report.over_degree.size(), 1u);
  EXPECT_EQ(report.over_degree[0].first, 5);
  EXPECT_EQ(report.over_degree[0].second, 5);
  // Data vertices stay within budget, so only the check is listed.
  EXPECT_TRUE(report.non_css_checks.empty());
}

TEST(ValidateLdpc, FlagsDisconnectedData) {
  TannerGraph g;
  g.data_count = 2;
  g.checks.push_back({2, CheckKind::Z});
  g.edges.push_back({0, 2, EdgeLabel::Z});
  const auto report = validate_ldpc(g, 4);
  ASSERT_EQ(report.disconnected_data.size(), 1u);
  EXPECT_EQ(report.disconnected_data[0], 1);
}

TEST(CssSubgraphs, PartitionAndReunion) {
  const auto code = build_rotated_surface_code(3);
  const auto [gx, gz] = css_subgraphs(code.graph);
  EXPECT_EQ(gx.check_count(), 4);
  EXPECT_EQ(gz.check_count(), 4);
  EXPECT_EQ(gx.edges.size() + gz.edges.size(), code.graph.edges.size());

  // Map subgraph checks back to the originals (order is preserved) and
  // verify the union reproduces the original edge set exactly.
  std::vector<int> x_ids, z_ids;
  for (const auto& c : code.graph.checks)
    (c.kind == CheckKind::X ? x_ids : z_ids).push_back(c.id);
  std::set<std::tuple<int, int, int>> original, reunion;
  for (const auto& e : code.graph.edges)
    original.insert({e.data, e.check, static_cast<int>(e.label)});
  for (const auto& e : gx.edges)
    reunion.insert({e.data, x_ids[static_cast<std::size_t>(e.check - gx.data_count)],
                    static_cast<int>(e.label)});
  for (const auto& e : gz.edges)
    reunion.insert({e.data, z_ids[static_cast<std::size_t>(e.check - gz.data_count)],
                    static_cast<int>(e.label)});
  EXPECT_EQ(original, reunion);
}

TEST(CssSubgraphs, RejectsYEdges) {
  TannerGraph g;
  g.data_count = 1;
  g.checks.push_back({1, CheckKind::Mixed});
  g.edges.push_back({0, 1, EdgeLabel::Y});
  EXPECT_THROW(css_subgraphs(g), std::invalid_argument);
}

TEST(CssSubgraphs, ZOnlyGraphGivesEmptyX) {
  TannerGraph g;
  g.data_count = 2;
  g.checks.push_back({2, CheckKind::Z});
  g.edges.push_back({0, 2, EdgeLabel::Z});
  g.edges.push_back({1, 2, EdgeLabel::Z});
  const auto [gx, gz] = css_subgraphs(g);
  EXPECT_EQ(gx.check_count(), 0);
  EXPECT_EQ(gz.check_count(), 1);
}

TEST(RouterFanout, CornersAndBulk) {
  const auto code = build_rotated_surface_code(3);
  const auto deg = router_fanout(code.graph);
  // Corner data qubits: coordinates (1,1), (5,1), (1,5), (5,5).
  for (int q = 0; q < code.graph.data_count; ++q) {
    const auto c = code.graph.coords[static_cast<std::size_t>(q)];
    const bool corner = (c.x == 1 || c.x == 5) && (c.y == 1 || c.y == 5);
    if (corner) EXPECT_EQ(deg[static_cast<std::size_t>(q)], 2) << "qubit " << q;
  }
  // Center data qubit (3,3) touches all four adjacent checks.
  EXPECT_EQ(deg[4], 4);
}

TEST(RouterFanout, IsolatedVertexAndD5Max) {
  TannerGraph g;
  g.data_count = 1;
  EXPECT_EQ(router_fanout(g)[0], 0);
  EXPECT_EQ(max_router_fanout(build_rotated_surface_code(5).graph), 4);
}

TEST(LayoutOverhead, Examples) {
  LayoutParams p;
  p.module_volume = 1.0;
  p.attenuation_length = 1e12;
  p.dimension = 3;
  p.qubit_count = 1000;
  p.trials = 4;
  EXPECT_NEAR(layout_overhead(p).loss_estimate, 0.0, 1e-9);

  LayoutParams q{1.0, 1.0, 3, 1, 1};
  EXPECT_NEAR(layout_overhead(q).loss_estimate, 1.0 - std::exp(-1.0), 1e-12);

  LayoutParams r{2.0, 3.0, 2, 100, 5};
  const auto once = layout_overhead(r);
  r.trials = 10;
  EXPECT_NEAR(layout_overhead(r).latency_estimate, 2.0 * once.latency_estimate,
              1e-12);
}

TEST(LayoutOverhead, RejectsNonpositive) {
  EXPECT_THROW(layout_overhead({0.0, 1.0, 3, 1, 1}), std::domain_error);
  EXPECT_THROW(layout_overhead({1.0, -1.0, 3, 1, 1}), std::domain_error);
  EXPECT_THROW(layout_overhead({1.0, 1.0, 4, 1, 1}), std::domain_error);
  EXPECT_THROW(layout_overhead({1.0, 1.0, 3, 0, 1}), std::domain_error);
}

TEST(TannerJson, RoundTrip) {
  const auto code = build_rotated_surface_code(5);
  const auto j = to_json(code.graph);
  const auto g2 = tanner_from_json(j);
  EXPECT_EQ(g2.data_count, code.graph.data_count);
  ASSERT_EQ(g2.checks.size(), code.graph.checks.size());
  for (std::size_t i = 0; i < g2.checks.size(); ++i) {
    EXPECT_EQ(g2.checks[i].id, code.graph.checks[i].id);
    EXPECT_EQ(g2.checks[i].kind, code.graph.checks[i].kind);
  }
  ASSERT_EQ(g2.edges.size(), code.graph.edges.size());
  for (std::size_t i = 0; i < g2.edges.size(); ++i) {
    EXPECT_EQ(g2.edges[i].data, code.graph.edges[i].data);
    EXPECT_EQ(g2.edges[i].check, code.graph.edges[i].check);
    EXPECT_EQ(g2.edges[i].label, code.graph.edges[i].label);
  }
  EXPECT_EQ(g2.coords.size(), code.graph.coords.size());
}

TEST(TannerGraph, ValidateRejectsDuplicateEdge) {
  TannerGraph g;
  g.data_count = 1;
  g.checks.push_back({1, CheckKind::X});
  g.edges.push_back({0, 1, EdgeLabel::X});
  g.edges.push_back({0, 1, EdgeLabel::X});
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace spoqc
