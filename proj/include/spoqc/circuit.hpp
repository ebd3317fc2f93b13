#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoqc/channels.hpp"
#include "spoqc/pauli.hpp"
#include "spoqc/rates.hpp"
#include "spoqc/tanner.hpp"

namespace spoqc {

enum class Basis : std::uint8_t { Z, X };

inline char basis_char(Basis b) { return b == Basis::Z ? 'Z' : 'X'; }

enum class OpKind : std::uint8_t {
  ResetZ,
  Hadamard,
  HadamardYZ,
  RusCZ,
  PauliNoise1,
  PauliNoise2,
  MeasureZ,
  Detector,
  ObservableInclude,
};

// One timed circuit operation. Fields are interpreted per kind:
//   ResetZ/Hadamard/HadamardYZ: qubit a
//   RusCZ: data qubit a, check qubit b, edge label, herald site, layer
//   PauliNoise1: qubit a, channel -> channels1
//   PauliNoise2: qubits a,b, channel -> channels2, optional herald site
//   MeasureZ: qubit a, record index
//   Detector / ObservableInclude: records [rec_begin, rec_end) in the pool
struct CircuitOp {
  OpKind kind;
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::int32_t record = -1;
  std::int32_t herald = -1;
  std::int32_t channel = -1;
  std::int32_t rec_begin = 0;
  std::int32_t rec_end = 0;
  EdgeLabel edge = EdgeLabel::Z;
  std::int8_t layer = -1;
};

struct HeraldSite {
  std::int32_t id;
  double failure_prob;
};

struct DetectorInfo {
  int check_vertex;  // -1 for synthetic detectors
  CheckKind family;
  std::array<int, 3> coords;  // (x, y, round)
};

// Noise settings of a compiled memory experiment. `t_rus_over_t2` is the
// duration of one full RUS gate (k trials) over T2; it is the dephasing
// time applied to every qubit before each of the four CZ layers.
struct CircuitNoise {
  double gate_failure_prob = 0.0;  // p_F: herald fires -> full dephasing
  double distinguishability = 0.0; // D: success-case channel strength
  double t_rus_over_t2 = 0.0;
  double t_rus_over_t1 = 0.0;      // 0 keeps T1 infinite

  void validate() const {
    if (!(gate_failure_prob >= 0.0 && gate_failure_prob <= 1.0))
      throw std::domain_error("CircuitNoise: p_F outside [0, 1]");
    if (!(distinguishability >= 0.0 && distinguishability <= 1.0))
      throw std::domain_error("CircuitNoise: D outside [0, 1]");
    if (!(t_rus_over_t2 >= 0.0) || !(t_rus_over_t1 >= 0.0))
      throw std::domain_error("CircuitNoise: negative time ratio");
  }

  // Derives p_F and the gate duration from per-gate physical parameters.
  static CircuitNoise from_rus_params(const RusParams& params) {
    params.validate();
    if (params.max_trials == kUnboundedTrials)
      throw std::domain_error("CircuitNoise: circuit gates need a finite trial budget");
    CircuitNoise noise;
    noise.gate_failure_prob =
        1.0 - hrus_rates(params.eta_a, params.eta_b, params.max_trials,
                         params.photons_per_trial)
                  .success;
    noise.distinguishability = params.distinguishability;
    noise.t_rus_over_t2 =
        static_cast<double>(params.max_trials) * params.t_trial_over_t2;
    return noise;
  }
};

// Idle-dephasing budget per entangling step, as a fraction of the full
// gate duration t_RUS. At 1/2, a bulk qubit accumulates the same marginal
// dephasing per cycle from decoherence at t_RUS/T2 = x as it does from
// distinguishability at D = x (four steps of x/4 versus four gates at
// marginal x/2 split over two CSS families), which makes the two
// thresholds commensurate.
inline constexpr double kLayerDephasingFraction = 0.5;

struct SyndromeCircuit {
  std::vector<CircuitOp> ops;
  int qubit_count = 0;
  int rounds = 0;
  Basis basis = Basis::Z;
  int record_count = 0;
  int detector_count = 0;
  std::vector<HeraldSite> herald_sites;
  std::vector<std::int32_t> record_pool;  // detector/observable payloads
  std::vector<DetectorInfo> detectors;
  std::vector<std::int32_t> observable_records;
  std::vector<PauliChannel1> channels1;
  std::vector<PauliChannel2> channels2;
  CircuitNoise noise;

  int herald_count() const { return static_cast<int>(herald_sites.size()); }
};

struct ScheduleLayer {
  int index;  // 1..4
  std::vector<TannerGraph::Edge> edges;
};

namespace detail {

enum Direction { kNW = 0, kNE = 1, kSW = 2, kSE = 3 };

inline Direction edge_direction(const TannerGraph& g, const TannerGraph::Edge& e) {
  const Coord dc = g.coords[static_cast<std::size_t>(e.data)];
  const Coord cc = g.coords[static_cast<std::size_t>(e.check)];
  const int dx = dc.x - cc.x, dy = dc.y - cc.y;
  if (std::abs(dx) != 1 || std::abs(dy) != 1)
    throw std::invalid_argument("cz_schedule: ambiguous edge direction");
  // y grows southward.
  if (dy < 0) return dx < 0 ? kNW : kNE;
  return dx < 0 ? kSW : kSE;
}

}  // namespace detail

// Four-step CZ schedule: X-type checks run SW, NW, SE, NE; Z-type checks
// run SW, SE, NW, NE. The two orderings interleave so that each layer is
// vertex-disjoint on the rotated lattice.
inline std::array<ScheduleLayer, 4> cz_schedule(const TannerGraph& g) {
  if (!g.has_coords())
    throw std::invalid_argument("cz_schedule: graph has no coordinates");
  static constexpr detail::Direction x_order[4] = {detail::kSW, detail::kNW,
                                                   detail::kSE, detail::kNE};
  static constexpr detail::Direction z_order[4] = {detail::kSW, detail::kSE,
                                                   detail::kNW, detail::kNE};
  std::array<ScheduleLayer, 4> layers;
  for (int l = 0; l < 4; ++l) layers[static_cast<std::size_t>(l)].index = l + 1;

  // Deterministic edge order within a layer: by check id.
  std::vector<TannerGraph::Edge> edges = g.edges;
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.check, a.data) < std::tie(b.check, b.data);
  });
  for (const auto& e : edges) {
    const CheckKind kind = g.check_at(e.check).kind;
    if (kind == CheckKind::Mixed)
      throw std::invalid_argument("cz_schedule: mixed check unsupported");
    const detail::Direction dir = detail::edge_direction(g, e);
    const auto& order = (kind == CheckKind::X) ? x_order : z_order;
    for (int l = 0; l < 4; ++l)
      if (order[l] == dir) layers[static_cast<std::size_t>(l)].edges.push_back(e);
  }

  for (const auto& layer : layers) {
    std::set<int> used;
    for (const auto& e : layer.edges)
      if (!used.insert(e.data).second || !used.insert(e.check).second)
        throw std::logic_error("cz_schedule: layer is not vertex-disjoint");
  }
  return layers;
}

// Compiles a memory experiment on a CSS Tanner graph with planar
// coordinates. Structure per round: check reset + Hadamard, four CZ layers
// each preceded by decoherence on every qubit, check Hadamard + measure,
// then the round's detectors. Single-qubit gates, resets and measurements
// are noiseless.
inline SyndromeCircuit build_memory_experiment_on(const RotatedSurfaceCode& code,
                                                  Basis basis, int rounds,
                                                  const CircuitNoise& noise) {
  noise.validate();
  if (rounds < 1)
    throw std::invalid_argument("build_memory_experiment: rounds must be >= 1");
  const TannerGraph& g = code.graph;
  for (const auto& e : g.edges)
    if (e.label == EdgeLabel::Y)
      throw std::invalid_argument("build_memory_experiment: non-CSS graph");
  for (const auto& c : g.checks)
    if (c.kind == CheckKind::Mixed)
      throw std::invalid_argument("build_memory_experiment: non-CSS graph");

  const auto layers = cz_schedule(g);

  SyndromeCircuit circuit;
  circuit.qubit_count = g.vertex_count();
  circuit.rounds = rounds;
  circuit.basis = basis;
  circuit.noise = noise;

  const PauliChannel1 dec = decoherence_channel(
      kLayerDephasingFraction * noise.t_rus_over_t2,
      kLayerDephasingFraction * noise.t_rus_over_t1);
  const bool has_decoherence = !dec.is_identity();
  circuit.channels1.push_back(dec);
  circuit.channels2.push_back(success_channel(noise.distinguishability));

  const CheckKind family = (basis == Basis::Z) ? CheckKind::Z : CheckKind::X;

  auto op = [&](CircuitOp o) { circuit.ops.push_back(o); };
  auto reset = [&](int q) { op({.kind = OpKind::ResetZ, .a = q}); };
  auto hadamard = [&](int q) { op({.kind = OpKind::Hadamard, .a = q}); };
  auto measure = [&](int q) {
    op({.kind = OpKind::MeasureZ, .a = q, .record = circuit.record_count});
    return circuit.record_count++;
  };

  // rec(check, round) bookkeeping.
  std::map<std::pair<int, int>, int> check_records;
  std::map<int, int> data_records;

  for (int q = 0; q < g.data_count; ++q) {
    reset(q);
    if (basis == Basis::X) hadamard(q);
  }

  for (int round = 1; round <= rounds; ++round) {
    for (const auto& c : g.checks) {
      reset(c.id);
      hadamard(c.id);
    }
    for (const auto& layer : layers) {
      if (has_decoherence)
        for (int q = 0; q < circuit.qubit_count; ++q)
          op({.kind = OpKind::PauliNoise1, .a = q, .channel = 0});
      for (const auto& e : layer.edges) {
        const std::int32_t herald = static_cast<std::int32_t>(circuit.herald_sites.size());
        circuit.herald_sites.push_back({herald, noise.gate_failure_prob});
        if (e.label == EdgeLabel::X) hadamard(e.data);
        op({.kind = OpKind::RusCZ,
            .a = e.data,
            .b = e.check,
            .herald = herald,
            .edge = e.label,
            .layer = static_cast<std::int8_t>(layer.index)});
        op({.kind = OpKind::PauliNoise2,
            .a = e.data,
            .b = e.check,
            .herald = herald,
            .channel = 0,
            .edge = e.label});
        if (e.label == EdgeLabel::X) hadamard(e.data);
      }
    }
    for (const auto& c : g.checks) {
      hadamard(c.id);
      check_records[{c.id, round}] = measure(c.id);
    }

    // Detectors: first round compares the basis-matching checks against
    // the stabilized initial state; later rounds compare consecutive
    // outcomes of every check.
    auto emit_detector = [&](const std::vector<int>& recs, int check_vertex,
                             CheckKind kind, int round_coord) {
      CircuitOp o{.kind = OpKind::Detector};
      o.rec_begin = static_cast<std::int32_t>(circuit.record_pool.size());
      for (int r : recs) circuit.record_pool.push_back(r);
      o.rec_end = static_cast<std::int32_t>(circuit.record_pool.size());
      circuit.ops.push_back(o);
      const Coord c = g.coords[static_cast<std::size_t>(check_vertex)];
      circuit.detectors.push_back({check_vertex, kind, {c.x, c.y, round_coord}});
      ++circuit.detector_count;
    };
    for (const auto& c : g.checks) {
      if (round == 1) {
        if (c.kind == family)
          emit_detector({check_records[{c.id, 1}]}, c.id, c.kind, 1);
      } else {
        emit_detector({check_records[{c.id, round - 1}], check_records[{c.id, round}]},
                      c.id, c.kind, round);
      }
    }
  }

  // Final data readout in the memory basis.
  for (int q = 0; q < g.data_count; ++q) {
    if (basis == Basis::X) hadamard(q);
    data_records[q] = measure(q);
  }
  for (const auto& c : g.checks) {
    if (c.kind != family) continue;
    std::vector<int> recs{check_records[{c.id, rounds}]};
    for (const auto& e : g.edges)
      if (e.check == c.id) recs.push_back(data_records[e.data]);
    CircuitOp o{.kind = OpKind::Detector};
    o.rec_begin = static_cast<std::int32_t>(circuit.record_pool.size());
    for (int r : recs) circuit.record_pool.push_back(r);
    o.rec_end = static_cast<std::int32_t>(circuit.record_pool.size());
    circuit.ops.push_back(o);
    const Coord cc = g.coords[static_cast<std::size_t>(c.id)];
    circuit.detectors.push_back({c.id, c.kind, {cc.x, cc.y, rounds + 1}});
    ++circuit.detector_count;
  }

  const auto& support =
      (basis == Basis::Z) ? code.logicals.z_support : code.logicals.x_support;
  CircuitOp obs{.kind = OpKind::ObservableInclude};
  obs.rec_begin = static_cast<std::int32_t>(circuit.record_pool.size());
  for (int q : support) {
    circuit.record_pool.push_back(data_records[q]);
    circuit.observable_records.push_back(data_records[q]);
  }
  obs.rec_end = static_cast<std::int32_t>(circuit.record_pool.size());
  circuit.ops.push_back(obs);

  return circuit;
}

inline SyndromeCircuit build_memory_experiment(int distance, Basis basis,
                                               int rounds,
                                               const CircuitNoise& noise) {
  return build_memory_experiment_on(build_rotated_surface_code(distance), basis,
                                    rounds, noise);
}

inline SyndromeCircuit build_memory_experiment(int distance, Basis basis,
                                               const CircuitNoise& noise) {
  return build_memory_experiment(distance, basis, distance, noise);
}

// --- Text serialization ---------------------------------------------------

inline void write_circuit(std::ostream& out, const SyndromeCircuit& c) {
  out << "spoqc-circuit v1\n";
  out << "qubits " << c.qubit_count << "\n";
  out << "rounds " << c.rounds << "\n";
  out << "basis " << basis_char(c.basis) << "\n";
  out << "noise pf=" << c.noise.gate_failure_prob
      << " d=" << c.noise.distinguishability
      << " t2=" << c.noise.t_rus_over_t2 << " t1=" << c.noise.t_rus_over_t1
      << "\n";
  int detector = 0;
  for (const auto& o : c.ops) {
    switch (o.kind) {
      case OpKind::ResetZ: out << "R " << o.a << "\n"; break;
      case OpKind::Hadamard: out << "H " << o.a << "\n"; break;
      case OpKind::HadamardYZ: out << "HYZ " << o.a << "\n"; break;
      case OpKind::RusCZ:
        out << "RUSCZ " << o.a << " " << o.b << " edge="
            << edge_label_char(o.edge) << " herald=" << o.herald
            << " layer=" << static_cast<int>(o.layer) << "\n";
        break;
      case OpKind::PauliNoise1:
        out << "NOISE1 " << o.a << " chan=" << o.channel << "\n";
        break;
      case OpKind::PauliNoise2:
        out << "NOISE2 " << o.a << " " << o.b << " chan=" << o.channel
            << " herald=" << o.herald << "\n";
        break;
      case OpKind::MeasureZ: out << "M " << o.a << " rec=" << o.record << "\n"; break;
      case OpKind::Detector: {
        const auto& info = c.detectors[static_cast<std::size_t>(detector++)];
        out << "DETECTOR (" << info.coords[0] << "," << info.coords[1] << ","
            << info.coords[2] << ")";
        for (int i = o.rec_begin; i < o.rec_end; ++i)
          out << " " << c.record_pool[static_cast<std::size_t>(i)];
        out << "\n";
        break;
      }
      case OpKind::ObservableInclude: {
        out << "OBSERVABLE";
        for (int i = o.rec_begin; i < o.rec_end; ++i)
          out << " " << c.record_pool[static_cast<std::size_t>(i)];
        out << "\n";
        break;
      }
    }
  }
}

inline std::string circuit_to_string(const SyndromeCircuit& c) {
  std::ostringstream out;
  write_circuit(out, c);
  return out.str();
}

}  // namespace spoqc
