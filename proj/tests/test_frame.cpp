#include "spoqc/frame.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "spoqc/channels.hpp"
#include "spoqc/circuit.hpp"
#include "support/dense_sim.hpp"

namespace spoqc {
namespace {

CircuitOp h_op(int q) { return {.kind = OpKind::Hadamard, .a = q}; }
CircuitOp cz_op(int a, int b) { return {.kind = OpKind::RusCZ, .a = a, .b = b}; }

TEST(Propagate, HadamardAndCzRules) {
  PauliFrame f(2);
  f.apply(0, Pauli::X);
  propagate(f, h_op(0));
  EXPECT_EQ(f.x_mask[0], 0);
  EXPECT_EQ(f.z_mask[0], 1);
  propagate(f, h_op(0));
  EXPECT_EQ(f.x_mask[0], 1);
  EXPECT_EQ(f.z_mask[0], 0);

  // CZ: X_a -> X_a Z_b.
  propagate(f, cz_op(0, 1));
  EXPECT_EQ(f.x_mask[0], 1);
  EXPECT_EQ(f.z_mask[1], 1);
  EXPECT_EQ(f.x_mask[1], 0);

  // CZ twice is the identity on frames.
  PauliFrame g(2);
  g.apply(0, Pauli::Y);
  g.apply(1, Pauli::X);
  PauliFrame before = g;
  propagate(g, cz_op(0, 1));
  propagate(g, cz_op(0, 1));
  EXPECT_EQ(g.x_mask, before.x_mask);
  EXPECT_EQ(g.z_mask, before.z_mask);
}

TEST(Propagate, HyzExchangesYAndZ) {
  PauliFrame f(1);
  f.apply(0, Pauli::Z);
  propagate(f, {.kind = OpKind::HadamardYZ, .a = 0});
  EXPECT_EQ(f.x_mask[0], 1);  // Z -> Y
  EXPECT_EQ(f.z_mask[0], 1);
  propagate(f, {.kind = OpKind::HadamardYZ, .a = 0});
  EXPECT_EQ(f.x_mask[0], 0);  // Y -> Z
  EXPECT_EQ(f.z_mask[0], 1);
}

// Toy circuit: data 0, check 1. Reset both, H check, decoherence, RUS CZ
// with gate noise, H check, measure check; one detector on that record.
SyndromeCircuit toy_circuit(const CircuitNoise& noise) {
  SyndromeCircuit c;
  c.qubit_count = 2;
  c.rounds = 1;
  c.basis = Basis::Z;
  c.noise = noise;
  c.channels1.push_back(decoherence_channel(noise.t_rus_over_t2, noise.t_rus_over_t1));
  c.channels2.push_back(success_channel(noise.distinguishability));
  c.herald_sites.push_back({0, noise.gate_failure_prob});

  auto add = [&](CircuitOp op) { c.ops.push_back(op); };
  add({.kind = OpKind::ResetZ, .a = 0});
  add({.kind = OpKind::ResetZ, .a = 1});
  add({.kind = OpKind::Hadamard, .a = 1});
  if (!c.channels1[0].is_identity()) {
    add({.kind = OpKind::PauliNoise1, .a = 0, .channel = 0});
    add({.kind = OpKind::PauliNoise1, .a = 1, .channel = 0});
  }
  add({.kind = OpKind::RusCZ, .a = 0, .b = 1, .herald = 0, .layer = 1});
  add({.kind = OpKind::PauliNoise2, .a = 0, .b = 1, .herald = 0, .channel = 0});
  add({.kind = OpKind::Hadamard, .a = 1});
  add({.kind = OpKind::MeasureZ, .a = 1, .record = 0});
  c.record_count = 1;
  CircuitOp det{.kind = OpKind::Detector};
  det.rec_begin = 0;
  det.rec_end = 1;
  c.record_pool.push_back(0);
  add(det);
  c.detectors.push_back({1, CheckKind::Z, {0, 0, 1}});
  c.detector_count = 1;
  CircuitOp obs{.kind = OpKind::ObservableInclude};
  obs.rec_begin = 1;
  obs.rec_end = 1;
  add(obs);
  return c;
}

TEST(SampleShot, ZeroNoiseAllZero) {
  const auto c = toy_circuit({});
  Rng rng(1);
  const auto r = sample_shot(c, rng);
  EXPECT_EQ(r.detectors[0], 0);
  EXPECT_EQ(r.observable, 0);
  EXPECT_EQ(r.heralds[0], 0);
}

TEST(SampleShot, CertainFailureHeraldsAndDephases) {
  CircuitNoise noise;
  noise.gate_failure_prob = 1.0;
  const auto c = toy_circuit(noise);
  const int shots = 100000;
  int heralds = 0, flips = 0;
  FrameSampler sampler(c);
  for (int i = 0; i < shots; ++i) {
    Rng rng = shot_rng(3, i);
    const auto& r = sampler.sample(rng);
    heralds += r.heralds[0];
    flips += r.detectors[0];
  }
  EXPECT_EQ(heralds, shots);
  // Full dephasing of the check inside its Hadamard window flips the
  // measurement with probability 1/2.
  const double sigma = std::sqrt(0.25 / shots);
  EXPECT_NEAR(double(flips) / shots, 0.5, 3 * sigma);
}

// Joint (herald, flip) distribution against the dense density-matrix
// oracle, chi-squared at alpha = 0.001 (3 dof -> 16.266).
TEST(SampleShot, JointDistributionMatchesDenseOracle) {
  CircuitNoise noise;
  noise.gate_failure_prob = 0.3;
  noise.distinguishability = 0.2;
  noise.t_rus_over_t2 = 0.05;
  const auto c = toy_circuit(noise);

  // Oracle: evolve the two-qubit density matrix for both herald branches.
  const auto branch_flip_prob = [&](bool failed) {
    testing::DenseSim sim(2);
    sim.hadamard(1);
    const auto dec = decoherence_channel(noise.t_rus_over_t2, 0.0);
    sim.pauli_channel(0, dec);
    sim.pauli_channel(1, dec);
    sim.cz(0, 1);
    sim.pauli_channel2(0, 1,
                       failed ? failure_channel()
                              : success_channel(noise.distinguishability));
    sim.hadamard(1);
    return sim.prob_one(1);
  };
  const double p_herald = noise.gate_failure_prob;
  const double expected[4] = {
      (1 - p_herald) * (1 - branch_flip_prob(false)),
      (1 - p_herald) * branch_flip_prob(false),
      p_herald * (1 - branch_flip_prob(true)),
      p_herald * branch_flip_prob(true),
  };

  const int shots = 1000000;
  int observed[4] = {0, 0, 0, 0};
  FrameSampler sampler(c);
  for (int i = 0; i < shots; ++i) {
    Rng rng = shot_rng(77, i);
    const auto& r = sampler.sample(rng);
    observed[2 * r.heralds[0] + r.detectors[0]]++;
  }
  double chi2 = 0.0;
  for (int cell = 0; cell < 4; ++cell) {
    const double e = expected[cell] * shots;
    chi2 += (observed[cell] - e) * (observed[cell] - e) / e;
  }
  EXPECT_LT(chi2, 16.266);
}

// Round-1 Z-check detector rates under pure dephasing, against a dense
// simulation of a single plaquette round.
TEST(SampleShot, PlaquetteDetectorRatesMatchDenseSim) {
  CircuitNoise noise;
  noise.t_rus_over_t2 = 0.01;
  const auto code = build_rotated_surface_code(3);
  const auto c = build_memory_experiment_on(code, Basis::Z, 3, noise);

  // Dense oracle for one weight-w plaquette: check + w data qubits; the
  // check is Hadamard-framed and dephased before each of the four layers
  // with the builder's per-layer budget.
  const auto plaquette_flip_prob = [&](int weight) {
    testing::DenseSim sim(weight + 1);
    const auto dec =
        decoherence_channel(kLayerDephasingFraction * noise.t_rus_over_t2, 0.0);
    sim.hadamard(0);
    int done = 0;
    for (int layer = 0; layer < 4; ++layer) {
      for (int q = 0; q <= weight; ++q) sim.pauli_channel(q, dec);
      if (done < weight) sim.cz(1 + done++, 0);
    }
    sim.hadamard(0);
    return sim.prob_one(0);
  };

  const int shots = 1000000;
  std::vector<int> flips(static_cast<std::size_t>(c.detector_count), 0);
  FrameSampler sampler(c);
  for (int i = 0; i < shots; ++i) {
    Rng rng = shot_rng(2718, i);
    const auto& r = sampler.sample(rng);
    for (int d = 0; d < c.detector_count; ++d)
      flips[static_cast<std::size_t>(d)] += r.detectors[static_cast<std::size_t>(d)];
  }

  const auto degrees = router_fanout(code.graph);
  for (int d = 0; d < c.detector_count; ++d) {
    const auto& info = c.detectors[static_cast<std::size_t>(d)];
    if (info.coords[2] != 1) continue;  // round-1 detectors only
    const int weight = degrees[static_cast<std::size_t>(info.check_vertex)];
    const double expected = plaquette_flip_prob(weight);
    const double observed = double(flips[static_cast<std::size_t>(d)]) / shots;
    const double sigma = std::sqrt(expected * (1 - expected) / shots);
    EXPECT_NEAR(observed, expected, 3 * sigma) << "detector " << d;
  }
}

TEST(SampleBatch, DeterministicAcrossWorkerCounts) {
  CircuitNoise noise;
  noise.gate_failure_prob = 0.1;
  noise.t_rus_over_t2 = 0.02;
  const auto c = build_memory_experiment(3, Basis::Z, 3, noise);
  const auto one = sample_batch(c, 500, 42, 1);
  const auto two = sample_batch(c, 500, 42, 2);
  const auto four = sample_batch(c, 500, 42, 4);
  ASSERT_EQ(one.size(), two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].detectors, two[i].detectors);
    EXPECT_EQ(one[i].heralds, four[i].heralds);
    EXPECT_EQ(one[i].observable, two[i].observable);
    EXPECT_EQ(two[i].observable, four[i].observable);
  }
}

TEST(SampleBatch, SeedsChangeOutcomes) {
  CircuitNoise noise;
  noise.gate_failure_prob = 0.2;
  const auto c = build_memory_experiment(3, Basis::Z, 3, noise);
  const auto a = sample_batch(c, 200, 1, 2);
  const auto b = sample_batch(c, 200, 2, 2);
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].heralds != b[i].heralds) ++differing;
  EXPECT_GT(differing, 0);
}

TEST(Injections, LinearityOfSignatures) {
  const auto c = build_memory_experiment(3, Basis::Z, 3, {});
  const InjectedPauli first{40, 2, Pauli::X};
  const InjectedPauli second{200, 5, Pauli::Z};
  const auto ra = propagate_injections(c, std::span(&first, 1));
  const auto rb = propagate_injections(c, std::span(&second, 1));
  const InjectedPauli both_arr[] = {first, second};
  const auto rab = propagate_injections(c, std::span(both_arr, 2));
  for (int d = 0; d < c.detector_count; ++d)
    EXPECT_EQ(rab.detectors[static_cast<std::size_t>(d)],
              ra.detectors[static_cast<std::size_t>(d)] ^
                  rb.detectors[static_cast<std::size_t>(d)]);
  EXPECT_EQ(rab.observable, ra.observable ^ rb.observable);
}

TEST(ShotDump, RoundTrip) {
  CircuitNoise noise;
  noise.gate_failure_prob = 0.15;
  const auto c = build_memory_experiment(3, Basis::Z, 2, noise);
  const auto records = sample_batch(c, 37, 9, 2);
  std::stringstream buffer;
  write_shot_dump(buffer, records, static_cast<std::uint64_t>(c.detector_count),
                  static_cast<std::uint64_t>(c.herald_count()));
  const auto parsed = read_shot_dump(buffer);
  ASSERT_EQ(parsed.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(parsed[i].detectors, records[i].detectors);
    EXPECT_EQ(parsed[i].heralds, records[i].heralds);
    EXPECT_EQ(parsed[i].observable, records[i].observable);
  }
}

}  // namespace
}  // namespace spoqc
