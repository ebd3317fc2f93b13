// Acceptance suite: quantitative reproduction targets and property gates,
// one pass/fail line per criterion. Exit code = number of failures.
//
// Desk-scale settings (distances up to 7, 2e5 shots per sweep point) give
// finite-size-biased lower bounds; the brackets below account for that.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spoqc/experiments.hpp"
#include "spoqc/matching.hpp"
#include "spoqc/optics.hpp"
#include "spoqc/validate.hpp"
#include "support/brute_match.hpp"

namespace {

using namespace spoqc;

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int worker_count() { return resolve_workers(0); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f", v);
  return buf;
}

struct SweepOutcome {
  ThresholdScanResult scan;
  double seconds;
};

SweepOutcome run_sweep(SweepAxis axis, double lo, double hi, int points,
                       std::int64_t shots, std::uint64_t seed) {
  SweepSpec spec;
  spec.axis = axis;
  for (int i = 0; i < points; ++i)
    spec.values.push_back(lo + (hi - lo) * i / (points - 1));
  spec.distances = {3, 5, 7};
  spec.shots_per_point = shots;
  spec.master_seed = seed;
  spec.basis = Basis::X;
  spec.trial_budget = 20;
  const double start = now_seconds();
  SweepOutcome out{threshold_scan(spec), 0.0};
  out.seconds = now_seconds() - start;
  return out;
}

std::string pair_detail(const ThresholdEstimate& e) {
  std::string s;
  for (const auto& p : e.pairs) {
    s += " (" + std::to_string(p.distance_low) + "," +
         std::to_string(p.distance_high) + "): ";
    s += p.found ? fmt(p.crossing) : "none";
  }
  return s;
}

}  // namespace

int main() {
  const int workers = worker_count();
  std::printf("acceptance suite: %d worker threads\n", workers);

  // --- Criterion 1: gate-failure threshold -------------------------------
  const auto c1 = run_sweep(SweepAxis::GateFailure, 0.06, 0.14, 11, 200000, 1001);
  const double c1_cross = c1.scan.estimate.crossing;
  const double eight_core_equiv = c1.seconds * workers / 8.0;
  {
    const bool in_bracket =
        c1.scan.estimate.found && c1_cross >= 0.090 && c1_cross <= 0.115;
    const bool runtime_ok = eight_core_equiv < 1800.0;
    report(1, in_bracket && runtime_ok,
           "gate-failure threshold: pooled crossing " + fmt(c1_cross) +
               " in [0.090, 0.115];" + pair_detail(c1.scan.estimate) +
               "; runtime " + fmt(c1.seconds) + "s on " +
               std::to_string(workers) + " workers (8-core equiv " +
               fmt(eight_core_equiv) + "s, target < 1800s)");
  }

  // --- Criterion 2: decoherence threshold --------------------------------
  const auto c2 = run_sweep(SweepAxis::RusTimeOverT2, 0.015, 0.032, 11, 200000, 1002);
  const double c2_cross = c2.scan.estimate.crossing;
  report(2,
         c2.scan.estimate.found && c2_cross >= 0.020 && c2_cross <= 0.027,
         "decoherence threshold: pooled crossing " + fmt(c2_cross) +
             " in [0.020, 0.027];" + pair_detail(c2.scan.estimate));

  // --- Criterion 3: distinguishability threshold -------------------------
  const auto c3 =
      run_sweep(SweepAxis::Distinguishability, 0.015, 0.030, 11, 200000, 1003);
  const double c3_cross = c3.scan.estimate.crossing;
  report(3,
         c3.scan.estimate.found && c3_cross >= 0.018 && c3_cross <= 0.026,
         "distinguishability threshold: pooled crossing " + fmt(c3_cross) +
             " in [0.018, 0.026];" + pair_detail(c3.scan.estimate));

  // --- Criterion 4: loss threshold at k = 20 -----------------------------
  const auto c4 = run_sweep(SweepAxis::Loss, 0.015, 0.035, 11, 200000, 1004);
  const double c4_cross = c4.scan.estimate.crossing;
  report(4,
         c4.scan.estimate.found && c4_cross >= 0.022 && c4_cross <= 0.031,
         "loss threshold (k=20 via gate rates): pooled crossing " +
             fmt(c4_cross) + " in [0.022, 0.031];" + pair_detail(c4.scan.estimate));

  // --- Criterion 5: trade-off structure ----------------------------------
  {
    // Border t_th(p_F) at D = 0: endpoints reuse the measured 1D
    // thresholds; interior points are (3,5) scans around a linear guess.
    std::vector<double> border_pf{0.0};
    std::vector<double> border_t{c2_cross};
    const double root_guess = c1.scan.estimate.found ? c1_cross : 0.092;
    const double t0 = c2.scan.estimate.found ? c2_cross : 0.0215;
    for (double pf : {0.01, 0.02, 0.03, 0.045, 0.06, 0.075}) {
      const double guess = t0 * (1.0 - pf / root_guess);
      SweepSpec spec;
      spec.axis = SweepAxis::RusTimeOverT2;
      for (int i = 0; i < 7; ++i)
        spec.values.push_back(guess * (0.25 + 0.9 * i / 6.0));
      spec.distances = {3, 5};
      spec.shots_per_point = 60000;
      spec.master_seed = absorb_stream(1005, static_cast<std::uint64_t>(pf * 1e6));
      spec.basis = Basis::X;
      spec.base.gate_failure_prob = pf;
      const auto scan = threshold_scan(spec);
      if (scan.estimate.found) {
        border_pf.push_back(pf);
        border_t.push_back(scan.estimate.crossing);
      }
    }
    border_pf.push_back(root_guess);
    border_t.push_back(0.0);
    const Border border(border_pf, border_t);

    // (a) no FT area for k <= 3 at zero loss.
    bool small_k_zero = true;
    for (int k : {1, 2, 3})
      small_k_zero = small_k_zero && max_trial_time(border, 0.0, k, 1) == 0.0;

    // (b) envelope trial-time intercept.
    std::vector<int> ks;
    for (int k = 1; k <= 40; ++k) ks.push_back(k);
    double intercept = 0.0;
    int best_k = 0;
    for (int k : ks) {
      const double t = max_trial_time(border, 0.0, k, 1);
      if (t > intercept) {
        intercept = t;
        best_k = k;
      }
    }
    const bool intercept_ok = intercept >= 0.00218 && intercept <= 0.00418;

    // (c) envelope loss intercept consistent with criterion 4.
    const double loss_intercept = envelope_loss_intercept(ks, border, 1);
    const bool loss_ok = loss_intercept >= 0.022 && loss_intercept <= 0.031;

    report(5, small_k_zero && intercept_ok && loss_ok,
           std::string("trade-off: (a) k<=3 area empty: ") +
               (small_k_zero ? "yes" : "no") + "; (b) t_trial intercept " +
               fmt(intercept) + " (k=" + std::to_string(best_k) +
               ") in [0.00218, 0.00418]; (c) loss intercept " +
               fmt(loss_intercept) + " in [0.022, 0.031]");

    // Persist the border for external trade-off runs.
    std::ofstream out("acceptance_border.csv");
    out << "p_F,t_th\n";
    for (std::size_t i = 0; i < border.knots().size(); ++i)
      out << border.knots()[i] << "," << border.values()[i] << "\n";
  }

  // --- Criterion 6: optics oracle ----------------------------------------
  {
    double max_dev = 0.0;
    for (auto [ea, eb] : {std::pair{1.0, 1.0}, {0.7, 0.9}}) {
      max_dev = std::max(max_dev, optics::verify_table1(ea, eb).max_deviation);
    }
    const double tableau_dev = optics::tableau_check().max_deviation;
    double dist_dev = 0.0;
    for (double d : {0.0, 0.3, 1.0})
      dist_dev = std::max(
          dist_dev,
          optics::distinguishability_distribution(d).max_deviation_from_target);
    const bool ok = max_dev < 1e-10 && tableau_dev < 1e-10 && dist_dev < 1e-10;
    report(6, ok,
           "optics oracle: table deviation " + fmt(max_dev * 1e12) +
               "e-12, tableau " + fmt(tableau_dev * 1e12) +
               "e-12, distinguishability " + fmt(dist_dev * 1e12) +
               "e-12 (all < 1e-10)");
  }

  // --- Criterion 7: rate identities --------------------------------------
  {
    bool sums_ok = true, reduce_ok = true;
    for (int ei = 0; ei <= 10; ++ei)
      for (std::int64_t k = 1; k <= 20; ++k)
        for (int n = 1; n <= 4; ++n) {
          const double eta = ei / 10.0;
          const auto r = hrus_rates(eta, eta, k, n);
          if (std::abs(r.success + r.failure + r.abort - 1.0) > 1e-12)
            sums_ok = false;
          if (n == 1) {
            const auto plain = rus_rates(eta, eta, k);
            if (r.success != plain.success || r.failure != plain.failure ||
                r.abort != plain.abort)
              reduce_ok = false;
          }
        }

    // Monte Carlo outcome frequencies, chi-squared at alpha = 0.001.
    struct Point {
      double eta;
      std::int64_t k;
      int n;
    };
    const Point grid[] = {
        {1.0, 1, 1}, {0.95, 6, 1}, {0.9, 3, 2}, {0.8, 10, 1}, {0.98, 2, 3}};
    bool chi_ok = true;
    double worst_chi = 0.0;
    for (const auto& pt : grid) {
      RusParams params;
      params.eta_a = params.eta_b = pt.eta;
      params.max_trials = pt.k;
      params.photons_per_trial = pt.n;
      const auto closed = hrus_rates(pt.eta, pt.eta, pt.k, pt.n);
      const int samples = 1000000;
      const double expected[3] = {closed.success * samples,
                                  closed.failure * samples,
                                  closed.abort * samples};
      int observed[3] = {0, 0, 0};
      const std::uint64_t stream = absorb_stream(1007, &pt - grid);
      for (int i = 0; i < samples; ++i) {
        Rng rng = shot_rng(stream, i);
        observed[static_cast<int>(sample_gate_outcome(params, rng).kind)]++;
      }
      double chi2 = 0.0;
      int dof = -1;
      for (int c = 0; c < 3; ++c) {
        if (expected[c] < 1e-9) {
          if (observed[c] != 0) chi_ok = false;
          continue;
        }
        chi2 += (observed[c] - expected[c]) * (observed[c] - expected[c]) /
                expected[c];
        ++dof;
      }
      worst_chi = std::max(worst_chi, chi2);
      if (chi2 >= (dof <= 1 ? 10.828 : 13.816)) chi_ok = false;
    }
    report(7, sums_ok && reduce_ok && chi_ok,
           std::string("rate identities: sums-to-one ") +
               (sums_ok ? "ok" : "VIOLATED") + ", HRUS(k,1)==RUS " +
               (reduce_ok ? "exact" : "VIOLATED") +
               ", Monte Carlo chi2 max " + fmt(worst_chi) +
               " (alpha = 0.001 critical 13.816; 1e6 samples x 5 points)");
  }

  // --- Criterion 8: determinism and graph-like signatures ----------------
  {
    bool deterministic = true;
    for (int d : {3, 5, 7})
      for (Basis basis : {Basis::Z, Basis::X}) {
        const auto circuit = build_memory_experiment(d, basis, d, {});
        if (!validate_circuit(circuit).passed()) deterministic = false;
        FrameSampler sampler(circuit);
        for (int shot = 0; shot < 100; ++shot) {
          Rng rng = shot_rng(1008, shot);
          const auto& record = sampler.sample(rng);
          for (auto bit : record.detectors)
            if (bit) deterministic = false;
          if (record.observable) deterministic = false;
        }
      }

    // Inject single Paulis at every gate-noise site (data X/Z and check Z,
    // the constituents the noise model can produce) and check the detector
    // signature stays graph-like in each CSS family.
    bool graph_like = true;
    const auto circuit = build_memory_experiment(3, Basis::Z, 3, {});
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
      const auto& op = circuit.ops[i];
      if (op.kind != OpKind::PauliNoise2) continue;
      const auto check_signature = [&](int qubit, Pauli p) {
        const InjectedPauli inj{static_cast<std::int64_t>(i), qubit, p};
        const auto record = propagate_injections(circuit, std::span(&inj, 1));
        int per_family[2] = {0, 0};
        for (int det = 0; det < circuit.detector_count; ++det)
          if (record.detectors[static_cast<std::size_t>(det)])
            per_family[circuit.detectors[static_cast<std::size_t>(det)].family ==
                       CheckKind::Z]++;
        if (per_family[0] > 2 || per_family[1] > 2) graph_like = false;
      };
      check_signature(op.a, Pauli::X);
      check_signature(op.a, Pauli::Z);
      check_signature(op.b, Pauli::Z);
    }
    report(8, deterministic && graph_like,
           std::string("zero-noise determinism (symbolic + sampled, d in "
                       "{3,5,7}, both bases): ") +
               (deterministic ? "ok" : "VIOLATED") +
               "; single-Pauli signatures <= 2 detectors per family: " +
               (graph_like ? "ok" : "VIOLATED"));
  }

  // --- Criterion 9: decoder exactness and herald advantage ---------------
  {
    bool exact = true;
    int compared = 0;
    std::mt19937_64 gen(40409);
    for (int trial = 0; trial < 200; ++trial) {
      const int nodes = 4 + static_cast<int>(gen() % 9);
      MatchingGraph g;
      g.family = CheckKind::Z;
      for (int i = 0; i < nodes; ++i) {
        g.detector_ids.push_back(i);
        g.local_of_global.push_back(i);
      }
      const int edges = nodes + static_cast<int>(gen() % (2 * nodes));
      for (int e = 0; e < edges; ++e) {
        const int u = static_cast<int>(gen() % nodes);
        int v = static_cast<int>(gen() % (nodes + 1));
        if (v == u) v = g.boundary_node();
        const double w = static_cast<double>(1 + gen() % 4096) / 1024.0;
        g.edges.push_back({std::min(u, v), std::max(u, v),
                           1.0 / (1.0 + std::exp(w)), w, (gen() % 2) == 0, {}});
      }
      g.build_adjacency();
      std::vector<std::uint8_t> bits(static_cast<std::size_t>(nodes), 0);
      const int flagged = 1 + static_cast<int>(gen() % 10);
      for (int k = 0; k < flagged; ++k) bits[gen() % static_cast<std::size_t>(nodes)] = 1;
      std::vector<double> weights(g.edges.size());
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        weights[e] = g.edges[e].weight;
      const auto brute = testing::brute_force_decode(g, weights, bits);
      if (!brute.feasible) {
        try {
          mwpm_decode(g, weights, bits);
          exact = false;
        } catch (const std::runtime_error&) {
        }
        continue;
      }
      const auto fast = mwpm_decode(g, weights, bits);
      if (std::abs(fast.matching_weight - brute.weight) > 1e-9) exact = false;
      if (brute.unique && fast.observable_flip != brute.flip) exact = false;
      ++compared;
    }

    CircuitNoise noise;
    noise.gate_failure_prob = 0.08;
    const auto circuit = build_memory_experiment(5, Basis::X, 5, noise);
    const auto cmp = compare_herald_decoding(circuit, 100000, 1009);
    const double z = cmp.improvement / std::max(cmp.improvement_std_error, 1e-12);
    report(9, exact && z >= 3.0,
           "decoder: MWPM == brute force on " + std::to_string(compared) +
               "/200 random graphs; herald-aware beats herald-blind by " +
               fmt(cmp.improvement) + " (z = " + fmt(z) +
               " >= 3) at p_F=0.08, d=5, 1e5 shots [aware " +
               std::to_string(cmp.aware_errors) + ", blind " +
               std::to_string(cmp.blind_errors) + " errors]");
  }

  // --- Criterion 10: byte-identical reruns --------------------------------
  {
    SweepSpec spec;
    spec.axis = SweepAxis::GateFailure;
    spec.values = {0.07, 0.09, 0.11};
    spec.distances = {3, 5};
    spec.shots_per_point = 20000;
    spec.master_seed = 1010;

    const auto render = [&](const ThresholdScanResult& r) {
      std::ostringstream out;
      out.precision(17);
      write_curves_csv(out, r.curves);
      out << r.estimate.crossing << "," << r.estimate.ci_low << ","
          << r.estimate.ci_high << "\n";
      return out.str();
    };
    spec.workers = 1;
    const std::string once = render(threshold_scan(spec));
    spec.workers = 2;
    const std::string twice = render(threshold_scan(spec));
    spec.workers = 0;
    const std::string thrice = render(threshold_scan(spec));
    const bool identical = once == twice && twice == thrice;
    report(10, identical,
           std::string("determinism: scan renders byte-identical across "
                       "worker counts {1, 2, auto}: ") +
               (identical ? "ok" : "VIOLATED"));
  }

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
