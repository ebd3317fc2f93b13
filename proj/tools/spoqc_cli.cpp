// Command-line front end: code construction, gate-rate tables, the optics
// verification report, threshold scans, the FT surface, trade-off curves,
// and raw shot dumps. Every run echoes its fully resolved configuration
// into the JSON summary so it can be reproduced byte-identically with
// --config.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spoqc/experiments.hpp"
#include "spoqc/frame.hpp"
#include "spoqc/matching.hpp"
#include "spoqc/optics.hpp"
#include "spoqc/rates.hpp"
#include "spoqc/tanner.hpp"
#include "spoqc/validate.hpp"

namespace {

using nlohmann::json;

#ifndef SPOQC_BUILD_ID
#define SPOQC_BUILD_ID "unknown"
#endif

int default_workers() {
  if (const char* env = std::getenv("SPOQC_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;  // resolve to hardware concurrency
}

// Pre-scan for --config; an echoed summary (object with a "config" key)
// works as a config file directly.
json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::invalid_argument(std::string("cannot open config ") + argv[i + 1]);
      json parsed = json::parse(in);
      if (parsed.contains("config")) return parsed.at("config");
      return parsed;
    }
  }
  return json::object();
}

template <typename T>
void config_default(const json& config, const std::string& dotted, T& var) {
  const json* node = &config;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', begin);
    const std::string key = dotted.substr(begin, dot - begin);
    if (!node->contains(key)) return;
    node = &node->at(key);
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  var = node->get<T>();
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  std::vector<double> out;
  for (int i = 0; i < points; ++i)
    out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

spoqc::SweepAxis parse_axis(const std::string& name) {
  if (name == "p_F" || name == "pf") return spoqc::SweepAxis::GateFailure;
  if (name == "t" || name == "t_rus_over_t2") return spoqc::SweepAxis::RusTimeOverT2;
  if (name == "D" || name == "d") return spoqc::SweepAxis::Distinguishability;
  if (name == "loss" || name == "eps") return spoqc::SweepAxis::Loss;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

void emit_summary(const json& summary, const std::string& path) {
  if (path.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    write_file(path, summary.dump(2) + "\n");
  }
}

json base_summary(const json& config, std::uint64_t seed) {
  json j;
  j["build"] = SPOQC_BUILD_ID;
  j["seed"] = seed;
  j["config"] = config;
  return j;
}

// --- subcommands -----------------------------------------------------------

int cmd_code(int distance, int max_degree, const std::string& out_path) {
  const auto code = spoqc::build_rotated_surface_code(distance);
  const auto report = spoqc::validate_ldpc(code.graph, max_degree);
  json j = spoqc::to_json(code.graph);
  j["params"] = {{"n", code.params.n}, {"k", code.params.k}, {"d", code.params.d}};
  j["logicals"] = {{"z_support", code.logicals.z_support},
                   {"x_support", code.logicals.x_support}};
  j["max_router_fanout"] = spoqc::max_router_fanout(code.graph);
  j["ldpc_report"] = {{"max_degree", report.max_degree},
                      {"passed", report.passed()}};
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_file(out_path, j.dump(2) + "\n");
  if (!report.passed()) {
    std::cerr << "validation failed\n";
    return 1;
  }
  return 0;
}

int cmd_rates(double eta_a, double eta_b, std::int64_t k, int n) {
  const auto trial = spoqc::hrus_trial_rates(eta_a, eta_b, n);
  const auto total = spoqc::hrus_rates(eta_a, eta_b, k, n);
  std::cout << std::setprecision(10);
  std::cout << (n == 1 ? "RUS" : "HRUS") << " gate, eta_a=" << eta_a
            << " eta_b=" << eta_b << " k="
            << (k == spoqc::kUnboundedTrials ? std::string("inf")
                                             : std::to_string(k));
  if (n != 1) std::cout << " n=" << n;
  std::cout << "\n";
  std::cout << "  per trial: success=" << trial.success
            << " repeat=" << trial.repeat << " failure=" << trial.failure << "\n";
  std::cout << "  total:     success=" << total.success
            << " failure=" << total.failure << " abort=" << total.abort << "\n";
  std::cout << "  failure+abort=" << total.failure + total.abort << "\n";
  return 0;
}

int cmd_verify_optics(double eta_a, double eta_b, double tolerance) {
  const auto table = spoqc::optics::verify_table1(eta_a, eta_b);
  std::cout << "detection-pattern table (eta_a=" << eta_a << ", eta_b=" << eta_b
            << ")\n";
  std::cout << std::left << std::setw(9) << "pattern" << std::setw(13)
            << "expected_p" << std::setw(13) << "measured_p" << std::setw(10)
            << "corr" << std::setw(7) << "gate" << std::setw(12) << "|dp|"
            << "|dchannel|\n";
  for (const auto& row : table.rows) {
    const char* gate = row.gate == spoqc::optics::SpinGate::CZ ? "CZ"
                       : row.gate == spoqc::optics::SpinGate::Identity ? "Id"
                                                                       : "Cf";
    std::cout << std::left << std::setw(9) << row.pattern.str() << std::setw(13)
              << std::setprecision(6) << row.expected_probability << std::setw(13)
              << row.measured_probability << std::setw(10) << row.correction
              << std::setw(7) << gate << std::setw(12) << std::setprecision(3)
              << row.probability_deviation << row.channel_deviation << "\n";
  }
  double max_deviation = table.max_deviation;

  const auto tableau = spoqc::optics::tableau_check();
  std::cout << "tableau identities: " << tableau.checks.size()
            << " checks, max deviation " << tableau.max_deviation << "\n";
  max_deviation = std::max(max_deviation, tableau.max_deviation);

  for (double d : {0.0, 0.3, 1.0}) {
    const auto report = spoqc::optics::distinguishability_distribution(d);
    std::cout << "distinguishability D=" << d << ": max deviation "
              << report.max_deviation_from_target << "\n";
    max_deviation = std::max(max_deviation, report.max_deviation_from_target);
  }

  std::cout << "overall max deviation: " << max_deviation << "\n";
  if (max_deviation > tolerance) {
    std::cerr << "verification failed: deviation exceeds " << tolerance << "\n";
    return 1;
  }
  return 0;
}

struct SweepCli {
  std::string axis = "p_F";
  double min = 0.06, max = 0.14;
  int points = 9;
  std::vector<int> distances{3, 5, 7};
  std::int64_t shots = 100000;
  std::uint64_t seed = 1;
  std::string basis = "X";
  double fixed_p_f = 0.0, fixed_t = 0.0, fixed_d = 0.0;
  std::int64_t k = 20;
  int n = 1;
  int workers = default_workers();
  std::string csv_path, json_path;
};

spoqc::SweepSpec to_spec(const SweepCli& cli) {
  spoqc::SweepSpec spec;
  spec.axis = parse_axis(cli.axis);
  spec.values = linspace(cli.min, cli.max, cli.points);
  spec.distances = cli.distances;
  spec.shots_per_point = cli.shots;
  spec.master_seed = cli.seed;
  spec.basis = (cli.basis == "Z") ? spoqc::Basis::Z : spoqc::Basis::X;
  spec.base.gate_failure_prob = cli.fixed_p_f;
  spec.base.t_rus_over_t2 = cli.fixed_t;
  spec.base.distinguishability = cli.fixed_d;
  spec.trial_budget = cli.k;
  spec.photons_per_trial = cli.n;
  spec.workers = cli.workers;
  return spec;
}

json sweep_config_json(const SweepCli& cli, const std::string& subcommand) {
  json j;
  j["subcommand"] = subcommand;
  j["sweep"] = {{"axis", cli.axis}, {"min", cli.min}, {"max", cli.max},
                {"points", cli.points}};
  j["code"] = {{"distances", cli.distances}, {"basis", cli.basis}};
  j["noise"] = {{"p_f", cli.fixed_p_f}, {"t", cli.fixed_t}, {"D", cli.fixed_d},
                {"k", cli.k}, {"n", cli.n}};
  j["shots"] = cli.shots;
  j["seed"] = cli.seed;
  j["workers"] = cli.workers;
  j["output"] = {{"csv", cli.csv_path}, {"json", cli.json_path}};
  return j;
}

int cmd_threshold(const SweepCli& cli) {
  const auto spec = to_spec(cli);
  const auto result = spoqc::threshold_scan(spec);
  std::ostringstream csv;
  csv << std::setprecision(10);
  spoqc::write_curves_csv(csv, result.curves);
  if (cli.csv_path.empty())
    std::cout << csv.str();
  else
    write_file(cli.csv_path, csv.str());

  json summary = base_summary(sweep_config_json(cli, "threshold"), cli.seed);
  summary.update(spoqc::threshold_summary_json(spec, result));
  if (!result.estimate.found)
    summary["estimate"]["note"] = "no crossing in range";
  emit_summary(summary, cli.json_path);
  return 0;
}

int cmd_sample(int distance, int rounds, const std::string& basis, double p_f,
               double t, double d_dist, std::int64_t shots, std::uint64_t seed,
               int workers, const std::string& out_path) {
  spoqc::CircuitNoise noise;
  noise.gate_failure_prob = p_f;
  noise.t_rus_over_t2 = t;
  noise.distinguishability = d_dist;
  const auto circuit = spoqc::build_memory_experiment(
      distance, basis == "Z" ? spoqc::Basis::Z : spoqc::Basis::X,
      rounds > 0 ? rounds : distance, noise);
  const auto records = spoqc::sample_batch(circuit, shots, seed, workers);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  spoqc::write_shot_dump(out, records,
                         static_cast<std::uint64_t>(circuit.detector_count),
                         static_cast<std::uint64_t>(circuit.herald_count()));
  std::cout << "wrote " << shots << " shots (" << circuit.detector_count
            << " detectors, " << circuit.herald_count() << " heralds) to "
            << out_path << "\n";
  return 0;
}

spoqc::Border load_border(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open border file " + path);
  std::vector<double> p_f, t_th;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("p_F", 0) == 0) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
    p_f.push_back(std::stod(a));
    t_th.push_back(std::stod(b));
  }
  return spoqc::Border(std::move(p_f), std::move(t_th));
}

void write_tradeoff_csv(std::ostream& out, const spoqc::TradeoffCurve& curve,
                        bool hybrid) {
  out << (hybrid ? "n" : "k") << ",loss,t_trial_max\n";
  for (std::size_t c = 0; c < curve.curves.size(); ++c) {
    const int label = hybrid ? curve.n_values[c] : curve.k_values[c];
    for (const auto& point : curve.curves[c])
      out << label << "," << point.loss << "," << point.t_trial_max << "\n";
  }
  for (const auto& point : curve.envelope)
    out << "envelope," << point.loss << "," << point.t_trial_max << "\n";
}

}  // namespace

int run(int argc, char** argv) {
  const json config = load_config(argc, argv);

  CLI::App app{"spin-optical architecture fault-tolerance simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (or echoed summary)");

  // code
  auto* code = app.add_subcommand("code", "build and validate a rotated surface code");
  int code_distance = 3;
  int code_max_degree = 4;
  std::string code_out;
  config_default(config, "code.distance", code_distance);
  code->add_option("--distance", code_distance, "odd code distance >= 3");
  code->add_option("--max-degree", code_max_degree, "LDPC degree bound");
  code->add_option("--out", code_out, "output JSON path");

  // rates
  auto* rates = app.add_subcommand("rates", "closed-form gate outcome rates");
  double rates_eta = 1.0, rates_eta_b = -1.0;
  std::int64_t rates_k = 1;
  int rates_n = 1;
  rates->add_option("--eta", rates_eta, "transmission (both emitters)");
  rates->add_option("--eta-b", rates_eta_b, "transmission of emitter b");
  rates->add_option("--k", rates_k, "trial budget (-1 = unbounded)");
  rates->add_option("--n", rates_n, "photons per trial");

  // verify-optics
  auto* optics = app.add_subcommand("verify-optics", "first-principles gate verification");
  double optics_eta_a = 1.0, optics_eta_b = 1.0, optics_tol = 1e-8;
  optics->add_option("--eta-a", optics_eta_a, "transmission a");
  optics->add_option("--eta-b", optics_eta_b, "transmission b");
  optics->add_option("--tolerance", optics_tol, "maximum allowed deviation");

  // threshold
  auto* threshold = app.add_subcommand("threshold", "logical error curves and crossing");
  SweepCli sweep;
  config_default(config, "sweep.axis", sweep.axis);
  config_default(config, "sweep.min", sweep.min);
  config_default(config, "sweep.max", sweep.max);
  config_default(config, "sweep.points", sweep.points);
  config_default(config, "code.distances", sweep.distances);
  config_default(config, "code.basis", sweep.basis);
  config_default(config, "noise.p_f", sweep.fixed_p_f);
  config_default(config, "noise.t", sweep.fixed_t);
  config_default(config, "noise.D", sweep.fixed_d);
  config_default(config, "noise.k", sweep.k);
  config_default(config, "noise.n", sweep.n);
  config_default(config, "shots", sweep.shots);
  config_default(config, "seed", sweep.seed);
  config_default(config, "workers", sweep.workers);
  config_default(config, "output.csv", sweep.csv_path);
  config_default(config, "output.json", sweep.json_path);
  threshold->add_option("--axis", sweep.axis, "p_F | t | D | loss");
  threshold->add_option("--min", sweep.min, "sweep start");
  threshold->add_option("--max", sweep.max, "sweep end");
  threshold->add_option("--points", sweep.points, "sweep point count");
  threshold->add_option("--distances", sweep.distances, "odd distances");
  threshold->add_option("--shots", sweep.shots, "shots per point");
  threshold->add_option("--seed", sweep.seed, "master seed");
  threshold->add_option("--basis", sweep.basis, "memory basis Z|X");
  threshold->add_option("--p-f", sweep.fixed_p_f, "fixed gate failure prob");
  threshold->add_option("--t", sweep.fixed_t, "fixed t_RUS/T2");
  threshold->add_option("--d-dist", sweep.fixed_d, "fixed distinguishability");
  threshold->add_option("--k", sweep.k, "trial budget for the loss axis");
  threshold->add_option("--n", sweep.n, "photons per trial for the loss axis");
  threshold->add_option("--workers", sweep.workers, "worker threads (0 = cores)");
  threshold->add_option("--csv", sweep.csv_path, "curves CSV path");
  threshold->add_option("--json", sweep.json_path, "summary JSON path");

  // ft-surface
  auto* surface = app.add_subcommand("ft-surface", "correctable-region boundary");
  spoqc::FtSurfaceSpec surface_spec;
  surface_spec.axis_gate_failure = 0.092;
  surface_spec.axis_time = 0.0215;
  surface_spec.axis_distinguishability = 0.0205;
  std::string surface_csv, surface_json;
  int surface_workers = default_workers();
  config_default(config, "surface.axis_p_f", surface_spec.axis_gate_failure);
  config_default(config, "surface.axis_t", surface_spec.axis_time);
  config_default(config, "surface.axis_D", surface_spec.axis_distinguishability);
  config_default(config, "surface.points", surface_spec.tessellation_points);
  config_default(config, "shots", surface_spec.shots_per_point);
  config_default(config, "seed", surface_spec.master_seed);
  surface->add_option("--axis-pf", surface_spec.axis_gate_failure, "p_F axis threshold");
  surface->add_option("--axis-t", surface_spec.axis_time, "t axis threshold");
  surface->add_option("--axis-d", surface_spec.axis_distinguishability, "D axis threshold");
  surface->add_option("--points", surface_spec.tessellation_points, "tessellation points");
  surface->add_option("--w-min", surface_spec.w_min, "scan lower bound");
  surface->add_option("--w-max", surface_spec.w_max, "scan upper bound");
  surface->add_option("--w-values", surface_spec.w_values, "scan grid size");
  surface->add_option("--distances", surface_spec.distances, "odd distances");
  surface->add_option("--shots", surface_spec.shots_per_point, "shots per point");
  surface->add_option("--seed", surface_spec.master_seed, "master seed");
  surface->add_option("--workers", surface_workers, "worker threads");
  surface->add_option("--csv", surface_csv, "surface CSV path");
  surface->add_option("--json", surface_json, "summary JSON path");

  // tradeoff / hrus-tradeoff
  auto* tradeoff = app.add_subcommand("tradeoff", "loss vs trial-time region");
  auto* hrus = app.add_subcommand("hrus-tradeoff", "hybrid-gate loss vs trial-time");
  std::string border_path;
  std::vector<int> k_values{1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 26, 32, 40};
  std::vector<int> n_values{1, 2, 3, 4};
  double loss_max = 0.035;
  int loss_points = 141;
  std::string tradeoff_csv, tradeoff_json;
  for (auto* cmd : {tradeoff, hrus}) {
    cmd->add_option("--border", border_path, "border CSV (p_F,t_th rows)")->required();
    cmd->add_option("--k-values", k_values, "trial budgets");
    cmd->add_option("--loss-max", loss_max, "loss grid upper end");
    cmd->add_option("--loss-points", loss_points, "loss grid size");
    cmd->add_option("--csv", tradeoff_csv, "curves CSV path");
    cmd->add_option("--json", tradeoff_json, "summary JSON path");
  }
  hrus->add_option("--n-values", n_values, "photons per trial");

  // sample
  auto* sample = app.add_subcommand("sample", "raw shot dump");
  int sample_distance = 3, sample_rounds = 0, sample_workers = default_workers();
  std::string sample_basis = "X", sample_out = "shots.bin";
  double sample_p_f = 0.0, sample_t = 0.0, sample_d = 0.0;
  std::int64_t sample_shots = 1000;
  std::uint64_t sample_seed = 1;
  sample->add_option("--distance", sample_distance, "odd code distance");
  sample->add_option("--rounds", sample_rounds, "rounds (0 = distance)");
  sample->add_option("--basis", sample_basis, "memory basis Z|X");
  sample->add_option("--p-f", sample_p_f, "gate failure prob");
  sample->add_option("--t", sample_t, "t_RUS/T2");
  sample->add_option("--d-dist", sample_d, "distinguishability");
  sample->add_option("--shots", sample_shots, "shot count");
  sample->add_option("--seed", sample_seed, "master seed");
  sample->add_option("--workers", sample_workers, "worker threads");
  sample->add_option("--out", sample_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (code->parsed()) return cmd_code(code_distance, code_max_degree, code_out);
  if (rates->parsed())
    return cmd_rates(rates_eta, rates_eta_b < 0 ? rates_eta : rates_eta_b,
                     rates_k, rates_n);
  if (optics->parsed()) return cmd_verify_optics(optics_eta_a, optics_eta_b, optics_tol);
  if (threshold->parsed()) return cmd_threshold(sweep);
  if (surface->parsed()) {
    const auto result = spoqc::ft_surface(surface_spec);
    (void)surface_workers;
    std::ostringstream csv;
    csv << std::setprecision(10);
    csv << "dir_p_F,dir_t,dir_D,found,at_edge,w_th,p_F,t,D\n";
    for (const auto& p : result.points)
      csv << p.direction[0] << "," << p.direction[1] << "," << p.direction[2]
          << "," << p.found << "," << p.at_range_edge << "," << p.w_th << ","
          << p.point[0] << "," << p.point[1] << "," << p.point[2] << "\n";
    if (surface_csv.empty())
      std::cout << csv.str();
    else
      write_file(surface_csv, csv.str());
    json summary = base_summary(
        json{{"subcommand", "ft-surface"},
             {"surface",
              {{"axis_p_f", surface_spec.axis_gate_failure},
               {"axis_t", surface_spec.axis_time},
               {"axis_D", surface_spec.axis_distinguishability},
               {"points", surface_spec.tessellation_points}}},
             {"shots", surface_spec.shots_per_point},
             {"seed", surface_spec.master_seed}},
        surface_spec.master_seed);
    int found = 0, at_edge = 0;
    for (const auto& p : result.points) {
      found += p.found;
      at_edge += p.at_range_edge;
    }
    summary["found_points"] = found;
    summary["at_edge_points"] = at_edge;
    emit_summary(summary, surface_json);
    return 0;
  }
  if (tradeoff->parsed() || hrus->parsed()) {
    const auto border = load_border(border_path);
    const auto grid = linspace(0.0, loss_max, loss_points);
    const bool hybrid = hrus->parsed();
    const auto curve = hybrid
                           ? spoqc::hrus_tradeoff(n_values, k_values, grid, border)
                           : spoqc::loss_coherence_tradeoff(k_values, grid, border);
    std::ostringstream csv;
    csv << std::setprecision(10);
    write_tradeoff_csv(csv, curve, hybrid);
    if (tradeoff_csv.empty())
      std::cout << csv.str();
    else
      write_file(tradeoff_csv, csv.str());
    json summary = base_summary(
        json{{"subcommand", hybrid ? "hrus-tradeoff" : "tradeoff"},
             {"border", border_path},
             {"k_values", k_values},
             {"n_values", hybrid ? n_values : std::vector<int>{1}},
             {"loss_max", loss_max},
             {"loss_points", loss_points}},
        0);
    summary["t_trial_intercept"] = curve.envelope.empty()
                                       ? 0.0
                                       : curve.envelope.front().t_trial_max;
    summary["loss_intercept"] =
        spoqc::envelope_loss_intercept(k_values, border, hybrid ? n_values.front() : 1);
    emit_summary(summary, tradeoff_json);
    return 0;
  }
  if (sample->parsed())
    return cmd_sample(sample_distance, sample_rounds, sample_basis, sample_p_f,
                      sample_t, sample_d, sample_shots, sample_seed,
                      sample_workers, sample_out);
  return 1;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
