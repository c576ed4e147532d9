// Copyright 2026 The freqlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch front end: seeded experiments over the heralded-gate and
// cluster-growth simulators, emitting CSV tables plus JSON manifests.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freqlink/cluster.hpp"
#include "freqlink/config.hpp"
#include "freqlink/interference.hpp"
#include "freqlink/noise.hpp"
#include "freqlink/parallel.hpp"
#include "freqlink/report.hpp"
#include "freqlink/version.hpp"

namespace fs = std::filesystem;
using namespace freqlink;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

constexpr std::uint64_t kLongRunThreshold = 10000000;

std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

/// Complex literals: "1", "-0.5", "0.6+0.8i", "0.6-0.8i", "0.8i", "-i", "i".
std::optional<Complex> parse_complex_literal(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c != ' ') t += c;
  }
  if (t.empty()) return std::nullopt;
  if (t.back() != 'i') {
    const auto re = parse_real(t);
    if (!re) return std::nullopt;
    return Complex(*re, 0.0);
  }
  t.pop_back();  // drop the trailing 'i'
  // Find the sign splitting real and imaginary parts: the last '+'/'-' that
  // is not the leading sign and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto parse_imag_token = [](std::string_view tok) -> std::optional<double> {
    if (tok.empty() || tok == "+") return 1.0;
    if (tok == "-") return -1.0;
    return parse_real(tok);
  };
  if (split == std::string::npos) {
    const auto im = parse_imag_token(t);
    if (!im) return std::nullopt;
    return Complex(0.0, *im);
  }
  const auto re = parse_real(t.substr(0, split));
  const auto im = parse_imag_token(t.substr(split));
  if (!re || !im) return std::nullopt;
  return Complex(*re, *im);
}

std::string format_complex(Complex v) {
  const double re = v.real() == 0.0 ? 0.0 : v.real();  // flush negative zero
  const double im = v.imag() == 0.0 ? 0.0 : v.imag();
  std::string out = fmt_double(re);
  if (im >= 0.0) out += "+";
  out += fmt_double(im);
  out += "i";
  return out;
}

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  int workers = 1;
  bool allow_long = false;
};

struct LoadedRun {
  RunConfig cfg;
  nlohmann::json merged;
  std::string config_hash;
};

LoadedRun load_run(const GlobalOptions& glob) {
  nlohmann::json doc = nlohmann::json::object();
  if (!glob.config_path.empty()) {
    std::ifstream in(glob.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + glob.config_path);
    in >> doc;
  }
  nlohmann::json merged = merged_config_json(doc);
  if (glob.seed_override) merged["master_seed"] = *glob.seed_override;
  if (glob.out_override) merged["output_dir"] = *glob.out_override;
  LoadedRun run;
  run.cfg = parse_config(merged);
  run.merged = merged;
  run.config_hash = hex_u64(fnv1a64(canonical_config_string(merged)));
  return run;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_with_manifest(const CsvWriter& csv, const fs::path& path, const LoadedRun& run,
                         const std::string& command, const nlohmann::json& parameters,
                         int workers) {
  csv.write(path);
  RunManifest manifest;
  manifest.command = command;
  manifest.config_hash = run.config_hash;
  manifest.master_seed = run.cfg.master_seed;
  manifest.workers = workers;
  manifest.parameters = parameters;
  manifest.write(path.string() + ".manifest.json");
}

// --- simulate-gate --------------------------------------------------------

struct SimulateGateArgs {
  std::string c0, c1, d0, d1;
  std::string overlap = "1";
  std::optional<std::uint64_t> trials;
};

int run_simulate_gate(const GlobalOptions& glob, const SimulateGateArgs& args) {
  auto need = [&](const std::string& text, const char* flag) {
    const auto v = parse_complex_literal(text);
    if (!v) {
      std::cerr << "error: unparseable complex literal for " << flag << ": '" << text << "'\n";
    }
    return v;
  };
  const auto c0 = need(args.c0, "--c0");
  const auto c1 = need(args.c1, "--c1");
  const auto d0 = need(args.d0, "--d0");
  const auto d1 = need(args.d1, "--d1");
  const auto overlap = need(args.overlap, "--overlap");
  if (!c0 || !c1 || !d0 || !d1 || !overlap) return kExitUsage;
  if (std::abs(*overlap) > 1.0 + 1e-9) {
    std::cerr << "error: --overlap magnitude must not exceed 1\n";
    return kExitUsage;
  }

  const LoadedRun run = load_run(glob);
  const std::uint64_t trials = args.trials.value_or(run.cfg.trials);
  if (trials > kLongRunThreshold && !glob.allow_long) {
    std::cerr << "error: " << trials << " attempts exceeds the default cap; pass --allow-long\n";
    return kExitUsage;
  }

  AtomQubit atom1{*c0, *c1};
  AtomQubit atom2{*d0, *d1};
  auto renormalize = [](AtomQubit& atom, const char* label) {
    const double deviation = std::abs(atom.norm2() - 1.0);
    if (deviation > 1e-9) {
      std::cerr << "note: " << label << " amplitudes renormalized (norm deviation "
                << fmt_double(deviation) << ")\n";
    }
    atom = atom.normalized();
  };
  renormalize(atom1, "atom 1");
  renormalize(atom2, "atom 2");

  const double analytic = coincidence_probability(atom1, atom2, *overlap);
  const GateResult ideal = zz_measurement_gate(atom1, atom2);

  const EfficiencyModel eff = run.cfg.efficiencies;
  const std::uint64_t successes = parallel_tally(trials, glob.workers, [&](std::uint64_t t) {
    RngStream rng = RngStream::child(run.cfg.master_seed, t);
    const GateOutcome out = run_gate_attempt(atom1, atom2, eff, *overlap, rng);
    return out.status == GateStatus::success ? std::uint64_t{1} : std::uint64_t{0};
  });
  const double rate = static_cast<double>(successes) / static_cast<double>(trials);
  const double stderr_rate = std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));

  const fs::path dir = prepare_output_dir(run.cfg);
  CsvWriter csv({"attempt_count", "successes", "rate", "stderr", "seed"});
  csv.add_row({trials, successes, rate, stderr_rate, run.cfg.master_seed});

  nlohmann::json params{{"c0", format_complex(atom1.c0)}, {"c1", format_complex(atom1.c1)},
                        {"d0", format_complex(atom2.c0)}, {"d1", format_complex(atom2.c1)},
                        {"overlap", format_complex(*overlap)}, {"trials", trials}};
  write_with_manifest(csv, dir / "gate_attempts.csv", run, "simulate-gate", params, glob.workers);

  nlohmann::json summary{
      {"inputs", params},
      {"analytic_coincidence_probability", analytic},
      {"fullsim_coincidence_probability", ideal.coincidence_probability},
      {"empirical_success_rate", rate},
      {"empirical_stderr", stderr_rate},
      {"gate_success_probability_model", success_probability(eff)},
      {"null_outcome", ideal.null_outcome},
  };
  if (ideal.null_outcome) {
    summary["note"] = "coincidence probability is zero for these inputs; the herald never fires";
  } else {
    const JointState& post = *ideal.post_state;
    summary["conditioned_amplitude_01"] =
        format_complex(post.amplitude(std::vector<int>{0, 1}));
    summary["conditioned_amplitude_10"] =
        format_complex(post.amplitude(std::vector<int>{1, 0}));
    // Closed-form prediction: c0 d1 |01> - c1 d0 |10>, normalized.
    const Complex a01 = atom1.c0 * atom2.c1;
    const Complex a10 = -(atom1.c1 * atom2.c0);
    const double n = std::sqrt(std::norm(a01) + std::norm(a10));
    summary["predicted_amplitude_01"] = format_complex(a01 / n);
    summary["predicted_amplitude_10"] = format_complex(a10 / n);
  }
  std::ofstream sf(dir / "gate_summary.json", std::ios::binary);
  sf << summary.dump(2) << '\n';
  RunManifest manifest;
  manifest.command = "simulate-gate";
  manifest.config_hash = run.config_hash;
  manifest.master_seed = run.cfg.master_seed;
  manifest.workers = glob.workers;
  manifest.parameters = params;
  manifest.write(dir / "gate_summary.json.manifest.json");

  std::cout << "simulate-gate: analytic coincidence probability " << fmt_double(analytic)
            << ", empirical success rate " << fmt_double(rate) << " (" << successes << "/"
            << trials << ")\n";
  return kExitOk;
}

// --- noise-sweep ----------------------------------------------------------

struct NoiseSweepArgs {
  std::string param;
  std::string range;
  int steps = 0;
  std::string phase_mode = "differential";
};

int run_noise_sweep(const GlobalOptions& glob, const NoiseSweepArgs& args) {
  const auto colon = args.range.find(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --range must be LOW:HIGH\n";
    return kExitUsage;
  }
  const auto lo = parse_real(args.range.substr(0, colon));
  const auto hi = parse_real(args.range.substr(colon + 1));
  if (!lo || !hi || !(*lo < *hi)) {
    std::cerr << "error: --range must be LOW:HIGH with LOW < HIGH\n";
    return kExitUsage;
  }
  if (args.steps < 2) {
    std::cerr << "error: --steps must be at least 2\n";
    return kExitUsage;
  }

  const LoadedRun run = load_run(glob);
  std::vector<double> grid(static_cast<std::size_t>(args.steps));
  for (int i = 0; i < args.steps; ++i) {
    grid[static_cast<std::size_t>(i)] =
        *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(args.steps - 1);
  }
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const AtomQubit balanced{Complex(kInvSqrt2), Complex(kInvSqrt2)};

  const fs::path dir = prepare_output_dir(run.cfg);
  nlohmann::json params{{"param", args.param}, {"range", args.range}, {"steps", args.steps}};

  if (args.param == "doppler") {
    const DopplerSweepReport report =
        doppler_fidelity_sweep(run.cfg.species, run.cfg.trap, grid);
    CsvWriter csv({"delta_over_gamma", "overlap_sq", "fidelity", "coincidence_prob"});
    for (const auto& row : report.rows) {
      csv.add_row({row.delta_over_gamma, row.overlap_sq, row.fidelity, row.coincidence_prob});
    }
    write_with_manifest(csv, dir / "noise_sweep_doppler.csv", run, "noise-sweep", params,
                        glob.workers);
    std::cout << "noise-sweep doppler: " << report.rows.size() << " rows; regime ratio "
              << fmt_double(report.regime.ratio) << " ("
              << (report.regime.pass ? "pass" : "warn") << ")\n";
    return kExitOk;
  }
  if (args.param == "arm_phase") {
    params["phase_mode"] = args.phase_mode;
    CsvWriter csv({"phase_rad", "fidelity", "coincidence_prob"});
    for (const double phi : grid) {
      InterferometerPhases phases;
      phases.phi_arm1_nu0 = (args.phase_mode == "common") ? phi : 0.0;
      phases.phi_arm1_nu1 = phi;
      const PhaseGateReport r = interferometer_phase_gate(balanced, balanced, phases);
      csv.add_row({phi, r.fidelity, r.coincidence_probability});
    }
    write_with_manifest(csv, dir / "noise_sweep_arm_phase.csv", run, "noise-sweep", params,
                        glob.workers);
    std::cout << "noise-sweep arm_phase (" << args.phase_mode << "): " << grid.size()
              << " rows\n";
    return kExitOk;
  }
  // path_mismatch, in millimetres: the two frequency components pick up a
  // differential phase (delta_hf_s + delta_hf_p) * path_mismatch / c.
  CsvWriter csv({"path_mismatch_mm", "delta_phi_rad", "fidelity"});
  for (const double mm : grid) {
    const double delta_phi =
        (run.cfg.species.delta_hf_s + run.cfg.species.delta_hf_p) * (mm * 1e-3) / kSpeedOfLight;
    InterferometerPhases phases;
    phases.phi_arm1_nu1 = delta_phi;
    const PhaseGateReport r = interferometer_phase_gate(balanced, balanced, phases);
    csv.add_row({mm, delta_phi, r.fidelity});
  }
  write_with_manifest(csv, dir / "noise_sweep_path_mismatch.csv", run, "noise-sweep", params,
                      glob.workers);
  std::cout << "noise-sweep path_mismatch: " << grid.size() << " rows\n";
  return kExitOk;
}

// --- grow-cluster ---------------------------------------------------------

struct GrowClusterArgs {
  int n = 0;
  double p_s = 0.0;
  std::optional<std::uint64_t> trials;
  std::string strategy = "pairwise_doubling";
};

int run_grow_cluster(const GlobalOptions& glob, const GrowClusterArgs& args) {
  const LoadedRun run = load_run(glob);
  const std::uint64_t trials = args.trials.value_or(run.cfg.trials);
  if (trials > kLongRunThreshold && !glob.allow_long) {
    std::cerr << "error: " << trials << " trials exceeds the default cap; pass --allow-long\n";
    return kExitUsage;
  }
  GrowthPolicy policy = run.cfg.growth_policy;
  policy.p_s = args.p_s;
  policy.strategy = args.strategy == "incremental" ? GrowthPolicy::Strategy::incremental
                                                   : GrowthPolicy::Strategy::pairwise_doubling;

  // Per-trial child streams, reduced in trial order: the result does not
  // depend on the worker count.
  const std::vector<double> lengths =
      parallel_map_doubles(trials, glob.workers, [&](std::uint64_t t) {
        RngStream rng = RngStream::child(run.cfg.master_seed, t);
        return static_cast<double>(simulate_merge_round(args.n, policy, rng));
      });
  double sum = 0.0, sum_sq = 0.0;
  for (const double v : lengths) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(trials);
  const double var = std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
  const double stderr_mean = std::sqrt(var / static_cast<double>(trials));
  const MergedLengthResult analytic = expected_merged_length(args.n, args.p_s);
  const bool non_growing = static_cast<double>(args.n) <= analytic.n_c;

  const fs::path dir = prepare_output_dir(run.cfg);
  CsvWriter csv({"n", "p_s", "n_c", "analytic_exact", "analytic_approx", "empirical_mean",
                 "empirical_stderr", "trials", "seed", "non_growing"});
  csv.add_row({static_cast<std::int64_t>(args.n), args.p_s, analytic.n_c, analytic.exact,
               analytic.approx, mean, stderr_mean, trials, run.cfg.master_seed,
               std::string(non_growing ? "true" : "false")});
  nlohmann::json params{{"n", args.n},
                        {"p_s", args.p_s},
                        {"trials", trials},
                        {"strategy", args.strategy}};
  write_with_manifest(csv, dir / "growth_report.csv", run, "grow-cluster", params, glob.workers);

  std::cout << "grow-cluster: n=" << args.n << " p_s=" << fmt_double(args.p_s) << "\n"
            << "  analytic exact   " << fmt_double(analytic.exact) << "\n"
            << "  analytic approx  " << fmt_double(analytic.approx)
            << " (n_c=" << fmt_double(analytic.n_c) << ")\n"
            << "  empirical mean   " << fmt_double(mean) << " +/- " << fmt_double(stderr_mean)
            << " (" << trials << " trials)\n";
  if (non_growing) {
    std::cout << "  note: n <= n_c, merging is in the non-growing regime\n";
  }
  return kExitOk;
}

// --- scaling-report -------------------------------------------------------

struct ScalingReportArgs {
  int target_length = 0;
  double p_s = 0.0;
  std::uint64_t trials = 100;
  std::string strategy = "pairwise_doubling";
  std::uint64_t max_operations = 1000000;
};

int run_scaling_report(const GlobalOptions& glob, const ScalingReportArgs& args) {
  const LoadedRun run = load_run(glob);
  GrowthPolicy policy = run.cfg.growth_policy;
  policy.p_s = args.p_s;
  policy.strategy = args.strategy == "incremental" ? GrowthPolicy::Strategy::incremental
                                                   : GrowthPolicy::Strategy::pairwise_doubling;
  const GrowthRunStats stats = grow_chain_monte_carlo(args.target_length, policy, args.trials,
                                                      run.cfg.master_seed, args.max_operations);
  const fs::path dir = prepare_output_dir(run.cfg);
  CsvWriter csv({"target_length", "p_s", "mean_operations", "stderr", "reached_fraction",
                 "trials", "seed"});
  csv.add_row({static_cast<std::int64_t>(args.target_length), args.p_s, stats.mean_operations,
               stats.operations_stderr, stats.reached_fraction, args.trials,
               run.cfg.master_seed});
  nlohmann::json params{{"target_length", args.target_length},
                        {"p_s", args.p_s},
                        {"trials", args.trials},
                        {"strategy", args.strategy},
                        {"max_operations", args.max_operations}};
  write_with_manifest(csv, dir / "scaling_report.csv", run, "scaling-report", params,
                      glob.workers);
  std::cout << "scaling-report: target " << args.target_length << ", mean operations "
            << fmt_double(stats.mean_operations) << " +/- "
            << fmt_double(stats.operations_stderr) << ", reached fraction "
            << fmt_double(stats.reached_fraction) << "\n";
  if (stats.non_growing) {
    std::cout << "  note: policy drift is non-positive; growth stalls below the target\n";
  }
  return kExitOk;
}

// --- validate-config ------------------------------------------------------

int run_validate_config(const GlobalOptions& glob) {
  const LoadedRun run = load_run(glob);
  const std::vector<std::string> issues = run.cfg.validate();
  bool hard_error = false;
  for (const auto& issue : issues) {
    const bool warning = issue.find("warning:") != std::string::npos;
    (warning ? std::cout : std::cerr) << (warning ? "warning: " : "error: ") << issue << "\n";
    if (!warning) hard_error = true;
  }
  if (hard_error) return kExitRuntime;
  std::cout << "configuration valid (hash " << run.config_hash << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freqlink: heralded remote-entanglement gate and cluster-growth simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GlobalOptions glob;
  app.add_option("--config", glob.config_path, "JSON configuration file");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "master seed (overrides config)");
  std::string out_value;
  auto* out_opt = app.add_option("--out", out_value, "output directory (overrides config)");
  app.add_option("--workers", glob.workers, "worker thread count")->check(CLI::PositiveNumber);
  app.add_flag("--allow-long", glob.allow_long, "permit runs above 10^7 attempts");

  SimulateGateArgs gate_args;
  auto* gate = app.add_subcommand("simulate-gate", "run heralded gate attempts on fixed inputs");
  gate->add_option("--c0", gate_args.c0, "atom 1 amplitude on |0> (complex literal)")->required();
  gate->add_option("--c1", gate_args.c1, "atom 1 amplitude on |1>")->required();
  gate->add_option("--d0", gate_args.d0, "atom 2 amplitude on |0>")->required();
  gate->add_option("--d1", gate_args.d1, "atom 2 amplitude on |1>")->required();
  gate->add_option("--overlap", gate_args.overlap, "photon wave-packet overlap J");
  std::uint64_t gate_trials = 0;
  auto* gate_trials_opt = gate->add_option("--trials", gate_trials, "attempt count");

  NoiseSweepArgs sweep_args;
  auto* sweep = app.add_subcommand("noise-sweep", "grid sweep of a noise parameter");
  sweep->add_option("--param", sweep_args.param, "parameter to sweep")
      ->required()
      ->check(CLI::IsMember({"doppler", "arm_phase", "path_mismatch"}));
  sweep->add_option("--range", sweep_args.range, "grid range LOW:HIGH")->required();
  sweep->add_option("--steps", sweep_args.steps, "grid point count")->required();
  sweep->add_option("--phase-mode", sweep_args.phase_mode, "arm_phase mode")
      ->check(CLI::IsMember({"common", "differential"}));

  GrowClusterArgs grow_args;
  auto* grow = app.add_subcommand("grow-cluster", "merge-round statistics vs the analytic form");
  grow->add_option("--n", grow_args.n, "starting chain length")->required()
      ->check(CLI::PositiveNumber);
  grow->add_option("--p-s", grow_args.p_s, "gate success probability in (0, 1]")
      ->required()
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  std::uint64_t grow_trials = 0;
  auto* grow_trials_opt = grow->add_option("--trials", grow_trials, "trial count");
  grow->add_option("--strategy", grow_args.strategy, "growth strategy")
      ->check(CLI::IsMember({"pairwise_doubling", "incremental"}));

  ScalingReportArgs scaling_args;
  auto* scaling = app.add_subcommand("scaling-report", "operation count to reach a target length");
  scaling->add_option("--target-length", scaling_args.target_length, "target chain length")
      ->required()
      ->check(CLI::PositiveNumber);
  scaling->add_option("--p-s", scaling_args.p_s, "gate success probability in (0, 1]")
      ->required()
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  scaling->add_option("--trials", scaling_args.trials, "trial count");
  scaling->add_option("--strategy", scaling_args.strategy, "growth strategy")
      ->check(CLI::IsMember({"pairwise_doubling", "incremental"}));
  scaling->add_option("--max-ops", scaling_args.max_operations,
                      "per-trial operation cap before giving up");

  auto* validate = app.add_subcommand("validate-config", "check the configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*seed_opt) glob.seed_override = seed_value;
  if (*out_opt) glob.out_override = out_value;
  if (*gate_trials_opt) gate_args.trials = gate_trials;
  if (*grow_trials_opt) grow_args.trials = grow_trials;

  try {
    if (gate->parsed()) return run_simulate_gate(glob, gate_args);
    if (sweep->parsed()) return run_noise_sweep(glob, sweep_args);
    if (grow->parsed()) return run_grow_cluster(glob, grow_args);
    if (scaling->parsed()) return run_scaling_report(glob, scaling_args);
    if (validate->parsed()) return run_validate_config(glob);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
