// Copyright 2026 The fockbell Authors
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

// fockbell command-line interface.
//
// Exit status: 0 success, 1 computation error, 2 usage error, 3 verification
// failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockbell/bell_chsh.hpp"
#include "fockbell/json_io.hpp"
#include "fockbell/sampler.hpp"
#include "fockbell/sweep.hpp"
#include "fockbell/verify.hpp"

namespace {

using namespace fockbell;

constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerify = 3;

struct Common {
  std::string out;
  std::string format = "csv";
  int cutoff = 3;
  double tail_eps = 1e-10;
  std::uint64_t seed = 1;
  std::uint64_t shots = 1000000;
  unsigned threads = 1;
  std::string command_line;
};

/// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Metadata metadata(const Common& c) {
  Metadata m;
  m.command_line = c.command_line;
  return m;
}

void write_key_values(std::ostream& os, const Json& j, const Common& c) {
  write_metadata_comments(os, metadata(c));
  os << "key,value\n";
  for (const auto& [k, v] : j.items()) os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

void emit(const Json& j, const Common& c) {
  Sink sink(c.out);
  if (c.format == "json") {
    Json full = j;
    full["metadata"] = metadata(c).to_json();
    sink.stream() << full.dump(2) << '\n';
  } else {
    write_key_values(sink.stream(), j, c);
  }
}

// --- source selection shared by bell and sample -----------------------------

struct SourceOptions {
  std::string kind = "thermal";
  std::optional<double> mean_a;
  std::optional<double> mean_b;
  std::optional<double> p0;
  std::optional<double> r0;

  void add(CLI::App* app) {
    app->add_option("--kind", kind, "Source statistics")->check(CLI::IsMember({"thermal", "pseudothermal"}));
    app->add_option("--mean-a", mean_a, "Mean photon number on side A");
    app->add_option("--mean-b", mean_b, "Mean photon number on side B (default: --mean-a)");
    app->add_option("--p0", p0, "Vacuum weight on side A (two-class input)");
    app->add_option("--r0", r0, "Vacuum weight on side B (default: --p0)");
  }

  ConditionalOutputEnsemble ensemble(double eps) const {
    if (p0 || r0) {
      if (mean_a || mean_b) throw UsageError("give either --p0/--r0 or --mean-a/--mean-b, not both");
      const double a = p0.value_or(*r0), b = r0.value_or(a);
      if (!(a >= 0 && a <= 1 && b >= 0 && b <= 1)) throw UsageError("vacuum weights must lie in [0, 1]");
      if (a * b >= 1.0) throw UsageError("p0 = r0 = 1 leaves nothing to herald");
      return build_output_ensemble(PhotonNumberDistribution::custom({a, 1 - a}),
                                   PhotonNumberDistribution::custom({b, 1 - b}));
    }
    if (!mean_a) throw UsageError("a source is required: --mean-a or --p0");
    const double a = *mean_a, b = mean_b.value_or(a);
    if (a < 0 || b < 0) throw UsageError("mean photon numbers must be >= 0");
    const auto k = source_kind_from_string(kind);
    return build_output_ensemble(make_distribution(k, a, eps), make_distribution(k, b, eps));
  }
};

struct AngleOptions {
  BellAngles angles = canonical_angles();
  void add(CLI::App* app) {
    app->add_option("--theta-a", angles.theta_A, "Rotation angle a (rad)");
    app->add_option("--theta-a-prime", angles.theta_A_prime, "Rotation angle a' (rad)");
    app->add_option("--theta-b", angles.theta_B, "Rotation angle b (rad)");
    app->add_option("--theta-b-prime", angles.theta_B_prime, "Rotation angle b' (rad)");
  }
};

// --- subcommands --------------------------------------------------------------

struct Fig2Options {
  double a_min = 0.01, a_max = 1.0, b_min = 0.01, b_max = 1.0, step = 0.01;
};

int run_fig2(const Fig2Options& o, const Common& c) {
  const auto grid = fig2_grid(o.a_min, o.a_max, o.b_min, o.b_max, o.step);
  Sink sink(c.out);
  if (c.format == "json") {
    sink.stream() << grid_to_json(grid, metadata(c)).dump(2) << '\n';
  } else {
    write_grid_csv(sink.stream(), grid, metadata(c));
  }
  return 0;
}

struct BorderOptions {
  double a_min = 0.5, a_max = 20.0, a_step = 0.5, b_min = 1e-3, b_max = 1e3;
};

int run_border(const BorderOptions& o, const Common& c) {
  if (!(o.b_min > 0.0) || !(o.b_max > o.b_min)) throw UsageError("B range must be positive and nonempty");
  const auto curves = border_curves(make_axis(o.a_min, o.a_max, o.a_step), o.b_min, o.b_max);
  Sink sink(c.out);
  if (c.format == "json") {
    sink.stream() << border_to_json(curves, metadata(c)).dump(2) << '\n';
  } else {
    write_border_csv(sink.stream(), curves, metadata(c));
  }
  return 0;
}

struct ThresholdOptions {
  std::string kind = "thermal";
  std::optional<double> omega, temperature, beta, mean_n;
};

int run_threshold(const ThresholdOptions& o, const Common& c) {
  Json j;
  j["kind"] = o.kind;
  if (o.kind == "pseudothermal") {
    if (o.omega || o.temperature || o.beta) throw UsageError("pseudothermal sources take --mean-n only");
    j["threshold_mean_n"] = thresholds::pseudothermal_mean();
    if (o.mean_n) {
      if (!(*o.mean_n > 0.0)) throw UsageError("--mean-n must be positive");
      const double p0 = std::exp(-*o.mean_n), b = pseudothermal_bell_max(*o.mean_n, *o.mean_n);
      j["mean_n"] = *o.mean_n;
      j["p0"] = p0;
      j["bell_max"] = b;
      j["violated"] = b > kLocalBound;
    }
    emit(j, c);
    return 0;
  }

  j["threshold_beta"] = thresholds::thermal_beta();
  j["threshold_mean_n"] = thresholds::thermal_mean();
  if (o.temperature && !o.omega) throw UsageError("--temperature requires --omega");
  const int given = (o.temperature ? 1 : 0) + (o.beta ? 1 : 0) + (o.mean_n ? 1 : 0);
  if (given > 1) {
    // Accept redundant specifications only when they agree.
    std::vector<double> betas;
    if (o.temperature) betas.push_back(beta_from_temperature(*o.omega, *o.temperature));
    if (o.beta) betas.push_back(*o.beta);
    if (o.mean_n) betas.push_back(mean_n_to_beta(*o.mean_n));
    for (double b : betas) {
      if (std::abs(b - betas.front()) > 1e-9 * betas.front()) {
        throw UsageError("inconsistent over-specification of the source");
      }
    }
  }
  if (o.omega) {
    if (!(*o.omega > 0.0)) throw UsageError("--omega must be positive");
    j["omega"] = *o.omega;
    j["minimal_temperature_K"] = temperature_from_beta(*o.omega, thresholds::thermal_beta());
  }
  std::optional<double> beta;
  if (o.temperature) {
    if (!(*o.temperature > 0.0)) throw UsageError("--temperature must be positive");
    j["temperature_K"] = *o.temperature;
    beta = beta_from_temperature(*o.omega, *o.temperature);
  } else if (o.beta) {
    if (!(*o.beta > 0.0)) throw UsageError("--beta must be positive");
    beta = *o.beta;
  } else if (o.mean_n) {
    if (!(*o.mean_n > 0.0)) throw UsageError("--mean-n must be positive");
    beta = mean_n_to_beta(*o.mean_n);
  }
  if (beta) {
    const auto s = SourceParameters::from_beta(*beta);
    const double b = thermal_bell_max(s.beta, s.beta);
    j["beta"] = s.beta;
    j["mean_n"] = s.mean_n;
    j["p0"] = 1.0 / (1.0 + s.mean_n);
    j["bell_max"] = b;
    j["violated"] = b > kLocalBound;
  }
  emit(j, c);
  return 0;
}

struct VerifyCliOptions {
  std::optional<double> tolerance;
  double kerr_phase = 1.0;
  int witness_cutoff = 3;
};

int run_verify(const VerifyCliOptions& o, const Common& c) {
  VerifyOptions v;
  v.device_cutoff = c.cutoff;
  v.witness_cutoff = o.witness_cutoff;
  v.epsilon_tail = std::min(c.tail_eps, 1e-12);
  v.kerr_phase_over_pi = o.kerr_phase;
  v.tolerance_override = o.tolerance;
  if (c.cutoff < 1 || c.cutoff > kMaxOracleCutoff) {
    throw UsageError("--cutoff for verify must lie in [1, " + std::to_string(kMaxOracleCutoff) + "]");
  }
  if (o.witness_cutoff < 1 || o.witness_cutoff > 6) throw UsageError("--witness-cutoff must lie in [1, 6]");
  const auto results = run_verification(v);
  bool ok = true;
  Sink sink(c.out);
  if (c.format == "json") {
    Json checks = Json::array();
    for (const auto& r : results) {
      checks.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"tolerance", r.tolerance}});
      ok = ok && r.passed;
    }
    sink.stream() << Json{{"metadata", metadata(c).to_json()}, {"checks", checks}, {"all_passed", ok}}.dump(2)
                  << '\n';
  } else {
    write_metadata_comments(sink.stream(), metadata(c));
    sink.stream() << "check,status,measured,tolerance\n";
    for (const auto& r : results) {
      sink.stream() << r.name << ',' << (r.passed ? "pass" : "FAIL") << ',' << format_number(r.measured) << ','
                    << format_number(r.tolerance) << '\n';
      ok = ok && r.passed;
    }
  }
  if (!ok) std::cerr << "verify: one or more checks failed\n";
  return ok ? 0 : kExitVerify;
}

struct MultimodeOptions {
  std::string kind = "thermal";
  std::optional<double> mean_n;
  std::size_t modes = 1;
  std::string mode_list;
  std::size_t max_modes = 1000;
};

std::vector<PhotonNumberDistribution> parse_mode_list(const std::string& list, double eps) {
  std::vector<PhotonNumberDistribution> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("mode list entries must look like kind:mean");
    const std::string kind = item.substr(0, colon);
    if (kind != "thermal" && kind != "pseudothermal") throw UsageError("unknown source kind '" + kind + "'");
    double mean = 0.0;
    try {
      mean = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad mean photon number in '" + item + "'");
    }
    if (mean < 0) throw UsageError("mean photon numbers must be >= 0");
    out.push_back(make_distribution(source_kind_from_string(kind), mean, eps));
  }
  if (out.empty()) throw UsageError("empty mode list");
  return out;
}

int run_multimode(const MultimodeOptions& o, const Common& c) {
  if (!o.mode_list.empty() && o.mean_n) throw UsageError("give either --mode-list or --mean-n, not both");
  std::vector<PhotonNumberDistribution> modes;
  if (!o.mode_list.empty()) {
    modes = parse_mode_list(o.mode_list, c.tail_eps);
  } else {
    if (!o.mean_n) throw UsageError("multimode needs --mean-n or --mode-list");
    if (o.modes < 1) throw UsageError("--modes must be >= 1");
    if (*o.mean_n < 0) throw UsageError("mean photon numbers must be >= 0");
    modes.assign(o.modes, make_distribution(source_kind_from_string(o.kind), *o.mean_n, c.tail_eps));
  }
  const MultiModeSource source(modes);
  Json j;
  j["modes"] = source.mode_count();
  j["p0_effective"] = source.vacuum_overlap();
  if (source.vacuum_overlap() < 1.0) {
    const double b = multimode_bell_max(source, source);
    j["bell_max"] = b;
    j["violated"] = b > kLocalBound;
  } else {
    j["bell_max"] = nullptr;
    j["violated"] = false;
  }
  bool identical = true;
  for (const auto& m : modes) identical = identical && m.weights() == modes.front().weights();
  if (identical) {
    auto nu = minimal_mode_count(modes.front().vacuum_overlap(), modes.front().vacuum_overlap(), o.max_modes);
    j["minimal_violating_modes"] = nu ? Json(*nu) : Json(nullptr);
  }
  emit(j, c);
  return 0;
}

struct BellCliOptions {
  SourceOptions source;
  AngleOptions angles;
  bool search = false;
};

int run_bell(const BellCliOptions& o, const Common& c) {
  const auto e = o.source.ensemble(c.tail_eps);
  const auto enumerated = bell_value_enumerated(e, o.angles.angles);
  const auto analytic = bell_value_analytic(e.p0(), e.r0(), o.angles.angles);
  Json j;
  j["p0"] = e.p0();
  j["r0"] = e.r0();
  j["angles"] = to_json(o.angles.angles);
  j["bell_enumerated"] = enumerated.bell_value;
  j["bell_analytic"] = analytic.bell_value;
  j["correlations_enumerated"] = enumerated.correlations;
  j["bell_max"] = bell_max_analytic(e.p0(), e.r0());
  j["violated"] = enumerated.bell_value > kLocalBound;
  j["tail_deficit"] = e.tail_deficit();
  if (o.search) {
    const auto s = search_bell_angles([&](double a, double b) { return correlation_analytic(e.p0(), e.r0(), a, b); });
    j["search_bell_value"] = s.bell_value;
    j["search_angles"] = to_json(s.angles);
  }
  emit(j, c);
  return 0;
}

struct SampleCliOptions {
  SourceOptions source;
  AngleOptions angles;
};

int run_sample(const SampleCliOptions& o, const Common& c) {
  if (c.shots < 1) throw UsageError("--shots must be >= 1");
  const auto e = o.source.ensemble(c.tail_eps);
  SampleConfig cfg;
  cfg.seed = c.seed;
  cfg.shots_per_setting = c.shots;
  cfg.angles = o.angles.angles;
  cfg.threads = c.threads;
  Json j = to_json(estimate_bell(e, cfg), cfg);
  j["bell_exact"] = bell_value_analytic(e.p0(), e.r0(), cfg.angles).bell_value;
  if (c.format == "json") {
    emit(j, c);
  } else {
    Sink sink(c.out);
    write_metadata_comments(sink.stream(), metadata(c));
    sink.stream() << "# seed: " << cfg.seed << "\n# generator_id: " << kGeneratorId << "\n";
    sink.stream() << "setting,theta_A,theta_B,estimate,stderr,shots\n";
    const auto settings = bell_settings(cfg.angles);
    for (std::size_t k = 0; k < 4; ++k) {
      sink.stream() << k << ',' << format_number(settings[k][0]) << ',' << format_number(settings[k][1]) << ','
                    << format_number(j["estimates"][k].get<double>()) << ','
                    << format_number(j["stderrs"][k].get<double>()) << ',' << cfg.shots_per_setting << '\n';
    }
    sink.stream() << "bell,,," << format_number(j["bell_estimate"].get<double>()) << ','
                  << format_number(j["bell_stderr"].get<double>()) << ',' << cfg.shots_per_setting << '\n';
  }
  return 0;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional entangling device: Bell violation, witnesses and sampling"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  common.command_line = join_args(argc, argv);
  app.add_option("--out,-o", common.out, "Output file (default: stdout)");
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cutoff", common.cutoff, "Fock cutoff for dense computations");
  app.add_option("--tail-eps", common.tail_eps, "Maximum discarded tail mass of input distributions")
      ->check(CLI::Range(1e-300, 0.5));
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--shots", common.shots, "Shots per measurement setting");
  app.add_option("--threads", common.threads, "Worker threads for sampling (0: all cores)");

  Fig2Options fig2;
  auto* fig2_cmd = app.add_subcommand("fig2", "Thermal maximal Bell value over a (beta_A, beta_B) grid");
  fig2_cmd->add_option("--beta-a-min", fig2.a_min);
  fig2_cmd->add_option("--beta-a-max", fig2.a_max);
  fig2_cmd->add_option("--beta-b-min", fig2.b_min);
  fig2_cmd->add_option("--beta-b-max", fig2.b_max);
  fig2_cmd->add_option("--step", fig2.step);

  BorderOptions border;
  auto* border_cmd = app.add_subcommand("border", "Violation border curves for thermal and pseudothermal light");
  border_cmd->add_option("--mean-a-min", border.a_min);
  border_cmd->add_option("--mean-a-max", border.a_max);
  border_cmd->add_option("--mean-a-step", border.a_step);
  border_cmd->add_option("--mean-b-min", border.b_min);
  border_cmd->add_option("--mean-b-max", border.b_max);

  ThresholdOptions threshold;
  auto* threshold_cmd = app.add_subcommand("threshold", "Violation report for one source, or minimal temperature");
  threshold_cmd->add_option("--kind", threshold.kind)->check(CLI::IsMember({"thermal", "pseudothermal"}));
  threshold_cmd->add_option("--omega", threshold.omega, "Angular frequency (rad/s)");
  threshold_cmd->add_option("--temperature", threshold.temperature, "Temperature (K)");
  threshold_cmd->add_option("--beta", threshold.beta, "hbar omega / (k_B T)");
  threshold_cmd->add_option("--mean-n", threshold.mean_n, "Mean photon number");

  VerifyCliOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in consistency checks");
  verify_cmd->add_option("--tolerance", verify.tolerance, "Override every check tolerance");
  verify_cmd->add_option("--kerr-phase", verify.kerr_phase, "Kerr phase in units of pi (negative control)");
  verify_cmd->add_option("--witness-cutoff", verify.witness_cutoff, "Cutoff of the dense witness state");

  MultimodeOptions multimode;
  auto* multimode_cmd = app.add_subcommand("multimode", "Multi-mode sources: effective vacuum weight and violation");
  multimode_cmd->add_option("--kind", multimode.kind)->check(CLI::IsMember({"thermal", "pseudothermal"}));
  multimode_cmd->add_option("--mean-n", multimode.mean_n, "Mean photon number per mode");
  multimode_cmd->add_option("--modes", multimode.modes, "Number of identical modes");
  multimode_cmd->add_option("--mode-list", multimode.mode_list, "Comma list of kind:mean, e.g. thermal:0.5,pseudothermal:1");
  multimode_cmd->add_option("--max-modes", multimode.max_modes, "Search limit for the minimal mode count");

  BellCliOptions bell;
  auto* bell_cmd = app.add_subcommand("bell", "Exact Bell value for given sources and angles");
  bell.source.add(bell_cmd);
  bell.angles.add(bell_cmd);
  bell_cmd->add_flag("--search", bell.search, "Also grid-search the optimal angles");

  SampleCliOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo estimate of the Bell value");
  sample.source.add(sample_cmd);
  sample.angles.add(sample_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fig2_cmd) return run_fig2(fig2, common);
    if (*border_cmd) return run_border(border, common);
    if (*threshold_cmd) return run_threshold(threshold, common);
    if (*verify_cmd) return run_verify(verify, common);
    if (*multimode_cmd) return run_multimode(multimode, common);
    if (*bell_cmd) return run_bell(bell, common);
    if (*sample_cmd) return run_sample(sample, common);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitUsage;
}
