#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvmem/io.hpp"
#include "cvmem/oracles.hpp"

using namespace cvmem;

namespace {

constexpr const char* kToolVersion = "cvmem 0.1.0";

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<Outcome> parse_outcomes(const std::string& letters) {
  std::vector<Outcome> outcomes;
  for (char c : letters) {
    if (c == 'p' || c == 'P') {
      outcomes.push_back(Outcome::Positive);
    } else if (c == 'n' || c == 'N') {
      outcomes.push_back(Outcome::Negative);
    } else {
      throw CLI::ValidationError(
          "--outcomes", "expected a string of 'p'/'n' letters, got: " + letters);
    }
  }
  if (outcomes.empty()) {
    throw CLI::ValidationError("--outcomes", "must be nonempty");
  }
  return outcomes;
}

struct CommonOptions {
  std::string out;
  std::string format = "csv";
  std::string field = "entropy";
  std::string phase = "minus-i";
  int threads = 0;
  int n_cut = 0;     // 0: derive from the working point
  double tail_tol = 1e-12;

  void attach(CLI::App* cmd, bool with_format = false) {
    cmd->add_option("--out", out, "Output file path");
    if (with_format) {
      cmd->add_option("--format", format, "Output format")
          ->check(CLI::IsMember({"csv", "pgm"}));
      cmd->add_option("--field", field, "Heatmap field (pgm)")
          ->check(CLI::IsMember({"entropy", "probability"}));
    }
    cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
    cmd->add_option("--n-cut", n_cut, "Photon cutoff override");
    cmd->add_option("--tail-tol", tail_tol, "Truncation tail tolerance");
    cmd->add_option("--phase-convention", phase, "JC off-diagonal phase sign")
        ->check(CLI::IsMember({"minus-i", "plus-i"}));
  }

  PhaseConvention convention() const {
    return phase == "plus-i" ? PhaseConvention::PlusI
                             : PhaseConvention::MinusI;
  }

  std::optional<TruncationPolicy> policy_override() const {
    if (n_cut <= 0) return std::nullopt;
    return TruncationPolicy{n_cut, tail_tol};
  }

  RunManifest manifest(const std::string& command, int used_cutoff) const {
    RunManifest m;
    m.tool = kToolVersion;
    m.command_line = command;
    m.n_cut_used = used_cutoff;
    m.phase_convention = phase;
    return m;
  }
};

void print_record(const MetricsRecord& rec) {
  std::cout << "tau: " << fmt(rec.tau) << "\n"
            << "alpha: " << fmt(rec.alpha) << "\n"
            << "n_passages: " << rec.n_passages << "\n"
            << "entropy: " << fmt(rec.entropy) << "\n"
            << "prob_joint: " << fmt(rec.joint_probability) << "\n"
            << "prob_last: " << fmt(rec.last_conditional_probability) << "\n";
  if (rec.negativity) {
    std::cout << "negativity: " << fmt(*rec.negativity) << "\n";
  }
  if (rec.zero_probability) {
    std::cout << "zero_probability: true\n";
  }
}

int used_cutoff(const CommonOptions& common, double alpha_max, int passages) {
  return common.n_cut > 0 ? common.n_cut
                          : default_cutoff(alpha_max, passages);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command = join_argv(argc, argv);
  CLI::App app{"Conditional entanglement accumulation simulator for a "
               "two-mode register coupled to sequential mediators"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "Read defaults from a key=value file");
  app.require_subcommand(1);

  // ---- sweep ----------------------------------------------------------
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Entropy/probability over a (tau, alpha) grid");
  GridAxis tau_axis{0.0, 20.0, 81}, alpha_axis{0.0, 3.5, 36};
  int passages = 1;
  std::string outcome_letters;
  bool record_overlaps = false;
  CommonOptions sweep_common;
  sweep_cmd->add_option("--tau-min", tau_axis.min);
  sweep_cmd->add_option("--tau-max", tau_axis.max);
  sweep_cmd->add_option("--tau-steps", tau_axis.steps);
  sweep_cmd->add_option("--alpha-min", alpha_axis.min);
  sweep_cmd->add_option("--alpha-max", alpha_axis.max);
  sweep_cmd->add_option("--alpha-steps", alpha_axis.steps);
  sweep_cmd->add_option("--passages", passages, "All-positive passage count");
  sweep_cmd->add_option("--outcomes", outcome_letters,
                        "Explicit outcome letters, e.g. np");
  sweep_cmd->add_flag("--record-overlaps", record_overlaps);
  sweep_common.attach(sweep_cmd, true);

  // ---- point ----------------------------------------------------------
  auto* point_cmd = app.add_subcommand("point", "Single (tau, alpha) query");
  double tau = 1.0, alpha = 0.8;
  int point_passages = 1;
  std::string point_outcomes;
  CommonOptions point_common;
  point_cmd->add_option("--tau", tau)->required();
  point_cmd->add_option("--alpha", alpha)->required();
  point_cmd->add_option("--passages", point_passages);
  point_cmd->add_option("--outcomes", point_outcomes);
  point_common.attach(point_cmd);

  // ---- accumulate ------------------------------------------------------
  auto* acc_cmd = app.add_subcommand(
      "accumulate", "Entropy after 1..N all-positive passages");
  double acc_tau = 1.0, acc_alpha = 0.8;
  int max_passages = 2;
  CommonOptions acc_common;
  acc_cmd->add_option("--tau", acc_tau)->required();
  acc_cmd->add_option("--alpha", acc_alpha)->required();
  acc_cmd->add_option("--max-passages", max_passages);
  acc_common.attach(acc_cmd);

  // ---- sequence --------------------------------------------------------
  auto* seq_cmd = app.add_subcommand(
      "sequence", "Arbitrary outcome sequence at one working point");
  double seq_tau = 1.0, seq_alpha = 0.8;
  std::string seq_outcomes = "p";
  CommonOptions seq_common;
  seq_cmd->add_option("--tau", seq_tau)->required();
  seq_cmd->add_option("--alpha", seq_alpha)->required();
  seq_cmd->add_option("--outcomes", seq_outcomes)->required();
  seq_common.attach(seq_cmd);

  // ---- jitter ----------------------------------------------------------
  auto* jitter_cmd = app.add_subcommand(
      "jitter", "Monte Carlo spread of the second interaction time");
  double jit_tau = 1.0, jit_alpha = 0.8, sigma_rel = 0.05;
  int samples = 200, jit_passages = 1;
  std::uint64_t seed = 1;
  CommonOptions jit_common;
  jitter_cmd->add_option("--tau", jit_tau)->required();
  jitter_cmd->add_option("--alpha", jit_alpha)->required();
  jitter_cmd->add_option("--sigma-rel", sigma_rel);
  jitter_cmd->add_option("--samples", samples);
  jitter_cmd->add_option("--seed", seed);
  jitter_cmd->add_option("--passages", jit_passages);
  jit_common.attach(jitter_cmd);

  // ---- readout ---------------------------------------------------------
  auto* readout_cmd = app.add_subcommand(
      "readout", "Auxiliary-qubit negativity after N passages");
  double ro_tau = 1.0, ro_alpha = 0.8, tau_aux = kCalibratedAuxTime;
  int ro_passages = 1;
  CommonOptions ro_common;
  readout_cmd->add_option("--tau", ro_tau)->required();
  readout_cmd->add_option("--alpha", ro_alpha)->required();
  readout_cmd->add_option("--passages", ro_passages);
  readout_cmd->add_option("--tau-aux", tau_aux,
                          "Probe interaction time (default calibrated)");
  ro_common.attach(readout_cmd);

  // ---- overlaps --------------------------------------------------------
  auto* overlaps_cmd = app.add_subcommand(
      "overlaps", "Exact state overlaps against the Gaussian closed form");
  double ov_alpha = 6.0;
  GridAxis ov_tau{1.0, 3.0, 201};
  CommonOptions ov_common;
  overlaps_cmd->add_option("--alpha", ov_alpha)->required();
  overlaps_cmd->add_option("--tau-min", ov_tau.min);
  overlaps_cmd->add_option("--tau-max", ov_tau.max);
  overlaps_cmd->add_option("--tau-steps", ov_tau.steps);
  ov_common.attach(overlaps_cmd);

  // ---- vee -------------------------------------------------------------
  auto* vee_cmd = app.add_subcommand(
      "vee", "Three-level vee mediator passages in a single cavity");
  double vee_tau = 1.0, vee_alpha = 1.0;
  int vee_passages = 1;
  CommonOptions vee_common;
  vee_cmd->add_option("--tau", vee_tau)->required();
  vee_cmd->add_option("--alpha", vee_alpha)->required();
  vee_cmd->add_option("--passages", vee_passages);
  vee_common.attach(vee_cmd);

  // ---- oracle-check ----------------------------------------------------
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check",
      "Structured operators against dense matrix-exponential oracles");
  int oc_n_cut = 8, oc_samples = 10;
  std::uint64_t oc_seed = 7;
  oracle_cmd->add_option("--n-cut", oc_n_cut);
  oracle_cmd->add_option("--samples", oc_samples);
  oracle_cmd->add_option("--seed", oc_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sweep_cmd) {
      SweepConfig config;
      config.tau_grid = tau_axis;
      config.alpha_grid = alpha_axis;
      config.outcomes = outcome_letters.empty()
                            ? std::vector<Outcome>(passages, Outcome::Positive)
                            : parse_outcomes(outcome_letters);
      config.policy_override = sweep_common.policy_override();
      config.record_overlaps = record_overlaps;
      const std::vector<MetricsRecord> records =
          sweep(config, sweep_common.threads, sweep_common.convention());

      const MetricsRecord* best = &records.front();
      for (const auto& rec : records) {
        if (rec.entropy > best->entropy) best = &rec;
      }
      std::cout << "points: " << records.size() << "\n"
                << "max_entropy: " << fmt(best->entropy) << " at tau="
                << fmt(best->tau) << " alpha=" << fmt(best->alpha) << "\n";
      if (!sweep_common.out.empty()) {
        RunManifest manifest = sweep_common.manifest(
            command, used_cutoff(sweep_common, alpha_axis.max,
                                 static_cast<int>(config.outcomes.size())));
        if (sweep_common.format == "pgm") {
          write_heatmap(records, sweep_common.out,
                        sweep_common.field == "probability"
                            ? HeatmapField::Probability
                            : HeatmapField::Entropy,
                        manifest);
        } else {
          write_csv(records, sweep_common.out, manifest);
        }
        std::cout << "wrote: " << sweep_common.out << "\n";
      }
      return 0;
    }

    if (*point_cmd) {
      SweepConfig config;
      config.tau_grid = {tau, tau, 1};
      config.alpha_grid = {alpha, alpha, 1};
      config.outcomes =
          point_outcomes.empty()
              ? std::vector<Outcome>(point_passages, Outcome::Positive)
              : parse_outcomes(point_outcomes);
      config.policy_override = point_common.policy_override();
      const ModeVector coh = coherent_amplitudes(
          alpha, config.policy_override.value_or(default_policy(
                     alpha, static_cast<int>(config.outcomes.size()))));
      const TruncationPolicy policy =
          config.policy_override.value_or(default_policy(
              alpha, static_cast<int>(config.outcomes.size())));
      const SequenceResult run =
          run_sequence(product_state(coh, coh).normalized(),
                       MediatorSpec::ground_to_excited(), tau,
                       config.outcomes, policy, point_common.convention());
      MetricsRecord rec;
      rec.tau = tau;
      rec.alpha = alpha;
      rec.n_passages = static_cast<int>(config.outcomes.size());
      rec.entropy = entanglement_entropy(run.state);
      rec.joint_probability = run.joint_probability;
      rec.last_conditional_probability =
          run.passages.back().conditional_probability;
      print_record(rec);
      if (!point_common.out.empty()) {
        write_csv({rec}, point_common.out,
                  point_common.manifest(command, policy.n_cut));
      }
      return 0;
    }

    if (*acc_cmd) {
      const std::vector<MetricsRecord> records = accumulation_curve(
          acc_tau, acc_alpha, max_passages, MediatorSpec::ground_to_excited(),
          acc_common.policy_override(), acc_common.convention());
      for (const auto& rec : records) {
        std::cout << "n=" << rec.n_passages << " entropy=" << fmt(rec.entropy)
                  << " prob_joint=" << fmt(rec.joint_probability)
                  << (rec.zero_probability ? " zero_probability" : "") << "\n";
      }
      if (!acc_common.out.empty()) {
        write_csv(records, acc_common.out,
                  acc_common.manifest(
                      command, used_cutoff(acc_common, acc_alpha,
                                           max_passages)));
      }
      return 0;
    }

    if (*seq_cmd) {
      const std::vector<Outcome> outcomes = parse_outcomes(seq_outcomes);
      const TruncationPolicy policy = seq_common.policy_override().value_or(
          default_policy(seq_alpha, static_cast<int>(outcomes.size())));
      const ModeVector coh = coherent_amplitudes(seq_alpha, policy);
      const SequenceResult run =
          run_sequence(product_state(coh, coh).normalized(),
                       MediatorSpec::ground_to_excited(), seq_tau, outcomes,
                       policy, seq_common.convention());
      MetricsRecord rec;
      rec.tau = seq_tau;
      rec.alpha = seq_alpha;
      rec.n_passages = static_cast<int>(outcomes.size());
      rec.entropy = entanglement_entropy(run.state);
      rec.joint_probability = run.joint_probability;
      rec.last_conditional_probability =
          run.passages.back().conditional_probability;
      for (std::size_t k = 0; k < run.passages.size(); ++k) {
        std::cout << "passage " << k << " (" << to_string(outcomes[k])
                  << "): prob="
                  << fmt(run.passages[k].conditional_probability) << "\n";
      }
      print_record(rec);
      if (!seq_common.out.empty()) {
        write_csv({rec}, seq_common.out,
                  seq_common.manifest(command, policy.n_cut));
      }
      return 0;
    }

    if (*jitter_cmd) {
      SweepConfig base;
      base.tau_grid = {jit_tau, jit_tau, 1};
      base.alpha_grid = {jit_alpha, jit_alpha, 1};
      base.outcomes = std::vector<Outcome>(jit_passages, Outcome::Positive);
      base.policy_override = jit_common.policy_override();
      JitterConfig jitter{jit_tau, sigma_rel, samples, seed};
      const JitterSummary summary =
          jitter_study(base, jitter, jit_common.convention());
      std::cout << "noiseless_entropy: " << fmt(summary.noiseless_entropy)
                << "\nmean_entropy: " << fmt(summary.mean_entropy)
                << "\nstd_entropy: " << fmt(summary.std_entropy)
                << "\nmean_probability: " << fmt(summary.mean_probability)
                << "\nsamples: " << summary.samples << "\n";
      if (!jit_common.out.empty()) {
        RunManifest manifest = jit_common.manifest(
            command, used_cutoff(jit_common, jit_alpha, jit_passages));
        manifest.seed = seed;
        std::ofstream out(jit_common.out);
        if (!out) throw SimError("cannot open: " + jit_common.out);
        out << "noiseless_entropy,mean_entropy,std_entropy,mean_probability,"
               "samples\n"
            << fmt(summary.noiseless_entropy) << ','
            << fmt(summary.mean_entropy) << ',' << fmt(summary.std_entropy)
            << ',' << fmt(summary.mean_probability) << ',' << summary.samples
            << "\n";
        out.close();
        write_manifest(manifest, jit_common.out + ".manifest.txt");
      }
      return 0;
    }

    if (*readout_cmd) {
      const MetricsRecord rec = readout_experiment(
          ro_tau, ro_alpha, ro_passages, tau_aux, ro_common.convention());
      print_record(rec);
      if (!ro_common.out.empty()) {
        RunManifest manifest = ro_common.manifest(
            command, used_cutoff(ro_common, ro_alpha, ro_passages));
        manifest.extra.emplace_back("tau_aux", fmt(tau_aux));
        write_csv({rec}, ro_common.out, manifest);
      }
      return 0;
    }

    if (*overlaps_cmd) {
      ov_tau.validate();
      const TruncationPolicy policy =
          ov_common.policy_override().value_or(default_policy(ov_alpha, 0));
      std::ostringstream table;
      table << "tau,alpha,gamma_lambda_abs,delta_gamma_abs,delta_lambda_abs,"
               "gamma_lambda_signed,gaussian_form\n";
      for (int i = 0; i < ov_tau.steps; ++i) {
        const double t = ov_tau.value(i);
        const OverlapReport report =
            lambda_delta_gamma(t, ov_alpha, policy, ov_common.convention());
        table << fmt(t) << ',' << fmt(ov_alpha) << ','
              << fmt(std::abs(report.gamma_lambda)) << ','
              << fmt(std::abs(report.delta_gamma)) << ','
              << fmt(std::abs(report.delta_lambda)) << ','
              << fmt(gamma_lambda_signed(t, ov_alpha, policy.n_cut)) << ','
              << fmt(report.gaussian_gamma_lambda) << "\n";
      }
      if (ov_common.out.empty()) {
        std::cout << table.str();
      } else {
        std::ofstream out(ov_common.out, std::ios::binary);
        if (!out) throw SimError("cannot open: " + ov_common.out);
        out << table.str();
        out.close();
        write_manifest(ov_common.manifest(command, policy.n_cut),
                       ov_common.out + ".manifest.txt");
        std::cout << "wrote: " << ov_common.out << "\n";
      }
      return 0;
    }

    if (*vee_cmd) {
      const std::vector<MetricsRecord> records =
          vee_curve(vee_tau, vee_alpha, vee_passages,
                    vee_common.policy_override(), vee_common.convention());
      for (const auto& rec : records) {
        std::cout << "n=" << rec.n_passages << " entropy=" << fmt(rec.entropy)
                  << " prob_joint=" << fmt(rec.joint_probability)
                  << (rec.zero_probability ? " zero_probability" : "") << "\n";
      }
      if (records.back().zero_probability) {
        std::cerr << "vee projection impossible at this point\n";
        return 3;
      }
      if (!vee_common.out.empty()) {
        write_csv(records, vee_common.out,
                  vee_common.manifest(command,
                                      used_cutoff(vee_common, vee_alpha,
                                                  vee_passages)));
      }
      return 0;
    }

    if (*oracle_cmd) {
      std::mt19937_64 rng(oc_seed);
      std::uniform_real_distribution<double> tau_dist(0.05, 2.5);
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      double worst_effective = 0.0, worst_jc = 0.0, worst_vee = 0.0;
      for (int s = 0; s < oc_samples; ++s) {
        MediatorSpec spec;
        const double w = uni(rng);
        spec.c_g = std::sqrt(w) * std::exp(Complex(0, 2 * std::numbers::pi * uni(rng)));
        spec.c_e = std::sqrt(1 - w) * std::exp(Complex(0, 2 * std::numbers::pi * uni(rng)));
        spec.theta = uni(rng) * std::numbers::pi / 2;
        spec.varphi = uni(rng) * 2 * std::numbers::pi * 0.999;
        const double ta = tau_dist(rng);
        const double tb = tau_dist(rng);
        const Outcome outcome = s % 2 ? Outcome::Negative : Outcome::Positive;
        worst_effective = std::max(
            worst_effective,
            effective_operator_deviation(spec, ta, tb, oc_n_cut, outcome));
        worst_jc = std::max(
            worst_jc, jc_oracle_deviation(ta, TruncationPolicy{oc_n_cut}));
        worst_vee = std::max(
            worst_vee, vee_oracle_deviation(ta, std::min(oc_n_cut, 8)));
      }
      std::cout << "effective_operator_max_deviation: " << worst_effective
                << "\njc_blocks_max_deviation: " << worst_jc
                << "\nvee_max_deviation: " << worst_vee << "\n";
      const bool ok =
          worst_effective < 1e-10 && worst_jc < 1e-10 && worst_vee < 1e-10;
      std::cout << (ok ? "oracle check passed" : "oracle check FAILED")
                << "\n";
      return ok ? 0 : 1;
    }
  } catch (const ZeroProbabilityOutcome& e) {
    std::cerr << "zero-probability outcome: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
