#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cvmem/conditional.hpp"
#include "cvmem/metrics.hpp"

namespace cvmem {

/// Rescaled interaction time of the auxiliary readout probes that
/// reproduces the reference negativity pair (0.55, 0.87) after one and two
/// mediator passages at tau = 1, alpha = 0.8. Fixed by calibration; see
/// kAuxTimeInterpretation.
inline constexpr double kCalibratedAuxTime = 0.5;
inline constexpr const char* kAuxTimeInterpretation =
    "tau_aux=0.5 (calibrated against the reference negativity pair "
    "0.55/0.87 at tau=1, alpha=0.8)";

/// Name of the jitter sampling scheme recorded in run manifests.
inline constexpr const char* kPrngName = "mt19937_64+box-muller";

/// Uniform inclusive grid over [min, max] with `steps` points (steps == 1
/// collapses to min).
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  void validate() const;
  double value(int i) const {
    return steps == 1 ? min : min + i * (max - min) / (steps - 1);
  }
};

struct SweepConfig {
  GridAxis tau_grid;
  GridAxis alpha_grid;
  std::vector<Outcome> outcomes{Outcome::Positive};
  MediatorSpec spec = MediatorSpec::ground_to_excited();
  std::optional<TruncationPolicy> policy_override;
  bool record_overlaps = false;
};

struct JitterConfig {
  double tau_a = 0.0;
  double sigma_rel = 0.05;
  int samples = 200;
  std::uint64_t seed = 0;
};

struct OverlapMagnitudes {
  double gamma_lambda = 0.0;
  double delta_gamma = 0.0;
  double delta_lambda = 0.0;
};

/// One parameter point of a study. Points where the requested outcome
/// sequence is impossible are flagged with zero_probability and carry
/// entropy 0, probabilities 0.
struct MetricsRecord {
  double tau = 0.0;
  double alpha = 0.0;
  int n_passages = 0;
  double entropy = 0.0;
  double joint_probability = 0.0;
  double last_conditional_probability = 0.0;
  std::optional<OverlapMagnitudes> overlaps;
  std::optional<double> negativity;
  bool zero_probability = false;
};

/// Evaluates the outcome sequence on every (tau, alpha) grid point.
/// Records appear in canonical order (tau-major). Points are independent
/// and may be computed by a worker pool; results do not depend on the
/// schedule. n_threads = 0 picks the hardware concurrency.
std::vector<MetricsRecord> sweep(const SweepConfig& config, int n_threads = 0,
                                 PhaseConvention convention =
                                     PhaseConvention::MinusI);

/// Entropy and probabilities after each of 1..max_passages all-positive
/// passages at one working point.
std::vector<MetricsRecord> accumulation_curve(
    double tau, double alpha, int max_passages,
    const MediatorSpec& spec = MediatorSpec::ground_to_excited(),
    std::optional<TruncationPolicy> policy_override = {},
    PhaseConvention convention = PhaseConvention::MinusI);

struct JitterSummary {
  double mean_entropy = 0.0;
  double std_entropy = 0.0;
  double mean_probability = 0.0;
  double noiseless_entropy = 0.0;
  int samples = 0;
};

/// Monte Carlo over the second cavity's interaction time: tau_b is drawn
/// from Normal(tau_a, (sigma_rel tau_a)^2), truncated at zero by
/// resampling. The base config supplies alpha (single-point grids), the
/// outcome sequence and the mediator spec; every passage of a sample draws
/// a fresh tau_b. Deterministic for fixed seed and sample count.
JitterSummary jitter_study(const SweepConfig& base, const JitterConfig& jitter,
                           PhaseConvention convention =
                               PhaseConvention::MinusI);

/// n all-positive passages followed by the auxiliary-qubit readout at
/// tau_aux; the record carries both the register entropy and the
/// negativity.
MetricsRecord readout_experiment(double tau, double alpha, int n_passages,
                                 double tau_aux = kCalibratedAuxTime,
                                 PhaseConvention convention =
                                     PhaseConvention::MinusI);

/// Single positive passage at tau in {1, 2, 3} for a near-vacuum amplitude
/// (0 < alpha <= 0.05): entanglement appears at integer tau with tiny
/// success probability.
std::vector<MetricsRecord> integer_tau_probe(double alpha,
                                             PhaseConvention convention =
                                                 PhaseConvention::MinusI);

/// n_passages of the vee mediator (ground projection each time) starting
/// from |alpha, alpha>.
std::vector<MetricsRecord> vee_curve(double tau, double alpha, int n_passages,
                                     std::optional<TruncationPolicy>
                                         policy_override = {},
                                     PhaseConvention convention =
                                         PhaseConvention::MinusI);

/// Deterministic maximum of the n-passage entropy over a (tau, alpha)
/// region: coarse grid scan followed by local grid refinement around the
/// best coarse points. Returns the refined best record.
MetricsRecord max_entropy_search(const GridAxis& tau_axis,
                                 const GridAxis& alpha_axis,
                                 const std::vector<Outcome>& outcomes,
                                 int n_threads = 0,
                                 PhaseConvention convention =
                                     PhaseConvention::MinusI);

}  // namespace cvmem
