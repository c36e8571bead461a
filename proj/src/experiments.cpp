#include "cvmem/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace cvmem {

namespace {

void parallel_for(int count, int n_threads, const std::function<void(int)>& fn) {
  if (n_threads == 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  n_threads = std::max(1, std::min(n_threads, count));
  if (n_threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          fn(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

TruncationPolicy policy_for(const std::optional<TruncationPolicy>& override_,
                            double alpha, int n_passages) {
  if (override_) return *override_;
  return default_policy(alpha, n_passages);
}

MetricsRecord evaluate_point(double tau, double alpha,
                             const SweepConfig& config,
                             PhaseConvention convention) {
  const int n = static_cast<int>(config.outcomes.size());
  MetricsRecord rec;
  rec.tau = tau;
  rec.alpha = alpha;
  rec.n_passages = n;

  const TruncationPolicy policy =
      policy_for(config.policy_override, alpha, n);
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  const JointState initial = product_state(coh, coh).normalized();
  try {
    const SequenceResult run = run_sequence(initial, config.spec, tau,
                                            config.outcomes, policy,
                                            convention);
    rec.entropy = entanglement_entropy(run.state);
    rec.joint_probability = run.joint_probability;
    rec.last_conditional_probability =
        run.passages.back().conditional_probability;
  } catch (const ZeroProbabilityOutcome&) {
    rec.zero_probability = true;
  }
  if (config.record_overlaps && alpha > 0.0) {
    try {
      const OverlapReport report =
          lambda_delta_gamma(tau, alpha, policy, convention);
      rec.overlaps = OverlapMagnitudes{std::abs(report.gamma_lambda),
                                       std::abs(report.delta_gamma),
                                       std::abs(report.delta_lambda)};
    } catch (const ZeroVector&) {
      // |Lambda> vanishes at this point; leave the overlaps unset.
    }
  }
  return rec;
}

/// Standard-normal draw with the engine's bits mapped through a fixed
/// Box-Muller transform, so sequences are pinned by the engine alone.
double gaussian_sample(std::mt19937_64& engine) {
  const double u1 =
      (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

void GridAxis::validate() const {
  if (steps < 1 || !(min <= max) || !std::isfinite(min) ||
      !std::isfinite(max)) {
    throw std::invalid_argument("GridAxis: need steps >= 1 and min <= max");
  }
}

std::vector<MetricsRecord> sweep(const SweepConfig& config, int n_threads,
                                 PhaseConvention convention) {
  config.tau_grid.validate();
  config.alpha_grid.validate();
  config.spec.validate();
  if (config.outcomes.empty()) {
    throw std::invalid_argument("sweep: outcome sequence must be nonempty");
  }

  const int nt = config.tau_grid.steps;
  const int na = config.alpha_grid.steps;
  std::vector<MetricsRecord> records(static_cast<std::size_t>(nt) * na);
  parallel_for(nt * na, n_threads, [&](int k) {
    const int it = k / na;  // tau-major canonical order
    const int ia = k % na;
    records[k] = evaluate_point(config.tau_grid.value(it),
                                config.alpha_grid.value(ia), config,
                                convention);
  });
  return records;
}

std::vector<MetricsRecord> accumulation_curve(
    double tau, double alpha, int max_passages, const MediatorSpec& spec,
    std::optional<TruncationPolicy> policy_override,
    PhaseConvention convention) {
  if (max_passages < 1) {
    throw std::invalid_argument("accumulation_curve: max_passages >= 1");
  }
  const TruncationPolicy policy =
      policy_for(policy_override, alpha, max_passages);
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  JointState state = product_state(coh, coh).normalized();

  std::vector<MetricsRecord> records;
  records.reserve(max_passages);
  double joint = 1.0;
  bool dead = false;
  for (int n = 1; n <= max_passages; ++n) {
    MetricsRecord rec;
    rec.tau = tau;
    rec.alpha = alpha;
    rec.n_passages = n;
    if (!dead) {
      try {
        auto [next, passage] = apply_passage(state, spec, tau, tau, policy,
                                             Outcome::Positive, convention);
        state = std::move(next);
        joint *= passage.conditional_probability;
        rec.entropy = entanglement_entropy(state);
        rec.joint_probability = joint;
        rec.last_conditional_probability = passage.conditional_probability;
      } catch (const ZeroProbabilityOutcome&) {
        dead = true;
      }
    }
    rec.zero_probability = dead;
    records.push_back(rec);
  }
  return records;
}

JitterSummary jitter_study(const SweepConfig& base, const JitterConfig& jitter,
                           PhaseConvention convention) {
  base.spec.validate();
  if (jitter.samples < 1 || jitter.sigma_rel < 0.0) {
    throw std::invalid_argument("jitter_study: samples >= 1, sigma_rel >= 0");
  }
  if (base.outcomes.empty()) {
    throw std::invalid_argument("jitter_study: outcome sequence nonempty");
  }
  const double alpha = base.alpha_grid.min;
  const double tau_a = jitter.tau_a;
  const int n_pass = static_cast<int>(base.outcomes.size());
  const TruncationPolicy policy =
      policy_for(base.policy_override, alpha, n_pass);
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  const JointState initial = product_state(coh, coh).normalized();

  // All tau_b values are drawn up front from the seeded engine; negative
  // draws are rejected and redrawn, so physical times stay nonnegative.
  std::mt19937_64 engine(jitter.seed);
  std::vector<double> tau_b(static_cast<std::size_t>(jitter.samples) * n_pass);
  for (double& t : tau_b) {
    do {
      t = tau_a + jitter.sigma_rel * tau_a * gaussian_sample(engine);
    } while (t < 0.0);
  }

  JitterSummary summary;
  summary.samples = jitter.samples;
  double noiseless_joint = 0.0;
  {
    const SequenceResult clean = run_sequence(initial, base.spec, tau_a,
                                              base.outcomes, policy,
                                              convention);
    summary.noiseless_entropy = entanglement_entropy(clean.state);
    noiseless_joint = clean.joint_probability;
  }
  if (jitter.sigma_rel == 0.0) {
    // Every sample is the noiseless run; report it exactly.
    summary.mean_entropy = summary.noiseless_entropy;
    summary.std_entropy = 0.0;
    summary.mean_probability = noiseless_joint;
    return summary;
  }

  std::vector<double> entropies(jitter.samples, 0.0);
  std::vector<double> probabilities(jitter.samples, 0.0);
  for (int s = 0; s < jitter.samples; ++s) {
    JointState state = initial;
    double joint = 1.0;
    bool dead = false;
    for (int k = 0; k < n_pass && !dead; ++k) {
      try {
        auto [next, passage] =
            apply_passage(state, base.spec, tau_a,
                          tau_b[static_cast<std::size_t>(s) * n_pass + k],
                          policy, base.outcomes[k], convention);
        state = std::move(next);
        joint *= passage.conditional_probability;
      } catch (const ZeroProbabilityOutcome&) {
        dead = true;
      }
    }
    entropies[s] = dead ? 0.0 : entanglement_entropy(state);
    probabilities[s] = dead ? 0.0 : joint;
  }

  double mean = 0.0, mean_p = 0.0;
  for (int s = 0; s < jitter.samples; ++s) {
    mean += entropies[s];
    mean_p += probabilities[s];
  }
  mean /= jitter.samples;
  mean_p /= jitter.samples;
  double var = 0.0;
  for (int s = 0; s < jitter.samples; ++s) {
    var += (entropies[s] - mean) * (entropies[s] - mean);
  }
  summary.mean_entropy = mean;
  summary.mean_probability = mean_p;
  summary.std_entropy =
      jitter.samples > 1 ? std::sqrt(var / (jitter.samples - 1)) : 0.0;
  return summary;
}

MetricsRecord readout_experiment(double tau, double alpha, int n_passages,
                                 double tau_aux, PhaseConvention convention) {
  if (n_passages < 0) {
    throw std::invalid_argument("readout_experiment: n_passages >= 0");
  }
  const TruncationPolicy policy = default_policy(alpha, n_passages);
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  JointState state = product_state(coh, coh).normalized();

  MetricsRecord rec;
  rec.tau = tau;
  rec.alpha = alpha;
  rec.n_passages = n_passages;
  rec.joint_probability = 1.0;
  rec.last_conditional_probability = 1.0;
  if (n_passages > 0) {
    const SequenceResult run = run_sequence(
        state, MediatorSpec::ground_to_excited(), tau,
        std::vector<Outcome>(n_passages, Outcome::Positive), policy,
        convention);
    state = run.state;
    rec.joint_probability = run.joint_probability;
    rec.last_conditional_probability =
        run.passages.back().conditional_probability;
  }
  rec.entropy = entanglement_entropy(state);
  rec.negativity = negativity_measure(aux_readout(state, tau_aux, convention));
  return rec;
}

std::vector<MetricsRecord> integer_tau_probe(double alpha,
                                             PhaseConvention convention) {
  if (!(alpha > 0.0) || alpha > 0.05) {
    throw std::invalid_argument("integer_tau_probe: need 0 < alpha <= 0.05");
  }
  SweepConfig config;
  config.alpha_grid = {alpha, alpha, 1};
  std::vector<MetricsRecord> records;
  for (double tau : {1.0, 2.0, 3.0}) {
    records.push_back(evaluate_point(tau, alpha, config, convention));
  }
  return records;
}

std::vector<MetricsRecord> vee_curve(double tau, double alpha, int n_passages,
                                     std::optional<TruncationPolicy>
                                         policy_override,
                                     PhaseConvention convention) {
  if (n_passages < 1) {
    throw std::invalid_argument("vee_curve: n_passages >= 1");
  }
  const TruncationPolicy policy =
      policy_for(policy_override, alpha, n_passages);
  const VeePropagator prop = vee_propagator(tau, policy, convention);
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  JointState state = product_state(coh, coh).normalized();

  std::vector<MetricsRecord> records;
  double joint = 1.0;
  bool dead = false;
  for (int n = 1; n <= n_passages; ++n) {
    MetricsRecord rec;
    rec.tau = tau;
    rec.alpha = alpha;
    rec.n_passages = n;
    if (!dead) {
      try {
        auto [next, passage] = vee_passage(state, prop);
        state = std::move(next);
        joint *= passage.conditional_probability;
        rec.entropy = entanglement_entropy(state);
        rec.joint_probability = joint;
        rec.last_conditional_probability = passage.conditional_probability;
      } catch (const ZeroProbabilityOutcome&) {
        dead = true;
      }
    }
    rec.zero_probability = dead;
    records.push_back(rec);
  }
  return records;
}

MetricsRecord max_entropy_search(const GridAxis& tau_axis,
                                 const GridAxis& alpha_axis,
                                 const std::vector<Outcome>& outcomes,
                                 int n_threads, PhaseConvention convention) {
  SweepConfig config;
  config.tau_grid = tau_axis;
  config.alpha_grid = alpha_axis;
  config.outcomes = outcomes;

  std::vector<MetricsRecord> coarse = sweep(config, n_threads, convention);
  std::sort(coarse.begin(), coarse.end(),
            [](const MetricsRecord& a, const MetricsRecord& b) {
              return a.entropy > b.entropy;
            });

  const double dt = tau_axis.steps > 1
                        ? (tau_axis.max - tau_axis.min) / (tau_axis.steps - 1)
                        : 0.0;
  const double da =
      alpha_axis.steps > 1
          ? (alpha_axis.max - alpha_axis.min) / (alpha_axis.steps - 1)
          : 0.0;

  // Compass search from the best coarse cells: step to an improving
  // neighbor while one exists, halve the stencil when stuck.
  MetricsRecord best = coarse.front();
  const int basins = static_cast<int>(std::min<std::size_t>(3, coarse.size()));
  for (int b = 0; b < basins; ++b) {
    MetricsRecord local = coarse[b];
    double ht = std::max(dt, 1e-3), ha = std::max(da, 1e-3);
    int evals = 0;
    while ((ht > 2e-4 || ha > 2e-4) && evals < 400) {
      bool improved = false;
      for (int i = -1; i <= 1 && !improved; ++i) {
        for (int j = -1; j <= 1 && !improved; ++j) {
          if (i == 0 && j == 0) continue;
          const double t =
              std::clamp(local.tau + i * ht, tau_axis.min, tau_axis.max);
          const double a =
              std::clamp(local.alpha + j * ha, alpha_axis.min, alpha_axis.max);
          const MetricsRecord rec = evaluate_point(t, a, config, convention);
          ++evals;
          if (rec.entropy > local.entropy) {
            local = rec;
            improved = true;
          }
        }
      }
      if (!improved) {
        ht /= 2;
        ha /= 2;
      }
    }
    if (local.entropy > best.entropy) best = local;
  }
  return best;
}

}  // namespace cvmem
