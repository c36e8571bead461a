// Acceptance suite: one checked criterion per case, one PASS/FAIL line
// each, nonzero exit on any failure. Run without arguments for the whole
// suite or with criterion numbers to select a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cvmem/experiments.hpp"
#include "cvmem/metrics.hpp"
#include "cvmem/oracles.hpp"

using namespace cvmem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& label,
            const std::string& detail, double elapsed_s) {
  std::printf("[%s] criterion %2d: %s — %s (%.2f s)\n", ok ? "PASS" : "FAIL",
              criterion, label.c_str(), detail.c_str(), elapsed_s);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Shared {
  std::optional<std::vector<MetricsRecord>> region;  // criterion 3 grid
  std::optional<MetricsRecord> best2, best3;         // criterion 4 maxima

  const std::vector<MetricsRecord>& region_grid() {
    if (!region) {
      SweepConfig config;
      config.tau_grid = {0.2, 10.0, 50};
      config.alpha_grid = {0.5, 3.0, 50};
      region = sweep(config, 0);
    }
    return *region;
  }

  const MetricsRecord& accumulation_best(int passages) {
    auto& slot = passages == 2 ? best2 : best3;
    if (!slot) {
      slot = max_entropy_search({5.0, 20.0, 301}, {2.0, 3.0, 21},
                                std::vector<Outcome>(passages,
                                                     Outcome::Positive),
                                0);
    }
    return *slot;
  }
};

Shared g_shared;

double entropy_at(double tau, double alpha, int passages,
                  std::optional<TruncationPolicy> policy = {}) {
  const TruncationPolicy p = policy.value_or(default_policy(alpha, passages));
  const ModeVector coh = coherent_amplitudes(alpha, p);
  return entanglement_entropy(
      run_sequence(product_state(coh, coh).normalized(),
                   MediatorSpec::ground_to_excited(), tau,
                   std::vector<Outcome>(passages, Outcome::Positive), p)
          .state);
}

std::vector<double> sign_crossings(const std::vector<double>& taus,
                                   const std::vector<double>& values) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i] == 0.0 ||
        (values[i] > 0.0) != (values[i + 1] > 0.0)) {
      out.push_back(0.5 * (taus[i] + taus[i + 1]));
    }
  }
  return out;
}

void criterion_1() {
  const auto t0 = Clock::now();
  const std::vector<MetricsRecord> curve = accumulation_curve(1.0, 0.8, 2);
  const double s1 = curve[0].entropy, s2 = curve[1].entropy;
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = std::abs(s1 - 0.633) <= 0.005 &&
                  std::abs(s2 - 0.994) <= 0.005 && elapsed < 1.0;
  report(1, ok, "point reproduction at tau=1, alpha=0.8",
         "S1=" + fmt(s1) + " (0.633±0.005), S2=" + fmt(s2) + " (0.994±0.005)",
         elapsed);
}

void criterion_2() {
  const auto t0 = Clock::now();
  const MetricsRecord r1 = readout_experiment(1.0, 0.8, 1);
  const MetricsRecord r2 = readout_experiment(1.0, 0.8, 2);
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = std::abs(*r1.negativity - 0.55) <= 0.02 &&
                  std::abs(*r2.negativity - 0.87) <= 0.02 && elapsed < 5.0;
  report(2, ok, "auxiliary readout reproduction",
         "E1=" + fmt(*r1.negativity) + " (0.55±0.02), E2=" +
             fmt(*r2.negativity) + " (0.87±0.02); calibration: " +
             kAuxTimeInterpretation,
         elapsed);
}

void criterion_3() {
  const auto t0 = Clock::now();
  const std::vector<MetricsRecord>& grid = g_shared.region_grid();
  const MetricsRecord* hit = nullptr;
  for (const auto& rec : grid) {
    if (rec.entropy >= 0.99 && rec.last_conditional_probability >= 0.45) {
      hit = &rec;
      break;
    }
  }

  SweepConfig vacuum_row;
  vacuum_row.tau_grid = {0.2, 10.0, 50};
  vacuum_row.alpha_grid = {0.0, 0.0, 1};
  bool vacuum_ok = true;
  for (const auto& rec : sweep(vacuum_row, 0)) {
    vacuum_ok = vacuum_ok && rec.zero_probability && rec.entropy == 0.0 &&
                rec.joint_probability == 0.0;
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = hit != nullptr && vacuum_ok && elapsed < 120.0;
  report(3, ok, "region reproduction on the 50x50 grid",
         (hit ? "S=" + fmt(hit->entropy) + ", P=" +
                    fmt(hit->last_conditional_probability) + " at (tau=" +
                    fmt(hit->tau) + ", alpha=" + fmt(hit->alpha) + ")"
              : std::string("no point with S>=0.99 and P>=0.45")) +
             (vacuum_ok ? "; alpha=0 row identically S=0, P=0"
                        : "; alpha=0 row NOT flat zero"),
         elapsed);
}

void criterion_4() {
  const auto t0 = Clock::now();
  const MetricsRecord& best2 = g_shared.accumulation_best(2);
  const MetricsRecord& best3 = g_shared.accumulation_best(3);
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = best2.entropy >= 1.8 && best3.entropy >= 2.3 &&
                  best3.entropy <= 2.7 && elapsed < 600.0;
  report(4, ok, "accumulation maxima over tau in [5,20], alpha in [2,3]",
         "two-passage max " + fmt(best2.entropy) + " (>=1.8) at (" +
             fmt(best2.tau) + ", " + fmt(best2.alpha) +
             "); three-passage max " + fmt(best3.entropy) +
             " (in [2.3,2.7]) at (" + fmt(best3.tau) + ", " +
             fmt(best3.alpha) + ")",
         elapsed);
}

void criterion_5() {
  const auto t0 = Clock::now();
  // Short-time clause at alpha = 1.
  const TruncationPolicy policy = default_policy(1.0, 2);
  const ModeVector coh = coherent_amplitudes(1.0, policy);
  const JointState initial = product_state(coh, coh).normalized();
  double short_max = 0.0;
  for (double tau : {0.05, 0.10, 0.15, 0.20}) {
    const SequenceResult run = run_sequence(
        initial, MediatorSpec::ground_to_excited(), tau,
        {Outcome::Negative, Outcome::Positive}, policy);
    short_max = std::max(short_max, entanglement_entropy(run.state));
  }

  // Grid maximum over the stated region.
  SweepConfig config;
  config.tau_grid = {0.2, 20.0, 100};
  config.alpha_grid = {0.5, 3.0, 51};
  config.outcomes = {Outcome::Negative, Outcome::Positive};
  const std::vector<MetricsRecord> grid = sweep(config, 0);
  const MetricsRecord* best = &grid.front();
  for (const auto& rec : grid) {
    if (rec.entropy > best->entropy) best = &rec;
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool short_ok = short_max < 0.05;
  const bool window_ok = best->entropy > 1.0 && best->entropy < 1.4;
  report(5, short_ok && window_ok, "negative-positive sequence",
         "max S over tau<=0.2 at alpha=1: " + fmt(short_max) +
             " (<0.05 required); grid max " + fmt(best->entropy) +
             " at (tau=" + fmt(best->tau) + ", alpha=" + fmt(best->alpha) +
             ") (required inside (1.0,1.4))",
         elapsed);
}

void criterion_6() {
  const auto t0 = Clock::now();
  const std::vector<MetricsRecord> probe = integer_tau_probe(0.01);
  const MetricsRecord& at1 = probe.front();
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok =
      at1.entropy > 0.0 && at1.last_conditional_probability < 1e-3;
  report(6, ok, "integer-tau anomaly at alpha=0.01",
         "S=" + fmt(at1.entropy) + " (>0), P=" +
             fmt(at1.last_conditional_probability) + " (<1e-3)",
         elapsed);
}

void criterion_7() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tau_dist(0.05, 2.5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_effective = 0.0, worst_vee = 0.0;
  for (int s = 0; s < 10; ++s) {
    MediatorSpec spec;
    const double w = uni(rng);
    spec.c_g =
        std::sqrt(w) * std::exp(Complex(0, 2 * std::numbers::pi * uni(rng)));
    spec.c_e = std::sqrt(1 - w) *
               std::exp(Complex(0, 2 * std::numbers::pi * uni(rng)));
    spec.theta = uni(rng) * std::numbers::pi / 2;
    spec.varphi = uni(rng) * 2 * std::numbers::pi * 0.999;
    const double tau_a = tau_dist(rng);
    const double tau_b = tau_dist(rng);
    const Outcome outcome = s % 2 ? Outcome::Negative : Outcome::Positive;
    worst_effective = std::max(
        worst_effective,
        effective_operator_deviation(spec, tau_a, tau_b, 8, outcome));
    worst_vee = std::max(worst_vee, vee_oracle_deviation(tau_a, 8));
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = worst_effective < 1e-10 && worst_vee < 1e-10;
  report(7, ok, "oracle equivalence over 10 seeded draws at n_cut=8",
         "effective-operator max dev " + fmt(worst_effective) +
             ", vee max dev " + fmt(worst_vee) + " (both <1e-10)",
         elapsed);
}

void criterion_8() {
  const auto t0 = Clock::now();
  struct Point {
    double tau, alpha;
    int passages;
  };
  std::vector<Point> points = {{1.0, 0.8, 1}, {1.0, 0.8, 2}};
  const MetricsRecord& best2 = g_shared.accumulation_best(2);
  const MetricsRecord& best3 = g_shared.accumulation_best(3);
  points.push_back({best2.tau, best2.alpha, 2});
  points.push_back({best3.tau, best3.alpha, 3});

  double worst = 0.0;
  for (const Point& pt : points) {
    const TruncationPolicy base = default_policy(pt.alpha, pt.passages);
    const TruncationPolicy bigger{base.n_cut + 10, base.tail_tolerance};
    const double s_base = entropy_at(pt.tau, pt.alpha, pt.passages, base);
    const double s_big = entropy_at(pt.tau, pt.alpha, pt.passages, bigger);
    worst = std::max(worst, std::abs(s_base - s_big));
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  report(8, worst < 1e-6, "cutoff convergence at the checked points",
         "max |S(n_cut) - S(n_cut+10)| = " + fmt(worst) + " (<1e-6)",
         elapsed);
}

void criterion_9() {
  const auto t0 = Clock::now();
  double worst = 0.0;

  SweepConfig config;
  config.tau_grid = {0.3, 2.1, 4};
  config.alpha_grid = {0.5, 1.3, 3};
  config.record_overlaps = true;
  const auto minus = sweep(config, 0, PhaseConvention::MinusI);
  const auto plus = sweep(config, 0, PhaseConvention::PlusI);
  for (std::size_t k = 0; k < minus.size(); ++k) {
    worst = std::max(worst, std::abs(minus[k].entropy - plus[k].entropy));
    worst = std::max(
        worst, std::abs(minus[k].joint_probability - plus[k].joint_probability));
    worst = std::max(worst,
                     std::abs(minus[k].last_conditional_probability -
                              plus[k].last_conditional_probability));
    if (minus[k].overlaps && plus[k].overlaps) {
      worst = std::max(worst, std::abs(minus[k].overlaps->gamma_lambda -
                                       plus[k].overlaps->gamma_lambda));
      worst = std::max(worst, std::abs(minus[k].overlaps->delta_gamma -
                                       plus[k].overlaps->delta_gamma));
      worst = std::max(worst, std::abs(minus[k].overlaps->delta_lambda -
                                       plus[k].overlaps->delta_lambda));
    }
  }
  for (int n : {1, 2}) {
    const MetricsRecord rm = readout_experiment(1.0, 0.8, n,
                                                kCalibratedAuxTime,
                                                PhaseConvention::MinusI);
    const MetricsRecord rp = readout_experiment(1.0, 0.8, n,
                                                kCalibratedAuxTime,
                                                PhaseConvention::PlusI);
    worst = std::max(worst, std::abs(*rm.negativity - *rp.negativity));
    worst = std::max(worst, std::abs(rm.entropy - rp.entropy));
  }
  {
    const auto vm = vee_curve(2.5, 1.0, 2, {}, PhaseConvention::MinusI);
    const auto vp = vee_curve(2.5, 1.0, 2, {}, PhaseConvention::PlusI);
    for (std::size_t k = 0; k < vm.size(); ++k) {
      worst = std::max(worst, std::abs(vm[k].entropy - vp[k].entropy));
      worst = std::max(
          worst, std::abs(vm[k].joint_probability - vp[k].joint_probability));
    }
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  report(9, worst < 1e-10, "phase-convention invariance (-i vs +i)",
         "max metric deviation " + fmt(worst) + " (<1e-10)", elapsed);
}

void criterion_10() {
  const auto t0 = Clock::now();
  const std::vector<MetricsRecord>& grid = g_shared.region_grid();
  const MetricsRecord* pick = nullptr;
  for (const auto& rec : grid) {
    if (rec.entropy >= 0.99 && rec.last_conditional_probability >= 0.45) {
      pick = &rec;
      break;
    }
  }
  if (pick == nullptr) {
    report(10, false, "jitter robustness", "no qualifying criterion-3 point",
           0.0);
    return;
  }
  SweepConfig base;
  base.tau_grid = {pick->tau, pick->tau, 1};
  base.alpha_grid = {pick->alpha, pick->alpha, 1};
  JitterConfig jitter{pick->tau, 0.05, 200, 20260811};
  const JitterSummary a = jitter_study(base, jitter);
  const JitterSummary b = jitter_study(base, jitter);
  const double rel =
      std::abs(a.mean_entropy - a.noiseless_entropy) / a.noiseless_entropy;
  const bool identical = a.mean_entropy == b.mean_entropy &&
                         a.std_entropy == b.std_entropy &&
                         a.mean_probability == b.mean_probability;
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  report(10, rel <= 0.10 && identical, "jitter robustness at 5% spread",
         "point (tau=" + fmt(pick->tau) + ", alpha=" + fmt(pick->alpha) +
             "), noiseless S=" + fmt(a.noiseless_entropy) + ", mean S=" +
             fmt(a.mean_entropy) + ", rel dev " + fmt(rel * 100) +
             "% (<=10%), rerun bit-identical: " + (identical ? "yes" : "no"),
         elapsed);
}

void criterion_11() {
  const auto t0 = Clock::now();
  const double alpha = 6.0;
  const int n_cut = default_cutoff(alpha, 0);
  std::vector<double> taus, exact, closed;
  for (int i = 0; i <= 200; ++i) {
    const double tau = 1.0 + 0.01 * i;
    taus.push_back(tau);
    exact.push_back(gamma_lambda_signed(tau, alpha, n_cut));
    closed.push_back(gaussian_overlap_form(tau, alpha));
  }
  // Least-squares proportionality constant between the two shapes.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    num += closed[i] * exact[i];
    den += closed[i] * closed[i];
  }
  const double constant = num / den;

  const std::vector<double> cx_exact = sign_crossings(taus, exact);
  const std::vector<double> cx_closed = sign_crossings(taus, closed);
  double max_dev = 0.0;
  const bool counts_equal = cx_exact.size() == cx_closed.size();
  if (counts_equal) {
    for (std::size_t i = 0; i < cx_exact.size(); ++i) {
      max_dev = std::max(max_dev, std::abs(cx_exact[i] - cx_closed[i]));
    }
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = counts_equal && max_dev <= 0.01 + 1e-12;
  report(11, ok, "Gaussian-overlap zero crossings at alpha=6",
         "exact crossings: " + std::to_string(cx_exact.size()) +
             ", closed-form crossings: " + std::to_string(cx_closed.size()) +
             (counts_equal ? ", max position dev " + fmt(max_dev) +
                                 " (<=0.01 required)"
                           : " (counts differ)") +
             ", fitted constant " + fmt(constant),
         elapsed);
}

void criterion_12() {
  const auto t0 = Clock::now();
  const MetricsRecord r0 = readout_experiment(1.0, 0.8, 0);
  const MetricsRecord r1 = readout_experiment(1.0, 0.8, 1);
  const MetricsRecord r2 = readout_experiment(1.0, 0.8, 2);
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok =
      *r0.negativity < *r1.negativity && *r1.negativity < *r2.negativity;
  report(12, ok, "monotone readout over n = 0, 1, 2 passages",
         "E = " + fmt(*r0.negativity) + " < " + fmt(*r1.negativity) + " < " +
             fmt(*r2.negativity),
         elapsed);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::atoi(argv[i]));
  }
  auto want = [&](int n) { return selected.empty() || selected.count(n); };

  if (want(1)) criterion_1();
  if (want(2)) criterion_2();
  if (want(3)) criterion_3();
  if (want(4)) criterion_4();
  if (want(5)) criterion_5();
  if (want(6)) criterion_6();
  if (want(7)) criterion_7();
  if (want(8)) criterion_8();
  if (want(9)) criterion_9();
  if (want(10)) criterion_10();
  if (want(11)) criterion_11();
  if (want(12)) criterion_12();

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
  } else {
    std::printf("all selected criteria passed\n");
  }
  return g_failures;
}
