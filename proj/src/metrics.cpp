#include "cvmem/metrics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace cvmem {

SchmidtSpectrum schmidt(const JointState& state) {
  if (!state.is_normalized()) {
    throw NotNormalized("schmidt: state must be normalized");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.coeffs);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<double> kept;
  kept.reserve(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double w = sv(k) * sv(k);
    if (w >= 1e-15) kept.push_back(w);
  }
  SchmidtSpectrum spectrum;
  spectrum.weights = Eigen::Map<const Eigen::VectorXd>(
      kept.data(), static_cast<Eigen::Index>(kept.size()));
  return spectrum;
}

double entropy(const SchmidtSpectrum& spectrum) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < spectrum.weights.size(); ++k) {
    const double w = spectrum.weights(k);
    if (w > 0.0) s -= w * std::log2(w);
  }
  return s;
}

double entanglement_entropy(const JointState& state) {
  return entropy(schmidt(state));
}

OverlapReport lambda_delta_gamma(double tau, double alpha,
                                 const TruncationPolicy& policy,
                                 PhaseConvention convention) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("lambda_delta_gamma: alpha must be > 0");
  }
  const ModeVector coh = coherent_amplitudes(alpha, policy);
  const JcBlocks blocks = jc_blocks(tau, policy, convention);

  ModeVector lambda = apply_mode(blocks.u12, coh);
  ModeVector delta = apply_mode(blocks.u22, coh);
  ModeVector gamma = apply_mode(blocks.u11, coh);
  const double nl = lambda.norm();
  if (nl < 1e-14) {
    throw ZeroVector("lambda_delta_gamma: U12|alpha> has vanishing norm");
  }
  lambda /= nl;
  delta /= delta.norm();
  gamma /= gamma.norm();

  OverlapReport report;
  report.gamma_lambda = gamma.dot(lambda);  // Eigen dot conjugates the left
  report.delta_gamma = delta.dot(gamma);
  report.delta_lambda = delta.dot(lambda);
  report.gaussian_gamma_lambda = gaussian_overlap_form(tau, alpha);
  return report;
}

double gaussian_overlap_form(double tau, double alpha) {
  const double pi = std::numbers::pi;
  return (std::sin(2 * pi * tau * alpha) -
          pi * tau / alpha * std::cos(2 * pi * tau * alpha)) *
         std::exp(-0.5 * pi * pi * tau * tau);
}

double gamma_lambda_signed(double tau, double alpha, int n_cut) {
  if (!(alpha > 0.0) || n_cut < 1) {
    throw std::invalid_argument("gamma_lambda_signed: bad arguments");
  }
  const long double pi = std::numbers::pi_v<long double>;
  const long double a = alpha;
  const long double pt = pi * static_cast<long double>(tau);

  std::vector<long double> c(static_cast<std::size_t>(n_cut) + 1);
  c[0] = std::exp(-0.5L * a * a);
  for (int m = 0; m < n_cut; ++m) {
    c[m + 1] = c[m] * a / std::sqrt(static_cast<long double>(m + 1));
  }

  // Neumaier-compensated sums: the cross sum cancels to an exponentially
  // small residue while the norm sums stay O(1).
  long double sum = 0.0L, comp = 0.0L;
  long double ng = 0.0L, nl = 0.0L;
  for (int k = 0; k <= n_cut; ++k) {
    const long double th_k = pt * std::sqrt(static_cast<long double>(k));
    const long double th_k1 = pt * std::sqrt(static_cast<long double>(k + 1));
    ng += c[k] * c[k] * std::cos(th_k1) * std::cos(th_k1);
    nl += c[k] * c[k] * std::sin(th_k) * std::sin(th_k);
    if (k < n_cut) {
      const long double term =
          c[k] * c[k + 1] * std::cos(th_k1) * std::sin(th_k1);
      const long double t = sum + term;
      if (std::abs(sum) >= std::abs(term)) {
        comp += (sum - t) + term;
      } else {
        comp += (term - t) + sum;
      }
      sum = t;
    }
  }
  if (nl < 1e-28L) {
    throw ZeroVector("gamma_lambda_signed: U12|alpha> has vanishing norm");
  }
  return static_cast<double>((sum + comp) / (std::sqrt(ng) * std::sqrt(nl)));
}

QubitPairState aux_readout(const JointState& register_state, double tau_aux,
                           PhaseConvention convention) {
  if (!register_state.is_normalized()) {
    throw NotNormalized("aux_readout: register state must be normalized");
  }
  const int dim = register_state.dim();
  if (register_state.coeffs.cols() != dim) {
    throw DimensionMismatch("aux_readout: register must be square");
  }
  const TruncationPolicy policy{dim - 1, 1e-12};
  const JcBlocks blocks = jc_blocks(tau_aux, policy, convention);

  // Qubit starts in |g>; after the interaction the branch operators on the
  // cavity mode are K_g = U22 (qubit stays ground) and K_e = U12 (qubit
  // excited by absorbing one photon). Both are non-raising, so no
  // truncation pressure.
  const Eigen::MatrixXcd ka_g = apply_mode_a(blocks.u22, register_state.coeffs);
  const Eigen::MatrixXcd ka_e = apply_mode_a(blocks.u12, register_state.coeffs);
  std::array<Eigen::MatrixXcd, 4> branch;  // gg, ge, eg, ee for (C_a, C_b)
  branch[0] = apply_mode_b(blocks.u22, ka_g);
  branch[1] = apply_mode_b(blocks.u12, ka_g);
  branch[2] = apply_mode_b(blocks.u22, ka_e);
  branch[3] = apply_mode_b(blocks.u12, ka_e);

  QubitPairState out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.rho(i, j) =
          branch[j].conjugate().cwiseProduct(branch[i]).sum();
    }
  }
  return out;
}

double negativity_measure(const QubitPairState& state) {
  // Partial transpose over the second qubit: (x y),(x' y') -> (x y'),(x' y).
  Eigen::Matrix4cd pt;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int xp = 0; xp < 2; ++xp) {
        for (int yp = 0; yp < 2; ++yp) {
          pt(2 * x + y, 2 * xp + yp) = state.rho(2 * x + yp, 2 * xp + y);
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(pt);
  double neg = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double ev = solver.eigenvalues()(k);
    if (ev < 0.0) neg -= ev;
  }
  return 2.0 * neg;
}

}  // namespace cvmem
