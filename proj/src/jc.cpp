#include "cvmem/jc.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace cvmem {

namespace {

void check_dims(const ModeOperator& op, Eigen::Index n, const char* where) {
  if (op.dim != n) {
    std::ostringstream msg;
    msg << where << ": operator dim " << op.dim << " vs state dim " << n;
    throw DimensionMismatch(msg.str());
  }
}

void check_dropped(double dropped_sq, double tol, const char* where) {
  if (dropped_sq > tol) {
    std::ostringstream msg;
    msg << where << ": shifted amplitude with squared magnitude "
        << dropped_sq << " would cross the cutoff (tolerance " << tol << ")";
    throw TruncationTooSmall(msg.str());
  }
}

}  // namespace

ModeOperator combine(Complex x, const ModeOperator& a, Complex y,
                     const ModeOperator& b) {
  if (a.dim != b.dim) {
    throw DimensionMismatch("combine: operators of different dimension");
  }
  std::map<int, Eigen::VectorXcd> merged;
  auto fold = [&](Complex w, const ModeOperator& op) {
    for (const auto& band : op.bands) {
      auto [it, fresh] = merged.try_emplace(
          band.shift, Eigen::VectorXcd::Zero(op.dim));
      it->second += w * band.coeffs;
    }
  };
  fold(x, a);
  fold(y, b);

  ModeOperator out;
  out.dim = a.dim;
  out.tail_tolerance = std::min(a.tail_tolerance, b.tail_tolerance);
  for (auto& [shift, coeffs] : merged) {
    out.bands.push_back(Band{shift, std::move(coeffs)});
  }
  return out;
}

ModeVector apply_mode(const ModeOperator& op,
                 const Eigen::Ref<const Eigen::VectorXcd>& in) {
  const Eigen::Index n = in.size();
  check_dims(op, n, "apply_mode");
  ModeVector out = ModeVector::Zero(n);
  double dropped = 0.0;
  for (const auto& band : op.bands) {
    if (band.shift == 0) {
      out += band.coeffs.cwiseProduct(in);
    } else if (band.shift == 1) {
      out.tail(n - 1) += band.coeffs.head(n - 1).cwiseProduct(in.head(n - 1));
      dropped += std::norm(band.coeffs(n - 1) * in(n - 1));
    } else if (band.shift == -1) {
      out.head(n - 1) += band.coeffs.tail(n - 1).cwiseProduct(in.tail(n - 1));
    } else {
      throw SimError("apply: unsupported band shift");
    }
  }
  check_dropped(dropped, op.tail_tolerance, "apply_mode");
  return out;
}

Eigen::MatrixXcd apply_mode_a(const ModeOperator& op,
                              const Eigen::Ref<const Eigen::MatrixXcd>& in) {
  const Eigen::Index n = in.rows();
  check_dims(op, n, "apply_mode_a");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, in.cols());
  double dropped = 0.0;
  for (const auto& band : op.bands) {
    if (band.shift == 0) {
      out += band.coeffs.asDiagonal() * in;
    } else if (band.shift == 1) {
      out.bottomRows(n - 1) +=
          band.coeffs.head(n - 1).asDiagonal() * in.topRows(n - 1);
      dropped += std::norm(band.coeffs(n - 1)) * in.row(n - 1).squaredNorm();
    } else if (band.shift == -1) {
      out.topRows(n - 1) +=
          band.coeffs.tail(n - 1).asDiagonal() * in.bottomRows(n - 1);
    } else {
      throw SimError("apply_mode_a: unsupported band shift");
    }
  }
  check_dropped(dropped, op.tail_tolerance, "apply_mode_a");
  return out;
}

Eigen::MatrixXcd apply_mode_b(const ModeOperator& op,
                              const Eigen::Ref<const Eigen::MatrixXcd>& in) {
  const Eigen::Index n = in.cols();
  check_dims(op, n, "apply_mode_b");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), n);
  double dropped = 0.0;
  for (const auto& band : op.bands) {
    if (band.shift == 0) {
      out += in * band.coeffs.asDiagonal();
    } else if (band.shift == 1) {
      out.rightCols(n - 1) +=
          in.leftCols(n - 1) * band.coeffs.head(n - 1).asDiagonal();
      dropped += std::norm(band.coeffs(n - 1)) * in.col(n - 1).squaredNorm();
    } else if (band.shift == -1) {
      out.leftCols(n - 1) +=
          in.rightCols(n - 1) * band.coeffs.tail(n - 1).asDiagonal();
    } else {
      throw SimError("apply_mode_b: unsupported band shift");
    }
  }
  check_dropped(dropped, op.tail_tolerance, "apply_mode_b");
  return out;
}

Eigen::MatrixXcd to_dense(const ModeOperator& op) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(op.dim, op.dim);
  for (const auto& band : op.bands) {
    for (int n = 0; n < op.dim; ++n) {
      const int m = n + band.shift;
      if (m >= 0 && m < op.dim) {
        out(m, n) += band.coeffs(n);
      }
    }
  }
  return out;
}

JcBlocks jc_blocks(double tau, const TruncationPolicy& policy,
                   PhaseConvention convention) {
  if (tau < 0.0) {
    throw std::invalid_argument("jc_blocks: tau must be >= 0");
  }
  policy.validate();

  const int dim = policy.dim();
  const Complex phase =
      convention == PhaseConvention::MinusI ? Complex(0, -1) : Complex(0, 1);
  const double pi_tau = std::numbers::pi * tau;

  Eigen::VectorXcd c11(dim), c12(dim), c21(dim), c22(dim);
  for (int n = 0; n < dim; ++n) {
    const double theta_n = pi_tau * std::sqrt(static_cast<double>(n));
    const double theta_n1 = pi_tau * std::sqrt(static_cast<double>(n + 1));
    c11(n) = std::cos(theta_n1);
    c22(n) = std::cos(theta_n);
    c12(n) = phase * std::sin(theta_n);  // zero at n = 0
    c21(n) = phase * std::sin(theta_n1);
  }

  JcBlocks blocks;
  blocks.tau = tau;
  blocks.u11 = ModeOperator{dim, policy.tail_tolerance, {Band{0, c11}}};
  blocks.u12 = ModeOperator{dim, policy.tail_tolerance, {Band{-1, c12}}};
  blocks.u21 = ModeOperator{dim, policy.tail_tolerance, {Band{+1, c21}}};
  blocks.u22 = ModeOperator{dim, policy.tail_tolerance, {Band{0, c22}}};
  return blocks;
}

VeePropagator vee_propagator(double tau, const TruncationPolicy& policy,
                             PhaseConvention convention) {
  if (tau < 0.0) {
    throw std::invalid_argument("vee_propagator: tau must be >= 0");
  }
  policy.validate();
  return VeePropagator{tau, policy, convention};
}

void apply_in_place(const VeePropagator& prop, VeeState& state) {
  const int dim = state.dim();
  if (dim != prop.policy.dim() || state.g.cols() != dim ||
      state.ea.rows() != dim || state.ea.cols() != dim ||
      state.eb.rows() != dim || state.eb.cols() != dim) {
    throw DimensionMismatch("apply_in_place: vee state does not match policy");
  }

  const Complex phase = prop.convention == PhaseConvention::MinusI
                            ? Complex(0, -1)
                            : Complex(0, 1);
  const double pi_tau = std::numbers::pi * prop.tau;
  double dropped = 0.0;

  // Sector labels (N, M) are the photon numbers of the ground component;
  // the excited components hold one photon less on their mode. Labels may
  // exceed the cutoff by one, in which case the ground slot is dropped.
  for (int N = 0; N <= dim; ++N) {
    for (int M = 0; M <= dim; ++M) {
      if (N + M == 0) continue;  // vacuum sector is stationary
      const bool has_a = N >= 1 && M < dim;
      const bool has_b = M >= 1 && N < dim;
      const bool has_g = N < dim && M < dim;
      if (!has_a && !has_b && !has_g) continue;

      const double s = std::sqrt(static_cast<double>(N + M));
      const double cn = std::sqrt(static_cast<double>(N)) / s;
      const double cm = std::sqrt(static_cast<double>(M)) / s;
      const double ang = pi_tau * s;
      const double c = std::cos(ang);
      const double sn = std::sin(ang);

      const Complex xa = has_a ? state.ea(N - 1, M) : Complex(0);
      const Complex xb = has_b ? state.eb(N, M - 1) : Complex(0);
      const Complex xg = has_g ? state.g(N, M) : Complex(0);

      const Complex bright = cn * xa + cm * xb;
      const Complex dark = cm * xa - cn * xb;
      const Complex bright_out = c * bright + phase * sn * xg;
      const Complex g_out = c * xg + phase * sn * bright;

      const Complex ea_out = cn * bright_out + cm * dark;
      const Complex eb_out = cm * bright_out - cn * dark;
      if (has_a) state.ea(N - 1, M) = ea_out; else dropped += std::norm(ea_out);
      if (has_b) state.eb(N, M - 1) = eb_out; else dropped += std::norm(eb_out);
      if (has_g) state.g(N, M) = g_out; else dropped += std::norm(g_out);
    }
  }
  check_dropped(dropped, prop.policy.tail_tolerance, "vee apply");
}

}  // namespace cvmem
