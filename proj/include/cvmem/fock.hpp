#pragma once

#include <Eigen/Dense>

#include "cvmem/types.hpp"

namespace cvmem {

/// Single-mode amplitudes over Fock levels 0..n_cut.
using ModeVector = Eigen::VectorXcd;

/// Pure two-mode register state. coeffs(n, m) is the amplitude of |n, m>
/// with n photons in mode a (rows) and m in mode b (columns). The squared
/// norm is cached at construction; zero-norm states are representable and
/// must be checked with is_zero() before normalizing.
struct JointState {
  Eigen::MatrixXcd coeffs;
  double norm_sq = 0.0;

  JointState() = default;
  explicit JointState(Eigen::MatrixXcd c)
      : coeffs(std::move(c)), norm_sq(coeffs.squaredNorm()) {}

  int dim() const { return static_cast<int>(coeffs.rows()); }
  bool is_zero() const { return norm_sq < kZeroProbabilityThreshold; }
  bool is_normalized(double tol = 1e-8) const {
    return std::abs(norm_sq - 1.0) <= tol;
  }

  /// Returns the unit-norm copy of this state. Throws ZeroVector on
  /// zero-norm input.
  JointState normalized() const;
};

/// Inner product <a|b> over the joint Fock basis.
Complex inner(const JointState& a, const JointState& b);

/// Coherent-state amplitudes C_m = alpha^m e^{-alpha^2/2} / sqrt(m!) for
/// m in [0, n_cut], real alpha >= 0. Throws TruncationTooSmall if the
/// probability mass above the cutoff exceeds policy.tail_tolerance.
ModeVector coherent_amplitudes(double alpha, const TruncationPolicy& policy);

/// Tensor product of two single-mode vectors under one policy.
JointState product_state(const ModeVector& vec_a, const ModeVector& vec_b);

/// Cutoff heuristic covering the Poisson bulk plus many standard
/// deviations, plus one photon per mediator passage:
/// ceil(alpha^2) + 10 ceil(alpha + 1) + 20 + n_passages.
int default_cutoff(double alpha, int n_passages);

/// Policy with the default cutoff for the given working point.
TruncationPolicy default_policy(double alpha, int n_passages);

}  // namespace cvmem
