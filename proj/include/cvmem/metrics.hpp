#pragma once

#include <Eigen/Dense>

#include "cvmem/jc.hpp"

namespace cvmem {

/// Descending squared singular values of the joint coefficient matrix.
/// Weights below 1e-15 are dropped.
struct SchmidtSpectrum {
  Eigen::VectorXd weights;
};

SchmidtSpectrum schmidt(const JointState& state);

/// Von Neumann entropy -sum w log2 w in ebits, with 0 log 0 := 0.
double entropy(const SchmidtSpectrum& spectrum);

/// entropy(schmidt(state)).
double entanglement_entropy(const JointState& state);

/// Exact overlaps of the three normalized single-mode states
///   |Lambda> ~ U12 |alpha>,  |Delta> ~ U22 |alpha>,  |Gamma> ~ U11 |alpha>
/// together with the Gaussian-integral closed form for <Gamma|Lambda>
/// (known only up to a proportionality constant).
struct OverlapReport {
  Complex gamma_lambda;
  Complex delta_gamma;
  Complex delta_lambda;
  double gaussian_gamma_lambda = 0.0;
};

OverlapReport lambda_delta_gamma(double tau, double alpha,
                                 const TruncationPolicy& policy,
                                 PhaseConvention convention =
                                     PhaseConvention::MinusI);

/// The closed form [sin(2 pi tau alpha) - (pi tau / alpha)
/// cos(2 pi tau alpha)] exp(-pi^2 tau^2 / 2).
double gaussian_overlap_form(double tau, double alpha);

/// Real representative of <Gamma|Lambda>: the overlap equals -i times this
/// value under the MinusI convention. Summed in extended precision with
/// compensation so the exponentially small cancellation survives; suitable
/// for locating sign changes along a tau scan.
double gamma_lambda_signed(double tau, double alpha, int n_cut);

/// Two-qubit state of the auxiliary readout probes, basis order
/// |gg>, |ge>, |eg>, |ee> for (C_a, C_b).
struct QubitPairState {
  Eigen::Matrix4cd rho;
};

/// Sends one auxiliary qubit, prepared in |g>, through each cavity for the
/// rescaled time tau_aux and traces out both modes.
QubitPairState aux_readout(const JointState& register_state, double tau_aux,
                           PhaseConvention convention =
                               PhaseConvention::MinusI);

/// Twice the magnitude sum of the negative eigenvalues of the partial
/// transpose: 0 on separable states, 1 on Bell states.
double negativity_measure(const QubitPairState& rho);

}  // namespace cvmem
