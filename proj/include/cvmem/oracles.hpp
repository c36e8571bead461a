#pragma once

#include <Eigen/Dense>

#include "cvmem/conditional.hpp"

namespace cvmem {

/// Brute-force propagator of the resonant two-level coupling on the
/// truncated space, built from the dense Hamiltonian and exponentiated via
/// Hermitian eigendecomposition. Basis index q * (n_cut + 1) + n with
/// q = 0 for |e>, q = 1 for |g>. Independent of the closed-form blocks.
Eigen::MatrixXcd exp_oracle(double tau, int n_cut);

/// Same for the vee-configuration three-level coupling on two modes.
/// Basis index (q * M + n) * M + m, M = n_cut + 1, with level order
/// q = 0: |e_a>, 1: |e_b>, 2: |g>.
Eigen::MatrixXcd vee_exp_oracle(double tau, int n_cut);

/// The blocks assembled into the dense 2(n_cut+1)-dimensional matrix in the
/// exp_oracle basis (boundary shifts beyond the cutoff are dropped).
Eigen::MatrixXcd dense_jc_assembly(const JcBlocks& blocks);

/// Max abs entrywise deviation between the closed-form blocks at the given
/// policy and the exponential oracle built one level higher and restricted
/// to the policy's span (the enlargement keeps every compared sector
/// intact).
double jc_oracle_deviation(double tau, const TruncationPolicy& policy,
                           PhaseConvention convention =
                               PhaseConvention::MinusI);

/// Effective register operator computed on the full mediator x mode_a x
/// mode_b space with one padding level per mode: <v| U_Ab U_Aa |i>
/// restricted to photon indices <= n_cut. Register index n * (n_cut+1) + m.
Eigen::MatrixXcd full_space_effective_operator(const MediatorSpec& spec,
                                               double tau_a, double tau_b,
                                               int n_cut, Outcome outcome);

/// The structured two-term operator materialized on the same register
/// basis.
Eigen::MatrixXcd dense_two_term(const TwoTermOperator& op);

/// Max abs entrywise deviation of the structured effective operator from
/// the full-space construction.
double effective_operator_deviation(const MediatorSpec& spec, double tau_a,
                                    double tau_b, int n_cut, Outcome outcome);

/// Max abs deviation between the sector closed form and the vee
/// exponential oracle built one level higher and restricted.
double vee_oracle_deviation(double tau, int n_cut);

}  // namespace cvmem
