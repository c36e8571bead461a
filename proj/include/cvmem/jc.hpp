#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvmem/fock.hpp"
#include "cvmem/types.hpp"

namespace cvmem {

/// Sign of the off-diagonal Jaynes-Cummings phases. The physical propagator
/// is MinusI; PlusI exists to verify that every reported metric is invariant
/// under the swap (the two differ by a mediator-level phase redefinition).
enum class PhaseConvention { MinusI, PlusI };

/// One shift band of a single-mode operator: amplitude at input level n is
/// scaled by coeffs(n) and moved to level n + shift.
struct Band {
  int shift = 0;
  Eigen::VectorXcd coeffs;
};

/// Single-mode operator stored as a small sum of shift bands (diagonal or
/// one-step shifts here). Application is O(bands * N) per mode vector.
/// Raising bands may push amplitude across the cutoff; such amplitude is
/// dropped only while the total dropped squared magnitude stays within
/// tail_tolerance, otherwise application throws TruncationTooSmall.
struct ModeOperator {
  int dim = 0;
  double tail_tolerance = 1e-12;
  std::vector<Band> bands;
};

/// x*A + y*B with bands merged by shift.
ModeOperator combine(Complex x, const ModeOperator& a, Complex y,
                     const ModeOperator& b);

ModeVector apply_mode(const ModeOperator& op,
                 const Eigen::Ref<const Eigen::VectorXcd>& in);

/// Apply to mode a (row index) of a joint coefficient matrix.
Eigen::MatrixXcd apply_mode_a(const ModeOperator& op,
                              const Eigen::Ref<const Eigen::MatrixXcd>& in);

/// Apply to mode b (column index) of a joint coefficient matrix.
Eigen::MatrixXcd apply_mode_b(const ModeOperator& op,
                              const Eigen::Ref<const Eigen::MatrixXcd>& in);

/// Dense materialization (diagnostics and oracle comparisons only; no
/// truncation accounting).
Eigen::MatrixXcd to_dense(const ModeOperator& op);

/// The four blocks of the resonant Jaynes-Cummings propagator on one mode,
/// in the mediator basis {|e>, |g>}:
///   U11|n> = cos(T_{n+1}) |n>         U12|n> = -i sin(T_n) |n-1>
///   U21|n> = -i sin(T_{n+1}) |n+1>    U22|n> = cos(T_n) |n>
/// with T_p = pi * tau * sqrt(p) and tau the rescaled interaction time.
struct JcBlocks {
  double tau = 0.0;
  ModeOperator u11, u12, u21, u22;
};

JcBlocks jc_blocks(double tau, const TruncationPolicy& policy,
                   PhaseConvention convention = PhaseConvention::MinusI);

/// Mediator-resolved amplitudes of a three-level vee system coupled to the
/// two modes of one cavity: g is the ground-level sheet, ea/eb the sheets
/// where the mediator occupies the excited state talking to mode a/b.
struct VeeState {
  Eigen::MatrixXcd g, ea, eb;

  int dim() const { return static_cast<int>(g.rows()); }
  double squared_norm() const {
    return g.squaredNorm() + ea.squaredNorm() + eb.squaredNorm();
  }
};

/// Block-diagonal propagator of the vee-configuration mediator with equal
/// couplings on both modes. Each invariant sector
/// {|e_a, n-1, m>, |e_b, n, m-1>, |g, n, m>} rotates by the exact closed
/// form of its 3x3 (or degenerate 2x2 / 1x1) coupling block at angle
/// pi * tau * sqrt(n + m).
struct VeePropagator {
  double tau = 0.0;
  TruncationPolicy policy;
  PhaseConvention convention = PhaseConvention::MinusI;
};

VeePropagator vee_propagator(double tau, const TruncationPolicy& policy,
                             PhaseConvention convention =
                                 PhaseConvention::MinusI);

/// In-place application over all sectors. Amplitude rotated into dropped
/// levels above the cutoff is tail-checked like raising bands.
void apply_in_place(const VeePropagator& prop, VeeState& state);

}  // namespace cvmem
