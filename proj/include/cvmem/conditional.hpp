#pragma once

#include <utility>
#include <vector>

#include "cvmem/jc.hpp"

namespace cvmem {

/// Measurement outcome of one mediator passage: Positive means the mediator
/// was found along |theta, phi>, Negative along its orthogonal complement.
/// For the default basis these are |e> and |g| respectively.
enum class Outcome { Positive, Negative };

const char* to_string(Outcome o);

/// Mediator preparation (c_g, c_e) and measurement-basis angles. The
/// measured state is |theta, phi> = cos(theta)|g> + e^{i phi} sin(theta)|e>.
struct MediatorSpec {
  Complex c_g{1.0, 0.0};
  Complex c_e{0.0, 0.0};
  double theta = 0.0;
  double varphi = 0.0;

  void validate() const;

  /// Ground preparation measured along |e>: theta = pi/2, phi = 0.
  static MediatorSpec ground_to_excited();

  /// Row vector <v| = me_e <e| + me_g <g| selecting the outcome branch.
  std::pair<Complex, Complex> measurement_row(Outcome outcome) const;
};

struct PassageOutcome {
  Outcome letter = Outcome::Positive;
  double conditional_probability = 0.0;
};

/// Post-selected register operator A_b B_a + C_b D_a, the contraction of
/// both cavity propagators between the prepared and measured mediator
/// states. Term factors act on distinct modes and commute.
struct TwoTermOperator {
  ModeOperator a_b, b_a;  // first term: A_b on mode b, B_a on mode a
  ModeOperator c_b, d_a;  // second term: C_b on mode b, D_a on mode a
};

TwoTermOperator effective_operator(const MediatorSpec& spec,
                                   const JcBlocks& blocks_a,
                                   const JcBlocks& blocks_b,
                                   Outcome outcome = Outcome::Positive);

/// Unnormalized image of the register state.
JointState apply(const TwoTermOperator& op, const JointState& state);

/// One mediator passage across both cavities with the given outcome.
/// Returns the renormalized post-measurement state and the conditional
/// probability (squared norm before renormalization). Throws
/// ZeroProbabilityOutcome below the probability floor.
std::pair<JointState, PassageOutcome> apply_passage(
    const JointState& state, const MediatorSpec& spec, double tau_a,
    double tau_b, const TruncationPolicy& policy, Outcome outcome,
    PhaseConvention convention = PhaseConvention::MinusI);

struct SequenceResult {
  JointState state;
  std::vector<PassageOutcome> passages;
  double joint_probability = 1.0;
};

/// Folds apply_passage left to right: outcomes.front() is the first
/// mediator sent through the cavities. Equal interaction times on both
/// cavities. ZeroProbabilityOutcome carries the failing passage index.
SequenceResult run_sequence(const JointState& initial,
                            const MediatorSpec& spec, double tau,
                            const std::vector<Outcome>& outcomes,
                            const TruncationPolicy& policy,
                            PhaseConvention convention =
                                PhaseConvention::MinusI);

/// Single passage of the vee mediator prepared in (|e_a> + |e_b>)/sqrt(2)
/// and measured in its ground state.
std::pair<JointState, PassageOutcome> vee_passage(const JointState& state,
                                                  const VeePropagator& prop);

}  // namespace cvmem
