#include "cvmem/conditional.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cvmem {

const char* to_string(Outcome o) {
  return o == Outcome::Positive ? "positive" : "negative";
}

void MediatorSpec::validate() const {
  const double n = std::norm(c_g) + std::norm(c_e);
  if (std::abs(n - 1.0) > 1e-12) {
    throw NotNormalized("MediatorSpec: |c_g|^2 + |c_e|^2 must be 1");
  }
  if (theta < 0.0 || theta > std::numbers::pi / 2 + 1e-12) {
    throw std::invalid_argument("MediatorSpec: theta outside [0, pi/2]");
  }
  if (varphi < 0.0 || varphi >= 2 * std::numbers::pi) {
    throw std::invalid_argument("MediatorSpec: varphi outside [0, 2pi)");
  }
}

MediatorSpec MediatorSpec::ground_to_excited() {
  return MediatorSpec{Complex(1, 0), Complex(0, 0), std::numbers::pi / 2, 0.0};
}

std::pair<Complex, Complex> MediatorSpec::measurement_row(
    Outcome outcome) const {
  const Complex phase = std::exp(Complex(0, -varphi));
  if (outcome == Outcome::Positive) {
    // <theta,phi| = e^{-i phi} sin(theta) <e| + cos(theta) <g|
    return {phase * std::sin(theta), Complex(std::cos(theta), 0)};
  }
  // Orthogonal complement |perp> = -sin(theta)|g> + e^{i phi} cos(theta)|e>.
  return {phase * std::cos(theta), Complex(-std::sin(theta), 0)};
}

TwoTermOperator effective_operator(const MediatorSpec& spec,
                                   const JcBlocks& blocks_a,
                                   const JcBlocks& blocks_b, Outcome outcome) {
  spec.validate();
  const auto [me_e, me_g] = spec.measurement_row(outcome);
  TwoTermOperator op;
  op.a_b = combine(me_e, blocks_b.u11, me_g, blocks_b.u21);
  op.c_b = combine(me_e, blocks_b.u12, me_g, blocks_b.u22);
  op.b_a = combine(spec.c_e, blocks_a.u11, spec.c_g, blocks_a.u12);
  op.d_a = combine(spec.c_e, blocks_a.u21, spec.c_g, blocks_a.u22);
  return op;
}

JointState apply(const TwoTermOperator& op, const JointState& state) {
  Eigen::MatrixXcd term1 = apply_mode_b(op.a_b, apply_mode_a(op.b_a, state.coeffs));
  term1 += apply_mode_b(op.c_b, apply_mode_a(op.d_a, state.coeffs));
  return JointState(std::move(term1));
}

std::pair<JointState, PassageOutcome> apply_passage(
    const JointState& state, const MediatorSpec& spec, double tau_a,
    double tau_b, const TruncationPolicy& policy, Outcome outcome,
    PhaseConvention convention) {
  if (!state.is_normalized()) {
    throw NotNormalized("apply_passage: state must be normalized");
  }
  const JcBlocks blocks_a = jc_blocks(tau_a, policy, convention);
  const JcBlocks blocks_b = jc_blocks(tau_b, policy, convention);
  const TwoTermOperator op = effective_operator(spec, blocks_a, blocks_b, outcome);

  JointState post = apply(op, state);
  const double p = post.norm_sq;
  if (p < kZeroProbabilityThreshold) {
    std::ostringstream msg;
    msg << "outcome " << to_string(outcome)
        << " has zero probability (|amplitude|^2 = " << p << ")";
    throw ZeroProbabilityOutcome(msg.str(), 0);
  }
  return {post.normalized(), PassageOutcome{outcome, p}};
}

SequenceResult run_sequence(const JointState& initial,
                            const MediatorSpec& spec, double tau,
                            const std::vector<Outcome>& outcomes,
                            const TruncationPolicy& policy,
                            PhaseConvention convention) {
  if (outcomes.empty()) {
    throw std::invalid_argument("run_sequence: outcome list must be nonempty");
  }
  SequenceResult result;
  result.state = initial;
  result.passages.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    try {
      auto [next, passage] =
          apply_passage(result.state, spec, tau, tau, policy, outcomes[i],
                        convention);
      result.state = std::move(next);
      result.passages.push_back(passage);
      result.joint_probability *= passage.conditional_probability;
    } catch (const ZeroProbabilityOutcome& e) {
      throw ZeroProbabilityOutcome(
          std::string(e.what()) + " at passage " + std::to_string(i), i);
    }
  }
  return result;
}

std::pair<JointState, PassageOutcome> vee_passage(const JointState& state,
                                                  const VeePropagator& prop) {
  if (!state.is_normalized()) {
    throw NotNormalized("vee_passage: state must be normalized");
  }
  const int dim = prop.policy.dim();
  if (state.dim() != dim || state.coeffs.cols() != dim) {
    throw DimensionMismatch("vee_passage: state does not match policy");
  }

  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  VeeState vee;
  vee.g = Eigen::MatrixXcd::Zero(dim, dim);
  vee.ea = inv_sqrt2 * state.coeffs;
  vee.eb = inv_sqrt2 * state.coeffs;
  apply_in_place(prop, vee);

  JointState post(std::move(vee.g));
  const double p = post.norm_sq;
  if (p < kZeroProbabilityThreshold) {
    std::ostringstream msg;
    msg << "vee ground projection has zero probability (|amplitude|^2 = "
        << p << ")";
    throw ZeroProbabilityOutcome(msg.str(), 0);
  }
  return {post.normalized(), PassageOutcome{Outcome::Negative, p}};
}

}  // namespace cvmem
