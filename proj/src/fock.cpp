#include "cvmem/fock.hpp"

#include <cmath>
#include <sstream>

namespace cvmem {

void TruncationPolicy::validate() const {
  if (n_cut < 1) {
    throw std::invalid_argument("TruncationPolicy: n_cut must be >= 1");
  }
  if (!(tail_tolerance > 0.0) || !(tail_tolerance < 1.0)) {
    throw std::invalid_argument(
        "TruncationPolicy: tail_tolerance must lie in (0, 1)");
  }
}

JointState JointState::normalized() const {
  if (is_zero()) {
    throw ZeroVector("cannot normalize a zero-norm joint state");
  }
  JointState out;
  out.coeffs = coeffs / std::sqrt(norm_sq);
  out.norm_sq = 1.0;
  return out;
}

Complex inner(const JointState& a, const JointState& b) {
  if (a.coeffs.rows() != b.coeffs.rows() ||
      a.coeffs.cols() != b.coeffs.cols()) {
    throw DimensionMismatch("inner: joint states have different dimensions");
  }
  return (a.coeffs.conjugate().cwiseProduct(b.coeffs)).sum();
}

ModeVector coherent_amplitudes(double alpha, const TruncationPolicy& policy) {
  if (alpha < 0.0) {
    throw std::invalid_argument("coherent_amplitudes: alpha must be >= 0");
  }
  policy.validate();

  const int dim = policy.dim();
  Eigen::VectorXd c(dim);
  c(0) = std::exp(-0.5 * alpha * alpha);
  for (int m = 0; m + 1 < dim; ++m) {
    c(m + 1) = c(m) * alpha / std::sqrt(static_cast<double>(m + 1));
  }

  const double tail = 1.0 - c.squaredNorm();
  if (tail > policy.tail_tolerance) {
    std::ostringstream msg;
    msg << "coherent_amplitudes: tail mass " << tail << " above n_cut="
        << policy.n_cut << " exceeds tolerance " << policy.tail_tolerance
        << " (alpha=" << alpha << ")";
    throw TruncationTooSmall(msg.str());
  }
  return c.cast<Complex>();
}

JointState product_state(const ModeVector& vec_a, const ModeVector& vec_b) {
  if (vec_a.size() != vec_b.size()) {
    throw DimensionMismatch("product_state: mode vectors differ in length");
  }
  return JointState(vec_a * vec_b.transpose());
}

int default_cutoff(double alpha, int n_passages) {
  if (alpha < 0.0 || n_passages < 0) {
    throw std::invalid_argument("default_cutoff: need alpha >= 0, n >= 0");
  }
  return static_cast<int>(std::ceil(alpha * alpha)) +
         10 * static_cast<int>(std::ceil(alpha + 1.0)) + 20 + n_passages;
}

TruncationPolicy default_policy(double alpha, int n_passages) {
  return TruncationPolicy{default_cutoff(alpha, n_passages), 1e-12};
}

}  // namespace cvmem
