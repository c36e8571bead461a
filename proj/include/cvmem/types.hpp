#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvmem {

using Complex = std::complex<double>;

/// Squared-norm floor below which a post-selected branch counts as impossible.
inline constexpr double kZeroProbabilityThreshold = 1e-14;

/// Photon-number truncation shared by every state and operator in a run.
/// tail_tolerance bounds the probability mass that may ever be dropped
/// above n_cut, both at state preparation and when a shift operator pushes
/// amplitude across the cutoff.
struct TruncationPolicy {
  int n_cut = 31;
  double tail_tolerance = 1e-12;

  int dim() const { return n_cut + 1; }
  void validate() const;
};

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationTooSmall : public SimError {
 public:
  using SimError::SimError;
};

class DimensionMismatch : public SimError {
 public:
  using SimError::SimError;
};

class NotNormalized : public SimError {
 public:
  using SimError::SimError;
};

class ZeroVector : public SimError {
 public:
  using SimError::SimError;
};

class IncompleteGrid : public SimError {
 public:
  using SimError::SimError;
};

/// Thrown when a requested measurement outcome has (numerically) zero
/// probability. Carries the index of the failing passage within a sequence.
class ZeroProbabilityOutcome : public SimError {
 public:
  ZeroProbabilityOutcome(const std::string& what, std::size_t index)
      : SimError(what), passage_index(index) {}
  std::size_t passage_index = 0;
};

}  // namespace cvmem
