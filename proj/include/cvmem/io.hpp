#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvmem/experiments.hpp"

namespace cvmem {

/// Reproducibility sidecar written next to every output file as
/// <path>.manifest.txt. Holds everything needed to regenerate the file
/// byte for byte (except the timestamp line).
struct RunManifest {
  std::string tool = "cvmem 0.1.0";
  std::string command_line;
  std::optional<std::uint64_t> seed;
  int n_cut_used = 0;
  std::string phase_convention = "minus-i";
  std::string tau_aux_interpretation = kAuxTimeInterpretation;
  std::string prng = kPrngName;
  std::vector<std::pair<std::string, std::string>> extra;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

/// CSV with header tau,alpha,n_passages,entropy,prob_joint,prob_last and a
/// trailing negativity column when the records carry one. Values use 9
/// significant digits, LF line endings, rows in the order given (canonical
/// grid order for sweeps). The manifest lands at <path>.manifest.txt.
void write_csv(const std::vector<MetricsRecord>& records,
               const std::string& path, RunManifest manifest);

enum class HeatmapField { Entropy, Probability };

/// Binary 8-bit PGM (P5), width = tau steps, height = alpha steps, row 0 at
/// the smallest alpha. Pixels scale the field linearly to [0, 255] by the
/// grid maximum, which is recorded in the manifest. The records must form a
/// complete rectangular grid.
void write_heatmap(const std::vector<MetricsRecord>& records,
                   const std::string& path, HeatmapField field,
                   RunManifest manifest);

/// Parses a file produced by write_csv (negativity column optional).
std::vector<MetricsRecord> read_csv(const std::string& path);

}  // namespace cvmem
