#include "cvmem/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace cvmem {

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw SimError("cannot open for writing: " + path);
  }
  return out;
}

}  // namespace

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out = open_or_throw(path);
  out << "tool: " << manifest.tool << "\n";
  out << "command: " << manifest.command_line << "\n";
  if (manifest.seed) out << "seed: " << *manifest.seed << "\n";
  out << "n_cut: " << manifest.n_cut_used << "\n";
  out << "phase_convention: " << manifest.phase_convention << "\n";
  out << "tau_aux_interpretation: " << manifest.tau_aux_interpretation << "\n";
  out << "prng: " << manifest.prng << "\n";
  for (const auto& [key, value] : manifest.extra) {
    out << key << ": " << value << "\n";
  }
  out << "timestamp_utc: " << utc_timestamp() << "\n";
  if (!out) throw SimError("failed writing manifest: " + path);
}

void write_csv(const std::vector<MetricsRecord>& records,
               const std::string& path, RunManifest manifest) {
  if (records.empty()) {
    throw std::invalid_argument("write_csv: records must be nonempty");
  }
  const bool with_negativity = records.front().negativity.has_value();
  for (const auto& rec : records) {
    if (rec.negativity.has_value() != with_negativity) {
      throw std::invalid_argument(
          "write_csv: negativity must be present on all records or none");
    }
  }

  std::ofstream out = open_or_throw(path);
  out << "tau,alpha,n_passages,entropy,prob_joint,prob_last";
  if (with_negativity) out << ",negativity";
  out << "\n";
  for (const auto& rec : records) {
    out << format_value(rec.tau) << ',' << format_value(rec.alpha) << ','
        << rec.n_passages << ',' << format_value(rec.entropy) << ','
        << format_value(rec.joint_probability) << ','
        << format_value(rec.last_conditional_probability);
    if (with_negativity) out << ',' << format_value(*rec.negativity);
    out << "\n";
  }
  if (!out) throw SimError("failed writing csv: " + path);
  out.close();
  write_manifest(manifest, path + ".manifest.txt");
}

void write_heatmap(const std::vector<MetricsRecord>& records,
                   const std::string& path, HeatmapField field,
                   RunManifest manifest) {
  if (records.empty()) {
    throw IncompleteGrid("write_heatmap: no records");
  }
  // Reconstruct the rectangular grid from the distinct coordinate values.
  std::vector<double> taus, alphas;
  for (const auto& rec : records) {
    taus.push_back(rec.tau);
    alphas.push_back(rec.alpha);
  }
  auto unique_sorted = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(taus);
  unique_sorted(alphas);
  const std::size_t width = taus.size();
  const std::size_t height = alphas.size();
  if (records.size() != width * height) {
    throw IncompleteGrid("write_heatmap: records do not fill the grid");
  }

  auto index_of = [](const std::vector<double>& axis, double v) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), v);
    if (it == axis.end() || *it != v) {
      throw IncompleteGrid("write_heatmap: coordinate off the grid");
    }
    return static_cast<std::size_t>(it - axis.begin());
  };

  std::vector<double> value(width * height,
                            std::numeric_limits<double>::quiet_NaN());
  double field_max = 0.0;
  for (const auto& rec : records) {
    const double v = field == HeatmapField::Entropy
                         ? rec.entropy
                         : rec.last_conditional_probability;
    const std::size_t i = index_of(alphas, rec.alpha);
    const std::size_t j = index_of(taus, rec.tau);
    if (!std::isnan(value[i * width + j])) {
      throw IncompleteGrid("write_heatmap: duplicate grid point");
    }
    value[i * width + j] = v;
    field_max = std::max(field_max, v);
  }

  std::ofstream out = open_or_throw(path);
  out << "P5\n" << width << " " << height << "\n255\n";
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const double v = value[i * width + j];
      const long pixel =
          field_max > 0.0 ? std::lround(255.0 * v / field_max) : 0;
      out.put(static_cast<char>(std::clamp(pixel, 0L, 255L)));
    }
  }
  if (!out) throw SimError("failed writing pgm: " + path);
  out.close();

  manifest.extra.emplace_back("field", field == HeatmapField::Entropy
                                           ? "entropy"
                                           : "probability");
  manifest.extra.emplace_back("field_max", format_value(field_max));
  write_manifest(manifest, path + ".manifest.txt");
}

std::vector<MetricsRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SimError("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw SimError("read_csv: empty file: " + path);
  }
  const bool with_negativity = line.find(",negativity") != std::string::npos;

  std::vector<MetricsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) {
      cells.push_back(std::stod(cell));
    }
    if (cells.size() != (with_negativity ? 7u : 6u)) {
      throw SimError("read_csv: malformed row: " + line);
    }
    MetricsRecord rec;
    rec.tau = cells[0];
    rec.alpha = cells[1];
    rec.n_passages = static_cast<int>(cells[2]);
    rec.entropy = cells[3];
    rec.joint_probability = cells[4];
    rec.last_conditional_probability = cells[5];
    if (with_negativity) rec.negativity = cells[6];
    records.push_back(rec);
  }
  return records;
}

}  // namespace cvmem
