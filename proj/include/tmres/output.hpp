// output.hpp — deterministic CSV emission and the per-run manifest.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmres/types.hpp"

namespace tmres {

/// Fixed float formatting for data files: 17 significant digits, enough to
/// round-trip any double, identical bytes for identical values.
std::string format_float(double v);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// CSV with one comment line carrying the config hash, then a header row.
/// Rows are written in call order; values go through format_float.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& config_hash);

  void row(const std::vector<std::string>& cells);
  void number_row(const std::vector<double>& cells);

 private:
  std::ofstream out_;
  std::size_t n_columns_;
};

/// Audit record of one CLI run: every emitted data file is referenced by
/// exactly one manifest.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string config_hash;
  nlohmann::json grid;  // free-form description of the parameter grid
  std::vector<std::string> outputs;
  nlohmann::json timings_ms;

  void write(const std::string& path) const;
};

}  // namespace tmres
