#include "tmres/output.hpp"

#include <cstdio>

#include "tmres/errors.hpp"

namespace tmres {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& config_hash)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot open output file: " + path);
  out_ << "# config_hash=" << config_hash << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
}

void CsvWriter::number_row(const std::vector<double>& cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double v : cells) text.push_back(format_float(v));
  row(text);
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json doc;
  doc["tool"] = "tmres";
  doc["version"] = tool_version;
  doc["command"] = command;
  doc["config_hash"] = config_hash;
  doc["grid"] = grid;
  doc["outputs"] = outputs;
  doc["timings_ms"] = timings_ms;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open manifest file: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace tmres
