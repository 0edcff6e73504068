#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "delab/engine.hpp"
#include "delab/stats/sample_matrix.hpp"

namespace delab {

/// Problems with input data (malformed CSV, unreadable files). Distinct from
/// usage errors so the CLI can map them to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace csv {

/// Shortest representation that round-trips a double exactly.
inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline double parse_double(const std::string& token, const std::string& context) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(context + ": not a number: '" + token + "'");
  return value;
}

inline std::uint64_t parse_u64(const std::string& token, const std::string& context) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(context + ": not an integer: '" + token + "'");
  return value;
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

}  // namespace csv

/// Contents of one positions file: the per-run final best positions with the
/// seed and PoC of each run. Schema: run,seed,poc,dim_0,...,dim_{n-1}.
struct PositionsFile {
  std::size_t dims = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> pocs;
  std::vector<double> positions;  // row-major runs x dims

  std::size_t runs() const { return seeds.size(); }

  stats::SampleMatrix matrix() const {
    return stats::SampleMatrix(runs(), dims, positions);
  }
};

inline void write_positions_csv(const std::filesystem::path& path,
                                const std::vector<RunRecord>& records, std::size_t dims) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "run,seed,poc";
  for (std::size_t d = 0; d < dims; ++d) out << ",dim_" << d;
  out << '\n';
  for (std::size_t r = 0; r < records.size(); ++r) {
    const RunRecord& record = records[r];
    out << r << ',' << record.seed << ',' << csv::format_double(record.poc);
    for (double v : record.best_position) out << ',' << csv::format_double(v);
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

inline PositionsFile read_positions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto header = csv::split(line);
  if (header.size() < 4 || header[0] != "run" || header[1] != "seed" || header[2] != "poc")
    throw DataError(path.string() + ": expected header run,seed,poc,dim_0,...");
  PositionsFile file;
  file.dims = header.size() - 3;
  for (std::size_t d = 0; d < file.dims; ++d) {
    if (header[d + 3] != "dim_" + std::to_string(d))
      throw DataError(path.string() + ": malformed position column '" + header[d + 3] + "'");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string context = path.string() + ":" + std::to_string(row);
    const auto fields = csv::split(line);
    if (fields.size() != header.size())
      throw DataError(context + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    file.seeds.push_back(csv::parse_u64(fields[1], context));
    file.pocs.push_back(csv::parse_double(fields[2], context));
    for (std::size_t d = 0; d < file.dims; ++d) {
      const double v = csv::parse_double(fields[d + 3], context);
      if (!(v >= 0.0 && v <= 1.0))
        throw DataError(context + ": position outside [0,1]: " + fields[d + 3]);
      file.positions.push_back(v);
    }
  }
  if (file.seeds.size() < 2) throw DataError(path.string() + ": needs at least 2 data rows");
  return file;
}

}  // namespace delab
