#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "prol/gpsf.hpp"

namespace prol {

/// One (N, n) entry of a coefficient file.
struct CoefficientRecord {
  int N = 0;
  int n = 0;
  double chi = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double alpha_mag = 0.0;
  double nu_mag = 0.0;
  int phase_order = 0;
  double energy_deficit = 0.0;
  std::size_t K = 0;
  std::vector<double> coeffs;

  ZernikeExpansion expansion(int p) const { return {p, N, coeffs}; }
};

struct CoefficientFile {
  int p = 1;
  double c = 1.0;
  std::string version;
  /// Largest truncation among the records.
  std::size_t K = 0;
  std::vector<CoefficientRecord> records;
};

CoefficientRecord make_record(const RadialGpsf& g, std::size_t K);

/// {meta: {p, c, version, K}, records: [...]}, shortest round-trip numbers.
std::string to_json(const CoefficientFile& file);
CoefficientFile coefficient_file_from_json(std::string_view text);
/// One row per coefficient: record fields, then k and h_k.
std::string to_csv(const CoefficientFile& file);

/// Plain numeric table; integral values print without a decimal point.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table);
/// {columns: [...], rows: [[...], ...]}
std::string to_json(const Table& table);

/// Shortest decimal that reads back to the same double, locale independent.
std::string format_number(double v);

/// Accepts a decimal ("62.83"), "pi", or "<number>pi" ("20pi", "0.5pi").
double parse_bandlimit(std::string_view text);

std::string read_text_file(const std::string& path);
/// Throws IoError if the file cannot be opened or fully written.
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace prol
