#include "prol/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "prol/errors.hpp"

namespace prol {

using nlohmann::json;

CoefficientRecord make_record(const RadialGpsf& g, std::size_t K) {
  CoefficientRecord r;
  r.N = g.params.N;
  r.n = g.n;
  r.chi = g.chi;
  r.gamma = g.gamma;
  r.beta = g.beta;
  r.alpha_mag = g.alpha_magnitude();
  r.nu_mag = g.nu_magnitude;
  r.phase_order = g.phase_order;
  r.energy_deficit = g.energy_deficit();
  r.K = K;
  r.coeffs = g.expansion.coeffs;
  return r;
}

std::string to_json(const CoefficientFile& file) {
  json records = json::array();
  for (const auto& r : file.records) {
    records.push_back({{"N", r.N},
                       {"n", r.n},
                       {"chi", r.chi},
                       {"gamma", r.gamma},
                       {"beta", r.beta},
                       {"alpha_mag", r.alpha_mag},
                       {"nu_mag", r.nu_mag},
                       {"phase_order", r.phase_order},
                       {"energy_deficit", r.energy_deficit},
                       {"K", r.K},
                       {"coeffs", r.coeffs}});
  }
  json doc = {{"meta", {{"p", file.p}, {"c", file.c}, {"version", file.version}, {"K", file.K}}},
              {"records", std::move(records)}};
  return doc.dump(1) + "\n";
}

CoefficientFile coefficient_file_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    CoefficientFile file;
    const auto& meta = doc.at("meta");
    file.p = meta.at("p").get<int>();
    file.c = meta.at("c").get<double>();
    file.version = meta.at("version").get<std::string>();
    file.K = meta.at("K").get<std::size_t>();
    for (const auto& j : doc.at("records")) {
      CoefficientRecord r;
      r.N = j.at("N").get<int>();
      r.n = j.at("n").get<int>();
      r.chi = j.at("chi").get<double>();
      r.gamma = j.at("gamma").get<double>();
      r.beta = j.at("beta").get<double>();
      r.alpha_mag = j.at("alpha_mag").get<double>();
      r.nu_mag = j.at("nu_mag").get<double>();
      r.phase_order = j.at("phase_order").get<int>();
      r.energy_deficit = j.at("energy_deficit").get<double>();
      r.coeffs = j.at("coeffs").get<std::vector<double>>();
      r.K = j.contains("K") ? j.at("K").get<std::size_t>() : r.coeffs.size();
      file.records.push_back(std::move(r));
    }
    return file;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed coefficient file: ") + e.what());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CoefficientFile& file) {
  std::string out = "N,n,K,chi,gamma,beta,alpha_mag,nu_mag,phase_order,energy_deficit,k,coeff\n";
  for (const auto& r : file.records) {
    std::string head = std::to_string(r.N) + "," + std::to_string(r.n) + "," + std::to_string(r.K) + "," +
                       format_number(r.chi) + "," + format_number(r.gamma) + "," + format_number(r.beta) + "," +
                       format_number(r.alpha_mag) + "," + format_number(r.nu_mag) + "," +
                       std::to_string(r.phase_order) + "," + format_number(r.energy_deficit) + ",";
    for (std::size_t k = 0; k < r.coeffs.size(); ++k)
      out += head + std::to_string(k) + "," + format_number(r.coeffs[k]) + "\n";
  }
  return out;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) {
      if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9007199254740992.0)
        r.push_back(static_cast<long long>(v));
      else
        r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  json doc = {{"columns", table.columns}, {"rows", std::move(rows)}};
  return doc.dump(1) + "\n";
}

double parse_bandlimit(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double scale = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    scale = std::numbers::pi;
    s.remove_suffix(2);
    if (!s.empty() && s.back() == '*') s.remove_suffix(1);
    if (s.empty()) return scale;
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParameterError("cannot parse bandlimit '" + std::string(text) + "'");
  v *= scale;
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("bandlimit must be positive, got '" + std::string(text) + "'");
  return v;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace prol
