#pragma once

// Text formats. Rationals always travel as reduced "num/den" strings, floats
// as shortest round-trip decimals.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "balchain/chain.hpp"
#include "balchain/steady_state.hpp"
#include "balchain/verifier.hpp"

namespace balchain::io {

using nlohmann::json;

inline json rational_array(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

inline json family_json(const ChainFamily& f) {
  json params = json::object();
  if (auto a = family_a(f)) params["a"] = to_string(*a);
  if (auto q = family_q(f)) params["q"] = to_string(*q);
  return params;
}

// ---- matrices ----

/// Row-major CSV, one matrix row per line.
inline std::string matrix_csv(const StochasticMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << to_string(m.at(i, j));
    os << '\n';
  }
  return os.str();
}

inline json matrix_json(const StochasticMatrix& m, const std::string& family = "custom",
                        const json& params = json::object()) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(rational_array(m.row(i)));
  json out = {{"n", m.size()}, {"family", family}, {"rows", rows}};
  if (!params.empty()) out["params"] = params;
  return out;
}

inline json matrix_json(const StochasticMatrix& m, const ChainFamily& f) {
  return matrix_json(m, family_name(f), family_json(f));
}

/// Reads the "rows" member of a matrix JSON document.
inline StochasticMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw ParameterError("matrix JSON must be an object with a \"rows\" array");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : doc["rows"]) {
    if (!row.is_array()) throw ParameterError("matrix row is not an array");
    std::vector<Rational> r;
    for (const auto& cell : row) {
      if (!cell.is_string()) throw ParameterError("matrix entries must be \"num/den\" strings");
      r.push_back(parse_rational(cell.get<std::string>()));
    }
    rows.push_back(std::move(r));
  }
  if (doc.contains("n") && doc["n"].get<std::size_t>() != rows.size())
    throw ParameterError("matrix JSON \"n\" does not match the number of rows");
  return StochasticMatrix::from_rows(rows);
}

inline StochasticMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<Rational> r;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) r.push_back(parse_rational(cell));
    rows.push_back(std::move(r));
  }
  return StochasticMatrix::from_rows(rows);
}

// ---- stationary vectors ----

inline json exact_vector_json(const ExactDistribution& pi) { return {{"pi", rational_array(pi)}}; }

inline json approx_vector_json(const std::vector<double>& pi, double tol) {
  return {{"pi", pi}, {"tol", tol}};
}

inline std::string exact_vector_csv(const ExactDistribution& pi) {
  std::string out;
  for (const auto& p : pi) out += to_string(p) + "\n";
  return out;
}

inline std::string approx_vector_csv(const std::vector<double>& pi) {
  std::string out;
  for (double p : pi) out += format_double(p) + "\n";
  return out;
}

inline ExactDistribution exact_vector_from_json(const json& doc) {
  ExactDistribution out;
  for (const auto& cell : doc.at("pi")) out.push_back(parse_rational(cell.get<std::string>()));
  return out;
}

// ---- verification reports ----

inline json report_json(const VerificationReport& r) {
  return {{"family", family_name(r.family)},
          {"n", family_size(r.family)},
          {"params", family_json(r.family)},
          {"predicted", rational_array(r.predicted)},
          {"solved", rational_array(r.solved)},
          {"exact_match", r.exact_match},
          {"max_gap", to_string(r.max_gap)},
          {"notes", r.notes}};
}

inline constexpr const char* kSummaryHeader = "family,n,params,exact_match,max_gap";

inline std::string summary_row(const VerificationReport& r) {
  std::string params;
  if (auto a = family_a(r.family)) params += "a=" + to_string(*a);
  if (auto q = family_q(r.family)) params += std::string(params.empty() ? "" : ";") + "q=" + to_string(*q);
  return family_name(r.family) + "," + std::to_string(family_size(r.family)) + "," + params + "," +
         (r.exact_match ? "true" : "false") + "," + to_string(r.max_gap);
}

inline std::string summary_csv(const std::vector<VerificationReport>& reports) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& r : reports) out += summary_row(r) + "\n";
  return out;
}

}  // namespace balchain::io
