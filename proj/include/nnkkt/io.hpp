#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nnkkt/activation.hpp"
#include "nnkkt/errors.hpp"
#include "nnkkt/network.hpp"

namespace nnkkt {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

inline double parse_cell(const std::string& cell, int row, int col) {
  if (cell.empty()) throw ParseError("empty cell", row, col);
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("cell '" + cell + "' is not a number", row, col);
  if (!std::isfinite(value))
    throw ParseError("cell '" + cell + "' is not finite", row, col);
  return value;
}

}  // namespace detail

// CSV with header t1,...,td,f; one row per discretisation point.
inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError("'" + path + "' is empty");
  auto header = detail::split_csv_line(line);
  if (header.size() < 2)
    throw ParseError("header needs at least columns t1 and f", 1, 1);
  int d = static_cast<int>(header.size()) - 1;
  for (int k = 0; k < d; ++k) {
    std::string expect = "t" + std::to_string(k + 1);
    if (header[k] != expect)
      throw ParseError("header column should be '" + expect + "', found '" +
                           header[k] + "'",
                       1, k + 1);
  }
  if (header.back() != "f")
    throw ParseError("last header column should be 'f', found '" +
                         header.back() + "'",
                     1, d + 1);
  std::vector<std::vector<double>> points;
  std::vector<double> targets;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (static_cast<int>(cells.size()) != d + 1) {
      int col = static_cast<int>(std::min(cells.size(), std::size_t(d))) + 1;
      throw ParseError("row has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(d + 1),
                       row, col);
    }
    std::vector<double> pt(d);
    for (int k = 0; k < d; ++k) pt[k] = detail::parse_cell(cells[k], row, k + 1);
    targets.push_back(detail::parse_cell(cells[d], row, d + 1));
    points.push_back(std::move(pt));
  }
  if (points.empty())
    throw EmptyDatasetError("'" + path + "' has a header but no data rows");
  return Dataset(std::move(points), std::move(targets));
}

inline void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset file '" + path + "'");
  for (int k = 0; k < data.dim(); ++k) out << "t" << (k + 1) << ",";
  out << "f\n";
  for (int i = 0; i < data.size(); ++i) {
    for (double v : data.point(i)) out << detail::format_double(v) << ",";
    out << detail::format_double(data.target(i)) << "\n";
  }
  if (!out) throw IoError("failed writing dataset file '" + path + "'");
}

struct ParamsFile {
  NetworkParams params;
  Activation activation;
};

inline nlohmann::json params_to_json(const NetworkParams& params,
                                     const Activation& act) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : params.units())
    units.push_back({{"w", u.w}, {"w0", u.w0}, {"a", u.a}});
  return {{"architecture", architecture_name(params.architecture())},
          {"activation", act.name()},
          {"units", std::move(units)}};
}

inline ParamsFile params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("expected an object", "$");
  for (const char* field : {"architecture", "activation", "units"})
    if (!j.contains(field))
      throw SchemaError("missing field", std::string("$.") + field);
  const auto& arch_j = j["architecture"];
  if (!arch_j.is_string())
    throw SchemaError("architecture must be a string", "$.architecture");
  std::string arch_s = arch_j.get<std::string>();
  Architecture arch;
  if (arch_s == "no_hidden")
    arch = Architecture::no_hidden;
  else if (arch_s == "one_hidden")
    arch = Architecture::one_hidden;
  else
    throw SchemaError("architecture must be 'no_hidden' or 'one_hidden'",
                      "$.architecture");
  const auto& act_j = j["activation"];
  if (!act_j.is_string())
    throw SchemaError("activation must be a string", "$.activation");
  std::string act_s = act_j.get<std::string>();
  if (act_s != "sigmoid" && act_s != "tanh" && act_s != "softplus")
    throw SchemaError("activation must be sigmoid, tanh, or softplus",
                      "$.activation");
  const auto& units_j = j["units"];
  if (!units_j.is_array() || units_j.empty())
    throw SchemaError("units must be a nonempty array", "$.units");
  if (arch == Architecture::no_hidden && units_j.size() != 1)
    throw SchemaError("no_hidden requires exactly one unit", "$.units");
  std::vector<HiddenUnit> units;
  std::size_t d = 0;
  for (std::size_t i = 0; i < units_j.size(); ++i) {
    std::string base = "$.units[" + std::to_string(i) + "]";
    const auto& u = units_j[i];
    if (!u.is_object()) throw SchemaError("unit must be an object", base);
    for (const char* field : {"w", "w0", "a"})
      if (!u.contains(field))
        throw SchemaError("missing field", base + "." + field);
    if (!u["w"].is_array() || u["w"].empty())
      throw SchemaError("w must be a nonempty array", base + ".w");
    HiddenUnit unit;
    for (std::size_t k = 0; k < u["w"].size(); ++k) {
      if (!u["w"][k].is_number())
        throw SchemaError("w entries must be numbers",
                          base + ".w[" + std::to_string(k) + "]");
      unit.w.push_back(u["w"][k].get<double>());
    }
    if (i == 0)
      d = unit.w.size();
    else if (unit.w.size() != d)
      throw SchemaError("units disagree on w length", base + ".w");
    if (!u["w0"].is_number())
      throw SchemaError("w0 must be a number", base + ".w0");
    unit.w0 = u["w0"].get<double>();
    if (!u["a"].is_number())
      throw SchemaError("a must be a number", base + ".a");
    unit.a = u["a"].get<double>();
    if (arch == Architecture::no_hidden && unit.a != 1.0)
      throw SchemaError("a must equal 1", base + ".a");
    units.push_back(std::move(unit));
  }
  try {
    return ParamsFile{NetworkParams(arch, std::move(units)),
                      Activation::from_name(act_s)};
  } catch (const DimensionMismatchError& e) {
    throw SchemaError(e.what(), "$.units");
  }
}

inline ParamsFile load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open params file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), "$");
  }
  return params_from_json(j);
}

inline void save_params(const ParamsFile& pf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write params file '" + path + "'");
  out << params_to_json(pf.params, pf.activation).dump(2) << "\n";
  if (!out) throw IoError("failed writing params file '" + path + "'");
}

struct ClassificationSummary {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  double z_max = 0.0;
  double l1_total = 0.0;
  double tol = 0.0;
};

// Flat result record for one CLI invocation; every field serializes only
// when present so a report re-parses to an identical value.
struct Report {
  std::string command;
  std::string loss;
  std::string activation;
  std::string verdict;
  std::optional<ClassificationSummary> classification;
  std::optional<std::vector<double>> witness_u;
  std::optional<std::vector<double>> witness_v;
  std::optional<std::vector<double>> witness_point;
  std::optional<std::vector<double>> zonotope_t;
  std::optional<std::vector<double>> separation_a;
  std::optional<double> separation_b;
  std::optional<double> separation_delta;
  std::optional<double> kkt_residual;
  std::optional<std::vector<double>> values;
  std::optional<double> z_star;
  std::optional<int> iterations;
  std::optional<double> oracle_loss;
  std::optional<nlohmann::json> params;
  std::optional<double> grad_max_rel_error;
  std::optional<bool> grad_passed;
  std::optional<double> elapsed_ms;
  std::uint64_t seed = 0;
  std::string note;
};

inline nlohmann::json report_to_json(const Report& r) {
  nlohmann::json j;
  j["command"] = r.command;
  if (!r.loss.empty()) j["loss"] = r.loss;
  if (!r.activation.empty()) j["activation"] = r.activation;
  if (!r.verdict.empty()) j["verdict"] = r.verdict;
  if (r.classification) {
    j["classification"] = {{"n1", r.classification->n1},
                           {"n2", r.classification->n2},
                           {"n3", r.classification->n3},
                           {"z_max", r.classification->z_max},
                           {"l1_total", r.classification->l1_total},
                           {"tol", r.classification->tol}};
  }
  if (r.witness_u) j["witness_u"] = *r.witness_u;
  if (r.witness_v) j["witness_v"] = *r.witness_v;
  if (r.witness_point) j["witness_point"] = *r.witness_point;
  if (r.zonotope_t) j["zonotope_t"] = *r.zonotope_t;
  if (r.separation_a) j["separation_a"] = *r.separation_a;
  if (r.separation_b) j["separation_b"] = *r.separation_b;
  if (r.separation_delta) j["separation_delta"] = *r.separation_delta;
  if (r.kkt_residual) j["kkt_residual"] = *r.kkt_residual;
  if (r.values) j["values"] = *r.values;
  if (r.z_star) j["z_star"] = *r.z_star;
  if (r.iterations) j["iterations"] = *r.iterations;
  if (r.oracle_loss) j["oracle_loss"] = *r.oracle_loss;
  if (r.params) j["params"] = *r.params;
  if (r.grad_max_rel_error) j["grad_max_rel_error"] = *r.grad_max_rel_error;
  if (r.grad_passed) j["grad_passed"] = *r.grad_passed;
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  if (r.seed != 0) j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("expected an object", "$");
  Report r;
  auto get_string = [&](const char* k, std::string& into) {
    if (j.contains(k)) into = j.at(k).get<std::string>();
  };
  get_string("command", r.command);
  get_string("loss", r.loss);
  get_string("activation", r.activation);
  get_string("verdict", r.verdict);
  get_string("note", r.note);
  if (j.contains("classification")) {
    const auto& c = j.at("classification");
    ClassificationSummary cs;
    cs.n1 = c.at("n1").get<int>();
    cs.n2 = c.at("n2").get<int>();
    cs.n3 = c.at("n3").get<int>();
    cs.z_max = c.at("z_max").get<double>();
    cs.l1_total = c.at("l1_total").get<double>();
    cs.tol = c.at("tol").get<double>();
    r.classification = cs;
  }
  auto get_vec = [&](const char* k, std::optional<std::vector<double>>& into) {
    if (j.contains(k)) into = j.at(k).get<std::vector<double>>();
  };
  get_vec("witness_u", r.witness_u);
  get_vec("witness_v", r.witness_v);
  get_vec("witness_point", r.witness_point);
  get_vec("zonotope_t", r.zonotope_t);
  get_vec("separation_a", r.separation_a);
  get_vec("values", r.values);
  auto get_num = [&](const char* k, std::optional<double>& into) {
    if (j.contains(k)) into = j.at(k).get<double>();
  };
  get_num("separation_b", r.separation_b);
  get_num("separation_delta", r.separation_delta);
  get_num("kkt_residual", r.kkt_residual);
  get_num("z_star", r.z_star);
  get_num("oracle_loss", r.oracle_loss);
  get_num("grad_max_rel_error", r.grad_max_rel_error);
  get_num("elapsed_ms", r.elapsed_ms);
  if (j.contains("iterations")) r.iterations = j.at("iterations").get<int>();
  if (j.contains("params")) r.params = j.at("params");
  if (j.contains("grad_passed")) r.grad_passed = j.at("grad_passed").get<bool>();
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

inline void write_report(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report file '" + path + "'");
  out << report_to_json(r).dump(2) << "\n";
  if (!out) throw IoError("failed writing report file '" + path + "'");
}

inline Report read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), "$");
  }
  return report_from_json(j);
}

}  // namespace nnkkt
