#include "gramsep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gramsep {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double to_double(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

Json index_groups(const std::vector<std::vector<std::size_t>>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) out.push_back(g);
  return out;
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

Json points_to_json(std::span<const Point> points) {
  Json out = Json::array();
  for (const auto& p : points) {
    Json coords = Json::array();
    for (const auto& c : p.coords()) coords.push_back(Json::array({c.real(), c.imag()}));
    out.push_back(std::move(coords));
  }
  return out;
}

std::vector<Point> points_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("points JSON must be an array of points");
  std::vector<Point> out;
  for (const auto& p : j) {
    if (!p.is_array()) throw std::invalid_argument("each point must be an array of [re, im] pairs");
    std::vector<complex> coords;
    for (const auto& c : p) {
      if (!c.is_array() || c.size() != 2) throw std::invalid_argument("each coordinate must be a [re, im] pair");
      coords.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    out.emplace_back(std::move(coords));
  }
  return out;
}

Json report_to_json(const SeparationReport& r) {
  Json j;
  j["lambda_min"] = number(r.lambda_min);
  j["lambda_max"] = number(r.lambda_max);
  j["max_column_l2"] = number(r.max_column_l2);
  j["weak_sep"] = number(r.weak_sep);
  j["uniform_sep"] = number(r.uniform_sep);
  j["uniform_minimality"] = number(r.uniform_minimality);
  j["fm_sum"] = number(r.fm_sum);
  return j;
}

std::string report_to_csv(const SeparationReport& r) {
  const Json j = report_to_json(r);
  std::string head, row;
  for (const auto& [k, v] : j.items()) {
    head += (head.empty() ? "" : ",") + k;
    row += (row.empty() ? "" : ",") + format_number(to_double(v));
  }
  return head + "\n" + row + "\n";
}

Json partition_to_json(const Partition& p) {
  Json j;
  j["groups"] = index_groups(p.groups);
  j["group_bounds"] = numbers(p.group_bounds);
  j["feasible"] = p.feasible;
  return j;
}

Json h_partition_to_json(const HPartitionResult& r) {
  Json j = partition_to_json(r.partition);
  j["h_bounds"] = numbers(r.h_bounds);
  return j;
}

Json block_sequence_to_json(const BlockSequence& b) {
  Json j;
  Json blocks = Json::array();
  for (const auto& blk : b.blocks) blocks.push_back(points_to_json(blk));
  j["blocks"] = std::move(blocks);
  j["automorphisms"] = points_to_json(b.automorphisms);
  j["hs_budget"] = number(b.hs_budget);
  j["hs_residual"] = number(b.hs_residual);
  return j;
}

Json matrix_to_json(const HermitianMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({number(m(i, j).real()), number(m(i, j).imag())}));
    out.push_back(std::move(row));
  }
  return out;
}

Json result_to_json(const ExperimentResult& r, bool include_timing) {
  Json j;
  j["name"] = r.name;
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = std::move(params);

  Json grid = Json::array();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    Json rec = Json::object();
    for (const auto& c : r.grid) rec[c.name] = number(c.values.at(i));
    grid.push_back(std::move(rec));
  }
  j["grid"] = std::move(grid);

  Json metrics = Json::object();
  for (const auto& c : r.metrics) metrics[c.name] = numbers(c.values);
  j["metrics"] = std::move(metrics);

  Json fits = Json::array();
  for (const auto& f : r.fitted_exponents)
    fits.push_back(Json{{"name", f.name}, {"slope", number(f.slope)}, {"stderr", number(f.std_error)}});
  j["fitted_exponents"] = std::move(fits);

  Json summary = Json::object();
  for (const auto& [k, v] : r.summary) summary[k] = number(v);
  j["summary"] = std::move(summary);
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

ExperimentResult result_from_json(const Json& j) {
  ExperimentResult r;
  r.name = j.at("name").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, v.get<std::string>());

  const Json& grid = j.at("grid");
  if (!grid.empty()) {
    for (const auto& [k, v] : grid.front().items()) r.grid.push_back({k, {}});
    for (const auto& rec : grid)
      for (auto& c : r.grid) c.values.push_back(to_double(rec.at(c.name)));
  }
  for (const auto& [k, v] : j.at("metrics").items()) {
    Column c{k, {}};
    for (const auto& x : v) c.values.push_back(to_double(x));
    r.metrics.push_back(std::move(c));
  }
  for (const auto& f : j.at("fitted_exponents"))
    r.fitted_exponents.push_back({f.at("name").get<std::string>(), to_double(f.at("slope")), to_double(f.at("stderr"))});
  for (const auto& [k, v] : j.at("summary").items()) r.summary.emplace_back(k, to_double(v));
  if (j.contains("runtime_ms")) r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
  return r;
}

std::string result_to_csv(const ExperimentResult& r) {
  std::string out;
  std::string head;
  for (const auto& c : r.grid) head += (head.empty() ? "" : ",") + c.name;
  for (const auto& c : r.metrics) head += (head.empty() ? "" : ",") + c.name;
  out += head + "\n";
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::string line;
    for (const auto& c : r.grid) line += (line.empty() ? "" : ",") + format_number(c.values.at(i));
    for (const auto& c : r.metrics) line += (line.empty() ? "" : ",") + format_number(c.values.at(i));
    out += line + "\n";
  }
  return out;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected json or csv)");
}

std::string render(const ExperimentResult& r, OutputFormat format, bool include_timing) {
  if (format == OutputFormat::csv) return result_to_csv(r);
  return result_to_json(r, include_timing).dump(2) + "\n";
}

void emit(const ExperimentResult& r, OutputFormat format, const std::string& path, bool include_timing) {
  write_text(render(r, format, include_timing), path);
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw std::runtime_error("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gramsep
