// gramsep: generate point configurations, inspect their Gramians and run the
// registered experiments.

#include "gramsep/constructions.hpp"
#include "gramsep/experiments.hpp"
#include "gramsep/feichtinger.hpp"
#include "gramsep/gramian.hpp"
#include "gramsep/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace gramsep;

namespace {

struct Globals {
  double a = 0.5;
  std::size_t dim = 1;
  std::string format = "json";
  std::string out = "-";
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

std::vector<Point> read_points(const std::string& path) { return points_from_json(Json::parse(read_text(path))); }

void write_json(const Json& j, const std::string& path) { write_text(j.dump(2) + "\n", path); }

std::vector<Point> random_points(std::size_t count, std::size_t dim, double max_norm, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Point> out;
  while (out.size() < count) {
    std::vector<complex> c(dim);
    double norm_sq = 0.0;
    for (auto& x : c) {
      x = complex(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0) * max_norm;
      norm_sq += std::norm(x);
    }
    if (norm_sq < max_norm * max_norm) out.emplace_back(std::move(c));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gramian diagnostics for interpolating and separated sequences"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* a_opt = app.add_option("--a", g.a, "Kernel exponent a in (0, 1]")->capture_default_str();
  app.add_option("--dim", g.dim, "Ambient dimension d of the ball")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "Output path, - for stdout")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for randomized generators and experiments")->capture_default_str();
  app.add_option("--tol", g.tol, "Bergman radius for orbit deduplication")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a point configuration as JSON");
  std::string kind;
  double radius = 0.9, shift = 2.1, eps = 0.5, max_norm = 0.9;
  std::size_t count = 16, word_length = 6, blocks = 6;
  std::string in_path = "-", range = "quarter";
  gen->add_option("kind", kind, "circle | schedule | cayley | beardon | lift | assemble | random")
      ->required()
      ->check(CLI::IsMember({"circle", "schedule", "cayley", "beardon", "lift", "assemble", "random"}));
  gen->add_option("--r", radius, "Circle radius")->capture_default_str();
  gen->add_option("--n", count, "Number of points (circle, schedule, cayley, random)")->capture_default_str();
  gen->add_option("--shift", shift, "Translation length of the orbit generator")->capture_default_str();
  gen->add_option("--length", word_length, "Maximal word length of the orbit")->capture_default_str();
  gen->add_option("--blocks", blocks, "Number of circle blocks to assemble")->capture_default_str();
  gen->add_option("--eps", eps, "Hilbert-Schmidt budget of the assembly")->capture_default_str();
  gen->add_option("--max-norm", max_norm, "Norm bound of random points")->capture_default_str();
  gen->add_option("--in", in_path, "Disc points to lift (JSON)")->capture_default_str();
  gen->add_option("--range", range, "Lift index range")->check(CLI::IsMember({"quarter", "full"}))->capture_default_str();

  // gram, classify, partition
  auto* gram = app.add_subcommand("gram", "Print the Gramian of a point set");
  gram->add_option("--in", in_path, "Points (JSON)")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "Separation report of a point set");
  cls->add_option("--in", in_path, "Points (JSON)")->capture_default_str();

  auto* part = app.add_subcommand("partition", "Partition a point set into subfamilies bounded below");
  double target = 0.1;
  std::size_t max_groups = 0;
  std::string strategy = "auto";
  bool via_h = false;
  part->add_option("--in", in_path, "Points (JSON)")->capture_default_str();
  part->add_option("--target", target, "Required lambda_min of every group")->capture_default_str();
  part->add_option("--max-groups", max_groups, "Group limit, 0 for N")->capture_default_str();
  part->add_option("--strategy", strategy, "Search strategy")
      ->check(CLI::IsMember({"auto", "greedy", "exhaustive"}))
      ->capture_default_str();
  part->add_flag("--via-h", via_h, "Search on H = (I + G^{-1})^{-1} and rescore on G");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a registered experiment");
  std::string exp_name;
  std::vector<std::string> raw_params;
  bool list = false, timing = false;
  exp->add_option("name", exp_name, "Experiment name");
  exp->add_option("--param,-p", raw_params, "Parameter key=value (repeatable)");
  exp->add_flag("--list", list, "List the registered experiments");
  exp->add_flag("--timing", timing, "Include runtime_ms in JSON output");

  // emit
  auto* em = app.add_subcommand("emit", "Re-emit a saved JSON experiment result");
  em->add_option("--in", in_path, "Result JSON")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const OutputFormat fmt = parse_format(g.format);
    if (*gen) {
      if (kind == "circle") {
        write_json(points_to_json(circle_points(radius, count)), g.out);
      } else if (kind == "schedule") {
        write_json(points_to_json(circle_points(radius_schedule(g.a, count), count)), g.out);
      } else if (kind == "cayley") {
        write_json(points_to_json(cayley_orbit(count)), g.out);
      } else if (kind == "beardon") {
        OrbitSpec os;
        os.generator_shift = shift;
        os.max_word_length = word_length;
        os.dedup_tol = g.tol;
        write_json(points_to_json(beardon_orbit(os)), g.out);
      } else if (kind == "lift") {
        const auto disc = read_points(in_path);
        write_json(points_to_json(lift_to_ball(disc, range == "full" ? LiftRange::full : LiftRange::quarter)), g.out);
      } else if (kind == "assemble") {
        const KernelSpec spec(g.a, 1);
        std::vector<std::vector<Point>> raw;
        for (std::size_t n = 2; n <= blocks + 1; ++n) raw.push_back(circle_points(radius_schedule(g.a, n), n));
        write_json(block_sequence_to_json(assemble(spec, raw, eps)), g.out);
      } else {
        write_json(points_to_json(random_points(count, g.dim, max_norm, g.seed)), g.out);
      }
    } else if (*gram) {
      const auto pts = read_points(in_path);
      const Gramian gm = build_gramian(KernelSpec(g.a, pts.empty() ? g.dim : pts.front().dim()), pts);
      if (fmt == OutputFormat::json) {
        write_json(matrix_to_json(gm.matrix()), g.out);
      } else {
        std::string text = "i,j,re,im\n";
        for (Eigen::Index i = 0; i < gm.size(); ++i)
          for (Eigen::Index j = 0; j < gm.size(); ++j)
            text += std::to_string(i) + "," + std::to_string(j) + "," + format_number(gm.matrix()(i, j).real()) +
                    "," + format_number(gm.matrix()(i, j).imag()) + "\n";
        write_text(text, g.out);
      }
    } else if (*cls) {
      const auto pts = read_points(in_path);
      const SeparationReport rep = classify(KernelSpec(g.a, pts.empty() ? g.dim : pts.front().dim()), pts);
      if (fmt == OutputFormat::json)
        write_json(report_to_json(rep), g.out);
      else
        write_text(report_to_csv(rep), g.out);
    } else if (*part) {
      const auto pts = read_points(in_path);
      const Gramian gm = build_gramian(KernelSpec(g.a, pts.empty() ? g.dim : pts.front().dim()), pts);
      const PartitionStrategy ps = strategy == "greedy"       ? PartitionStrategy::greedy
                                   : strategy == "exhaustive" ? PartitionStrategy::exhaustive
                                                              : PartitionStrategy::automatic;
      const std::size_t limit = max_groups == 0 ? static_cast<std::size_t>(gm.size()) : max_groups;
      if (via_h)
        write_json(h_partition_to_json(h_partition_pipeline(gm, target, limit, ps)), g.out);
      else
        write_json(partition_to_json(partition_search(gm.matrix(), target, limit, ps)), g.out);
    } else if (*exp) {
      if (list || exp_name.empty()) {
        std::string text;
        for (const auto& info : list_experiments()) text += info.name + "\t" + info.description + "\n";
        write_text(text, list ? g.out : "-");
        return list ? 0 : 2;
      }
      ParamMap params;
      // Global --a and --seed apply unless overridden by --param.
      if (a_opt->count() > 0) params["a"] = format_number(g.a);
      if (seed_opt->count() > 0) params["seed"] = std::to_string(g.seed);
      for (const auto& kv : raw_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      emit(run_experiment(exp_name, params), fmt, g.out, timing);
    } else if (*em) {
      emit(result_from_json(Json::parse(read_text(in_path))), fmt, g.out, false);
    }
  } catch (const std::exception& e) {
    std::cerr << "gramsep: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
