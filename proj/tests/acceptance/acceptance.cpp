// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include "gramsep/constructions.hpp"
#include "gramsep/experiments.hpp"
#include "gramsep/feichtinger.hpp"
#include "gramsep/gramian.hpp"
#include "gramsep/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gramsep;

namespace {

constexpr double kPickTol = 1e-6;
constexpr double kHTol = 1e-10;
constexpr double kCounterexampleTol = 1e-9;
constexpr double kCirculantTol = 1e-8;
constexpr double kExponentTol = 0.1;
constexpr double kVariationMax = 0.10;
constexpr double kBoundedSlope = 0.05;
constexpr double kFactor = 2.0;
constexpr double kInvETol = 0.01;
constexpr double kUsWeakSepFloor = 0.63;        // regression floor, observed 0.632456
constexpr double kSiLambdaMinFloor = 6.5e-6;     // regression floor, observed limit about 7.0e-6
constexpr double kSiContraction = 0.75;         // decrements of lambda_min must shrink at least this fast
constexpr double kSiCorrelation = 0.99;
constexpr double kIsometryTol = 1e-10;
constexpr double kMobiusTol = 1e-9;

struct Outcome {
  bool pass;
  std::string detail;
};

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Point random_point(std::mt19937_64& gen, std::size_t dim, double max_norm) {
  for (;;) {
    std::vector<complex> c(dim);
    double s = 0.0;
    for (auto& x : c) {
      x = complex(uniform(gen, -max_norm, max_norm), uniform(gen, -max_norm, max_norm));
      s += std::norm(x);
    }
    if (s < max_norm * max_norm) return Point(std::move(c));
  }
}

// Random points with pairwise pseudo-hyperbolic distance at least min_rho.
std::vector<Point> random_config(std::mt19937_64& gen, std::size_t count, std::size_t dim, double max_norm,
                                 double min_rho) {
  std::vector<Point> pts;
  while (pts.size() < count) {
    const Point p = random_point(gen, dim, max_norm);
    bool ok = true;
    for (const auto& q : pts) ok = ok && pseudo_hyperbolic(p, q) >= min_rho;
    if (ok) pts.push_back(p);
  }
  return pts;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome crit_pick() {
  std::mt19937_64 gen(1001);
  double worst = 0.0;
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const KernelSpec spec(a, 1);
    for (int t = 0; t < 200; ++t) {
      const auto n = static_cast<std::size_t>(2 + gen() % 7);
      const auto pts = random_config(gen, n, 1, 0.9, 0.05);
      const double dual = minimal_dual_system(build_gramian(spec, pts)).uniform_minimality;
      worst = std::max(worst, std::abs(pick_strong_separation(spec, pts) - dual));
    }
  }
  return {worst <= kPickTol, fmt("max |pick - dual| = %.3g over 800 configurations", worst)};
}

Outcome crit_h_transform() {
  std::mt19937_64 gen(1002);
  double worst_inv = 0.0, worst_h_low = 0.0, worst_h_high = 0.0, worst_dom = 0.0, worst_diag = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + gen() % 64);
    const auto m = n + 1 + static_cast<Eigen::Index>(gen() % 8);
    Eigen::MatrixXcd b(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) b(i, j) = complex(uniform(gen, -1, 1), uniform(gen, -1, 1));
    b.colwise().normalize();
    HermitianMatrix a = b.adjoint() * b;
    a = (a + a.adjoint()).eval() / 2.0;
    a.diagonal().setOnes();
    const Gramian g(a);
    const HermitianMatrix inv = a.inverse();
    for (Eigen::Index i = 0; i < n; ++i) worst_inv = std::max(worst_inv, 1.0 / a(i, i).real() - inv(i, i).real());
    const double eps = minimal_dual_system(g).uniform_minimality;
    const HermitianMatrix h = h_transform(g);
    const auto ev = hermitian_eigenvalues(h);
    worst_h_low = std::max(worst_h_low, -ev.minCoeff());
    worst_h_high = std::max(worst_h_high, ev.maxCoeff() - 1.0);
    worst_dom = std::max(worst_dom, -min_eigenvalue(a - h));
    const double floor = 1.0 / (1.0 + 1.0 / (eps * eps));
    for (Eigen::Index i = 0; i < n; ++i) worst_diag = std::max(worst_diag, floor - h(i, i).real());
  }
  const bool pass = worst_inv <= kHTol && worst_h_low <= kHTol && worst_h_high <= kHTol && worst_dom <= kHTol &&
                    worst_diag <= kHTol;
  return {pass, fmt("violations: inverse-diag %.2g, H>=0 %.2g, H<=I %.2g", worst_inv, worst_h_low, worst_h_high) +
                    fmt(", H<=G %.2g, diag floor %.2g", worst_dom, worst_diag)};
}

Outcome crit_counterexample() {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {4u, 16u, 64u, 256u}) {
    const Gramian g = remark_counterexample(n);
    const auto nn = static_cast<Eigen::Index>(n);
    const double dn = static_cast<double>(n);
    HermitianMatrix closed = HermitianMatrix::Constant(nn, nn, complex(1.0 - 1.0 / (dn + 1.0), 0.0));
    closed.diagonal().array() += dn / (dn + 1.0);
    const HermitianMatrix inv = g.matrix().inverse();
    const double err = (inv - closed).cwiseAbs().maxCoeff();
    const double diag_max = inv.diagonal().real().maxCoeff();
    const double norm = max_eigenvalue(inv);
    const bool ok = err <= kCounterexampleTol && diag_max <= 2.0 && norm >= dn * (1.0 - kCounterexampleTol);
    pass = pass && ok;
    detail += fmt("n=%.0f: err %.2g, ", dn, err) + fmt("diag max %.6f, norm %.6g; ", diag_max, norm);
  }
  return {pass, detail};
}

Outcome crit_circulant() {
  double worst = 0.0;
  bool decreasing = true;
  for (double a : {0.25, 0.5, 0.75}) {
    for (std::size_t n : {4u, 16u, 64u, 256u, 512u}) {
      const double r = 1.0 - 1.0 / static_cast<double>(n);
      const auto series = circulant_spectrum(a, r, n);
      const auto direct = hermitian_eigenvalues(build_gramian(KernelSpec(a, 1), circle_points(r, n)).matrix());
      for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(series[j] - direct(static_cast<Eigen::Index>(n - 1 - j))));
        if (j > 0) decreasing = decreasing && series[j] < series[j - 1];
      }
    }
  }
  return {worst <= kCirculantTol && decreasing,
          fmt("max |series - direct| = %.3g, strictly decreasing: ", worst) + (decreasing ? "yes" : "no")};
}

Outcome crit_floor() {
  const auto r = run_experiment("circulant-floor", {{"a", "0.5"}, {"n_max", "2048"}, {"check_from", "64"}});
  const double lmin = r.summary_value("min_lambda_min");
  const double lo = r.summary_value("min_ratio_checked");
  const double hi = r.summary_value("max_ratio_checked");
  const double inv_e = r.summary_value("r_pow_n_rel_error_vs_inv_e");
  const bool pass = lmin > 0.0 && lo >= 1.0 / kFactor && hi <= kFactor && inv_e < kInvETol;
  return {pass, fmt("min lambda_min %.4g, ratio range [%.4f, %.4f]", lmin, lo, hi) + fmt(", |e r^N - 1| = %.3g", inv_e)};
}

Outcome crit_columns() {
  bool pass = true;
  std::string detail;
  for (double a : {0.25, 0.75}) {
    const auto r = run_experiment("equidist-columns",
                                  {{"a", format_number(a)}, {"n", "4096"}, {"k_min", "4"}, {"k_max", "13"}});
    const double slope = r.fit("col_offdiag_mass~one_minus_r").slope;
    const double var = r.summary_value("weak_sep_variation");
    pass = pass && std::abs(slope - 2.0 * a) <= kExponentTol && var < kVariationMax;
    detail += fmt("a=%.2f: slope %.5f, weak-sep variation %.4f; ", a, slope, var);
  }
  return {pass, detail};
}

Outcome crit_pipeline() {
  const double a = 0.5, eps = 0.5;
  const std::size_t blocks = 12;
  const auto r = run_experiment("us-not-is", {{"a", "0.5"}, {"blocks", "12"}, {"eps", "0.5"}, {"tail", "6"}});
  const auto& fl = r.fit("lambda_max~n_points");
  const auto& fc = r.fit("max_column_l2~n_points");
  const bool increasing = r.summary_value("lambda_max_strictly_increasing") == 1.0;
  const double ws = r.summary_value("weak_sep_min");

  // Off-block-diagonal HS norm from the closed form of the normalized kernel modulus.
  std::vector<std::vector<Point>> raw;
  for (std::size_t n = 2; n <= blocks + 1; ++n) raw.push_back(circle_points(radius_schedule(a, n), n));
  const BlockSequence seq = assemble(KernelSpec(a, 1), raw, eps);
  double hs_sq = 0.0;
  for (std::size_t b = 0; b < seq.blocks.size(); ++b)
    for (std::size_t c = 0; c < seq.blocks.size(); ++c) {
      if (b == c) continue;
      for (const auto& z : seq.blocks[b])
        for (const auto& w : seq.blocks[c]) {
          const double denom = std::norm(1.0 - z[0] * std::conj(w[0]));
          hs_sq += std::pow(z.defect() * w.defect() / denom, a);
        }
    }
  const double hs = std::sqrt(hs_sq);
  const bool pass = increasing && fl.slope > 0.0 && std::abs(fc.slope) < kBoundedSlope && ws >= kUsWeakSepFloor &&
                    hs < eps;
  return {pass, fmt("lambda_max slope %.4f, column slope %.2g, weak sep %.6f", fl.slope, fc.slope, ws) +
                    fmt(", HS %.4f (reported %.4f)", hs, r.summary_value("hs_residual")) +
                    (increasing ? ", strictly increasing" : ", not strictly increasing")};
}

Outcome crit_infinite_measure() {
  const auto r = run_experiment("si-infinite-measure", {{"a", "0.5"}, {"orbit", "cayley"}, {"k_min", "1"}, {"k_max", "10"}});
  const double corr = r.summary_value("fm_log_correlation");
  const double floor = r.summary_value("lambda_min_floor");
  // lambda_min decreases along the truncations; a geometric decay of the
  // decrements bounds the limit from below.
  const auto& lm = r.column("lambda_min").values;
  const std::size_t m = lm.size();
  double q = 0.0;
  for (std::size_t i = m - 3; i < m; ++i) q = std::max(q, (lm[i - 1] - lm[i]) / (lm[i - 2] - lm[i - 1]));
  const double limit = lm[m - 1] - (lm[m - 2] - lm[m - 1]) * q / (1.0 - q);
  const bool pass = corr > kSiCorrelation && floor >= kSiLambdaMinFloor && q < kSiContraction && limit >= kSiLambdaMinFloor;
  return {pass, fmt("fm_sum vs log N correlation %.6f, fm_sum at N=2049 %.4f", corr, r.summary_value("fm_sum_last")) +
                    fmt(", lambda_min floor %.4g, decrement ratio %.3f, extrapolated limit %.4g", floor, q, limit)};
}

Outcome crit_isometry() {
  double worst = 0.0;
  for (unsigned n = 0; n <= 30; ++n) {
    std::uint64_t binom = 1;
    for (unsigned k = 1; k <= n; ++k) binom = binom * (n + k) / k;
    const double exact = std::ldexp(1.0, 2 * static_cast<int>(n)) / static_cast<double>(binom);
    worst = std::max(worst, std::abs(1.0 / power_series_coeff(0.5, n) - exact) / exact);
  }
  return {worst <= kIsometryTol, fmt("max relative error %.3g for n <= 30", worst)};
}

Outcome crit_lift() {
  const auto r = run_experiment("cos-sum", {{"s_min", "1e-4"}, {"s_max", "1e-1"}});
  const double var = r.summary_value("lifted_weak_sep_variation");
  const double slope = r.fit("max_cos_sum_ratio~one_minus_abs_z").slope;
  // A positive trend in 1 - |z| means no growth as |z| -> 1, so only |slope| matters.
  return {var < kVariationMax && std::abs(slope) < kBoundedSlope,
          fmt("weak-sep variation %.4f, cos-sum slope %.4f, ratio max %.4f", var, slope, r.summary_value("ratio_max"))};
}

Outcome crit_mobius() {
  std::mt19937_64 gen(1011);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
    const KernelSpec spec(1.0, d);
    const auto pts = random_config(gen, 2 + gen() % 7, d, 0.8, 0.05);
    const Point x = random_point(gen, d, 0.5);
    std::vector<Point> moved;
    for (const auto& p : pts) moved.push_back(ball_automorphism(x, p));
    const SeparationReport u = classify(spec, pts);
    const SeparationReport v = classify(spec, moved);
    for (auto [p, q] : {std::pair{u.lambda_min, v.lambda_min}, {u.lambda_max, v.lambda_max},
                        {u.weak_sep, v.weak_sep}, {u.uniform_sep, v.uniform_sep},
                        {u.uniform_minimality, v.uniform_minimality}, {u.max_column_l2, v.max_column_l2}})
      worst = std::max(worst, std::abs(p - q) / std::max(1.0, std::abs(p)));
  }
  return {worst <= kMobiusTol, fmt("max deviation %.3g over 100 cases", worst)};
}

Outcome crit_determinism() {
  std::string differing;
  for (const auto& info : list_experiments()) {
    const ParamMap params{{"seed", "0"}};
    const std::string first = render(run_experiment(info.name, params), OutputFormat::json);
    const std::string second = render(run_experiment(info.name, params), OutputFormat::json);
    const std::string csv1 = render(run_experiment(info.name, params), OutputFormat::csv);
    const std::string csv2 = render(run_experiment(info.name, params), OutputFormat::csv);
    if (first != second || csv1 != csv2) differing += info.name + " ";
  }
  return {differing.empty(), differing.empty() ? "all experiments byte-identical (JSON and CSV)"
                                               : "differing: " + differing};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dual-system oracle equivalence", crit_pick},
      {"H-transform suite", crit_h_transform},
      {"projection counterexample", crit_counterexample},
      {"circulant oracle", crit_circulant},
      {"circulant floor", crit_floor},
      {"column mass scaling", crit_columns},
      {"assembled blocks pipeline", crit_pipeline},
      {"infinite-measure orbit", crit_infinite_measure},
      {"embedding isometry", crit_isometry},
      {"lifted circle sweeps", crit_lift},
      {"Mobius invariance", crit_mobius},
      {"determinism", crit_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
