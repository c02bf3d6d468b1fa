#include "gramsep/experiments.hpp"

#include "gramsep/constructions.hpp"
#include "gramsep/feichtinger.hpp"
#include "gramsep/gramian.hpp"
#include "gramsep/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace gramsep {

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit: xs and ys differ in length");
  if (xs.size() < 3) throw std::invalid_argument("fit: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - f.intercept - f.slope * xs[i];
    ssr += e * e;
  }
  f.std_error = std::sqrt(ssr / (n - 2.0) / sxx);
  return f;
}

LinearFit fit_exponent(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_exponent: xs and ys differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_exponent: values must be positive");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return fit_line(lx, ly);
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("correlation: need two equal-length samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

bool trend_unbounded(const LinearFit& fit) { return fit.slope > 0.0 && fit.std_error < 0.2 * fit.slope; }
bool trend_bounded(const LinearFit& fit) { return std::abs(fit.slope) < 0.05; }

std::size_t ExperimentResult::rows() const {
  if (!grid.empty()) return grid.front().values.size();
  return metrics.empty() ? 0 : metrics.front().values.size();
}

const Column& ExperimentResult::column(const std::string& key) const {
  for (const auto& c : grid)
    if (c.name == key) return c;
  for (const auto& c : metrics)
    if (c.name == key) return c;
  throw std::out_of_range("no column named " + key + " in " + name);
}

double ExperimentResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw std::out_of_range("no summary value " + key + " in " + name);
}

const FittedExponent& ExperimentResult::fit(const std::string& key) const {
  for (const auto& f : fitted_exponents)
    if (f.name == key) return f;
  throw std::out_of_range("no fitted exponent " + key + " in " + name);
}

namespace {

// Reads typed parameters with defaults, echoing every effective value.
class Params {
 public:
  Params(std::string experiment, const ParamMap& given) : experiment_(std::move(experiment)), given_(given) {}

  double real(const std::string& key, double fallback) {
    double v = fallback;
    if (auto it = given_.find(key); it != given_.end()) v = parse_real(key, it->second);
    record(key, format_number(v));
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    std::size_t v = fallback;
    if (auto it = given_.find(key); it != given_.end()) {
      const auto& s = it->second;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected a non-negative integer, got '" + s + "'");
    }
    record(key, std::to_string(v));
    return v;
  }

  std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) {
    std::string v = fallback;
    if (auto it = given_.find(key); it != given_.end()) v = it->second;
    bool ok = false;
    std::string names;
    for (const char* a : allowed) {
      ok = ok || v == a;
      names += names.empty() ? a : std::string(", ") + a;
    }
    if (!ok) fail(key, "expected one of {" + names + "}, got '" + v + "'");
    record(key, v);
    return v;
  }

  std::vector<double> reals(const std::string& key, const std::string& fallback) {
    std::string s = fallback;
    if (auto it = given_.find(key); it != given_.end()) s = it->second;
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      const std::size_t end = std::min(s.find(',', start), s.size());
      out.push_back(parse_real(key, s.substr(start, end - start)));
      start = end + 1;
    }
    std::string echo;
    for (double v : out) echo += (echo.empty() ? "" : ",") + format_number(v);
    record(key, echo);
    return out;
  }

  void require(bool condition, const std::string& key, const std::string& message) const {
    if (!condition) fail(key, message);
  }

  // Rejects keys that the experiment never asked for; `seed` is accepted
  // everywhere so one seed can be passed to any experiment.
  void finish() const {
    for (const auto& [k, v] : given_)
      if (!used_.count(k) && k != "seed") throw std::invalid_argument(experiment_ + ": unknown parameter '" + k + "'");
  }

  std::vector<std::pair<std::string, std::string>> echo() const { return echo_; }

 private:
  double parse_real(const std::string& key, const std::string& s) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      fail(key, "expected a finite number, got '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw std::invalid_argument(experiment_ + ": parameter '" + key + "': " + message);
  }

  void record(const std::string& key, std::string value) {
    used_.insert(key);
    echo_.emplace_back(key, std::move(value));
  }

  std::string experiment_;
  const ParamMap& given_;
  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::string>> echo_;
};

std::vector<double> tail(const std::vector<double>& v, std::size_t n) {
  n = std::min(n, v.size());
  return {v.end() - static_cast<std::ptrdiff_t>(n), v.end()};
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double relative_spread(const std::vector<double>& v) { return (max_of(v) - min_of(v)) / max_of(v); }

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

void add_fit(ExperimentResult& r, const std::string& name, const LinearFit& f) {
  r.fitted_exponents.push_back({name, f.slope, f.std_error});
}

double bool_value(bool b) { return b ? 1.0 : 0.0; }

// One row of the circle Gramian; by rotation symmetry it stands for every row.
struct CircleRow {
  double offdiag_mass;
  double weak_sep;
  double log_product;
};

CircleRow circle_row(double a, double r, std::size_t n) {
  const KernelSpec spec(a, 1);
  const auto pts = circle_points(r, n);
  CircleRow row{0.0, 1.0, 0.0};
  for (std::size_t m = 1; m < n; ++m) {
    row.offdiag_mass += normalized_kernel_modulus_sq(spec, pts[0], pts[m]);
    const double d = metric_d(spec, pts[0], pts[m]);
    row.weak_sep = std::min(row.weak_sep, d);
    row.log_product += std::log(d);
  }
  return row;
}

double column_law(double a, double one_minus_r, double n) {
  if (a < 0.5) return std::pow(one_minus_r, 2.0 * a) * n;
  if (a == 0.5) return one_minus_r * n * std::log(n);
  return std::pow(one_minus_r * n, 2.0 * a);
}

// Uniform [0, 1) from the top 53 bits, independent of the standard library.
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

ExperimentResult equidist_columns(Params& p) {
  const double a = p.real("a", 0.75);
  p.require(a > 0.0 && a < 1.0, "a", "must lie in (0, 1)");
  const std::string mode = p.choice("mode", "r-sweep", {"r-sweep", "n-sweep"});
  ExperimentResult r;

  std::vector<double> n_col, om_col, mass, ws, us, law;
  if (mode == "r-sweep") {
    const std::size_t n = p.count("n", 1024);
    const std::size_t k_min = p.count("k_min", 4);
    const std::size_t k_max = p.count("k_max", 13);
    p.require(n >= 2, "n", "must be >= 2");
    p.require(k_max >= k_min + 2 && k_max <= 40, "k_max", "need k_min + 2 <= k_max <= 40");
    for (std::size_t k = k_min; k <= k_max; ++k) {
      const double om = std::ldexp(1.0, -static_cast<int>(k)) / static_cast<double>(n);
      n_col.push_back(static_cast<double>(n));
      om_col.push_back(om);
    }
  } else {
    const std::size_t e_min = p.count("n_min_exp", 6);
    const std::size_t e_max = p.count("n_max_exp", 12);
    p.require(e_min >= 1 && e_max >= e_min + 2 && e_max <= 16, "n_max_exp", "need 1 <= n_min_exp, n_min_exp + 2 <= n_max_exp <= 16");
    for (std::size_t e = e_min; e <= e_max; ++e) {
      const std::size_t n = std::size_t{1} << e;
      n_col.push_back(static_cast<double>(n));
      om_col.push_back(1.0 - radius_schedule(a, n));
    }
  }
  p.finish();

  const std::size_t rows = n_col.size();
  std::vector<CircleRow> out(rows);
  parallel_for(rows, [&](std::size_t i) {
    out[i] = circle_row(a, 1.0 - om_col[i], static_cast<std::size_t>(n_col[i]));
  });
  for (std::size_t i = 0; i < rows; ++i) {
    mass.push_back(out[i].offdiag_mass);
    ws.push_back(out[i].weak_sep);
    us.push_back(out[i].log_product < -700.0 ? 0.0 : std::exp(out[i].log_product));
    law.push_back(out[i].offdiag_mass / column_law(a, om_col[i], n_col[i]));
  }

  r.grid = {{"n", n_col}, {"one_minus_r", om_col}};
  r.metrics = {{"col_offdiag_mass", mass}, {"weak_sep", ws}, {"uniform_sep", us}, {"mass_over_law", law}};
  if (mode == "r-sweep") {
    const LinearFit f = fit_exponent(om_col, mass);
    add_fit(r, "col_offdiag_mass~one_minus_r", f);
    const double expected = a == 0.5 ? 1.0 : 2.0 * a;
    r.summary = {{"expected_slope", expected},
                 {"slope_error", std::abs(f.slope - expected)},
                 {"weak_sep_min", min_of(ws)},
                 {"weak_sep_variation", relative_spread(ws)}};
  } else {
    const LinearFit f = fit_exponent(n_col, mass);
    add_fit(r, "col_offdiag_mass~n", f);
    r.summary = {{"bounded", bool_value(trend_bounded(f))},
                 {"weak_sep_min", min_of(ws)},
                 {"weak_sep_variation", relative_spread(ws)}};
    if (a == 0.5) {
      std::vector<double> log_n, rescaled;
      for (std::size_t i = 0; i < rows; ++i) {
        log_n.push_back(std::log(n_col[i]));
        rescaled.push_back(mass[i] / (n_col[i] * om_col[i]));
      }
      r.summary.emplace_back("rescaled_log_correlation", correlation(log_n, rescaled));
    }
  }
  return r;
}

ExperimentResult gram_norm(Params& p) {
  const double a = p.real("a", 0.5);
  const std::size_t k_min = p.count("k_min", 2);
  const std::size_t k_max = p.count("k_max", 11);
  const std::size_t direct_max = p.count("direct_max", 512);
  p.require(a > 0.0 && a < 1.0, "a", "must lie in (0, 1)");
  p.require(k_min >= 1 && k_max >= k_min + 2 && k_max <= 16, "k_max", "need 1 <= k_min, k_min + 2 <= k_max <= 16");
  p.finish();

  const KernelSpec spec(a, 1);
  std::vector<double> n_col, r_col, norm, witness, ratio, direct;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const std::size_t n = std::size_t{1} << k;
    const double r = radius_schedule(a, n);
    double g;
    if (n <= direct_max) {
      const auto pts = circle_points(r, n);
      g = operator_norm(build_gramian(spec, pts));
    } else {
      g = circulant_spectrum(a, r, n).front();
    }
    const double w = static_cast<double>(n) * std::pow((1.0 - r) * (1.0 + r), a);
    n_col.push_back(static_cast<double>(n));
    r_col.push_back(r);
    norm.push_back(g);
    witness.push_back(w);
    ratio.push_back(g / w);
    direct.push_back(bool_value(n <= direct_max));
  }
  ExperimentResult res;
  res.grid = {{"n", n_col}, {"r", r_col}};
  res.metrics = {{"norm", norm}, {"witness", witness}, {"norm_over_witness", ratio}, {"direct", direct}};
  const LinearFit f = fit_exponent(n_col, norm);
  add_fit(res, "norm~n", f);
  add_fit(res, "witness~n", fit_exponent(n_col, witness));
  res.summary = {{"min_norm_over_witness", min_of(ratio)}, {"unbounded", bool_value(trend_unbounded(f))}};
  return res;
}

ExperimentResult circulant_floor(Params& p) {
  const double a = p.real("a", 0.5);
  const std::size_t n_min = p.count("n_min", 2);
  const std::size_t n_max = p.count("n_max", 2048);
  const std::size_t check_from = p.count("check_from", 64);
  p.require(a > 0.0 && a <= 1.0, "a", "must lie in (0, 1]");
  p.require(n_min >= 2 && n_max >= n_min && n_max <= 8192, "n_max", "need 2 <= n_min <= n_max <= 8192");
  p.finish();

  const std::size_t rows = n_max - n_min + 1;
  std::vector<double> n_col(rows), r_col(rows), lmin(rows), lmax(rows), predicted(rows), ratio(rows), r_pow_n(rows),
      decreasing(rows);
  parallel_for(rows, [&](std::size_t i) {
    const std::size_t n = n_min + i;
    const double nn = static_cast<double>(n);
    const double r = 1.0 - 1.0 / nn;
    const auto spec = circulant_spectrum(a, r, n);
    bool dec = true;
    for (std::size_t j = 1; j < spec.size(); ++j) dec = dec && spec[j] < spec[j - 1];
    const double log_rn = nn * std::log1p(-1.0 / nn);
    const double r2n = std::exp(2.0 * log_rn);
    n_col[i] = nn;
    r_col[i] = r;
    lmin[i] = spec.back();
    lmax[i] = spec.front();
    predicted[i] = r2n / std::pow(-std::expm1(2.0 * log_rn), a);
    ratio[i] = lmin[i] / predicted[i];
    r_pow_n[i] = std::exp(log_rn);
    decreasing[i] = bool_value(dec);
  });

  double min_ratio = INFINITY, max_ratio = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (n_col[i] < static_cast<double>(check_from)) continue;
    min_ratio = std::min(min_ratio, ratio[i]);
    max_ratio = std::max(max_ratio, ratio[i]);
  }
  ExperimentResult res;
  res.grid = {{"n", n_col}, {"r", r_col}};
  res.metrics = {{"lambda_min", lmin},         {"lambda_max", lmax}, {"predicted_floor", predicted},
                 {"lambda_min_over_predicted", ratio}, {"r_pow_n", r_pow_n}, {"strictly_decreasing", decreasing}};
  const double last = r_pow_n.back();
  res.summary = {{"min_lambda_min", min_of(lmin)},
                 {"min_ratio_checked", min_ratio},
                 {"max_ratio_checked", max_ratio},
                 {"within_factor_2", bool_value(min_ratio >= 0.5 && max_ratio <= 2.0)},
                 {"r_pow_n_last", last},
                 {"r_pow_n_rel_error_vs_inv_e", std::abs(last * std::numbers::e - 1.0)},
                 {"all_strictly_decreasing", bool_value(min_of(decreasing) == 1.0)}};
  return res;
}

ExperimentResult us_not_is(Params& p) {
  const double a = p.real("a", 0.5);
  const std::size_t blocks = p.count("blocks", 12);
  const double eps = p.real("eps", 0.5);
  const std::size_t tail_len = p.count("tail", 6);
  p.require(a > 0.0 && a < 1.0, "a", "must lie in (0, 1)");
  p.require(blocks >= 3 && blocks <= 40, "blocks", "must lie in [3, 40]");
  p.require(eps > 0.0 && eps < 1.0, "eps", "must lie in (0, 1)");
  p.require(tail_len >= 3 && tail_len <= blocks, "tail", "must lie in [3, blocks]");
  p.finish();

  const KernelSpec spec(a, 1);
  std::vector<std::vector<Point>> raw;
  for (std::size_t n = 2; n <= blocks + 1; ++n) raw.push_back(circle_points(radius_schedule(a, n), n));
  const BlockSequence seq = assemble(spec, raw, eps);

  std::vector<double> trunc, npts, lmin, lmax, col, ws, us, um;
  for (std::size_t t = 1; t <= blocks; ++t) {
    const auto pts = seq.flatten(t);
    const SeparationReport rep = classify(spec, pts);
    trunc.push_back(static_cast<double>(t));
    npts.push_back(static_cast<double>(pts.size()));
    lmin.push_back(rep.lambda_min);
    lmax.push_back(rep.lambda_max);
    col.push_back(rep.max_column_l2);
    ws.push_back(rep.weak_sep);
    us.push_back(rep.uniform_sep);
    um.push_back(rep.uniform_minimality);
  }
  ExperimentResult res;
  res.grid = {{"blocks", trunc}, {"n_points", npts}};
  res.metrics = {{"lambda_min", lmin}, {"lambda_max", lmax},   {"max_column_l2", col},
                 {"weak_sep", ws},     {"uniform_sep", us},    {"uniform_minimality", um}};
  const auto tn = tail(npts, tail_len);
  const LinearFit fl = fit_exponent(tn, tail(lmax, tail_len));
  const LinearFit fc = fit_exponent(tn, tail(col, tail_len));
  add_fit(res, "lambda_max~n_points", fl);
  add_fit(res, "max_column_l2~n_points", fc);
  res.summary = {{"hs_budget", seq.hs_budget},
                 {"hs_residual", seq.hs_residual},
                 {"lambda_max_strictly_increasing", bool_value(strictly_increasing(tail(lmax, tail_len)))},
                 {"column_bounded", bool_value(trend_bounded(fc))},
                 {"weak_sep_min", min_of(ws)},
                 {"uniform_sep_min", min_of(us)},
                 {"lambda_min_last", lmin.back()}};
  return res;
}

ExperimentResult si_infinite_measure(Params& p) {
  const double a = p.real("a", 0.5);
  const std::string orbit = p.choice("orbit", "cayley", {"cayley", "beardon"});
  const std::size_t k_min = p.count("k_min", 1);
  const std::size_t k_max = p.count("k_max", 8);
  p.require(a > 0.0 && a <= 1.0, "a", "must lie in (0, 1]");
  p.require(k_max >= k_min + 2, "k_max", "need k_min + 2 <= k_max");
  OrbitSpec os;
  if (orbit == "beardon") {
    os.generator_shift = p.real("shift", 2.1);
    os.base_point = complex(0.0, p.real("base_imag", 2.0));
    p.require(k_max <= 12, "k_max", "word length must be <= 12");
  } else {
    p.require(k_max <= 11, "k_max", "must be <= 11 for the Cayley orbit");
  }
  p.finish();

  const KernelSpec spec(a, 1);
  std::vector<Point> full;
  if (orbit == "cayley") {
    full = cayley_orbit((std::size_t{2} << k_max) + 1);
  } else {
    os.max_word_length = k_max;
    full = beardon_orbit(os);
  }

  std::vector<double> k_col, npts, fm, lmin, um, ws;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    std::vector<Point> pts;
    if (orbit == "cayley") {
      pts.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>((std::size_t{2} << k) + 1));
    } else {
      OrbitSpec sub = os;
      sub.max_word_length = k;
      pts = beardon_orbit(sub);
    }
    const SeparationReport rep = classify(spec, pts);
    k_col.push_back(static_cast<double>(k));
    npts.push_back(static_cast<double>(pts.size()));
    fm.push_back(rep.fm_sum);
    lmin.push_back(rep.lambda_min);
    um.push_back(rep.uniform_minimality);
    ws.push_back(rep.weak_sep);
  }
  std::vector<double> log_n;
  for (double n : npts) log_n.push_back(std::log(n));

  ExperimentResult res;
  res.grid = {{"k", k_col}, {"n_points", npts}};
  res.metrics = {{"fm_sum", fm}, {"lambda_min", lmin}, {"uniform_minimality", um}, {"weak_sep", ws}};
  const LinearFit f = fit_line(log_n, fm);
  res.fitted_exponents.push_back({"fm_sum~log_n_points", f.slope, f.std_error});
  res.summary = {{"fm_log_correlation", correlation(log_n, fm)},
                 {"fm_sum_last", fm.back()},
                 {"lambda_min_floor", min_of(lmin)},
                 {"uniform_minimality_floor", min_of(um)}};
  return res;
}

ExperimentResult ball_lift(Params& p) {
  const std::string family = p.choice("family", "radial", {"radial", "cayley"});
  const std::size_t n_max = p.count("n_max", family == "radial" ? 14 : 64);
  const std::string range = p.choice("range", "quarter", {"quarter", "full"});
  p.require(n_max >= 3 && n_max <= (family == "radial" ? 30u : 4096u), "n_max", "out of range");
  p.finish();

  std::vector<Point> disc;
  if (family == "radial") {
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double s = std::ldexp(1.0, -static_cast<int>(n));
      disc.push_back(Point::with_defect({complex(1.0 - s, 0.0)}, s * (2.0 - s)));
    }
  } else {
    disc = cayley_orbit(n_max);
  }
  const KernelSpec disc_spec(0.5, 1);
  const KernelSpec ball_spec(1.0, 2);
  const LiftRange lr = range == "quarter" ? LiftRange::quarter : LiftRange::full;

  std::vector<double> k_col, nd, nl, fmd, fml, ratio, usd, usl, wsl, lmd, lml;
  for (std::size_t k = 1; k <= n_max; ++k) {
    const std::span<const Point> prefix(disc.data(), k);
    const auto lifted = lift_to_ball(prefix, lr);
    const SeparationReport rd = classify(disc_spec, prefix);
    const SeparationReport rl = classify(ball_spec, lifted);
    k_col.push_back(static_cast<double>(k));
    nd.push_back(static_cast<double>(k));
    nl.push_back(static_cast<double>(lifted.size()));
    fmd.push_back(rd.fm_sum);
    fml.push_back(rl.fm_sum);
    ratio.push_back(rl.fm_sum / rd.fm_sum);
    usd.push_back(rd.uniform_sep);
    usl.push_back(rl.uniform_sep);
    wsl.push_back(rl.weak_sep);
    lmd.push_back(rd.lambda_min);
    lml.push_back(rl.lambda_min);
  }
  ExperimentResult res;
  res.grid = {{"k", k_col}};
  res.metrics = {{"n_disc", nd},          {"n_lifted", nl},       {"fm_disc", fmd},        {"fm_lifted", fml},
                 {"fm_ratio", ratio},     {"uniform_sep_disc", usd}, {"uniform_sep_lifted", usl},
                 {"weak_sep_lifted", wsl}, {"lambda_min_disc", lmd}, {"lambda_min_lifted", lml}};
  res.summary = {{"min_fm_ratio", min_of(ratio)},
                 {"uniform_sep_lifted_min", min_of(usl)},
                 {"uniform_sep_disc_min", min_of(usd)},
                 {"lambda_min_lifted_min", min_of(lml)}};
  return res;
}

ExperimentResult cos_sum(Params& p) {
  const double s_min = p.real("s_min", 1e-4);
  const double s_max = p.real("s_max", 1e-1);
  const std::size_t steps = p.count("steps", 13);
  const std::size_t t_steps = p.count("t_steps", 65);
  p.require(s_min > 0.0 && s_max > s_min && s_max <= 0.25 && s_min >= 1e-10, "s_max",
            "need 1e-10 <= s_min < s_max <= 0.25");
  p.require(steps >= 3 && steps <= 200, "steps", "must lie in [3, 200]");
  p.require(t_steps >= 2 && t_steps <= 10000, "t_steps", "must lie in [2, 10000]");
  p.finish();

  const KernelSpec ball_spec(1.0, 2);
  std::vector<double> s_col(steps), n_col(steps), ratio(steps), ws(steps), col(steps), err(steps);
  parallel_for(steps, [&](std::size_t i) {
    const double s = s_min * std::pow(s_max / s_min, static_cast<double>(i) / static_cast<double>(steps - 1));
    const complex z(1.0 - s, 0.0);
    const Point zp = Point::with_defect({z}, s * (2.0 - s));
    const std::size_t n = lift_count(zp);
    double best = 0.0;
    for (std::size_t k = 0; k < t_steps; ++k) {
      const double t = std::numbers::pi / 2 * static_cast<double>(k) / static_cast<double>(t_steps - 1);
      best = std::max(best, cos_sum_ratio(z, t, n));
    }
    const auto lifted = lift_to_ball(std::span<const Point>(&zp, 1), LiftRange::full);
    double min_d = 1.0, mass = 0.0, max_err = 0.0;
    for (std::size_t j = 0; j < lifted.size(); ++j) {
      const double g = lifted_circle_gramian_entry(z, n, 0, j);
      mass += g * g;
      max_err = std::max(max_err, std::abs(g - std::abs(normalized_kernel(ball_spec, lifted[0], lifted[j]))));
      if (j > 0) min_d = std::min(min_d, metric_d(ball_spec, lifted[0], lifted[j]));
    }
    s_col[i] = s;
    n_col[i] = static_cast<double>(n);
    ratio[i] = best;
    ws[i] = min_d;
    col[i] = std::sqrt(mass);
    err[i] = max_err;
  });

  ExperimentResult res;
  res.grid = {{"one_minus_abs_z", s_col}, {"n", n_col}};
  res.metrics = {{"max_cos_sum_ratio", ratio},
                 {"lifted_weak_sep", ws},
                 {"lifted_column_l2", col},
                 {"closed_form_error", err}};
  const LinearFit fr = fit_exponent(s_col, ratio);
  const LinearFit fc = fit_exponent(s_col, col);
  add_fit(res, "max_cos_sum_ratio~one_minus_abs_z", fr);
  add_fit(res, "lifted_column_l2~one_minus_abs_z", fc);
  res.summary = {{"ratio_max", max_of(ratio)},
                 {"ratio_bounded", bool_value(trend_bounded(fr))},
                 {"lifted_weak_sep_min", min_of(ws)},
                 {"lifted_weak_sep_variation", relative_spread(ws)},
                 {"lifted_column_l2_max", max_of(col)},
                 {"closed_form_max_error", max_of(err)}};
  return res;
}

ExperimentResult h_partition(Params& p) {
  const std::size_t n = p.count("n", 16);
  const double a = p.real("a", 0.5);
  const std::vector<double> radii = p.reals("radii", "0.95,0.9,0.85,0.8,0.75,0.7");
  const double tau = p.real("tau", 0.25);
  const double jitter = p.real("jitter", 0.25);
  const std::size_t seed = p.count("seed", 0);
  const std::string strategy = p.choice("strategy", "auto", {"auto", "greedy", "exhaustive"});
  p.require(n >= 2 && n <= 256, "n", "must lie in [2, 256]");
  p.require(a > 0.0 && a <= 1.0, "a", "must lie in (0, 1]");
  p.require(tau > 0.0 && tau <= 1.0, "tau", "must lie in (0, 1]");
  p.require(jitter >= 0.0 && jitter < 1.0, "jitter", "must lie in [0, 1)");
  for (double r : radii) p.require(r > 0.0 && r < 1.0, "radii", "radii must lie in (0, 1)");
  p.require(strategy != "exhaustive" || n <= kExhaustiveLimit, "strategy", "exhaustive search needs n <= 14");
  p.finish();

  const PartitionStrategy ps = strategy == "greedy"       ? PartitionStrategy::greedy
                               : strategy == "exhaustive" ? PartitionStrategy::exhaustive
                                                          : PartitionStrategy::automatic;
  const KernelSpec spec(a, 1);
  std::mt19937_64 gen(seed);
  std::vector<double> r_col, eps_col, inv_col, target_col, groups, min_g, min_h, feasible;
  bool monotone = true, meets = true;
  for (double r : radii) {
    std::vector<Point> pts;
    for (std::size_t k = 0; k < n; ++k) {
      const double shift = jitter * (unit_uniform(gen) - 0.5);
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + shift) / static_cast<double>(n);
      pts.push_back(Point::with_defect({std::polar(r, theta)}, (1.0 - r) * (1.0 + r)));
    }
    const Gramian g = build_gramian(spec, pts);
    const double eps = minimal_dual_system(g).uniform_minimality;
    const double target = tau * eps * eps;
    const HPartitionResult hp = h_partition_pipeline(g, target, n, ps);
    for (std::size_t i = 0; i < hp.h_bounds.size(); ++i) {
      monotone = monotone && hp.partition.group_bounds[i] >= hp.h_bounds[i] - 1e-10;
      meets = meets && hp.h_bounds[i] >= target;
    }
    r_col.push_back(r);
    eps_col.push_back(eps);
    inv_col.push_back(1.0 / (eps * eps));
    target_col.push_back(target);
    groups.push_back(static_cast<double>(hp.partition.groups.size()));
    min_g.push_back(min_of(hp.partition.group_bounds));
    min_h.push_back(min_of(hp.h_bounds));
    feasible.push_back(bool_value(hp.partition.feasible));
  }
  ExperimentResult res;
  res.grid = {{"r", r_col}};
  res.metrics = {{"eps", eps_col},      {"inv_eps_sq", inv_col},    {"target", target_col}, {"groups", groups},
                 {"min_bound_g", min_g}, {"min_bound_h", min_h},     {"feasible", feasible}};
  if (radii.size() >= 3 && max_of(inv_col) > min_of(inv_col)) add_fit(res, "groups~inv_eps_sq", fit_exponent(inv_col, groups));
  res.summary = {{"all_feasible", bool_value(min_of(feasible) == 1.0)},
                 {"g_dominates_h", bool_value(monotone)},
                 {"h_bounds_meet_target", bool_value(meets)},
                 {"max_groups", max_of(groups)}};
  return res;
}

struct Registered {
  ExperimentInfo info;
  std::function<ExperimentResult(Params&)> run;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> reg = {
      {{"equidist-columns", "column mass and weak separation of equidistributed circles (r-sweep or n-sweep)"},
       equidist_columns},
      {{"gram-norm", "operator norm of circle Gramians on the radius schedule against the constant-function witness"},
       gram_norm},
      {{"circulant-floor", "smallest circulant eigenvalue at r = 1 - 1/N against r^{2N}/(1 - r^{2N})^a"}, circulant_floor},
      {{"us-not-is", "assembled circle blocks: growing norm with bounded columns"}, us_not_is},
      {{"si-infinite-measure", "orbit truncations: lambda_min floor against the growing measure sum"},
       si_infinite_measure},
      {{"ball-lift", "disc sequences lifted to B_2: measure sums and separation"}, ball_lift},
      {{"cos-sum", "cosine-sum ratio and lifted circle separation as |z| -> 1"}, cos_sum},
      {{"h-partition", "H-transform partitions of jittered circles against 1/eps^2"}, h_partition},
  };
  return reg;
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& r : registry()) v.push_back(r.info);
    return v;
  }();
  return infos;
}

ExperimentResult run_experiment(const std::string& name, const ParamMap& params) {
  for (const auto& reg : registry()) {
    if (reg.info.name != name) continue;
    const auto start = std::chrono::steady_clock::now();
    Params p(name, params);
    ExperimentResult r = reg.run(p);
    r.name = name;
    r.params = p.echo();
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  std::string names;
  for (const auto& reg : registry()) names += (names.empty() ? "" : ", ") + reg.info.name;
  throw std::invalid_argument("unknown experiment '" + name + "' (known: " + names + ")");
}

}  // namespace gramsep
