#pragma once

// Registered numerical experiments, their result tables and the log-log fits
// used to read off growth laws from finite truncations.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gramsep {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;  // standard error of the slope
};

/// Ordinary least squares of y on x; needs at least 3 points and non-constant x.
LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// Least squares slope of log y against log x. All values must be positive.
LinearFit fit_exponent(std::span<const double> xs, std::span<const double> ys);

/// Pearson correlation coefficient.
double correlation(std::span<const double> xs, std::span<const double> ys);

/// Growth verdicts for a log-log fit.
bool trend_unbounded(const LinearFit& fit);  // slope > 0 and std_error < 0.2 slope
bool trend_bounded(const LinearFit& fit);    // |slope| < 0.05

struct Column {
  std::string name;
  std::vector<double> values;
};

struct FittedExponent {
  std::string name;
  double slope = 0.0;
  double std_error = 0.0;
};

struct ExperimentResult {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;  // effective parameters
  std::vector<Column> grid;                                 // one row per grid point
  std::vector<Column> metrics;                              // same length as grid
  std::vector<FittedExponent> fitted_exponents;
  std::vector<std::pair<std::string, double>> summary;
  std::int64_t runtime_ms = 0;

  std::size_t rows() const;
  const Column& column(const std::string& name) const;  // grid or metric column
  double summary_value(const std::string& key) const;
  const FittedExponent& fit(const std::string& name) const;
};

using ParamMap = std::map<std::string, std::string>;

struct ExperimentInfo {
  std::string name;
  std::string description;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Runs a registered experiment. Unknown names, unknown parameter keys and
/// out-of-range values raise std::invalid_argument. Results depend only on
/// the parameters (randomized experiments take `seed`, default 0).
ExperimentResult run_experiment(const std::string& name, const ParamMap& params = {});

}  // namespace gramsep
