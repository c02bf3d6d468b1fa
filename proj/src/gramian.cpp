#include "gramsep/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gramsep {

namespace {

constexpr double kUnderflowLog = -700.0;

void check_points(const KernelSpec& spec, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  for (const auto& p : points) check_dimension(spec, p);
}

HermitianMatrix symmetrized(const HermitianMatrix& m) {
  HermitianMatrix out = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = out(i, i).real();
  return out;
}

DualSystem dual_from_factor(const Gramian& g) {
  Eigen::LLT<HermitianMatrix> llt(g.matrix());
  if (llt.info() != Eigen::Success)
    throw SingularGramianError("Gramian is not uniformly minimal at this scale (singular)");
  const auto n = g.size();
  DualSystem out;
  out.dual_gramian = symmetrized(llt.solve(HermitianMatrix::Identity(n, n)));
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dii = out.dual_gramian(i, i).real();
    if (!(dii > 0.0) || !std::isfinite(dii))
      throw SingularGramianError("Gramian is not uniformly minimal at this scale (singular)");
    worst = std::min(worst, 1.0 / std::sqrt(dii));
  }
  out.uniform_minimality = worst;
  return out;
}

// Pick matrix for targets, normalized by the diagonal of the kernel matrix.
HermitianMatrix normalized_pick(const Gramian& g, std::span<const complex> targets) {
  HermitianMatrix m = g.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) *= 1.0 - targets[static_cast<std::size_t>(i)] * std::conj(targets[static_cast<std::size_t>(j)]);
  return symmetrized(m);
}

bool one_node_feasible(const HermitianMatrix& g, Eigen::Index node, double eps, double tol) {
  HermitianMatrix m = g;
  m(node, node) -= eps * eps;
  return min_eigenvalue(m) >= -tol;
}

}  // namespace

Gramian::Gramian(HermitianMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("Gramian must be square");
  if (entries_.rows() == 0) throw std::invalid_argument("Gramian must be nonempty");
  const double tol = 1e-12;
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (std::abs(entries_(i, i) - complex(1.0, 0.0)) > tol)
      throw std::invalid_argument("Gramian diagonal must be 1 (row " + std::to_string(i) + ")");
  }
  if (hermitian_defect(entries_) > tol) throw std::invalid_argument("Gramian must be Hermitian");
}

Gramian build_gramian(const KernelSpec& spec, std::span<const Point> points) {
  check_points(spec, points);
  const std::size_t n = points.size();
  HermitianMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    g(ii, ii) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const complex v = normalized_kernel(spec, points[i], points[j]);
      g(ii, jj) = v;
      g(jj, ii) = std::conj(v);
    }
  });
  return Gramian(std::move(g));
}

double operator_norm(const Gramian& g) { return max_eigenvalue(g.matrix()); }

double lower_riesz_bound(const Gramian& g) {
  const double lmin = min_eigenvalue(g.matrix());
  if (lmin >= 0.0) return lmin;
  if (lmin >= -g.tolerance()) return 0.0;
  throw std::domain_error("matrix is not positive semidefinite (lambda_min = " + std::to_string(lmin) + ")");
}

std::vector<double> column_l2_norms(const Gramian& g) {
  std::vector<double> out(static_cast<std::size_t>(g.size()));
  for (Eigen::Index j = 0; j < g.size(); ++j) out[static_cast<std::size_t>(j)] = g.matrix().col(j).norm();
  return out;
}

std::vector<double> column_l2_norms(const KernelSpec& spec, std::span<const Point> points) {
  check_points(spec, points);
  const std::size_t n = points.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double s = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += normalized_kernel_modulus_sq(spec, points[i], points[j]);
    out[i] = std::sqrt(s);
  });
  return out;
}

SeparationConstants separation_constants(const KernelSpec& spec, std::span<const Point> points) {
  check_points(spec, points);
  const std::size_t n = points.size();
  SeparationConstants out;
  if (n == 1) return out;

  std::vector<double> row_min(n), row_log(n);
  parallel_for(n, [&](std::size_t i) {
    double mn = 1.0;
    double lg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = metric_d(spec, points[i], points[j]);
      mn = std::min(mn, d);
      lg += std::log(d);
    }
    row_min[i] = mn;
    row_log[i] = lg;
  });

  out.weak_sep = *std::min_element(row_min.begin(), row_min.end());
  out.has_duplicates = out.weak_sep == 0.0;
  const double worst_log = *std::min_element(row_log.begin(), row_log.end());
  if (out.has_duplicates) {
    out.uniform_sep = 0.0;
  } else if (worst_log < kUnderflowLog) {
    out.uniform_sep = 0.0;
    out.underflow = true;
  } else {
    out.uniform_sep = std::min(std::exp(worst_log), out.weak_sep);
  }
  return out;
}

double finite_measure_sum(const KernelSpec& spec, std::span<const Point> points) {
  double s = 0.0;
  for (const auto& p : points) {
    check_dimension(spec, p);
    s += std::pow(p.defect(), spec.exponent());
  }
  return s;
}

DualSystem minimal_dual_system(const Gramian& g) {
  const double lmin = min_eigenvalue(g.matrix());
  if (!(lmin > g.tolerance()))
    throw SingularGramianError("Gramian is not uniformly minimal at this scale (lambda_min = " +
                               std::to_string(lmin) + ")");
  return dual_from_factor(g);
}

PickCertificate pick_psd_certificate(const KernelSpec& spec, std::span<const Point> points,
                                     std::span<const complex> targets, double tol) {
  check_points(spec, points);
  if (targets.size() != points.size())
    throw std::invalid_argument("pick_psd_certificate: targets and points differ in length");
  const auto n = static_cast<Eigen::Index>(points.size());
  const Gramian g = build_gramian(spec, points);

  HermitianMatrix raw(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      raw(i, j) = (1.0 - targets[si] * std::conj(targets[sj])) * eval_kernel(spec, points[si], points[sj]);
    }
  PickCertificate out{};
  out.margin = min_eigenvalue(symmetrized(raw));
  out.is_solvable = min_eigenvalue(normalized_pick(g, targets)) >= -tol;
  return out;
}

double pick_strong_separation(const KernelSpec& spec, std::span<const Point> points, std::size_t node,
                              double precision) {
  check_points(spec, points);
  if (node >= points.size()) throw std::out_of_range("pick_strong_separation: node index out of range");
  const Gramian g = build_gramian(spec, points);
  const auto k = static_cast<Eigen::Index>(node);
  const double tol = 1e-14 * static_cast<double>(points.size());
  double lo = 0.0;
  double hi = 1.0;
  if (one_node_feasible(g.matrix(), k, hi, tol)) return hi;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (one_node_feasible(g.matrix(), k, mid, tol))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double pick_strong_separation(const KernelSpec& spec, std::span<const Point> points, double precision) {
  double best = 1.0;
  for (std::size_t n = 0; n < points.size(); ++n)
    best = std::min(best, pick_strong_separation(spec, points, n, precision));
  return best;
}

double row_multiplier_margin(const Gramian& g) { return std::sqrt(lower_riesz_bound(g)); }

SeparationReport classify(const KernelSpec& spec, std::span<const Point> points) {
  const Gramian g = build_gramian(spec, points);
  const Eigen::VectorXd ev = hermitian_eigenvalues(g.matrix());

  SeparationReport r;
  const double lmin = ev(0);
  r.lambda_min = lmin >= -g.tolerance() ? std::max(lmin, 0.0) : lmin;
  r.lambda_max = ev(ev.size() - 1);

  const auto cols = column_l2_norms(g);
  r.max_column_l2 = *std::max_element(cols.begin(), cols.end());

  const SeparationConstants sep = separation_constants(spec, points);
  r.weak_sep = sep.weak_sep;
  r.uniform_sep = sep.uniform_sep;
  r.has_duplicates = sep.has_duplicates;
  r.underflow = sep.underflow;

  r.uniform_minimality = 0.0;
  if (!sep.has_duplicates && lmin > g.tolerance()) {
    try {
      r.uniform_minimality = dual_from_factor(g).uniform_minimality;
    } catch (const SingularGramianError&) {
      r.uniform_minimality = 0.0;
    }
  }
  r.fm_sum = finite_measure_sum(spec, points);
  return r;
}

}  // namespace gramsep
