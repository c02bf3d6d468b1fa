#include "gramsep/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gramsep {

namespace {

constexpr double kDefectConsistency = 1e-11;

double squared_norm(std::span<const complex> coords) {
  double s = 0.0;
  for (const auto& c : coords) s += std::norm(c);
  return s;
}

void check_coords(std::span<const complex> coords) {
  if (coords.empty()) throw std::invalid_argument("point must have dimension >= 1");
  for (const auto& c : coords) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("point coordinates must be finite");
  }
}

void check_defect(double defect) {
  if (!(defect >= kBoundaryGuard))
    throw std::domain_error("point lies on or outside the sphere (1 - |z|^2 = " +
                            std::to_string(defect) + ")");
}

}  // namespace

Point::Point(std::vector<complex> coords, double defect)
    : coords_(std::move(coords)), defect_(defect) {}

Point::Point(std::vector<complex> coords) : coords_(std::move(coords)), defect_(0.0) {
  check_coords(coords_);
  defect_ = 1.0 - squared_norm(coords_);
  check_defect(defect_);
}

Point Point::with_defect(std::vector<complex> coords, double defect) {
  check_coords(coords);
  check_defect(defect);
  if (defect > 1.0 || std::abs(defect - (1.0 - squared_norm(coords))) > kDefectConsistency)
    throw std::invalid_argument("boundary defect inconsistent with coordinates");
  return Point(std::move(coords), defect);
}

Point Point::origin(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("point must have dimension >= 1");
  return Point(std::vector<complex>(dim), 1.0);
}

double Point::norm() const { return std::sqrt(squared_norm(coords_)); }

KernelSpec::KernelSpec(double exponent, std::size_t dim) : exponent_(exponent), dim_(dim) {
  if (!(exponent > 0.0 && exponent <= 1.0))
    throw std::invalid_argument("kernel exponent must lie in (0, 1]");
  if (dim == 0) throw std::invalid_argument("kernel dimension must be >= 1");
}

void check_same_dimension(const Point& z, const Point& w) {
  if (z.dim() != w.dim())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(z.dim()) + " vs " +
                                std::to_string(w.dim()));
}

void check_dimension(const KernelSpec& spec, const Point& z) {
  if (z.dim() != spec.dim())
    throw std::invalid_argument("point of dimension " + std::to_string(z.dim()) +
                                " used with a kernel on B_" + std::to_string(spec.dim()));
}

complex one_minus_inner(const Point& z, const Point& w) {
  check_same_dimension(z, w);
  double diff_sq = 0.0;
  double imag = 0.0;
  for (std::size_t k = 0; k < z.dim(); ++k) {
    const complex d = z[k] - w[k];
    const complex m = z[k] + w[k];
    diff_sq += std::norm(d);
    // Im <(z+w)/2, z-w>, antisymmetric in (z, w) bit for bit.
    imag += m.imag() * d.real() - m.real() * d.imag();
  }
  return {0.5 * (z.defect() + w.defect() + diff_sq), 0.5 * imag};
}

PairGeometry pair_geometry(const Point& z, const Point& w) {
  const complex gap = one_minus_inner(z, w);
  const double gap_sq = std::norm(gap);

  double diff_sq = 0.0;
  for (std::size_t k = 0; k < z.dim(); ++k) diff_sq += std::norm(z[k] - w[k]);
  // Lagrange identity: |z|^2 |w|^2 - |<z,w>|^2 = sum_{j<k} |z_j w_k - z_k w_j|^2.
  double wedge = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j)
    for (std::size_t k = j + 1; k < z.dim(); ++k) wedge += std::norm(z[j] * w[k] - z[k] * w[j]);

  PairGeometry g{};
  g.rho_sq = std::clamp((diff_sq - wedge) / gap_sq, 0.0, 1.0);
  g.one_minus_rho_sq = std::clamp(z.defect() * w.defect() / gap_sq, 0.0, 1.0);
  return g;
}

complex eval_kernel(const KernelSpec& spec, const Point& z, const Point& w) {
  check_dimension(spec, z);
  check_dimension(spec, w);
  return std::exp(-spec.exponent() * std::log(one_minus_inner(z, w)));
}

complex normalized_kernel(const KernelSpec& spec, const Point& z, const Point& w) {
  check_dimension(spec, z);
  check_dimension(spec, w);
  const double a = spec.exponent();
  const complex log_gap = std::log(one_minus_inner(z, w));
  const double log_scale = 0.5 * a * (std::log(z.defect()) + std::log(w.defect()));
  return std::exp(complex(log_scale, 0.0) - a * log_gap);
}

double normalized_kernel_modulus_sq(const KernelSpec& spec, const Point& z, const Point& w) {
  check_dimension(spec, z);
  check_dimension(spec, w);
  return std::pow(pair_geometry(z, w).one_minus_rho_sq, spec.exponent());
}

double metric_d(const KernelSpec& spec, const Point& z, const Point& w) {
  check_dimension(spec, z);
  check_dimension(spec, w);
  const PairGeometry g = pair_geometry(z, w);
  const double a = spec.exponent();
  double d_sq;
  if (g.rho_sq < 0.5)
    d_sq = -std::expm1(a * std::log1p(-g.rho_sq));
  else
    d_sq = 1.0 - std::pow(g.one_minus_rho_sq, a);
  return std::sqrt(std::clamp(d_sq, 0.0, 1.0));
}

double pseudo_hyperbolic(const Point& z, const Point& w) {
  return std::sqrt(pair_geometry(z, w).rho_sq);
}

double bergman_metric(const Point& z, const Point& w) {
  const double rho = std::min(pseudo_hyperbolic(z, w), 1.0 - 1e-15);
  return std::atanh(rho);
}

Point ball_automorphism(const Point& x, const Point& z) {
  check_same_dimension(x, z);
  const std::size_t d = x.dim();
  const double xx = squared_norm(x.coords());
  if (xx == 0.0) {
    std::vector<complex> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = -z[k];
    return Point::with_defect(std::move(out), z.defect());
  }

  complex zx = 0.0;
  for (std::size_t k = 0; k < d; ++k) zx += z[k] * std::conj(x[k]);
  const complex proj = zx / xx;
  const double s = std::sqrt(x.defect());
  const complex den = one_minus_inner(z, x);

  std::vector<complex> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    const complex pz = proj * x[k];
    out[k] = (x[k] - pz - s * (z[k] - pz)) / den;
  }
  const double defect = x.defect() * z.defect() / std::norm(den);
  return Point::with_defect(std::move(out), defect);
}

complex embedding_r(complex z1, complex z2) {
  if (!(std::norm(z1) + std::norm(z2) < 1.0))
    throw std::domain_error("embedding_r: (z1, z2) must lie in the open ball B_2");
  return 2.0 * z1 * z2;
}

complex embedding_r(const Point& w) {
  if (w.dim() != 2) throw std::invalid_argument("embedding_r expects a point of B_2");
  return 2.0 * w[0] * w[1];
}

double power_series_coeff(double a, long m) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("exponent must lie in (0, 1]");
  if (m < 0) throw std::invalid_argument("coefficient index must be non-negative");
  double c = 1.0;
  for (long k = 1; k <= m; ++k) c *= (static_cast<double>(k) - 1.0 + a) / static_cast<double>(k);
  return c;
}

std::vector<double> power_series_coeffs(double a, std::size_t count) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("exponent must lie in (0, 1]");
  std::vector<double> c(count);
  if (count == 0) return c;
  c[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k)
    c[k] = c[k - 1] * (static_cast<double>(k) - 1.0 + a) / static_cast<double>(k);
  return c;
}

}  // namespace gramsep
