#pragma once

// Kernels (1 - <z,w>)^{-a} on the unit ball, the metrics they induce and the
// hyperbolic geometry of the ball.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gramsep {

using complex = std::complex<double>;

/// Points with 1 - |z|^2 below this value are rejected.
inline constexpr double kBoundaryGuard = 1e-14;

/// A point of the open unit ball B_d.
///
/// Besides its coordinates a point carries its boundary defect 1 - |z|^2.
/// Generators that know the defect in closed form (circles, orbits,
/// automorphic images) pass it in directly, so that kernel values between
/// points very close to the sphere keep their relative accuracy.
class Point {
 public:
  explicit Point(std::vector<complex> coords);

  /// The defect must agree with the coordinates up to rounding.
  static Point with_defect(std::vector<complex> coords, double defect);
  static Point origin(std::size_t dim);
  static Point on_disc(complex z) { return Point({z}); }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const complex> coords() const noexcept { return coords_; }
  complex operator[](std::size_t i) const { return coords_[i]; }

  /// 1 - |z|^2.
  double defect() const noexcept { return defect_; }
  double norm() const;

 private:
  Point(std::vector<complex> coords, double defect);

  std::vector<complex> coords_;
  double defect_;
};

/// k(z,w) = (1 - <z,w>)^{-a} on B_d with 0 < a <= 1.
class KernelSpec {
 public:
  KernelSpec(double exponent, std::size_t dim);

  static KernelSpec drury_arveson(std::size_t dim) { return {1.0, dim}; }
  static KernelSpec weighted_dirichlet(double a) { return {a, 1}; }

  double exponent() const noexcept { return exponent_; }
  std::size_t dim() const noexcept { return dim_; }

 private:
  double exponent_;
  std::size_t dim_;
};

/// 1 - <z,w>, with the real part assembled from the boundary defects and
/// |z - w|^2 so that it stays accurate when both points approach the sphere.
complex one_minus_inner(const Point& z, const Point& w);

/// Squared pseudo-hyperbolic distance together with its complement
/// 1 - rho^2 = (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2, each computed without
/// cancellation in the regime where it is small.
struct PairGeometry {
  double rho_sq;
  double one_minus_rho_sq;
};
PairGeometry pair_geometry(const Point& z, const Point& w);

complex eval_kernel(const KernelSpec& spec, const Point& z, const Point& w);

/// Normalized kernel k(z,w) / (k(z,z) k(w,w))^{1/2}; this is a Gramian entry.
complex normalized_kernel(const KernelSpec& spec, const Point& z, const Point& w);

/// |normalized_kernel|^2 = (1 - rho^2)^a.
double normalized_kernel_modulus_sq(const KernelSpec& spec, const Point& z, const Point& w);

/// sqrt(1 - |k(z,w)|^2 / (k(z,z) k(w,w))).
double metric_d(const KernelSpec& spec, const Point& z, const Point& w);

double pseudo_hyperbolic(const Point& z, const Point& w);

/// atanh(rho), with rho clamped to 1 - 1e-15.
double bergman_metric(const Point& z, const Point& w);

/// The involutive automorphism phi_x of B_d exchanging x and 0.
Point ball_automorphism(const Point& x, const Point& z);

/// r(z1, z2) = 2 z1 z2, mapping B_2 into the disc.
complex embedding_r(complex z1, complex z2);
complex embedding_r(const Point& w);

/// Taylor coefficient c_m of (1 - x)^{-a}.
double power_series_coeff(double a, long m);
/// c_0, ..., c_{count-1}.
std::vector<double> power_series_coeffs(double a, std::size_t count);

void check_same_dimension(const Point& z, const Point& w);
void check_dimension(const KernelSpec& spec, const Point& z);

}  // namespace gramsep
