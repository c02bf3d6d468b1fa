#pragma once

// Gramians of normalized reproducing kernels and their finite-scale
// separation and interpolation diagnostics.

#include "gramsep/kernel.hpp"
#include "gramsep/linalg.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace gramsep {

/// Raised when an operation needs an invertible Gramian and the smallest
/// eigenvalue is within tolerance of zero.
class SingularGramianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default PSD / invertibility tolerance per row: tol = kGramianTolPerRow * N.
inline constexpr double kGramianTolPerRow = 1e-10;

/// Hermitian PSD matrix with unit diagonal.
class Gramian {
 public:
  /// Checks squareness, Hermitian symmetry and the unit diagonal.
  explicit Gramian(HermitianMatrix entries);

  const HermitianMatrix& matrix() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double tolerance() const noexcept { return kGramianTolPerRow * static_cast<double>(size()); }

 private:
  HermitianMatrix entries_;
};

Gramian build_gramian(const KernelSpec& spec, std::span<const Point> points);

double operator_norm(const Gramian& g);

/// Smallest eigenvalue, clamped to 0 when it lies in [-tol, 0).
double lower_riesz_bound(const Gramian& g);

/// Column l2 norms, diagonal included.
std::vector<double> column_l2_norms(const Gramian& g);

/// Same quantity computed straight from the points without storing the
/// matrix; O(N) memory.
std::vector<double> column_l2_norms(const KernelSpec& spec, std::span<const Point> points);

struct SeparationConstants {
  double weak_sep = 1.0;
  double uniform_sep = 1.0;
  bool has_duplicates = false;
  bool underflow = false;
};

/// weak_sep = min_{i != j} d(z_i, z_j); uniform_sep = min_n prod_{j != n} d(z_j, z_n).
/// The product is accumulated as a sum of logarithms; below exp(-700) it is
/// reported as 0 with the underflow flag set.
SeparationConstants separation_constants(const KernelSpec& spec, std::span<const Point> points);

/// sum_n 1 / k(z_n, z_n) = sum_n (1 - |z_n|^2)^a.
double finite_measure_sum(const KernelSpec& spec, std::span<const Point> points);

struct DualSystem {
  HermitianMatrix dual_gramian;  // G^{-1}
  double uniform_minimality;     // min_n ((G^{-1})_nn)^{-1/2}
};

/// Throws SingularGramianError when G is not uniformly minimal at this scale.
DualSystem minimal_dual_system(const Gramian& g);

struct PickCertificate {
  bool is_solvable;
  double margin;  // smallest eigenvalue of [(1 - l_i conj(l_j)) k(z_i, z_j)]
};

/// Pick matrix test for a contractive multiplier taking the given values.
/// Solvability is decided on the diagonally rescaled matrix (same inertia)
/// against `tol`.
PickCertificate pick_psd_certificate(const KernelSpec& spec, std::span<const Point> points,
                                     std::span<const complex> targets, double tol = 1e-13);

/// Largest eps for which targets eps * e_node are Pick-solvable, by bisection.
double pick_strong_separation(const KernelSpec& spec, std::span<const Point> points,
                              std::size_t node, double precision = 1e-12);
/// Minimum of the above over all nodes.
double pick_strong_separation(const KernelSpec& spec, std::span<const Point> points,
                              double precision = 1e-12);

/// sqrt(lambda_min(G)): the largest eps with G - eps^2 I >= 0.
double row_multiplier_margin(const Gramian& g);

struct SeparationReport {
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double max_column_l2 = 1.0;
  double weak_sep = 1.0;
  double uniform_sep = 1.0;
  double uniform_minimality = 1.0;
  double fm_sum = 0.0;

  // Not serialized.
  bool has_duplicates = false;
  bool underflow = false;
};

SeparationReport classify(const KernelSpec& spec, std::span<const Point> points);

}  // namespace gramsep
