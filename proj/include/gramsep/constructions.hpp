#pragma once

// Explicit point configurations: equidistributed circles, their circulant
// spectra, automorphic assembly of blocks, Fuchsian orbits in the disc and
// the lift of disc sequences to the ball B_2.

#include "gramsep/kernel.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gramsep {

/// {r e^{2 pi i n / N} : 0 <= n < N} as points of the disc.
std::vector<Point> circle_points(double r, std::size_t n);

/// Radius r_N for which the circle of N points has bounded column mass:
/// 1 - N^{-1/(2a)} for a < 1/2, 1 - 1/(N ln N) for a = 1/2, 1 - 1/N for a > 1/2,
/// never below 1 - 1/N. Throws std::domain_error when r_N rounds to 1.
double radius_schedule(double a, std::size_t n);

class CirculantTruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All N eigenvalues of the Gramian of circle_points(r, N), largest first,
/// from the lacunary series (1 - r^2)^a N sum_m c_{Nm+j} r^{2(Nm+j)}.
std::vector<double> circulant_spectrum(double a, double r, std::size_t n, double tail_tol = 1e-15);

/// Squared Frobenius mass of the cross Gramian between two point sets.
double cross_mass(const KernelSpec& spec, std::span<const Point> lhs, std::span<const Point> rhs);

class AutomorphismSearchError : public std::runtime_error {
 public:
  AutomorphismSearchError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved_mass() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Number of rotated base directions tried by the automorphism search.
inline constexpr std::size_t kSearchDirections = 32;

/// A base point x such that ball_automorphism(x, .) applied to `block` leaves
/// cross_mass against `existing` below `budget`.
///
/// Candidates are x = sqrt(1 - t) e^{i theta_k} e_1 on kSearchDirections
/// rays. t is halved until some ray meets the budget; the best ray is then
/// refined by bisection in log t towards the largest admissible t.
Point find_separating_automorphism(const KernelSpec& spec, std::span<const Point> existing,
                                   std::span<const Point> block, double budget);

struct BlockSequence {
  std::vector<std::vector<Point>> blocks;  // transformed blocks
  std::vector<Point> automorphisms;        // base point per block; block 0 is left in place
  double hs_budget = 0.0;
  double hs_residual = 0.0;                // ||R||_HS of the cross-block part

  std::vector<Point> flatten(std::size_t block_count) const;
  std::vector<Point> flatten() const { return flatten(blocks.size()); }
};

/// Places the blocks one after another; block N (1-based, N >= 2) gets cross
/// mass budget eps^2 2^{-N-1} against everything placed before it.
BlockSequence assemble(const KernelSpec& spec, const std::vector<std::vector<Point>>& blocks, double eps);

/// n/(n + 2i) for n = 0, 1, -1, 2, -2, ...; the first `count` of them.
std::vector<Point> cayley_orbit(std::size_t count);

/// Cayley transform of the upper half-plane onto the disc, z -> (z - i)/(z + i).
Point cayley_to_disc(complex z);

struct OrbitSpec {
  double generator_shift = 2.1;      // T(z) = z + shift
  complex base_point{0.0, 2.0};      // upper half-plane
  std::size_t max_word_length = 10;
  double dedup_tol = 1e-9;           // Bergman-metric radius
};

/// Orbit of base_point under reduced words of length <= max_word_length in
/// T, T^{-1} and S(z) = -1/z, mapped to the disc. Points closer than dedup_tol
/// in the Bergman metric to an earlier one are dropped; order is breadth first.
std::vector<Point> beardon_orbit(const OrbitSpec& spec);

enum class LiftRange { quarter, full };

/// N(z) = floor((1 - |z|)^{-1/2}).
std::size_t lift_count(const Point& z);

/// For every disc point z lifts to 2^{-1/2} sqrt(z) (e^{2 pi i j/N}, e^{-2 pi i j/N})
/// with N = lift_count(z) and j in [0, N/4] (quarter) or [0, N) (full).
std::vector<Point> lift_to_ball(std::span<const Point> disc_points, LiftRange range = LiftRange::quarter);
std::vector<Point> lift_to_ball(std::span<const complex> disc_points, LiftRange range = LiftRange::quarter);

/// (1 - |z|) / (1 - |z| cos(2 pi (n - j) / N)).
double lifted_circle_gramian_entry(complex z, std::size_t n_points, std::size_t n, std::size_t j);

/// |1 - z|^{3/2} (1/N) sum_{l=0}^{N/4} |1 - z cos(t - 2 pi l/N)|^{-2}.
double cos_sum_ratio(complex z, double t, std::size_t n);

}  // namespace gramsep
