#include "gramsep/constructions.hpp"

#include "gramsep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace gramsep {

namespace {

constexpr std::size_t kMaxSeriesTerms = std::size_t{1} << 22;
constexpr int kBisectionSteps = 40;
constexpr double kLiftFloorSlack = 1e-9;

// e^{2 pi i k / n}, exact at the four quarter turns.
complex unit_root(std::size_t k, std::size_t n) {
  k %= n;
  if ((4 * k) % n == 0) {
    static const complex quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return quarter[(4 * k) / n];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

std::vector<Point> apply_automorphism(const Point& x, std::span<const Point> block) {
  std::vector<Point> out;
  out.reserve(block.size());
  for (const auto& p : block) out.push_back(ball_automorphism(x, p));
  return out;
}

Point ray_point(std::size_t dim, double t, std::size_t direction) {
  std::vector<complex> coords(dim);
  coords[0] = std::sqrt(1.0 - t) * unit_root(direction, kSearchDirections);
  return Point::with_defect(std::move(coords), t);
}

// 1 - |z| for a disc point, from its defect.
double one_minus_modulus(const Point& z) { return z.defect() / (1.0 + z.norm()); }

}  // namespace

std::vector<Point> circle_points(double r, std::size_t n) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("circle radius must lie in (0, 1)");
  if (n == 0) throw std::invalid_argument("circle needs at least one point");
  const double defect = (1.0 - r) * (1.0 + r);
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(Point::with_defect({r * unit_root(k, n)}, defect));
  return out;
}

double radius_schedule(double a, std::size_t n) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("radius_schedule: exponent must lie in (0, 1)");
  if (n < 2) throw std::invalid_argument("radius_schedule: N must be >= 2");
  const double nn = static_cast<double>(n);
  double r;
  if (a < 0.5)
    r = 1.0 - std::pow(nn, -1.0 / (2.0 * a));
  else if (a == 0.5)
    r = 1.0 - 1.0 / (nn * std::log(nn));
  else
    r = 1.0 - 1.0 / nn;
  if (!(r < 1.0)) throw std::domain_error("radius_schedule: 1 - r_N underflows in double precision");
  return std::max(r, 1.0 - 1.0 / nn);
}

std::vector<double> circulant_spectrum(double a, double r, std::size_t n, double tail_tol) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("circulant_spectrum: exponent must lie in (0, 1]");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("circulant_spectrum: radius must lie in (0, 1)");
  if (n == 0) throw std::invalid_argument("circulant_spectrum: N must be >= 1");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("circulant_spectrum: tail_tol must be positive");

  const double nn = static_cast<double>(n);
  const double log_r2 = 2.0 * std::log(r);
  const double q = std::exp(nn * log_r2);  // r^{2N}
  const double tail_factor = q / (-std::expm1(nn * log_r2));
  const double scale = std::pow((1.0 - r) * (1.0 + r), a);

  std::vector<double> coeff{1.0};
  auto c = [&](std::size_t k) {
    if (k >= kMaxSeriesTerms)
      throw CirculantTruncationError("circulant_spectrum: series needs more than " +
                                     std::to_string(kMaxSeriesTerms) + " terms (r^{2N} too close to 1)");
    while (coeff.size() <= k) {
      const double m = static_cast<double>(coeff.size());
      coeff.push_back(coeff.back() * (m - 1.0 + a) / m);
    }
    return coeff[k];
  };

  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t m = 0;; ++m) {
      const std::size_t k = n * m + j;
      const double term = c(k) * std::exp(static_cast<double>(k) * log_r2);
      sum += term;
      if (nn * term * tail_factor < tail_tol) break;
    }
    out[j] = scale * nn * sum;
  }
  return out;
}

double cross_mass(const KernelSpec& spec, std::span<const Point> lhs, std::span<const Point> rhs) {
  std::vector<double> rows(lhs.size());
  for (const auto& p : lhs) check_dimension(spec, p);
  for (const auto& p : rhs) check_dimension(spec, p);
  parallel_for(lhs.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const auto& w : rhs) s += normalized_kernel_modulus_sq(spec, lhs[i], w);
    rows[i] = s;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total;
}

Point find_separating_automorphism(const KernelSpec& spec, std::span<const Point> existing,
                                   std::span<const Point> block, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("automorphism search budget must be positive");
  if (block.empty()) throw std::invalid_argument("automorphism search needs a nonempty block");
  const std::size_t dim = block.front().dim();
  if (existing.empty()) return Point::origin(dim);

  // Mass after moving the block by phi_x; +inf when an image crosses the guard.
  auto mass_at = [&](double t, std::size_t dir) {
    try {
      const auto moved = apply_automorphism(ray_point(dim, t, dir), block);
      return cross_mass(spec, existing, moved);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  double best_seen = std::numeric_limits<double>::infinity();
  double t = 0.5;
  for (;; t *= 0.5) {
    if (t < kBoundaryGuard)
      throw AutomorphismSearchError("automorphism search reached the boundary guard; best cross mass " +
                                        std::to_string(best_seen) + " vs budget " + std::to_string(budget),
                                    best_seen);
    std::size_t best_dir = kSearchDirections;
    double best_mass = std::numeric_limits<double>::infinity();
    bool any_finite = false;
    for (std::size_t k = 0; k < kSearchDirections; ++k) {
      const double m = mass_at(t, k);
      any_finite = any_finite || std::isfinite(m);
      if (m < best_mass) {
        best_mass = m;
        best_dir = k;
      }
    }
    best_seen = std::min(best_seen, best_mass);
    if (!any_finite)
      throw AutomorphismSearchError("automorphism search reached the boundary guard; best cross mass " +
                                        std::to_string(best_seen) + " vs budget " + std::to_string(budget),
                                    best_seen);
    if (best_mass < budget) {
      double lo = t;
      double hi = std::min(2.0 * t, 1.0);
      if (t == 0.5) return ray_point(dim, lo, best_dir);
      for (int step = 0; step < kBisectionSteps; ++step) {
        const double mid = std::sqrt(lo * hi);
        if (mass_at(mid, best_dir) < budget)
          lo = mid;
        else
          hi = mid;
      }
      return ray_point(dim, lo, best_dir);
    }
  }
}

std::vector<Point> BlockSequence::flatten(std::size_t block_count) const {
  std::vector<Point> out;
  for (std::size_t b = 0; b < std::min(block_count, blocks.size()); ++b)
    out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  return out;
}

BlockSequence assemble(const KernelSpec& spec, const std::vector<std::vector<Point>>& blocks, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("assemble: eps must be positive");
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("assemble: blocks must be nonempty");
    for (const auto& p : b) check_dimension(spec, p);
  }

  BlockSequence out;
  out.hs_budget = eps;
  std::vector<Point> placed;
  double cross_total = 0.0;
  for (std::size_t idx = 0; idx < blocks.size(); ++idx) {
    if (idx == 0) {
      out.blocks.push_back(blocks[0]);
      out.automorphisms.push_back(Point::origin(spec.dim()));
    } else {
      const int one_based = static_cast<int>(idx) + 1;
      const double budget = eps * eps * std::ldexp(1.0, -one_based - 1);
      const Point x = find_separating_automorphism(spec, placed, blocks[idx], budget);
      auto moved = apply_automorphism(x, blocks[idx]);
      cross_total += cross_mass(spec, placed, moved);
      out.blocks.push_back(std::move(moved));
      out.automorphisms.push_back(x);
    }
    placed.insert(placed.end(), out.blocks.back().begin(), out.blocks.back().end());
  }
  out.hs_residual = std::sqrt(2.0 * cross_total);
  return out;
}

std::vector<Point> cayley_orbit(std::size_t count) {
  if (count == 0) throw std::invalid_argument("cayley_orbit: count must be >= 1");
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const long half = static_cast<long>((i + 1) / 2);
    const double n = static_cast<double>(i % 2 == 1 ? half : -half);
    const double denom = n * n + 4.0;
    out.push_back(Point::with_defect({complex(n * n / denom, -2.0 * n / denom)}, 4.0 / denom));
  }
  return out;
}

Point cayley_to_disc(complex z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("Cayley transform needs a point of the upper half-plane");
  const complex zi = z + complex(0.0, 1.0);
  const complex c = (z - complex(0.0, 1.0)) / zi;
  return Point::with_defect({c}, 4.0 * z.imag() / std::norm(zi));
}

std::vector<Point> beardon_orbit(const OrbitSpec& spec) {
  if (!(spec.generator_shift > 2.0)) throw std::invalid_argument("beardon_orbit: generator shift must exceed 2");
  if (!(spec.dedup_tol > 0.0)) throw std::invalid_argument("beardon_orbit: dedup_tol must be positive");
  if (!(spec.base_point.imag() > 0.0))
    throw std::invalid_argument("beardon_orbit: base point must lie in the upper half-plane");

  enum Gen { none = -1, shift_up = 0, shift_down = 1, invert = 2 };
  struct Node {
    complex z;
    int last;
    std::size_t depth;
  };

  std::vector<Point> out;
  std::multimap<double, std::size_t> by_real;
  auto admit = [&](complex z) {
    Point p = cayley_to_disc(z);
    const double key = p[0].real();
    const double window = 2.0 * spec.dedup_tol;
    for (auto it = by_real.lower_bound(key - window); it != by_real.end() && it->first <= key + window; ++it)
      if (bergman_metric(out[it->second], p) < spec.dedup_tol) return;
    by_real.emplace(key, out.size());
    out.push_back(std::move(p));
  };

  std::deque<Node> queue{{spec.base_point, none, 0}};
  while (!queue.empty()) {
    const Node node = queue.front();
    queue.pop_front();
    admit(node.z);
    if (node.depth == spec.max_word_length) continue;
    if (node.last != shift_down) queue.push_back({node.z + spec.generator_shift, shift_up, node.depth + 1});
    if (node.last != shift_up) queue.push_back({node.z - spec.generator_shift, shift_down, node.depth + 1});
    if (node.last != invert) queue.push_back({-1.0 / node.z, invert, node.depth + 1});
  }
  return out;
}

std::size_t lift_count(const Point& z) {
  if (z.dim() != 1) throw std::invalid_argument("lift_count expects a disc point");
  const double n = std::floor(std::pow(one_minus_modulus(z), -0.5) * (1.0 + kLiftFloorSlack));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

std::vector<Point> lift_to_ball(std::span<const Point> disc_points, LiftRange range) {
  std::vector<Point> out;
  for (const auto& z : disc_points) {
    const std::size_t n = lift_count(z);
    const std::size_t last = range == LiftRange::quarter ? n / 4 : n - 1;
    const complex root = std::sqrt(z[0]) / std::numbers::sqrt2;
    const double defect = one_minus_modulus(z);
    for (std::size_t j = 0; j <= last; ++j) {
      const complex e = unit_root(j, n);
      out.push_back(Point::with_defect({root * e, root * std::conj(e)}, defect));
    }
  }
  return out;
}

std::vector<Point> lift_to_ball(std::span<const complex> disc_points, LiftRange range) {
  std::vector<Point> pts;
  pts.reserve(disc_points.size());
  for (const auto& z : disc_points) pts.push_back(Point::on_disc(z));
  return lift_to_ball(pts, range);
}

double lifted_circle_gramian_entry(complex z, std::size_t n_points, std::size_t n, std::size_t j) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw std::domain_error("lifted_circle_gramian_entry: |z| must be < 1");
  if (n >= n_points || j >= n_points) throw std::out_of_range("lifted_circle_gramian_entry: index out of range");
  if (n == j) return 1.0;
  const std::size_t diff = (n + n_points - j) % n_points;
  return (1.0 - r) / (1.0 - r * unit_root(diff, n_points).real());
}

double cos_sum_ratio(complex z, double t, std::size_t n) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw std::domain_error("cos_sum_ratio: |z| must be < 1");
  if (!(t >= 0.0 && t <= std::numbers::pi / 2)) throw std::invalid_argument("cos_sum_ratio: t must lie in [0, pi/2]");
  const double required = std::ceil(1.0 / (2.0 * std::sqrt(1.0 - r)));
  if (static_cast<double>(n) < required)
    throw std::invalid_argument("cos_sum_ratio: N = " + std::to_string(n) +
                                " is below the required ceil(1 / (2 (1 - |z|)^{1/2})) = " +
                                std::to_string(static_cast<std::size_t>(required)));
  const double nn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t l = 0; l <= n / 4; ++l) {
    const double c = std::cos(t - 2.0 * std::numbers::pi * static_cast<double>(l) / nn);
    sum += 1.0 / std::norm(1.0 - z * c);
  }
  return sum / nn * std::pow(std::abs(1.0 - z), 1.5);
}

}  // namespace gramsep
