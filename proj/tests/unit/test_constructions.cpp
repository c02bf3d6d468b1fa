#include "gramsep/constructions.hpp"
#include "gramsep/gramian.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

using namespace gramsep;
using testsupport::random_point;

namespace {

std::uint64_t central_binomial(unsigned n) {
  std::uint64_t c = 1;
  for (unsigned k = 1; k <= n; ++k) c = c * (n + k) / k;  // exact: C(n+k, k) at each step
  return c;
}

}  // namespace

TEST_CASE("circle points") {
  const auto two = circle_points(0.5, 2);
  CHECK(std::abs(two[0][0] - 0.5) < 1e-16);
  CHECK(std::abs(two[1][0] + 0.5) < 1e-16);
  const auto four = circle_points(0.9, 4);
  const complex expect[4] = {0.9, complex(0.0, 0.9), -0.9, complex(0.0, -0.9)};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(four[k][0] - expect[k]) < 1e-16);
  CHECK(circle_points(0.3, 1).size() == 1);
  CHECK(four[0].defect() == doctest::Approx(0.19).epsilon(1e-15));
  CHECK_THROWS_AS(circle_points(1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(circle_points(0.5, 0), std::invalid_argument);
}

TEST_CASE("radius schedule") {
  CHECK(radius_schedule(0.75, 4) == 0.75);
  CHECK(radius_schedule(0.25, 16) == doctest::Approx(255.0 / 256.0).epsilon(1e-15));
  CHECK(radius_schedule(0.5, 4) == doctest::Approx(1.0 - 1.0 / (4.0 * std::log(4.0))).epsilon(1e-15));
  CHECK_THROWS_AS(radius_schedule(0.1, 5000), std::domain_error);
  CHECK_THROWS_AS(radius_schedule(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(radius_schedule(0.5, 1), std::invalid_argument);
  for (double a : {0.2, 0.25, 0.4, 0.5, 0.6, 0.9})
    for (std::size_t n = 2; n < 5000; n += 7) {
      const double r = radius_schedule(a, n);
      REQUIRE(r >= 1.0 - 1.0 / static_cast<double>(n));
      REQUIRE(r < 1.0);
    }
}

TEST_CASE("circulant spectrum worked values") {
  const auto one = circulant_spectrum(0.5, 0.5, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-13));
  const auto two = circulant_spectrum(0.5, 0.5, 2);
  CHECK(two[0] == doctest::Approx(1.0 + std::sqrt(0.6)).epsilon(1e-13));
  CHECK(two[1] == doctest::Approx(1.0 - std::sqrt(0.6)).epsilon(1e-13));
  CHECK_THROWS_AS(circulant_spectrum(0.5, 1.0 - 1e-9, 1), CirculantTruncationError);
  CHECK_THROWS_AS(circulant_spectrum(0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("circulant spectrum matches a direct eigensolve") {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    for (std::size_t n : {3u, 8u, 33u, 128u}) {
      for (double r : {0.3, 1.0 - 1.0 / static_cast<double>(n), radius_schedule(std::min(a, 0.9), n)}) {
        const auto series = circulant_spectrum(a, r, n);
        const auto pts = circle_points(r, n);
        const auto direct = hermitian_eigenvalues(build_gramian(KernelSpec(a, 1), pts).matrix());
        for (std::size_t j = 0; j < n; ++j) {
          REQUIRE(std::abs(series[j] - direct(static_cast<Eigen::Index>(n - 1 - j))) < 1e-8);
          if (j > 0 && a < 1.0) REQUIRE(series[j] < series[j - 1]);
        }
      }
    }
  }
}

TEST_CASE("automorphism search") {
  const KernelSpec da(1.0, 1);
  const std::vector<Point> origin{Point::origin(1)};
  const Point id = find_separating_automorphism(da, {}, origin, 0.1);
  CHECK(id.norm() == 0.0);

  const Point x = find_separating_automorphism(da, origin, origin, 0.1);
  const std::vector<Point> moved{ball_automorphism(x, origin[0])};
  CHECK(cross_mass(da, origin, moved) < 0.1);
  CHECK(cross_mass(da, origin, moved) == doctest::Approx(x.defect()).epsilon(1e-12));

  std::mt19937_64 gen(30);
  for (double a : {0.5, 1.0}) {
    for (std::size_t d : {1u, 2u}) {
      const KernelSpec spec(a, d);
      for (int t = 0; t < 5; ++t) {
        std::vector<Point> existing, block;
        for (int i = 0; i < 5; ++i) existing.push_back(random_point(gen, d, 0.9));
        for (int i = 0; i < 5; ++i) block.push_back(random_point(gen, d, 0.9));
        const double budget = 1e-3;
        const Point y = find_separating_automorphism(spec, existing, block, budget);
        std::vector<Point> image;
        for (const auto& b : block) image.push_back(ball_automorphism(y, b));
        CHECK(cross_mass(spec, existing, image) < budget);
      }
    }
  }
  CHECK_THROWS_AS(find_separating_automorphism(da, origin, origin, 0.0), std::invalid_argument);
}

TEST_CASE("assemble keeps the first block and meets the HS budget") {
  const KernelSpec spec(0.5, 1);
  const std::vector<std::vector<Point>> single{circle_points(0.6, 5)};
  const BlockSequence s1 = assemble(spec, single, 0.5);
  CHECK(s1.hs_residual == 0.0);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s1.blocks[0][i][0] == single[0][i][0]);

  const std::vector<std::vector<Point>> zeros{{Point::origin(1)}, {Point::origin(1)}};
  const BlockSequence s2 = assemble(KernelSpec(1.0, 1), zeros, 0.5);
  const auto pts = s2.flatten();
  const Gramian g = build_gramian(KernelSpec(1.0, 1), pts);
  CHECK(std::abs(g.matrix()(0, 1)) < 0.5 / std::sqrt(2.0));
  CHECK(std::sqrt(2.0) * std::abs(g.matrix()(0, 1)) == doctest::Approx(s2.hs_residual).epsilon(1e-12));

  std::vector<std::vector<Point>> blocks;
  for (std::size_t n = 2; n <= 7; ++n) blocks.push_back(circle_points(radius_schedule(0.5, n), n));
  const BlockSequence seq = assemble(spec, blocks, 0.5);
  REQUIRE(seq.blocks.size() == blocks.size());
  const auto all = seq.flatten();
  // Moved coordinates carry absolute rounding of order 1e-16, so entry moduli
  // near the sphere are only reproducible to about 1e-16 / (1 - |z|^2).
  double min_defect = 1.0;
  for (const auto& p : all) min_defect = std::min(min_defect, p.defect());
  const double modulus_tol = std::max(1e-12, 1e-15 / min_defect);
  const Gramian full = build_gramian(spec, all);
  // Off-block-diagonal HS norm, recomputed from the assembled Gramian.
  double off = 0.0;
  std::size_t row = 0;
  for (std::size_t b = 0; b < seq.blocks.size(); ++b) {
    const std::size_t len = seq.blocks[b].size();
    for (std::size_t i = row; i < row + len; ++i)
      for (std::size_t j = 0; j < all.size(); ++j)
        if (j < row || j >= row + len) off += std::norm(full.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    // Diagonal blocks keep their entry moduli.
    const Gramian orig = build_gramian(spec, blocks[b]);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < len; ++j)
        CHECK(std::abs(std::abs(full.matrix()(static_cast<Eigen::Index>(row + i), static_cast<Eigen::Index>(row + j))) -
                       std::abs(orig.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) < modulus_tol);
    row += len;
  }
  CHECK(std::sqrt(off) < 0.5);
  CHECK(std::sqrt(off) == doctest::Approx(seq.hs_residual).epsilon(1e-8));
}

TEST_CASE("Cayley orbit") {
  const auto pts = cayley_orbit(11);
  CHECK(std::abs(pts[0][0]) == 0.0);
  CHECK(std::abs(pts[1][0] - complex(0.2, -0.4)) < 1e-16);
  CHECK(std::abs(pts[2][0] - complex(0.2, 0.4)) < 1e-16);
  CHECK(pts[9].defect() == doctest::Approx(4.0 / 29.0).epsilon(1e-15));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const long n = i % 2 ? static_cast<long>((i + 1) / 2) : -static_cast<long>(i / 2);
    const complex z = static_cast<double>(n) / complex(static_cast<double>(n), 2.0);
    CHECK(std::abs(pts[i][0] - z) < 1e-15);
  }
}

TEST_CASE("Beardon orbit") {
  OrbitSpec spec;
  spec.max_word_length = 0;
  const auto base = beardon_orbit(spec);
  REQUIRE(base.size() == 1);
  CHECK(std::abs(base[0][0] - cayley_to_disc(complex(0.0, 2.0))[0]) < 1e-16);

  spec.max_word_length = 1;
  const auto one = beardon_orbit(spec);
  REQUIRE(one.size() == 4);
  CHECK(std::abs(one[1][0] - cayley_to_disc(complex(2.1, 2.0))[0]) < 1e-15);
  CHECK(std::abs(one[2][0] - cayley_to_disc(complex(-2.1, 2.0))[0]) < 1e-15);
  CHECK(std::abs(one[3][0] - cayley_to_disc(complex(0.0, 0.5))[0]) < 1e-15);

  spec.max_word_length = 8;
  const auto many = beardon_orbit(spec);
  for (std::size_t i = 0; i < many.size(); ++i) {
    REQUIRE(many[i].norm() < 1.0);
    for (std::size_t j = 0; j < i; ++j) REQUIRE(bergman_metric(many[i], many[j]) >= spec.dedup_tol);
  }
  // A fixed point of S collapses S applied to i.
  OrbitSpec fixed;
  fixed.base_point = complex(0.0, 1.0);
  fixed.max_word_length = 1;
  CHECK(beardon_orbit(fixed).size() == 3);

  spec.generator_shift = 2.0;
  CHECK_THROWS_AS(beardon_orbit(spec), std::invalid_argument);
}

TEST_CASE("lift to the ball") {
  const std::vector<complex> zero{0.0};
  const auto l0 = lift_to_ball(zero);
  REQUIRE(l0.size() == 1);
  CHECK(l0[0].norm() == 0.0);

  const complex z(0.0, 0.75);
  const std::vector<complex> three_quarters{z};
  const auto l1 = lift_to_ball(three_quarters);
  REQUIRE(l1.size() == 1);
  const complex expect = std::sqrt(z) / std::sqrt(2.0);
  CHECK(std::abs(l1[0][0] - expect) < 1e-16);
  CHECK(std::abs(l1[0][1] - expect) < 1e-16);

  std::mt19937_64 gen(31);
  for (int t = 0; t < 50; ++t) {
    const Point p = random_point(gen, 1, 0.9999);
    const std::vector<Point> src{p};
    const auto quarter = lift_to_ball(src, LiftRange::quarter);
    const auto full = lift_to_ball(src, LiftRange::full);
    const std::size_t n = lift_count(p);
    CHECK(quarter.size() == n / 4 + 1);
    CHECK(full.size() == n);
    for (const auto& w : full) {
      CHECK(std::abs(embedding_r(w) - p[0]) < 1e-14);
      CHECK(std::abs(w.norm() * w.norm() - std::abs(p[0])) < 1e-14);
    }
  }
  CHECK(lift_count(Point::on_disc(0.75)) == 2);
  CHECK(lift_count(Point::on_disc(0.96)) == 5);
}

TEST_CASE("lifted circle Gramian closed form") {
  CHECK(lifted_circle_gramian_entry(0.5, 2, 1, 1) == 1.0);
  CHECK(lifted_circle_gramian_entry(0.5, 2, 1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  std::mt19937_64 gen(32);
  const KernelSpec h22(1.0, 2);
  for (int t = 0; t < 20; ++t) {
    const Point p = random_point(gen, 1, 0.999);
    const std::vector<Point> src{p};
    const auto w = lift_to_ball(src, LiftRange::full);
    const Gramian g = build_gramian(h22, w);
    for (std::size_t n = 0; n < w.size(); ++n)
      for (std::size_t j = 0; j < w.size(); ++j)
        REQUIRE(std::abs(g.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) -
                         lifted_circle_gramian_entry(p[0], w.size(), n, j)) < 1e-12);
  }
}

TEST_CASE("cosine sum ratio") {
  for (std::size_t n : {2u, 3u, 7u, 64u}) CHECK(cos_sum_ratio(0.0, 0.3, n) <= 0.5 + 1e-15);
  CHECK_THROWS_AS(cos_sum_ratio(0.99, 0.0, 4), std::invalid_argument);
  CHECK_NOTHROW(cos_sum_ratio(0.99, 0.0, 5));
  CHECK_THROWS_AS(cos_sum_ratio(0.5, 2.0, 4), std::invalid_argument);
  // Fixed z: a Riemann sum, so successive quadruplings of N shrink the change about fourfold.
  double prev = cos_sum_ratio(0.9, 0.0, 1024), prev_step = 0.0;
  for (std::size_t n : {4096u, 16384u, 65536u}) {
    const double r = cos_sum_ratio(0.9, 0.0, n);
    const double step = std::abs(r - prev);
    if (prev_step > 0.0) CHECK(step < 0.3 * prev_step);
    prev_step = step;
    prev = r;
  }
  CHECK(prev == doctest::Approx(0.18737).epsilon(1e-4));  // regression value
}

TEST_CASE("embedding is an isometry on monomials") {
  // 1/c_n for a = 1/2 against 4^n (n!)^2 / (2n)! = 4^n / C(2n, n).
  for (unsigned n = 0; n <= 30; ++n) {
    const double lhs = 1.0 / power_series_coeff(0.5, n);
    const double rhs = std::ldexp(1.0, 2 * static_cast<int>(n)) / static_cast<double>(central_binomial(n));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
  }
}
