#include "fixtures.hpp"
#include "linking/errors.hpp"
#include "linking/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <cstring>

using namespace linking;
using fixtures::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ProductGrid torus(int m) {
  return ProductGrid({periodic_trapezoid(m, 0, kTwoPi), periodic_trapezoid(m, 0, kTwoPi)});
}

}  // namespace

TEST_CASE("rule weights integrate constants") {
  Gen g(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = g.integer(1, 200);
    const double a = g.uniform(-3, 3);
    const double b = a + g.uniform(0.1, 7);
    const auto t = periodic_trapezoid(m, a, b);
    const auto gl = gauss_legendre(m, a, b);
    CHECK(std::abs(sum(t.weights) - (b - a)) < 1e-12);
    CHECK(std::abs(sum(gl.weights) - (b - a)) < 1e-12);
    CHECK(t.periodic);
    CHECK_FALSE(gl.periodic);
    CHECK(t.size() == static_cast<std::size_t>(m));
    for (double x : gl.nodes) {
      CHECK(x > a);
      CHECK(x < b);
    }
  }
}

TEST_CASE("Gauss-Legendre exactness") {
  const auto r = gauss_legendre(4, -1.0, 2.0);
  // degree 7 exact, degree 8 not
  auto integrate_power = [&](int p) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
    return s;
  };
  for (int p = 0; p <= 7; ++p) {
    const double exact = (std::pow(2.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
    CHECK(std::abs(integrate_power(p) - exact) < 1e-12);
  }
  CHECK(std::abs(integrate_power(8) - (std::pow(2.0, 9) + 1) / 9) > 1e-6);
  const auto one = gauss_legendre(1, 0.0, 2.0);
  CHECK(one.nodes[0] == doctest::Approx(1.0));
  CHECK(one.weights[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(gauss_legendre(0, 0, 1), DomainError);
  CHECK_THROWS_AS(periodic_trapezoid(3, 1, 1), DomainError);
}

TEST_CASE("doubling and product grids") {
  const auto d = doubled(gauss_legendre(5, 0, 1));
  CHECK(d.size() == 10);
  CHECK(d.kind == RuleKind::gauss_legendre);
  const auto disc = discrete_rule({1.0, -1.0});
  CHECK(doubled(disc).weights == disc.weights);
  const ProductGrid g({periodic_trapezoid(3, 0, 1), disc, gauss_legendre(4, 0, 1)});
  CHECK(g.total_points() == 24);
  CHECK(g.doubled().total_points() == 6 * 2 * 8);
}

TEST_CASE("node order is lexicographic with the last factor fastest") {
  const ProductGrid g({discrete_rule({1, 1, 1}), discrete_rule({1, 1})});
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  // weights are one; record indices through the integrand in a single block
  const NodeFunction f = [&](const NodeView& v) {
    seen.emplace_back(v.index[0], v.index[1]);
    return 0.0;
  };
  weighted_sum(g, f, ReductionOptions{1});
  const std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 0}, {0, 1}, {1, 0},
                                                                    {1, 1}, {2, 0}, {2, 1}};
  CHECK(seen == expected);
}

TEST_CASE("spec examples for integrate") {
  const auto one = integrate(torus(16), pointwise([](std::span<const double>) { return 1.0; }));
  CHECK(one.value == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-14));
  const auto orth = integrate(
      torus(16), pointwise([](std::span<const double> x) { return std::sin(x[0]) * std::cos(x[1]); }));
  CHECK(std::abs(orth.value) < 1e-14);
  CHECK(orth.error_estimate >= 0.0);
  // constant-distance factorization: alpha = pi/2, phi_11(pi/2) = 1/2
  const auto ex1 = integrate(torus(8), pointwise([](std::span<const double>) { return 0.5; }));
  CHECK(ex1.value == doctest::Approx(kTwoPi * kTwoPi * 0.5).epsilon(1e-14));
}

TEST_CASE("non-finite values name the node") {
  const auto f = pointwise([](std::span<const double> x) {
    return x[0] > 3.0 ? std::numeric_limits<double>::infinity() : 1.0;
  });
  try {
    integrate(torus(4), f);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("3.14159") != std::string::npos);
  }
}

TEST_CASE("refine_until") {
  const auto smooth = pointwise([](std::span<const double> x) {
    return std::exp(std::cos(x[0])) * std::exp(std::sin(2 * x[1]));
  });
  const auto coarse = refine_until(torus(4), smooth, std::numeric_limits<double>::infinity(), 5);
  const auto base = integrate(torus(4), smooth);
  CHECK(coarse.levels_used == 0);
  CHECK(coarse.value == base.value);
  CHECK(coarse.converged);

  const auto e = refine_until(torus(4), smooth, 1e-12, 6);
  CHECK(e.converged);
  CHECK(e.error_estimate < 1e-12);
  // both factors integrate to 2 pi I0(1)
  const double i0 = std::cyl_bessel_i(0.0, 1.0);
  CHECK(e.value == doctest::Approx(kTwoPi * kTwoPi * i0 * i0).epsilon(1e-12));

  // spectral decay: once resolved, each doubling cuts the error by more than 10x
  double previous = std::numeric_limits<double>::infinity();
  int drops = 0;
  for (int m = 4; m <= 16; m *= 2) {
    const double err = integrate(torus(m), smooth).error_estimate;
    if (err > 1e-13 && err * 10 < previous) ++drops;
    previous = err;
  }
  CHECK(drops >= 2);

  const auto capped = refine_until(torus(2), smooth, 1e-300, 1);
  CHECK_FALSE(capped.converged);
  CHECK(capped.levels_used == 1);
  CHECK_THROWS_AS(refine_until(torus(2), smooth, 0.0, 1), DomainError);
  CHECK_THROWS_AS(refine_until(torus(2), smooth, 1.0, -1), DomainError);
}

TEST_CASE("reduction is bit-identical across worker counts") {
  Gen g(99);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = g.uniform(-1, 1);
    const double b = g.uniform(-1, 1);
    const auto f = pointwise([a, b](std::span<const double> x) {
      return std::exp(a * std::sin(x[0]) + b * std::cos(3 * x[1])) * std::sin(x[2]);
    });
    const ProductGrid grid({periodic_trapezoid(37, 0, kTwoPi), periodic_trapezoid(29, 0, kTwoPi),
                            gauss_legendre(23, 0, kPi)});
    const double v1 = weighted_sum(grid, f(grid), ReductionOptions{1});
    for (int w : {2, 3, 8, 16}) {
      const double vw = weighted_sum(grid, f(grid), ReductionOptions{w});
      CHECK(std::memcmp(&v1, &vw, sizeof v1) == 0);
    }
  }
}

TEST_CASE("pairwise sum") {
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{1.5}) == 1.5);
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
}
