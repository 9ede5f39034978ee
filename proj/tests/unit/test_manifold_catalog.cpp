#include "fixtures.hpp"
#include "linking/errors.hpp"
#include "linking/manifold_catalog.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace linking;
using fixtures::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_params(Gen& g, const OrientedSubmanifold& m) {
  std::vector<double> p;
  for (const auto& axis : m.chart()) {
    if (axis.kind == AxisKind::discrete) {
      p.push_back(static_cast<double>(g.integer(0, static_cast<int>(axis.signs.size()) - 1)));
    } else {
      // stay off the chart poles where interval axes degenerate
      p.push_back(g.uniform(axis.lo + 0.05 * (axis.hi - axis.lo), axis.hi - 0.05 * (axis.hi - axis.lo)));
    }
  }
  return p;
}

// Central differences of the base point against the analytic tangent columns.
double jacobian_mismatch(const OrientedSubmanifold& m, std::vector<double> p) {
  const double h = 1e-6;
  const auto t = m.evaluate(p);
  double worst = 0.0;
  for (int a = 0; a < m.dim(); ++a) {
    auto plus = p;
    auto minus = p;
    plus[a] += h;
    minus[a] -= h;
    const Vector fd = (m.evaluate(plus).base.coords() - m.evaluate(minus).base.coords()) / (2 * h);
    worst = std::max(worst, (fd - t.columns.col(a)).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<Submanifold> sample_manifolds() {
  std::vector<Submanifold> out;
  out.push_back(great_subsphere(1, {0, 1}, 3));
  out.push_back(great_subsphere(2, {3, 1, 4}, 4));
  out.push_back(great_subsphere(3, {0, 1, 2, 3}, 5));
  out.push_back(hopf_fiber({0.6, 0.0, 0.0, 0.8}));
  out.push_back(clifford_torus_curve(2, -3, 0.4));
  out.push_back(fixtures::meridian_pair(1, 2).L);
  out.push_back(fixtures::meridian_pair(2, 1).K);
  out.push_back(fourier_curve(random_fourier_harmonics(3, 0, 1, 3, 0.2, 5)));
  out.push_back(rotated(great_subsphere(2, {0, 1, 2}, 4), Rotation::random(4, 3)));
  out.push_back(antipodal_image(clifford_torus_curve(1, 2, 0.0)));
  out.push_back(reversed(great_subsphere(2, {0, 1, 2}, 3)));
  return out;
}

}  // namespace

TEST_CASE("hyperspherical chart is positively oriented with exact Jacobian") {
  Gen g(21);
  for (int k = 1; k <= 7; ++k) {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> p;
      for (int i = 0; i + 1 < k; ++i) p.push_back(g.uniform(0.05, kPi - 0.05));
      p.push_back(g.uniform(0.0, 2 * kPi));
      const auto u = unit_sphere_chart(k, p);
      CHECK(u.point.norm() == doctest::Approx(1.0).epsilon(1e-14));
      Matrix m(k + 1, k + 1);
      m.col(0) = u.point;
      m.rightCols(k) = u.jacobian;
      CHECK(determinant(m) > 0.0);
      const double h = 1e-6;
      for (int a = 0; a < k; ++a) {
        auto plus = p;
        auto minus = p;
        plus[a] += h;
        minus[a] -= h;
        const Vector fd =
            (unit_sphere_chart(k, plus).point - unit_sphere_chart(k, minus).point) / (2 * h);
        CHECK((fd - u.jacobian.col(a)).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
  CHECK_THROWS_AS(unit_sphere_chart(0, {}), DomainError);
}

TEST_CASE("every family: unit points, tangent columns match finite differences") {
  Gen g(4);
  for (const auto& m : sample_manifolds()) {
    CAPTURE(m->describe());
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_params(g, *m);
      const auto t = m->evaluate(p);
      CHECK(t.base.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(jacobian_mismatch(*m, p) < 1e-7);
    }
    CHECK_NOTHROW(validate_submanifold(*m));
  }
}

TEST_CASE("great subspheres") {
  const auto s = great_subsphere(1, {2, 3}, 3);
  const double p = 0.3;
  const auto t = s->evaluate(std::span(&p, 1));
  CHECK(t.base[2] == doctest::Approx(std::cos(0.3)));
  CHECK(t.base[3] == doctest::Approx(std::sin(0.3)));
  CHECK(t.base[0] == 0.0);

  const auto pts = great_subsphere(0, {1}, 2);
  REQUIRE(pts->chart().size() == 1);
  CHECK(pts->chart()[0].kind == AxisKind::discrete);
  CHECK(pts->chart()[0].signs == std::vector<double>{1.0, -1.0});
  const double first = 0.0;
  const double second = 1.0;
  CHECK(pts->evaluate(std::span(&first, 1)).base[1] == 1.0);
  CHECK(pts->evaluate(std::span(&second, 1)).base[1] == -1.0);

  CHECK_THROWS_AS(great_subsphere(1, {0, 1, 2}, 3), DimensionError);
  CHECK_THROWS_AS(great_subsphere(1, {0, 0}, 3), DomainError);
  CHECK_THROWS_AS(great_subsphere(1, {0, 4}, 3), DomainError);
  CHECK_THROWS_AS(great_subsphere(3, {0, 1, 2, 3}, 3), DomainError);
}

TEST_CASE("Hopf fibers are circle orbits at constant mutual distance") {
  const auto a = hopf_fiber({1, 0, 0, 0});
  const auto b = hopf_fiber({0.6, 0.0, 0.48, 0.64});
  double lo = 10.0;
  double hi = -10.0;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double s = 2 * kPi * i / 40;
      const double t = 2 * kPi * j / 40;
      const double d = geodesic_distance(a->evaluate(std::span(&s, 1)).base,
                                         b->evaluate(std::span(&t, 1)).base)
                           .alpha;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  // the minimum over the orbit is the same from every point; sampled min is close
  CHECK(lo == doctest::Approx(std::acos(0.6)).epsilon(1e-2));
  CHECK_THROWS_AS(hopf_fiber({1, 1, 0, 0}), DomainError);
}

TEST_CASE("Clifford torus curves") {
  const auto c = clifford_torus_curve(2, 3, 0.1);
  for (double s : {0.0, 1.0, 4.0}) {
    const auto x = c->evaluate(std::span(&s, 1)).base;
    CHECK(x[0] * x[0] + x[1] * x[1] == doctest::Approx(0.5));
    CHECK(x[2] * x[2] + x[3] * x[3] == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(clifford_torus_curve(0, 0, 0), DomainError);
  CHECK_THROWS_AS(clifford_torus_curve(2, 4, 0), DomainError);
  CHECK_NOTHROW(clifford_torus_curve(1, 0, 0));
  CHECK_NOTHROW(clifford_torus_curve(-2, 3, 0));
}

TEST_CASE("small round spheres sit at the requested radius") {
  const auto f = fixtures::meridian_pair(1, 2, 0.8, 0.5);
  Gen g(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(g, *f.K);
    CHECK(geodesic_distance(f.K->evaluate(p).base, SpherePoint::axis(4, 4)).alpha ==
          doctest::Approx(0.8));
  }
  const Vector c = fixtures::axis(3, 3);
  CHECK_THROWS_AS(small_round_sphere(1, SpherePoint(c), 2.0, {fixtures::axis(3, 0), fixtures::axis(3, 1)}),
                  DomainError);
  CHECK_THROWS_AS(small_round_sphere(1, SpherePoint(c), 0.5, {fixtures::axis(3, 0), fixtures::axis(3, 3)}),
                  DomainError);
  CHECK_THROWS_AS(small_round_sphere(1, SpherePoint(c), 0.5, {fixtures::axis(3, 0)}), DimensionError);
  Vector skew = fixtures::axis(3, 1) + 0.01 * fixtures::axis(3, 0);
  CHECK_THROWS_AS(small_round_sphere(1, SpherePoint(c), 0.5, {fixtures::axis(3, 0), skew}),
                  DomainError);
}

TEST_CASE("rotated, antipodal and reversed wrappers") {
  const auto base = clifford_torus_curve(1, 2, 0.3);
  const Rotation r = Rotation::random(3, 17);
  const auto rot = rotated(base, r);
  const auto neg = antipodal_image(base);
  const auto rev = reversed(base);
  for (double s : {0.2, 1.7, 3.0}) {
    const auto t = base->evaluate(std::span(&s, 1));
    const auto tr = rot->evaluate(std::span(&s, 1));
    CHECK((tr.base.coords() - r.matrix() * t.base.coords()).norm() < 1e-14);
    CHECK((tr.columns - r.matrix() * t.columns).norm() < 1e-14);
    const auto tn = neg->evaluate(std::span(&s, 1));
    CHECK((tn.base.coords() + t.base.coords()).norm() < 1e-15);
    CHECK((tn.columns + t.columns).norm() < 1e-15);
  }
  // reversal traverses the same set backwards
  const double s = 1.0;
  const double lo = rev->chart()[0].lo;
  const double hi = rev->chart()[0].hi;
  const double mirrored = lo + hi - s;
  const auto a = base->evaluate(std::span(&s, 1));
  const auto b = rev->evaluate(std::span(&mirrored, 1));
  CHECK((a.base.coords() - b.base.coords()).norm() < 1e-14);
  CHECK((a.columns + b.columns).norm() < 1e-14);

  const auto pts = reversed(great_subsphere(0, {0}, 1));
  CHECK(pts->chart()[0].signs == std::vector<double>{-1.0, 1.0});
  CHECK_THROWS_AS(rotated(base, Rotation::random(4, 1)), DimensionError);
}

TEST_CASE("Fourier curves") {
  const auto h1 = random_fourier_harmonics(3, 0, 1, 3, 0.2, 42);
  const auto h2 = random_fourier_harmonics(3, 0, 1, 3, 0.2, 42);
  const auto h3 = random_fourier_harmonics(3, 0, 1, 3, 0.2, 43);
  REQUIRE(h1.size() == 4);
  CHECK(h1[2].cos_coeff == h2[2].cos_coeff);
  CHECK(h1[2].cos_coeff != h3[2].cos_coeff);
  CHECK(h1[0].sin_coeff.isZero());

  // a pure great circle
  std::vector<FourierHarmonic> circle(2, {Vector::Zero(4), Vector::Zero(4)});
  circle[1].cos_coeff[0] = 2.0;
  circle[1].sin_coeff[1] = 2.0;
  const auto c = fourier_curve(circle);
  const double s = 0.9;
  const auto t = c->evaluate(std::span(&s, 1));
  CHECK(t.base[0] == doctest::Approx(std::cos(0.9)));
  CHECK(t.base[1] == doctest::Approx(std::sin(0.9)));
  CHECK(t.columns(0, 0) == doctest::Approx(-std::sin(0.9)));

  // c(s) passes through the origin
  std::vector<FourierHarmonic> bad(2, {Vector::Zero(4), Vector::Zero(4)});
  bad[1].cos_coeff[0] = 1.0;
  CHECK_THROWS_AS(fourier_curve(bad), DomainError);
  CHECK_THROWS_AS(fourier_curve({}), DomainError);
  CHECK_THROWS_AS(random_fourier_harmonics(3, 1, 1, 3, 0.2, 1), DimensionError);
}

TEST_CASE("validation catches a non-tangent column") {
  struct Broken final : OrientedSubmanifold {
    std::vector<ChartAxis> axes{ChartAxis::periodic(0.0, 1.0)};
    int dim() const override { return 1; }
    int ambient_n() const override { return 2; }
    const std::vector<ChartAxis>& chart() const override { return axes; }
    TangentColumns evaluate(std::span<const double>) const override {
      Matrix m(3, 1);
      m << 1.0, 0.0, 0.0;
      return {SpherePoint::axis(2, 0), m};
    }
    std::string describe() const override { return "broken"; }
  };
  CHECK_THROWS_AS(validate_submanifold(Broken{}), DomainError);
}

TEST_CASE("catalog entries build and check the ambient dimension") {
  CatalogEntry great{GreatSubsphereSpec{1, {0, 1}}};
  CHECK(great.kind() == "great_subsphere");
  CHECK(build(great, 3)->dim() == 1);

  auto base = std::make_shared<const CatalogEntry>(CatalogEntry{HopfFiberSpec{{1, 0, 0, 0}}});
  CatalogEntry rot{RotatedSpec{base, {{0, 2, 0.5}, {1, 3, -0.2}}}};
  CatalogEntry neg{AntipodalImageSpec{base}};
  CatalogEntry rev{ReversedSpec{base}};
  CHECK(rot.kind() == "rotated");
  CHECK(neg.kind() == "antipodal_image");
  CHECK(rev.kind() == "reversed");
  CHECK(build(rot, 3)->ambient_n() == 3);
  CHECK_THROWS_AS(build(neg, 4), DimensionError);
  CHECK(CatalogEntry{CliffordTorusCurveSpec{2, 3, 0.0}}.kind() == "clifford_torus_curve");
}
