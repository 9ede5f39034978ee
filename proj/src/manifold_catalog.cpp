#include "linking/manifold_catalog.hpp"

#include "linking/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace linking {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_params(std::span<const double> params, std::size_t expected, const char* who) {
  if (params.size() != expected) {
    throw DimensionError(std::string(who) + ": expected " + std::to_string(expected) +
                         " chart parameters, got " + std::to_string(params.size()));
  }
}

class ChartedSubmanifold : public OrientedSubmanifold {
 public:
  ChartedSubmanifold(int dim, int ambient_n, std::vector<ChartAxis> chart)
      : dim_(dim), ambient_n_(ambient_n), chart_(std::move(chart)) {}

  int dim() const override { return dim_; }
  int ambient_n() const override { return ambient_n_; }
  const std::vector<ChartAxis>& chart() const override { return chart_; }

 private:
  int dim_;
  int ambient_n_;
  std::vector<ChartAxis> chart_;
};

class GreatSubsphere final : public ChartedSubmanifold {
 public:
  GreatSubsphere(int k, std::vector<int> axes, int n)
      : ChartedSubmanifold(k, n, k == 0 ? std::vector{ChartAxis::discrete({1.0, -1.0})}
                                         : unit_sphere_axes(k)),
        axes_(std::move(axes)) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    const int n = ambient_n();
    if (dim() == 0) {
      require_params(params, 1, "great_subsphere");
      Vector v = Vector::Zero(n + 1);
      v[axes_[0]] = params[0] < 0.5 ? 1.0 : -1.0;
      return {SpherePoint(v), Matrix(n + 1, 0)};
    }
    require_params(params, static_cast<std::size_t>(dim()), "great_subsphere");
    const auto u = unit_sphere_chart(dim(), params);
    Vector p = Vector::Zero(n + 1);
    Matrix cols = Matrix::Zero(n + 1, dim());
    for (int i = 0; i <= dim(); ++i) {
      p[axes_[i]] = u.point[i];
      cols.row(axes_[i]) = u.jacobian.row(i);
    }
    return {SpherePoint(p), cols};
  }

  std::string describe() const override { return "great_subsphere"; }

 private:
  std::vector<int> axes_;
};

class HopfFiber final : public ChartedSubmanifold {
 public:
  explicit HopfFiber(const std::array<double, 4>& b)
      : ChartedSubmanifold(1, 3, {ChartAxis::periodic(0.0, kTwoPi)}), b_(b) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    require_params(params, 1, "hopf_fiber");
    const double c = std::cos(params[0]);
    const double s = std::sin(params[0]);
    Vector p(4);
    p << b_[0] * c - b_[1] * s, b_[0] * s + b_[1] * c, b_[2] * c - b_[3] * s,
        b_[2] * s + b_[3] * c;
    Matrix t(4, 1);
    t << -b_[0] * s - b_[1] * c, b_[0] * c - b_[1] * s, -b_[2] * s - b_[3] * c,
        b_[2] * c - b_[3] * s;
    return {SpherePoint(p), t};
  }

  std::string describe() const override { return "hopf_fiber"; }

 private:
  std::array<double, 4> b_;
};

class CliffordTorusCurve final : public ChartedSubmanifold {
 public:
  CliffordTorusCurve(int p, int q, double phase)
      : ChartedSubmanifold(1, 3, {ChartAxis::periodic(0.0, kTwoPi)}), p_(p), q_(q), phase_(phase) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    require_params(params, 1, "clifford_torus_curve");
    const double s = params[0];
    const double a = p_ * s;
    const double b = q_ * s + phase_;
    const double r = std::numbers::sqrt2 / 2.0;
    Vector x(4);
    x << r * std::cos(a), r * std::sin(a), r * std::cos(b), r * std::sin(b);
    Matrix t(4, 1);
    t << -r * p_ * std::sin(a), r * p_ * std::cos(a), -r * q_ * std::sin(b), r * q_ * std::cos(b);
    return {SpherePoint(x), t};
  }

  std::string describe() const override { return "clifford_torus_curve"; }

 private:
  int p_;
  int q_;
  double phase_;
};

class SmallRoundSphere final : public ChartedSubmanifold {
 public:
  SmallRoundSphere(int k, const SpherePoint& center, double radius, Matrix frame)
      : ChartedSubmanifold(k, center.n(), k == 0 ? std::vector{ChartAxis::discrete({1.0, -1.0})}
                                                 : unit_sphere_axes(k)),
        center_(center.coords()),
        cos_r_(std::cos(radius)),
        sin_r_(std::sin(radius)),
        frame_(std::move(frame)) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    const int n = ambient_n();
    if (dim() == 0) {
      require_params(params, 1, "small_round_sphere");
      const double sign = params[0] < 0.5 ? 1.0 : -1.0;
      return {SpherePoint(Vector(cos_r_ * center_ + sin_r_ * sign * frame_.col(0))),
              Matrix(n + 1, 0)};
    }
    require_params(params, static_cast<std::size_t>(dim()), "small_round_sphere");
    const auto u = unit_sphere_chart(dim(), params);
    Vector p = cos_r_ * center_ + sin_r_ * (frame_ * u.point);
    Matrix cols = sin_r_ * (frame_ * u.jacobian);
    return {SpherePoint(p), cols};
  }

  std::string describe() const override { return "small_round_sphere"; }

 private:
  Vector center_;
  double cos_r_;
  double sin_r_;
  Matrix frame_;  // (n + 1) x (k + 1)
};

class RotatedSubmanifold final : public ChartedSubmanifold {
 public:
  RotatedSubmanifold(Submanifold inner, Rotation r)
      : ChartedSubmanifold(inner->dim(), inner->ambient_n(), inner->chart()),
        inner_(std::move(inner)),
        r_(std::move(r)) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    const auto t = inner_->evaluate(params);
    Matrix cols = r_.matrix() * t.columns;
    return {r_.apply(t.base), cols};
  }

  std::string describe() const override { return "rotated(" + inner_->describe() + ")"; }

 private:
  Submanifold inner_;
  Rotation r_;
};

class AntipodalImage final : public ChartedSubmanifold {
 public:
  explicit AntipodalImage(Submanifold inner)
      : ChartedSubmanifold(inner->dim(), inner->ambient_n(), inner->chart()),
        inner_(std::move(inner)) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    const auto t = inner_->evaluate(params);
    Matrix cols = -t.columns;
    return {antipode(t.base), cols};
  }

  std::string describe() const override { return "antipodal_image(" + inner_->describe() + ")"; }

 private:
  Submanifold inner_;
};

std::vector<ChartAxis> reversed_chart(const std::vector<ChartAxis>& chart) {
  std::vector<ChartAxis> out = chart;
  if (!out.empty() && out[0].kind == AxisKind::discrete) {
    for (double& s : out[0].signs) s = -s;
  }
  return out;
}

class ReversedSubmanifold final : public ChartedSubmanifold {
 public:
  explicit ReversedSubmanifold(Submanifold inner)
      : ChartedSubmanifold(inner->dim(), inner->ambient_n(), reversed_chart(inner->chart())),
        inner_(std::move(inner)) {}

  TangentColumns evaluate(std::span<const double> params) const override {
    if (dim() == 0) return inner_->evaluate(params);
    std::vector<double> p(params.begin(), params.end());
    const ChartAxis& first = chart()[0];
    p[0] = first.lo + first.hi - p[0];
    auto t = inner_->evaluate(p);
    t.columns.col(0) *= -1.0;
    return t;
  }

  std::string describe() const override { return "reversed(" + inner_->describe() + ")"; }

 private:
  Submanifold inner_;
};

class FourierCurve final : public ChartedSubmanifold {
 public:
  explicit FourierCurve(std::vector<FourierHarmonic> harmonics, int n)
      : ChartedSubmanifold(1, n, {ChartAxis::periodic(0.0, kTwoPi)}),
        harmonics_(std::move(harmonics)) {}

  // c(s) and c'(s).
  std::pair<Vector, Vector> raw(double s) const {
    const int len = ambient_n() + 1;
    Vector c = Vector::Zero(len);
    Vector dc = Vector::Zero(len);
    for (std::size_t h = 0; h < harmonics_.size(); ++h) {
      const double w = static_cast<double>(h);
      const double cs = std::cos(w * s);
      const double sn = std::sin(w * s);
      c += cs * harmonics_[h].cos_coeff + sn * harmonics_[h].sin_coeff;
      dc += w * (cs * harmonics_[h].sin_coeff - sn * harmonics_[h].cos_coeff);
    }
    return {c, dc};
  }

  TangentColumns evaluate(std::span<const double> params) const override {
    require_params(params, 1, "fourier_curve");
    const auto [c, dc] = raw(params[0]);
    const double norm = c.norm();
    Vector x = c / norm;
    Matrix t(c.size(), 1);
    // d/ds (c / |c|) = (c' - x (x . c')) / |c|
    t.col(0) = (dc - x * x.dot(dc)) / norm;
    return {SpherePoint(x), t};
  }

  std::string describe() const override { return "fourier_curve"; }

 private:
  std::vector<FourierHarmonic> harmonics_;
};

}  // namespace

UnitSphereChartValue unit_sphere_chart(int k, std::span<const double> params) {
  if (k < 1) throw DomainError("unit_sphere_chart: k must be >= 1");
  require_params(params, static_cast<std::size_t>(k), "unit_sphere_chart");
  // u_i = (prod_{j<i} sin theta_j) cos theta_i for i < k - 1, last two use phi.
  Vector u(k + 1);
  Matrix jac = Matrix::Zero(k + 1, k);
  // prefix[i] = prod_{j<i} sin(params[j])
  std::array<double, kMaxAmbient> sines{};
  std::array<double, kMaxAmbient> cosines{};
  for (int j = 0; j < k; ++j) {
    sines[j] = std::sin(params[j]);
    cosines[j] = std::cos(params[j]);
  }
  for (int i = 0; i <= k; ++i) {
    // coordinate i depends on angles 0..min(i, k-1)
    const int last = std::min(i, k - 1);
    const bool use_sin_last = (i == k);
    double value = 1.0;
    for (int j = 0; j < last; ++j) value *= sines[j];
    value *= use_sin_last ? sines[last] : cosines[last];
    u[i] = value;
    for (int d = 0; d <= last; ++d) {
      double deriv = 1.0;
      for (int j = 0; j < last; ++j) deriv *= (j == d) ? cosines[j] : sines[j];
      if (d == last) {
        deriv *= use_sin_last ? cosines[last] : -sines[last];
      } else {
        deriv *= use_sin_last ? sines[last] : cosines[last];
      }
      jac(i, d) = deriv;
    }
  }
  return {u, jac};
}

std::vector<ChartAxis> unit_sphere_axes(int k) {
  std::vector<ChartAxis> axes;
  for (int i = 0; i + 1 < k; ++i) axes.push_back(ChartAxis::interval(0.0, std::numbers::pi));
  axes.push_back(ChartAxis::periodic(0.0, kTwoPi));
  return axes;
}

void validate_submanifold(const OrientedSubmanifold& m, int nodes_per_axis) {
  const auto& chart = m.chart();
  const int n = m.ambient_n();
  std::vector<std::vector<double>> samples;
  for (const auto& axis : chart) {
    std::vector<double> pts;
    if (axis.kind == AxisKind::discrete) {
      for (std::size_t i = 0; i < axis.signs.size(); ++i) pts.push_back(static_cast<double>(i));
    } else {
      for (int i = 0; i < nodes_per_axis; ++i)
        pts.push_back(axis.lo + (axis.hi - axis.lo) * (i + 0.5) / nodes_per_axis);
    }
    samples.push_back(std::move(pts));
  }
  std::vector<std::size_t> idx(samples.size(), 0);
  std::vector<double> p(samples.size());
  while (true) {
    for (std::size_t a = 0; a < samples.size(); ++a) p[a] = samples[a][idx[a]];
    const auto t = m.evaluate(p);
    if (t.base.n() != n || t.dim() != m.dim()) {
      throw DimensionError(m.describe() + ": evaluate returned inconsistent dimensions");
    }
    const double tangency = (t.columns.transpose() * t.base.coords()).cwiseAbs().maxCoeff();
    if (m.dim() > 0 && tangency > 1e-9) {
      throw DomainError(m.describe() + ": tangent column not orthogonal to base point");
    }
    if (m.dim() > 0) {
      const double gram = determinant(t.columns.transpose() * t.columns);
      if (!(gram > 1e-18)) {
        throw DomainError(m.describe() + ": rank-deficient Jacobian at a sample point");
      }
    }
    std::size_t a = samples.size();
    while (a > 0) {
      --a;
      if (++idx[a] < samples[a].size()) break;
      idx[a] = 0;
      if (a == 0) return;
    }
    if (samples.empty()) return;
  }
}

Submanifold great_subsphere(int k, const std::vector<int>& axes, int ambient_n) {
  if (ambient_n < 1 || ambient_n + 1 > kMaxAmbient) {
    throw DomainError("great_subsphere: ambient n out of range");
  }
  if (k < 0 || k > ambient_n - 1) {
    throw DomainError("great_subsphere: need 0 <= k <= n - 1");
  }
  if (static_cast<int>(axes.size()) != k + 1) {
    throw DimensionError("great_subsphere: need k + 1 = " + std::to_string(k + 1) + " axes, got " +
                         std::to_string(axes.size()));
  }
  std::set<int> seen;
  for (int a : axes) {
    if (a < 0 || a > ambient_n) {
      throw DomainError("great_subsphere: axis " + std::to_string(a) + " outside 0.." +
                        std::to_string(ambient_n));
    }
    if (!seen.insert(a).second) {
      throw DomainError("great_subsphere: duplicate axis " + std::to_string(a));
    }
  }
  return std::make_shared<GreatSubsphere>(k, axes, ambient_n);
}

Submanifold hopf_fiber(const std::array<double, 4>& base) {
  const double norm2 = base[0] * base[0] + base[1] * base[1] + base[2] * base[2] + base[3] * base[3];
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw DomainError("hopf_fiber: base (z1, z2) must be a unit vector");
  }
  return std::make_shared<HopfFiber>(base);
}

Submanifold clifford_torus_curve(int p, int q, double phase) {
  if (p == 0 && q == 0) throw DomainError("clifford_torus_curve: (p, q) must not be (0, 0)");
  if (std::gcd(p, q) != 1) {
    throw DomainError("clifford_torus_curve: gcd(|p|, |q|) must be 1 for an embedded curve");
  }
  if (!std::isfinite(phase)) throw DomainError("clifford_torus_curve: phase must be finite");
  return std::make_shared<CliffordTorusCurve>(p, q, phase);
}

Submanifold small_round_sphere(int k, const SpherePoint& center, double angular_radius,
                               const std::vector<Vector>& frame) {
  const int n = center.n();
  if (k < 0 || k > n - 1) throw DomainError("small_round_sphere: need 0 <= k <= n - 1");
  if (!(angular_radius > 0.0) || angular_radius > std::numbers::pi / 2 + 1e-15) {
    throw DomainError("small_round_sphere: angular radius must lie in (0, pi/2]");
  }
  if (static_cast<int>(frame.size()) != k + 1) {
    throw DimensionError("small_round_sphere: frame must hold k + 1 vectors");
  }
  Matrix f(n + 1, k + 1);
  for (int i = 0; i <= k; ++i) {
    if (frame[i].size() != n + 1) throw DimensionError("small_round_sphere: frame vector length");
    f.col(i) = frame[i];
  }
  const double orth = (f.transpose() * f - Matrix::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff();
  if (orth > 1e-10) throw DomainError("small_round_sphere: frame is not orthonormal");
  if ((f.transpose() * center.coords()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("small_round_sphere: frame is not orthogonal to the center");
  }
  return std::make_shared<SmallRoundSphere>(k, center, angular_radius, f);
}

Submanifold rotated(const Submanifold& m, const Rotation& r) {
  if (r.n() != m->ambient_n()) throw DimensionError("rotated: rotation acts on a different S^n");
  return std::make_shared<RotatedSubmanifold>(m, r);
}

Submanifold antipodal_image(const Submanifold& m) { return std::make_shared<AntipodalImage>(m); }

Submanifold reversed(const Submanifold& m) { return std::make_shared<ReversedSubmanifold>(m); }

Submanifold fourier_curve(const std::vector<FourierHarmonic>& harmonics) {
  if (harmonics.empty()) throw DomainError("fourier_curve: no coefficients");
  const auto len = harmonics[0].cos_coeff.size();
  if (len < 2 || len > kMaxAmbient) throw DimensionError("fourier_curve: bad coefficient length");
  for (const auto& h : harmonics) {
    if (h.cos_coeff.size() != len || h.sin_coeff.size() != len) {
      throw DimensionError("fourier_curve: coefficient vectors differ in length");
    }
  }
  auto curve = std::make_shared<FourierCurve>(harmonics, static_cast<int>(len) - 1);
  constexpr int kDense = 4096;
  for (int i = 0; i < kDense; ++i) {
    const double s = kTwoPi * i / kDense;
    const auto [c, dc] = curve->raw(s);
    if (c.norm() < 1e-6) {
      throw DomainError("fourier_curve: degenerate curve, |c(s)| < 1e-6 at s = " +
                        std::to_string(s));
    }
    const auto t = curve->evaluate(std::span<const double>(&s, 1));
    if (t.columns.norm() < 1e-9) {
      throw DomainError("fourier_curve: vanishing tangent at s = " + std::to_string(s));
    }
  }
  return curve;
}

std::vector<FourierHarmonic> random_fourier_harmonics(int ambient_n, int axis_a, int axis_b,
                                                      int harmonics, double amplitude,
                                                      std::uint64_t seed) {
  if (ambient_n < 1 || ambient_n + 1 > kMaxAmbient) {
    throw DimensionError("random_fourier_harmonics: ambient dimension out of range");
  }
  if (axis_a == axis_b || axis_a < 0 || axis_b < 0 || axis_a > ambient_n || axis_b > ambient_n) {
    throw DimensionError("random_fourier_harmonics: axes must be distinct and in [0, n]");
  }
  if (harmonics < 1) throw DomainError("random_fourier_harmonics: need at least one harmonic");
  std::mt19937_64 rng(seed);
  // map raw 64-bit draws to [-1, 1) ourselves; distribution objects are not portable
  auto draw = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
  std::vector<FourierHarmonic> out;
  for (int h = 0; h <= harmonics; ++h) {
    FourierHarmonic f{Vector::Zero(ambient_n + 1), Vector::Zero(ambient_n + 1)};
    for (int i = 0; i <= ambient_n; ++i) {
      f.cos_coeff[i] = amplitude * draw() / (h + 1);
      f.sin_coeff[i] = h == 0 ? 0.0 : amplitude * draw() / (h + 1);
    }
    if (h == 1) {
      f.cos_coeff[axis_a] += 1.0;
      f.sin_coeff[axis_b] += 1.0;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string CatalogEntry::kind() const {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GreatSubsphereSpec>) return "great_subsphere";
        else if constexpr (std::is_same_v<T, HopfFiberSpec>) return "hopf_fiber";
        else if constexpr (std::is_same_v<T, CliffordTorusCurveSpec>) return "clifford_torus_curve";
        else if constexpr (std::is_same_v<T, SmallRoundSphereSpec>) return "small_round_sphere";
        else if constexpr (std::is_same_v<T, FourierCurveSpec>) return "fourier_curve";
        else if constexpr (std::is_same_v<T, RotatedSpec>) return "rotated";
        else if constexpr (std::is_same_v<T, AntipodalImageSpec>) return "antipodal_image";
        else return "reversed";
      },
      params);
}

Submanifold build(const CatalogEntry& entry, int ambient_n) {
  Submanifold m = std::visit(
      [ambient_n](const auto& p) -> Submanifold {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GreatSubsphereSpec>) {
          return great_subsphere(p.k, p.axes, ambient_n);
        } else if constexpr (std::is_same_v<T, HopfFiberSpec>) {
          return hopf_fiber(p.base);
        } else if constexpr (std::is_same_v<T, CliffordTorusCurveSpec>) {
          return clifford_torus_curve(p.p, p.q, p.phase);
        } else if constexpr (std::is_same_v<T, SmallRoundSphereSpec>) {
          return small_round_sphere(p.k, SpherePoint(p.center), p.angular_radius, p.frame);
        } else if constexpr (std::is_same_v<T, FourierCurveSpec>) {
          return fourier_curve(p.harmonics);
        } else if constexpr (std::is_same_v<T, RotatedSpec>) {
          return rotated(build(*p.base, ambient_n), Rotation::from_givens(ambient_n, p.givens));
        } else if constexpr (std::is_same_v<T, AntipodalImageSpec>) {
          return antipodal_image(build(*p.base, ambient_n));
        } else {
          return reversed(build(*p.base, ambient_n));
        }
      },
      entry.params);
  if (m->ambient_n() != ambient_n) {
    throw DimensionError(entry.kind() + " lives in S^" + std::to_string(m->ambient_n()) +
                         " but the link spec declares ambient_n = " + std::to_string(ambient_n));
  }
  validate_submanifold(*m);
  return m;
}

}  // namespace linking
