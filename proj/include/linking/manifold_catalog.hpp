#pragma once

// Parametrized oriented submanifolds of S^n with analytic Jacobians.
//
// Every submanifold exposes a chart: an ordered list of axes whose order
// fixes the orientation. A k-dimensional manifold with k >= 1 has k axes,
// each periodic or a bounded interval. A 0-dimensional manifold is a finite
// signed point set and has a single discrete axis whose node i is the i-th
// point, weighted by its sign.

#include "linking/sphere_geom.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace linking {

using ParamPoint = std::vector<double>;

enum class AxisKind { periodic, interval, discrete };

struct ChartAxis {
  AxisKind kind = AxisKind::periodic;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> signs;  // discrete axes only, one entry per point

  static ChartAxis periodic(double lo, double hi) { return {AxisKind::periodic, lo, hi, {}}; }
  static ChartAxis interval(double lo, double hi) { return {AxisKind::interval, lo, hi, {}}; }
  static ChartAxis discrete(std::vector<double> signs) {
    const double count = static_cast<double>(signs.size());
    return {AxisKind::discrete, 0.0, count, std::move(signs)};
  }
};

class OrientedSubmanifold {
 public:
  virtual ~OrientedSubmanifold() = default;

  virtual int dim() const = 0;
  virtual int ambient_n() const = 0;
  virtual const std::vector<ChartAxis>& chart() const = 0;
  /// Base point and dim() tangent columns, in chart order.
  virtual TangentColumns evaluate(std::span<const double> params) const = 0;
  virtual std::string describe() const = 0;
};

using Submanifold = std::shared_ptr<const OrientedSubmanifold>;

/// Point on the unit sphere S^k in R^{k+1} in hyperspherical coordinates
/// (theta_1..theta_{k-1} in (0, pi), phi periodic) plus the Jacobian.
/// This coordinate order is positively oriented: det(u, du) > 0.
struct UnitSphereChartValue {
  Vector point;
  Matrix jacobian;  // (k + 1) x k
};
UnitSphereChartValue unit_sphere_chart(int k, std::span<const double> params);
std::vector<ChartAxis> unit_sphere_axes(int k);

// ---- catalog families ------------------------------------------------------

/// Unit k-sphere in the coordinate block spanned by `axes` (in that order).
/// k = 0 yields the signed pair {+e_a (+1), -e_a (-1)}.
Submanifold great_subsphere(int k, const std::vector<int>& axes, int ambient_n);

/// Orbit of (z1, z2) under e^{i theta}, base given as (Re z1, Im z1, Re z2, Im z2).
Submanifold hopf_fiber(const std::array<double, 4>& base);

/// s -> (cos ps, sin ps, cos(qs + phase), sin(qs + phase)) / sqrt 2.
/// Requires gcd(|p|, |q|) = 1 so the curve is embedded.
Submanifold clifford_torus_curve(int p, int q, double phase);

/// {cos r * center + sin r * (frame . u) : u in S^k}; frame is k + 1
/// orthonormal vectors orthogonal to center.
Submanifold small_round_sphere(int k, const SpherePoint& center, double angular_radius,
                               const std::vector<Vector>& frame);

Submanifold rotated(const Submanifold& m, const Rotation& r);
/// -m with orientation carried over by the antipodal map.
Submanifold antipodal_image(const Submanifold& m);
/// m with the opposite orientation (first chart axis reflected, or point signs negated).
Submanifold reversed(const Submanifold& m);

struct FourierHarmonic {
  Vector cos_coeff;
  Vector sin_coeff;
};

/// s -> c(s) / |c(s)|, c(s) = sum_h cos_coeff[h] cos(hs) + sin_coeff[h] sin(hs).
Submanifold fourier_curve(const std::vector<FourierHarmonic>& harmonics);

/// Great circle in axes (a, b) of S^n plus uniform noise of size `amplitude`/(h+1)
/// on harmonics 0..harmonics, drawn from mt19937_64(seed).
std::vector<FourierHarmonic> random_fourier_harmonics(int ambient_n, int axis_a, int axis_b,
                                                      int harmonics, double amplitude,
                                                      std::uint64_t seed);

/// Checks unit norm, tangency and tangent rank on a sample grid; throws DomainError.
void validate_submanifold(const OrientedSubmanifold& m, int nodes_per_axis = 24);

// ---- declarative catalog entries -------------------------------------------

struct CatalogEntry;
using CatalogEntryPtr = std::shared_ptr<const CatalogEntry>;

struct GreatSubsphereSpec {
  int k = 1;
  std::vector<int> axes;
};
struct HopfFiberSpec {
  std::array<double, 4> base{};
};
struct CliffordTorusCurveSpec {
  int p = 1;
  int q = 0;
  double phase = 0.0;
};
struct SmallRoundSphereSpec {
  int k = 1;
  Vector center;
  double angular_radius = 0.0;
  std::vector<Vector> frame;
};
struct FourierCurveSpec {
  std::vector<FourierHarmonic> harmonics;
};
struct RotatedSpec {
  CatalogEntryPtr base;
  std::vector<GivensRotation> givens;
};
struct AntipodalImageSpec {
  CatalogEntryPtr base;
};
struct ReversedSpec {
  CatalogEntryPtr base;
};

struct CatalogEntry {
  std::variant<GreatSubsphereSpec, HopfFiberSpec, CliffordTorusCurveSpec, SmallRoundSphereSpec,
               FourierCurveSpec, RotatedSpec, AntipodalImageSpec, ReversedSpec>
      params;

  std::string kind() const;
};

Submanifold build(const CatalogEntry& entry, int ambient_n);

}  // namespace linking
