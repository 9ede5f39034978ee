#pragma once

// Ambient primitives on the unit sphere S^n in R^{n+1}.
//
// Orientation convention (normative for the whole library): a basis
// A_1..A_n of T_p S^n is positive iff (p, A_1, ..., A_n) is a positive basis
// of R^{n+1}. bracket_form() uses exactly this column order.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace linking {

/// Largest supported ambient dimension n + 1 (S^8 in R^9).
inline constexpr int kMaxAmbient = 9;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAmbient, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                             kMaxAmbient, kMaxAmbient>;

/// A point of S^n, stored as a unit vector of length n + 1.
class SpherePoint {
 public:
  /// Normalizes `coords`. Throws DomainError for a zero vector or length < 2.
  explicit SpherePoint(const Vector& coords);

  /// The i-th coordinate axis of R^{n+1}.
  static SpherePoint axis(int n, int i);

  const Vector& coords() const { return coords_; }
  int n() const { return static_cast<int>(coords_.size()) - 1; }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vector coords_;
};

/// A base point together with the partial derivatives of an embedding.
/// Column order fixes the orientation of the parametrization.
struct TangentColumns {
  SpherePoint base;
  Matrix columns;  // (n + 1) x dim, not required unit or orthogonal

  int dim() const { return static_cast<int>(columns.cols()); }
};

struct PairGeometry {
  double alpha = 0.0;  // geodesic distance in [0, pi]
  double cos_alpha = 1.0;
  double sin_alpha = 0.0;
};

PairGeometry geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// det(x, dx_1..dx_k, y, dy_1..dy_l), the (n+1)x(n+1) bracket [x, dx, y, dy].
double bracket_form(const TangentColumns& x, const TangentColumns& y);

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& m);

/// vol S^n = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

/// Gamma(m / 2) for a positive integer m, by recurrence from Gamma(1/2), Gamma(1).
double gamma_half_integer(int m);

SpherePoint antipode(const SpherePoint& x);

/// A single rotation by `angle` in the oriented coordinate plane (i, j):
/// e_i -> cos e_i + sin e_j.
struct GivensRotation {
  int i = 0;
  int j = 1;
  double angle = 0.0;
};

/// An element of SO(n+1).
class Rotation {
 public:
  /// Validates R^T R = I and det R = +1 to 1e-10.
  explicit Rotation(const Matrix& m);

  static Rotation identity(int n);
  /// Composition applied in list order: the first entry acts first.
  static Rotation from_givens(int n, std::span<const GivensRotation> steps);
  /// Haar-distributed rotation from a seeded Mersenne twister.
  static Rotation random(int n, std::uint64_t seed);

  const Matrix& matrix() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()) - 1; }

  Vector apply(const Vector& v) const;
  SpherePoint apply(const SpherePoint& x) const;

 private:
  struct Unchecked {};
  Rotation(const Matrix& m, Unchecked) : m_(m) {}
  Matrix m_;
};

SpherePoint apply_rotation(const Rotation& r, const SpherePoint& x);

}  // namespace linking
