#include "linking/sphere_geom.hpp"

#include "linking/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace linking {

SpherePoint::SpherePoint(const Vector& coords) : coords_(coords) {
  if (coords_.size() < 2 || coords_.size() > kMaxAmbient) {
    throw DomainError("SpherePoint: ambient length must be in [2, " +
                      std::to_string(kMaxAmbient) + "], got " +
                      std::to_string(coords_.size()));
  }
  const double norm = coords_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("SpherePoint: cannot normalize a zero or non-finite vector");
  }
  coords_ /= norm;
}

SpherePoint SpherePoint::axis(int n, int i) {
  if (i < 0 || i > n) throw DomainError("SpherePoint::axis: index out of range");
  Vector v = Vector::Zero(n + 1);
  v[i] = 1.0;
  return SpherePoint(v);
}

PairGeometry geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  if (x.n() != y.n()) {
    throw DimensionError("geodesic_distance: points live in S^" + std::to_string(x.n()) +
                         " and S^" + std::to_string(y.n()));
  }
  const double c = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  PairGeometry g;
  g.alpha = std::acos(c);
  g.cos_alpha = c;
  g.sin_alpha = std::sin(g.alpha);
  return g;
}

double determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant: matrix is not square");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

double bracket_form(const TangentColumns& x, const TangentColumns& y) {
  const int rows = x.base.n() + 1;
  if (y.base.n() + 1 != rows) {
    throw DimensionError("bracket_form: x and y have different ambient dimensions");
  }
  const int k = x.dim();
  const int l = y.dim();
  if (x.columns.rows() != rows || y.columns.rows() != rows) {
    throw DimensionError("bracket_form: tangent column length differs from ambient");
  }
  if (k + l + 2 != rows) {
    throw DimensionError("bracket_form: need k + l + 2 = n + 1 columns, got " +
                         std::to_string(k + l + 2) + " for n + 1 = " + std::to_string(rows));
  }
  Matrix m(rows, rows);
  m.col(0) = x.base.coords();
  m.middleCols(1, k) = x.columns;
  m.col(k + 1) = y.base.coords();
  m.middleCols(k + 2, l) = y.columns;
  return determinant(m);
}

double gamma_half_integer(int m) {
  if (m <= 0) throw DomainError("gamma_half_integer: argument must be positive");
  // Gamma(x + 1) = x Gamma(x), walking up from 1/2 or 1.
  double g = (m % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int j = (m % 2 == 0) ? 2 : 1; j + 2 <= m; j += 2) g *= 0.5 * j;
  return g;
}

double sphere_volume(int n) {
  if (n <= 0) throw DomainError("sphere_volume: n must be >= 1, got " + std::to_string(n));
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / gamma_half_integer(n + 1);
}

SpherePoint antipode(const SpherePoint& x) { return SpherePoint(-x.coords()); }

Rotation::Rotation(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw DimensionError("Rotation: matrix must be square of size >= 2");
  }
  const Matrix gram = m.transpose() * m;
  const double defect = (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw DomainError("Rotation: matrix is not orthogonal (|R^T R - I| = " +
                      std::to_string(defect) + ")");
  }
  const double det = determinant(m);
  if (std::abs(det - 1.0) > 1e-10) {
    throw DomainError("Rotation: determinant must be +1, got " + std::to_string(det));
  }
}

Rotation Rotation::identity(int n) {
  return Rotation(Matrix::Identity(n + 1, n + 1), Unchecked{});
}

Rotation Rotation::from_givens(int n, std::span<const GivensRotation> steps) {
  Matrix r = Matrix::Identity(n + 1, n + 1);
  for (const auto& g : steps) {
    if (g.i < 0 || g.j < 0 || g.i > n || g.j > n || g.i == g.j) {
      throw DomainError("Rotation::from_givens: invalid plane (" + std::to_string(g.i) + ", " +
                        std::to_string(g.j) + ")");
    }
    Matrix step = Matrix::Identity(n + 1, n + 1);
    const double c = std::cos(g.angle);
    const double s = std::sin(g.angle);
    step(g.i, g.i) = c;
    step(g.j, g.j) = c;
    step(g.j, g.i) = s;
    step(g.i, g.j) = -s;
    r = step * r;
  }
  return Rotation(r);
}

Rotation Rotation::random(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n + 1, n + 1);
  for (int j = 0; j < n + 1; ++j)
    for (int i = 0; i < n + 1; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < n + 1; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (determinant(q) < 0) q.col(0) *= -1.0;
  return Rotation(q);
}

Vector Rotation::apply(const Vector& v) const {
  if (v.size() != m_.rows()) throw DimensionError("Rotation::apply: dimension mismatch");
  return m_ * v;
}

SpherePoint Rotation::apply(const SpherePoint& x) const { return SpherePoint(apply(x.coords())); }

SpherePoint apply_rotation(const Rotation& r, const SpherePoint& x) { return r.apply(x); }

}  // namespace linking
