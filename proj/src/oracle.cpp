#include "linking/oracle.hpp"

#include "linking/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace linking {

namespace {

void require_s3_curve(const OrientedSubmanifold& c, const char* who) {
  if (c.ambient_n() != 3 || c.dim() != 1 || c.chart().size() != 1 ||
      c.chart()[0].kind != AxisKind::periodic) {
    throw DimensionError(std::string(who) + ": the oracle needs closed curves in S^3");
  }
}

// Orthonormal basis of pole^perp with det(-pole, e1, e2, e3) > 0.
Eigen::Matrix<double, 4, 3> tangent_basis(const SpherePoint& pole) {
  const Eigen::Vector4d p = Eigen::Map<const Eigen::Vector4d>(pole.coords().data());
  Eigen::Matrix4d seed = Eigen::Matrix4d::Identity();
  seed.col(0) = p;
  // pick the three axes least aligned with p to complete the basis
  int skip = 0;
  p.cwiseAbs().maxCoeff(&skip);
  int c = 1;
  for (int i = 0; i < 4; ++i) {
    if (i == skip) continue;
    seed.col(c++) = Eigen::Vector4d::Unit(i);
  }
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(seed);
  Eigen::Matrix4d q = qr.householderQ();
  Eigen::Matrix<double, 4, 3> e = q.rightCols<3>();
  Eigen::Matrix4d m;
  m.col(0) = -p;
  m.rightCols<3>() = e;
  if (m.determinant() < 0) e.col(0) *= -1.0;
  return e;
}

}  // namespace

EuclideanCurve stereographic_project(const Submanifold& curve, const SpherePoint& pole,
                                     int validation_nodes) {
  require_s3_curve(*curve, "stereographic_project");
  if (pole.n() != 3) throw DimensionError("stereographic_project: pole must lie on S^3");
  const ChartAxis axis = curve->chart()[0];
  for (int i = 0; i < validation_nodes; ++i) {
    const double s = axis.lo + (axis.hi - axis.lo) * i / validation_nodes;
    const auto t = curve->evaluate(std::span<const double>(&s, 1));
    const double a = geodesic_distance(t.base, pole).alpha;
    if (!(a > 0.05)) {
      throw DomainError("stereographic_project: pole within 0.05 rad of the curve (s = " +
                        std::to_string(s) + ")");
    }
  }
  const Eigen::Matrix<double, 4, 3> e = tangent_basis(pole);
  const Eigen::Vector4d p = Eigen::Map<const Eigen::Vector4d>(pole.coords().data());
  EuclideanCurve out;
  out.start = axis.lo;
  out.period = axis.hi - axis.lo;
  out.evaluate = [curve, e, p](double s) {
    const auto t = curve->evaluate(std::span<const double>(&s, 1));
    const Eigen::Vector4d x = Eigen::Map<const Eigen::Vector4d>(t.base.coords().data());
    const Eigen::Vector4d v = Eigen::Map<const Eigen::Vector4d>(t.columns.col(0).data());
    const double denom = 1.0 - p.dot(x);
    EuclideanSample sample;
    sample.point = e.transpose() * x / denom;
    sample.velocity = e.transpose() * v / denom + e.transpose() * x * (p.dot(v) / (denom * denom));
    return sample;
  };
  return out;
}

std::vector<SpherePoint> candidate_poles() {
  std::vector<SpherePoint> poles;
  for (int i = 0; i < 4; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector v = Vector::Zero(4);
      v[i] = sign;
      poles.emplace_back(v);
    }
  }
  // twelve of the sixteen (+-1, +-1, +-1, +-1)/2 directions
  for (int mask = 0; mask < 12; ++mask) {
    Vector v(4);
    for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1 ? -0.5 : 0.5;
    poles.emplace_back(v);
  }
  return poles;
}

SpherePoint choose_pole(const Submanifold& k, const Submanifold& l, int samples) {
  require_s3_curve(*k, "choose_pole");
  require_s3_curve(*l, "choose_pole");
  const auto poles = candidate_poles();
  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Submanifold* c : {&k, &l}) {
      const ChartAxis axis = (*c)->chart()[0];
      for (int j = 0; j < samples; ++j) {
        const double s = axis.lo + (axis.hi - axis.lo) * j / samples;
        const auto t = (*c)->evaluate(std::span<const double>(&s, 1));
        worst = std::min(worst, geodesic_distance(t.base, poles[i]).alpha);
      }
    }
    if (worst > best) {
      best = worst;
      best_index = i;
    }
  }
  return poles[best_index];
}

LinkingReport gauss_linking_integral(const EuclideanCurve& k, const EuclideanCurve& l,
                                     const OracleOptions& options) {
  // proximity precheck on a validation grid
  constexpr int kCheck = 256;
  double min_dist = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector3d> lk(kCheck);
  for (int j = 0; j < kCheck; ++j) lk[j] = l.evaluate(l.start + l.period * j / kCheck).point;
  for (int i = 0; i < kCheck; ++i) {
    const Eigen::Vector3d x = k.evaluate(k.start + k.period * i / kCheck).point;
    for (int j = 0; j < kCheck; ++j) min_dist = std::min(min_dist, (x - lk[j]).norm());
  }
  if (!(min_dist > options.min_distance)) {
    throw DisjointnessError("gauss_linking_integral: curves within " + std::to_string(min_dist) +
                            " of each other");
  }

  const ProductGrid grid({periodic_trapezoid(options.nodes, k.start, k.start + k.period),
                          periodic_trapezoid(options.nodes, l.start, l.start + l.period)});
  const Integrand integrand = [k, l](const ProductGrid& g) -> NodeFunction {
    // cache both curves on their factor nodes
    auto ks = std::make_shared<std::vector<EuclideanSample>>();
    auto ls = std::make_shared<std::vector<EuclideanSample>>();
    for (double s : g.factors()[0].nodes) ks->push_back(k.evaluate(s));
    for (double t : g.factors()[1].nodes) ls->push_back(l.evaluate(t));
    return [ks, ls](const NodeView& v) {
      const EuclideanSample& a = (*ks)[v.index[0]];
      const EuclideanSample& b = (*ls)[v.index[1]];
      const Eigen::Vector3d d = a.point - b.point;
      const double r = d.norm();
      return a.velocity.cross(b.velocity).dot(d) / (r * r * r);
    };
  };
  const double four_pi = 4.0 * std::numbers::pi;
  const Estimate e =
      refine_until(grid, integrand, options.tol * four_pi, options.max_level, options.reduction);
  LinkingReport rep;
  rep.method = Method::gauss_oracle;
  rep.raw_value = e.value / four_pi;
  rep.error_estimate = e.error_estimate / four_pi;
  const RoundedLinking r = round_to_linking(rep.raw_value, rep.error_estimate, options.thresholds);
  rep.nearest_integer = r.value;
  rep.residual = r.residual;
  rep.accepted = r.accepted;
  rep.converged = e.converged;
  rep.levels_used = e.levels_used;
  rep.nodes_per_level = e.nodes_per_level;
  rep.linking_number = r.value;
  return rep;
}

LinkingReport oracle_linking_number(const Submanifold& k, const Submanifold& l,
                                    const SpherePoint& pole, const OracleOptions& options) {
  require_s3_curve(*k, "oracle");
  require_s3_curve(*l, "oracle");
  const AlphaRange range =
      scan_alpha(*k, *l, pair_grid(*k, *l, GridSpec{options.nodes, options.nodes, 0}, false));
  LinkingReport rep = gauss_linking_integral(stereographic_project(k, pole),
                                             stereographic_project(l, pole), options);
  rep.min_alpha = range.min;
  rep.max_alpha = range.max;
  return rep;
}

LinkingReport oracle_linking_number(const Submanifold& k, const Submanifold& l,
                                    const OracleOptions& options) {
  return oracle_linking_number(k, l, choose_pole(k, l), options);
}

}  // namespace linking
