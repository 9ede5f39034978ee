#pragma once

// Independent ground truth for curve pairs in S^3: stereographic projection
// to R^3 followed by the classical Gauss linking integral
//
//   Lk(K, L) = 1/(4 pi) int (dx/ds x dy/dt) . (x - y) / |x - y|^3 ds dt.

#include "linking/linking_engine.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace linking {

struct EuclideanSample {
  Eigen::Vector3d point;
  Eigen::Vector3d velocity;
};

struct EuclideanCurve {
  std::function<EuclideanSample(double)> evaluate;
  double start = 0.0;
  double period = 0.0;
};

/// Stereographic projection from `pole`, orientation preserving with respect
/// to the sphere orientation (p, A_1, A_2, A_3) positive. The curve must be a
/// closed curve in S^3 with a periodic chart; every sampled point must be at
/// geodesic distance > 0.05 from the pole (DomainError otherwise).
EuclideanCurve stereographic_project(const Submanifold& curve, const SpherePoint& pole,
                                     int validation_nodes = 1024);

/// The fixed list of 20 candidate poles used by the automatic pole search.
std::vector<SpherePoint> candidate_poles();

/// Candidate maximizing the smaller of the two curves' distances to the pole.
SpherePoint choose_pole(const Submanifold& k, const Submanifold& l, int samples = 512);

struct OracleOptions {
  int nodes = 64;
  double tol = 1e-8;
  int max_level = 6;
  double min_distance = 1e-3;
  Thresholds thresholds;
  ReductionOptions reduction;
};

/// Gauss integral by a periodic-trapezoid tensor rule with refinement.
LinkingReport gauss_linking_integral(const EuclideanCurve& k, const EuclideanCurve& l,
                                     const OracleOptions& options = {});

/// Pole search, projection and Gauss integral in one call (S^3 curve pairs only).
LinkingReport oracle_linking_number(const Submanifold& k, const Submanifold& l,
                                    const OracleOptions& options = {});
LinkingReport oracle_linking_number(const Submanifold& k, const Submanifold& l,
                                    const SpherePoint& pole, const OracleOptions& options = {});

}  // namespace linking
