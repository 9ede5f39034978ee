#pragma once

// Linking-number evaluators for disjoint closed oriented K^k, L^l in S^n,
// k + l = n - 1:
//
//   main theorem   Lk = 1/vol S^n  int_{KxL} phi_{k,l}(a)/sin^n a [x,dx,y,dy]
//   corollary      Lk(K,L) + (-1)^n Lk(K,-L)
//                     = (-1)^k/vol S^n int_{KxL} (sin^k*sin^l)(a)/sin^n a [x,dx,y,dy]
//   join degree    deg f = 1/vol S^n int_{KxLx[0,1]} f^* vol,  Lk = -deg f
//
// where f(x, y, u) runs along the shortest geodesic from x to -y.

#include "linking/manifold_catalog.hpp"
#include "linking/phi_functions.hpp"
#include "linking/quadrature.hpp"
#include "linking/sphere_geom.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linking {

enum class Method { main_theorem, corollary, join_degree_full, join_degree_reduced, gauss_oracle };

const char* to_string(Method method);

enum class JoinVariant { full, reduced };

/// Nodes per chart axis. Zero selects the default: 64 per axis of a curve,
/// 32 per axis of a manifold of dimension >= 2, 32 for u.
inline constexpr int kDefaultUNodes = 32;

struct GridSpec {
  int k_nodes = 0;
  int l_nodes = 0;
  int u_nodes = 0;
};

struct Thresholds {
  double min_alpha = 0.01;      // radians, K vs L
  double antipodal_gap = 0.01;  // corollary: max alpha < pi - gap
  double max_residual = 0.25;
  double error_factor = 10.0;
  double error_floor = 1e-6;
};

struct EvaluationOptions {
  GridSpec grid;
  double tol = 1e-8;
  int max_level = 4;
  Thresholds thresholds;
  KernelMode kernel_mode = KernelMode::closed_form;
  ReductionOptions reduction;
  /// Caller asserts K and L lie in one open hemisphere, so Lk(K, -L) = 0.
  bool hemisphere = false;
  double fd_step = 1e-5;
};

struct LinkingReport {
  Method method = Method::main_theorem;
  double raw_value = 0.0;
  long nearest_integer = 0;
  double residual = 0.0;
  double error_estimate = 0.0;
  double min_alpha = 0.0;
  double max_alpha = 0.0;
  bool converged = false;
  bool accepted = false;
  int levels_used = 0;
  std::vector<std::size_t> nodes_per_level;
  std::optional<KernelMode> kernel_mode;
  /// Linking number implied by the report, when it determines one.
  std::optional<long> linking_number;
};

struct RoundedLinking {
  long value = 0;
  double residual = 0.0;
  bool accepted = false;
};

/// Nearest integer; accepted iff residual <= max_residual and
/// residual <= error_factor * error_estimate + error_floor.
RoundedLinking round_to_linking(double raw, double error_estimate,
                                const Thresholds& thresholds = {});

QuadratureRule1D rule_for_axis(const ChartAxis& axis, int nodes);
int default_nodes_per_axis(int dim);

/// Factors: K chart axes, then L chart axes, then u on [0, 1] if requested.
ProductGrid pair_grid(const OrientedSubmanifold& k, const OrientedSubmanifold& l,
                      const GridSpec& spec, bool with_u);

struct AlphaRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of the geodesic distance over the K x L nodes of `grid`.
AlphaRange scan_alpha(const OrientedSubmanifold& k, const OrientedSubmanifold& l,
                      const ProductGrid& grid);

/// Checks ambient dimensions and k + l = n - 1; throws DimensionError.
void require_complementary(const OrientedSubmanifold& k, const OrientedSubmanifold& l);

struct JoinMapFrame {
  double alpha = 0.0;
  double u = 0.0;
  double A = 0.0;
  double B = 0.0;
  SpherePoint f;  // unit within 1e-10
};

/// f(x, y, u) = x cos(u(pi - a)) - (y - x cos a)/sin a * sin(u(pi - a)).
SpherePoint join_map(const SpherePoint& x, const SpherePoint& y, double u);
JoinMapFrame join_frame(const SpherePoint& x, const SpherePoint& y, double u);

LinkingReport evaluate_main_theorem(const Submanifold& k, const Submanifold& l,
                                    const EvaluationOptions& options = {});
LinkingReport evaluate_corollary(const Submanifold& k, const Submanifold& l,
                                 const EvaluationOptions& options = {});
LinkingReport evaluate_join_degree(const Submanifold& k, const Submanifold& l,
                                   JoinVariant variant, const EvaluationOptions& options = {});
/// Lk(K, -L) written as an integral over K x L with the reflected kernel
/// (-1)^{l+1} phi(pi - a)/sin^n a [x, dx, y, dy].
LinkingReport evaluate_antipodal_substitution(const Submanifold& k, const Submanifold& l,
                                              const EvaluationOptions& options = {});

/// Unweighted integrand values at every node of the level-0 grid, in node order.
std::vector<double> sample_integrand(const Submanifold& k, const Submanifold& l, Method method,
                                     const EvaluationOptions& options = {});

}  // namespace linking
