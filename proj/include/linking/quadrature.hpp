#pragma once

// Tensor-product quadrature with refinement-based error estimates.
//
// Determinism contract: nodes are numbered lexicographically in factor order
// (last factor fastest). Node values are summed pairwise inside fixed-size
// blocks of consecutive node indices, and block sums are combined by the same
// fixed pairwise tree. Workers only decide who evaluates a block, so the
// result is bit-identical for every worker count.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace linking {

enum class RuleKind { periodic_trapezoid, gauss_legendre, discrete };

struct QuadratureRule1D {
  RuleKind kind = RuleKind::periodic_trapezoid;
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;
  bool periodic = false;

  std::size_t size() const { return nodes.size(); }
};

/// m equispaced nodes a + (b - a) j / m with equal weights (b - a) / m.
QuadratureRule1D periodic_trapezoid(int m, double a, double b);
/// m-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule1D gauss_legendre(int m, double a, double b);
/// Nodes 0..m-1 carrying the given weights (finite signed point sets).
QuadratureRule1D discrete_rule(std::vector<double> weights);
/// Same family with twice the nodes. Discrete rules are returned unchanged.
QuadratureRule1D doubled(const QuadratureRule1D& rule);

class ProductGrid {
 public:
  ProductGrid() = default;
  explicit ProductGrid(std::vector<QuadratureRule1D> factors);

  const std::vector<QuadratureRule1D>& factors() const { return factors_; }
  std::size_t dimension() const { return factors_.size(); }
  std::size_t total_points() const { return total_; }
  ProductGrid doubled() const;

 private:
  std::vector<QuadratureRule1D> factors_;
  std::size_t total_ = 1;
};

struct NodeView {
  std::span<const double> coords;
  std::span<const std::size_t> index;  // per-factor node index
};

/// Unweighted integrand value at one node. Must be pure: it may run on any worker.
using NodeFunction = std::function<double(const NodeView&)>;
/// Binds an integrand to a concrete grid; runs single-threaded before evaluation,
/// so it may precompute per-factor tables.
using Integrand = std::function<NodeFunction(const ProductGrid&)>;

/// Lifts a function of the node coordinates to an Integrand.
Integrand pointwise(std::function<double(std::span<const double>)> f);

struct ReductionOptions {
  int workers = 0;  // 0: default_worker_count()
};

/// Worker count from LINKING_WORKERS if set, otherwise hardware concurrency.
int default_worker_count();

/// Nodes per reduction block; part of the determinism contract.
inline constexpr std::size_t kReductionBlock = 2048;

struct Estimate {
  double value = 0.0;
  double error_estimate = 0.0;  // |value on doubled grid - value|
  int levels_used = 0;
  bool converged = true;
  std::vector<std::size_t> nodes_per_level;  // every grid that was evaluated
};

/// Weighted sum over all grid nodes. Throws NonFiniteError naming the node.
double weighted_sum(const ProductGrid& grid, const NodeFunction& f,
                    const ReductionOptions& options = {});

/// Sum on `grid`, with the error estimated against the doubled grid.
Estimate integrate(const ProductGrid& grid, const Integrand& integrand,
                   const ReductionOptions& options = {});

/// Doubles every factor until error_estimate < tol or max_level is reached.
/// Non-convergence is reported through Estimate::converged, not thrown.
Estimate refine_until(const ProductGrid& grid0, const Integrand& integrand, double tol,
                      int max_level, const ReductionOptions& options = {});

/// Pairwise sum with the fixed pairing used by the reduction.
double pairwise_sum(std::span<const double> values);

}  // namespace linking
