#include "linking/quadrature.hpp"

#include "linking/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace linking {

QuadratureRule1D periodic_trapezoid(int m, double a, double b) {
  if (m < 1) throw DomainError("periodic_trapezoid: need at least one node");
  if (!(b > a)) throw DomainError("periodic_trapezoid: empty interval");
  QuadratureRule1D r;
  r.kind = RuleKind::periodic_trapezoid;
  r.a = a;
  r.b = b;
  r.periodic = true;
  const double h = (b - a) / m;
  for (int j = 0; j < m; ++j) {
    r.nodes.push_back(a + h * j);
    r.weights.push_back(h);
  }
  return r;
}

QuadratureRule1D gauss_legendre(int m, double a, double b) {
  if (m < 1) throw DomainError("gauss_legendre: need at least one node");
  if (!(b > a)) throw DomainError("gauss_legendre: empty interval");
  QuadratureRule1D r;
  r.kind = RuleKind::gauss_legendre;
  r.a = a;
  r.b = b;
  r.nodes.resize(m);
  r.weights.resize(m);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Newton on P_m from the classical initial guesses; roots are symmetric.
  auto legendre = [m](double x, double& pm, double& pm1) {
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= m; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    pm = p1;
    pm1 = p0;
  };
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double pm = 0.0;
    double pm1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(x, pm, pm1);
      const double dp = m * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, pm, pm1);
    const double dp = m * (x * pm - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[m - 1 - i] = mid + half * x;
    r.weights[i] = half * w;
    r.weights[m - 1 - i] = half * w;
  }
  return r;
}

QuadratureRule1D discrete_rule(std::vector<double> weights) {
  if (weights.empty()) throw DomainError("discrete_rule: empty point set");
  QuadratureRule1D r;
  r.kind = RuleKind::discrete;
  for (std::size_t i = 0; i < weights.size(); ++i) r.nodes.push_back(static_cast<double>(i));
  r.a = 0.0;
  r.b = static_cast<double>(weights.size());
  r.weights = std::move(weights);
  return r;
}

QuadratureRule1D doubled(const QuadratureRule1D& rule) {
  const int m = static_cast<int>(rule.size());
  switch (rule.kind) {
    case RuleKind::periodic_trapezoid:
      return periodic_trapezoid(2 * m, rule.a, rule.b);
    case RuleKind::gauss_legendre:
      return gauss_legendre(2 * m, rule.a, rule.b);
    case RuleKind::discrete:
      break;
  }
  return rule;
}

ProductGrid::ProductGrid(std::vector<QuadratureRule1D> factors) : factors_(std::move(factors)) {
  total_ = 1;
  for (const auto& f : factors_) {
    if (f.size() == 0 || f.nodes.size() != f.weights.size()) {
      throw DomainError("ProductGrid: malformed factor rule");
    }
    total_ *= f.size();
  }
}

ProductGrid ProductGrid::doubled() const {
  std::vector<QuadratureRule1D> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(linking::doubled(f));
  return ProductGrid(std::move(out));
}

Integrand pointwise(std::function<double(std::span<const double>)> f) {
  return [f = std::move(f)](const ProductGrid&) -> NodeFunction {
    return [f](const NodeView& v) { return f(v.coords); };
  };
}

int default_worker_count() {
  if (const char* env = std::getenv("LINKING_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> buf(values.begin(), values.end());
  std::size_t len = buf.size();
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (len % 2 == 1) buf[half] = buf[len - 1];
    len = half + (len % 2);
  }
  return buf[0];
}

namespace {

struct BlockResult {
  double sum = 0.0;
  std::size_t bad_node = std::numeric_limits<std::size_t>::max();
  double bad_value = 0.0;
};

BlockResult sum_block(const ProductGrid& grid, const NodeFunction& f, std::size_t begin,
                      std::size_t end) {
  const auto& factors = grid.factors();
  const std::size_t dim = factors.size();
  std::vector<std::size_t> idx(dim);
  std::vector<double> coords(dim);
  // decode begin, last factor fastest
  std::size_t rem = begin;
  for (std::size_t d = dim; d-- > 0;) {
    idx[d] = rem % factors[d].size();
    rem /= factors[d].size();
  }
  std::vector<double> values;
  values.reserve(end - begin);
  BlockResult out;
  for (std::size_t node = begin; node < end; ++node) {
    double w = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      coords[d] = factors[d].nodes[idx[d]];
      w *= factors[d].weights[idx[d]];
    }
    const double v = f(NodeView{coords, idx});
    if (!std::isfinite(v) && out.bad_node == std::numeric_limits<std::size_t>::max()) {
      out.bad_node = node;
      out.bad_value = v;
    }
    values.push_back(w * v);
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < factors[d].size()) break;
      idx[d] = 0;
    }
  }
  out.sum = pairwise_sum(values);
  return out;
}

std::string describe_node(const ProductGrid& grid, std::size_t node) {
  const auto& factors = grid.factors();
  std::vector<double> coords(factors.size());
  std::size_t rem = node;
  for (std::size_t d = factors.size(); d-- > 0;) {
    coords[d] = factors[d].nodes[rem % factors[d].size()];
    rem /= factors[d].size();
  }
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t d = 0; d < coords.size(); ++d) os << (d ? ", " : "") << coords[d];
  os << ")";
  return os.str();
}

}  // namespace

double weighted_sum(const ProductGrid& grid, const NodeFunction& f,
                    const ReductionOptions& options) {
  const std::size_t total = grid.total_points();
  const std::size_t blocks = (total + kReductionBlock - 1) / kReductionBlock;
  std::vector<BlockResult> results(blocks);
  const int requested = options.workers > 0 ? options.workers : default_worker_count();
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(requested), blocks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto run = [&] {
    try {
      while (!failed.load()) {
        const std::size_t b = next.fetch_add(1);
        if (b >= blocks) break;
        const std::size_t begin = b * kReductionBlock;
        results[b] = sum_block(grid, f, begin, std::min(total, begin + kReductionBlock));
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> sums(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (results[b].bad_node != std::numeric_limits<std::size_t>::max()) {
      std::ostringstream os;
      os << "non-finite integrand value " << results[b].bad_value << " at node "
         << describe_node(grid, results[b].bad_node)
         << " (disjointness violation or chart singularity)";
      throw NonFiniteError(os.str());
    }
    sums[b] = results[b].sum;
  }
  return pairwise_sum(sums);
}

Estimate integrate(const ProductGrid& grid, const Integrand& integrand,
                   const ReductionOptions& options) {
  const ProductGrid fine = grid.doubled();
  Estimate e;
  e.value = weighted_sum(grid, integrand(grid), options);
  const double fine_value = weighted_sum(fine, integrand(fine), options);
  e.error_estimate = std::abs(fine_value - e.value);
  e.levels_used = 0;
  e.converged = true;
  e.nodes_per_level = {grid.total_points(), fine.total_points()};
  return e;
}

Estimate refine_until(const ProductGrid& grid0, const Integrand& integrand, double tol,
                      int max_level, const ReductionOptions& options) {
  if (!(tol > 0.0)) throw DomainError("refine_until: tol must be positive");
  if (max_level < 0) throw DomainError("refine_until: max_level must be >= 0");
  Estimate e;
  ProductGrid grid = grid0;
  double value = weighted_sum(grid, integrand(grid), options);
  e.nodes_per_level.push_back(grid.total_points());
  for (int level = 0;; ++level) {
    const ProductGrid fine = grid.doubled();
    const double fine_value = weighted_sum(fine, integrand(fine), options);
    e.nodes_per_level.push_back(fine.total_points());
    e.value = value;
    e.error_estimate = std::abs(fine_value - value);
    e.levels_used = level;
    if (e.error_estimate < tol || std::isinf(tol)) {
      e.converged = true;
      return e;
    }
    if (level >= max_level) {
      e.converged = false;
      return e;
    }
    grid = fine;
    value = fine_value;
  }
}

}  // namespace linking
