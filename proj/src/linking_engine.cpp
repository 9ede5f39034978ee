#include "linking/linking_engine.hpp"

#include "linking/errors.hpp"
#include "linking/signs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

namespace linking {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// The join map written in eps = pi - alpha: sin(u eps) / sin(alpha) becomes
// u sinc(u eps) / sinc(eps), so x = -y (f = x for every u) needs no special case.
Vector join_point(const Vector& x, const Vector& y, double u) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  const double eps = kPi - std::acos(c);
  return x * std::cos(u * eps) - (y - x * c) * (u * sinc(u * eps) / sinc(eps));
}

// Base point and tangent columns of a manifold at every node of its factor
// rules, flattened column-major: frame i occupies (n + 1) * (dim + 1) doubles.
// With shifts, also the base points at params +- h along each chart axis.
struct FrameTable {
  int rows = 0;
  int dim = 0;
  std::vector<std::size_t> sizes;  // factor sizes, last fastest
  std::vector<double> data;
  std::vector<double> shifted;  // per frame: 2 * dim points of `rows` doubles
  // per frame, the (dim + 1)-minors of the frame matrix over row subsets; see attach_minors
  std::vector<double> minors;
  std::size_t minor_count = 0;

  std::size_t stride() const { return static_cast<std::size_t>(rows) * (dim + 1); }
  const double* frame(std::size_t i) const { return data.data() + i * stride(); }
  const double* minor(std::size_t i) const { return minors.data() + i * minor_count; }
  const double* shift(std::size_t i, int axis, int side) const {
    return shifted.data() + (i * 2 * dim + 2 * axis + side) * rows;
  }
  std::size_t index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < sizes.size(); ++a) flat = flat * sizes[a] + idx[a];
    return flat;
  }
};

FrameTable tabulate(const OrientedSubmanifold& m, std::span<const QuadratureRule1D> factors,
                    bool with_shifts, double h) {
  FrameTable t;
  t.rows = m.ambient_n() + 1;
  t.dim = m.dim();
  std::size_t count = 1;
  for (const auto& f : factors) {
    t.sizes.push_back(f.size());
    count *= f.size();
  }
  t.data.resize(count * t.stride());
  if (with_shifts) t.shifted.resize(count * 2 * t.dim * t.rows);
  std::vector<std::size_t> idx(factors.size(), 0);
  std::vector<double> p(factors.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t a = 0; a < factors.size(); ++a) p[a] = factors[a].nodes[idx[a]];
    const TangentColumns tc = m.evaluate(p);
    double* out = t.data.data() + i * t.stride();
    for (int r = 0; r < t.rows; ++r) out[r] = tc.base[r];
    for (int c = 0; c < t.dim; ++c)
      for (int r = 0; r < t.rows; ++r) out[(c + 1) * t.rows + r] = tc.columns(r, c);
    if (with_shifts) {
      for (int axis = 0; axis < t.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
          std::vector<double> q = p;
          q[axis] += side == 0 ? h : -h;
          const SpherePoint s = m.evaluate(q).base;
          double* dst = t.shifted.data() + (i * 2 * t.dim + 2 * axis + side) * t.rows;
          for (int r = 0; r < t.rows; ++r) dst[r] = s[r];
        }
      }
    }
    for (std::size_t a = factors.size(); a-- > 0;) {
      if (++idx[a] < factors[a].size()) break;
      idx[a] = 0;
    }
  }
  return t;
}

// Determinant of a small square matrix held row-major in `a` (destroyed).
double small_det(double* a, int m) {
  double det = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
    if (a[piv * m + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
      det = -det;
    }
    det *= a[c * m + c];
    for (int r = c + 1; r < m; ++r) {
      const double f = a[r * m + c] / a[c * m + c];
      for (int j = c + 1; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
    }
  }
  return det;
}

// Row subsets of size `size` out of `rows`, lexicographic.
std::vector<std::vector<int>> row_subsets(int rows, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(size);
  for (int i = 0; i < size; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    int i = size - 1;
    while (i >= 0 && s[i] == rows - size + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < size; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

// Laplace expansion along the first k + 1 columns:
//   det[X | Y] = sum_S (-1)^(sum S + sum 0..k) det X_S det Y_{S^c},
// so storing det X_S for K and the signed complementary minors for L makes
// the bracket a dot product of length C(n + 1, k + 1).
void attach_minors(FrameTable& kt, FrameTable& lt) {
  const int rows = kt.rows;
  const int kc = kt.dim + 1;
  const int lc = lt.dim + 1;
  const auto subsets = row_subsets(rows, kc);
  std::vector<std::vector<int>> complements;
  std::vector<double> signs;
  for (const auto& s : subsets) {
    std::vector<int> c;
    int parity = 0;
    for (int r = 0, j = 0; r < rows; ++r) {
      if (j < kc && s[j] == r) {
        parity += r - j;
        ++j;
      } else {
        c.push_back(r);
      }
    }
    complements.push_back(std::move(c));
    signs.push_back(parity % 2 == 0 ? 1.0 : -1.0);
  }
  auto fill = [rows](FrameTable& t, const std::vector<std::vector<int>>& sets, int cols,
                     const std::vector<double>* sgn) {
    const std::size_t frames = t.data.size() / t.stride();
    t.minor_count = sets.size();
    t.minors.resize(frames * sets.size());
    std::vector<double> a(static_cast<std::size_t>(cols) * cols);
    for (std::size_t i = 0; i < frames; ++i) {
      const double* f = t.frame(i);
      for (std::size_t s = 0; s < sets.size(); ++s) {
        for (int r = 0; r < cols; ++r)
          for (int c = 0; c < cols; ++c) a[r * cols + c] = f[c * rows + sets[s][r]];
        const double d = small_det(a.data(), cols);
        t.minors[i * sets.size() + s] = sgn ? (*sgn)[s] * d : d;
      }
    }
  };
  fill(kt, subsets, kc, nullptr);
  fill(lt, complements, lc, &signs);
}

Vector column(const double* data, int rows) {
  return Eigen::Map<const Eigen::VectorXd>(data, rows);
}

double dot(const double* a, const double* b, int rows) {
  double s = 0.0;
  for (int r = 0; r < rows; ++r) s += a[r] * b[r];
  return s;
}

double alpha_of(const double* x, const double* y, int rows) {
  return std::acos(std::clamp(dot(x, y, rows), -1.0, 1.0));
}

struct PairTables {
  FrameTable k;
  FrameTable l;
  std::size_t k_axes = 0;
  std::size_t l_axes = 0;
};

// [x, dx, y, dy] at a node pair, from the attached minors.
double bracket(const PairTables& t, std::size_t ik, std::size_t il) {
  const double* a = t.k.minor(ik);
  const double* b = t.l.minor(il);
  double s = 0.0;
  for (std::size_t i = 0; i < t.k.minor_count; ++i) s += a[i] * b[i];
  return s;
}

struct ScanState {
  double min_alpha = std::numeric_limits<double>::infinity();
  double max_alpha = -std::numeric_limits<double>::infinity();
};

struct Check {
  double min_alpha = 0.0;
  double max_alpha = kPi;  // exclusive upper bound when < pi
  bool check_max = false;
};

AlphaRange scan_tables(const PairTables& t) {
  AlphaRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  const std::size_t nk = t.k.data.size() / t.k.stride();
  const std::size_t nl = t.l.data.size() / t.l.stride();
  double cmin = 2.0;
  double cmax = -2.0;
  for (std::size_t i = 0; i < nk; ++i) {
    const double* x = t.k.frame(i);
    for (std::size_t j = 0; j < nl; ++j) {
      const double c = dot(x, t.l.frame(j), t.k.rows);
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  }
  r.min = std::acos(std::clamp(cmax, -1.0, 1.0));
  r.max = std::acos(std::clamp(cmin, -1.0, 1.0));
  return r;
}

using PairNodeFunction =
    std::function<double(const PairTables&, std::size_t ik, std::size_t il, const NodeView&)>;

// Binds a pair integrand to each grid: tabulates frames, scans alpha, enforces
// the disjointness thresholds, records the extremes in `scan`.
Integrand make_pair_integrand(Submanifold k, Submanifold l, PairNodeFunction node,
                              std::shared_ptr<ScanState> scan, Check check, bool with_shifts,
                              double h) {
  return [=](const ProductGrid& grid) -> NodeFunction {
    auto tables = std::make_shared<PairTables>();
    const auto& f = grid.factors();
    tables->k_axes = k->chart().size();
    tables->l_axes = l->chart().size();
    std::span<const QuadratureRule1D> all(f);
    tables->k = tabulate(*k, all.subspan(0, tables->k_axes), with_shifts, h);
    tables->l = tabulate(*l, all.subspan(tables->k_axes, tables->l_axes), with_shifts, h);
    if (!with_shifts) attach_minors(tables->k, tables->l);
    const AlphaRange r = scan_tables(*tables);
    scan->min_alpha = std::min(scan->min_alpha, r.min);
    scan->max_alpha = std::max(scan->max_alpha, r.max);
    if (!(r.min > check.min_alpha)) {
      throw DisjointnessError("K and L are not disjoint enough: min geodesic distance " +
                              std::to_string(r.min) + " rad <= threshold " +
                              std::to_string(check.min_alpha));
    }
    if (check.check_max && !(r.max < check.max_alpha)) {
      throw DisjointnessError("K is not disjoint enough from -L: max geodesic distance " +
                              std::to_string(r.max) + " rad >= threshold " +
                              std::to_string(check.max_alpha));
    }
    return [tables, node](const NodeView& v) {
      const std::size_t ik = tables->k.index(v.index.subspan(0, tables->k_axes));
      const std::size_t il = tables->l.index(v.index.subspan(tables->k_axes, tables->l_axes));
      return node(*tables, ik, il, v);
    };
  };
}

LinkingReport finish(Method method, const Estimate& e, double volume, const ScanState& scan,
                     const Thresholds& th) {
  LinkingReport rep;
  rep.method = method;
  rep.raw_value = e.value / volume;
  rep.error_estimate = e.error_estimate / volume;
  const RoundedLinking rounded = round_to_linking(rep.raw_value, rep.error_estimate, th);
  rep.nearest_integer = rounded.value;
  rep.residual = rounded.residual;
  rep.accepted = rounded.accepted;
  rep.converged = e.converged;
  rep.levels_used = e.levels_used;
  rep.nodes_per_level = e.nodes_per_level;
  rep.min_alpha = scan.min_alpha;
  rep.max_alpha = scan.max_alpha;
  return rep;
}

struct Prepared {
  Integrand integrand;
  ProductGrid grid;
  std::shared_ptr<ScanState> scan;
  std::optional<KernelMode> kernel_mode;
};

Prepared prepare(const Submanifold& k, const Submanifold& l, Method method,
                 const EvaluationOptions& opt) {
  require_complementary(*k, *l);
  const int kd = k->dim();
  const int ld = l->dim();
  const int n = k->ambient_n();
  const int rows = n + 1;
  auto scan = std::make_shared<ScanState>();
  Check check{opt.thresholds.min_alpha, kPi, false};
  Prepared p;
  p.scan = scan;
  const bool with_u = method == Method::join_degree_full || method == Method::join_degree_reduced;
  p.grid = pair_grid(*k, *l, opt.grid, with_u);

  switch (method) {
    case Method::main_theorem: {
      auto kernel = std::make_shared<KernelEvaluator>(kd, ld, opt.kernel_mode);
      p.kernel_mode = kernel->phi_mode();
      p.integrand = make_pair_integrand(
          k, l,
          [kernel, kd, ld, rows](const PairTables& t, std::size_t ik, std::size_t il,
                                 const NodeView&) {
            const double* x = t.k.frame(ik);
            const double* y = t.l.frame(il);
            return kernel->kernel_ratio(alpha_of(x, y, rows)) *
                   bracket(t, ik, il);
          },
          scan, check, false, opt.fd_step);
      break;
    }
    case Method::corollary: {
      auto kernel = std::make_shared<KernelEvaluator>(kd, ld, opt.kernel_mode);
      p.kernel_mode = kernel->convolution_mode();
      check.check_max = true;
      check.max_alpha = kPi - opt.thresholds.antipodal_gap;
      const double sign = signs::corollary_prefactor(kd);
      p.integrand = make_pair_integrand(
          k, l,
          [kernel, kd, ld, rows, sign](const PairTables& t, std::size_t ik, std::size_t il,
                                       const NodeView&) {
            const double* x = t.k.frame(ik);
            const double* y = t.l.frame(il);
            return sign * kernel->convolution_ratio(alpha_of(x, y, rows)) *
                   bracket(t, ik, il);
          },
          scan, check, false, opt.fd_step);
      break;
    }
    case Method::gauss_oracle:
      throw DomainError("the Gauss oracle is evaluated by the oracle module");
    case Method::join_degree_reduced: {
      const double sign = signs::join_reduced_prefactor(kd, ld);
      const std::size_t u_axis = k->chart().size() + l->chart().size();
      p.kernel_mode.reset();
      p.integrand = make_pair_integrand(
          k, l,
          [kd, ld, rows, n, sign, u_axis](const PairTables& t, std::size_t ik, std::size_t il,
                                          const NodeView& v) {
            const double* x = t.k.frame(ik);
            const double* y = t.l.frame(il);
            // (pi - a)/sin^n a A^k B^l with A = sin((1 - u) eps), B = sin(u eps),
            // eps = pi - a, regrouped so the limit at a = pi is exact
            const double eps = kPi - alpha_of(x, y, rows);
            const double u = v.coords[u_axis];
            const double A = (1.0 - u) * sinc((1.0 - u) * eps);
            const double B = u * sinc(u * eps);
            return sign / ipow(sinc(eps), n) * ipow(A, kd) * ipow(B, ld) * bracket(t, ik, il);
          },
          scan, check, false, opt.fd_step);
      break;
    }
    case Method::join_degree_full: {
      const double h = opt.fd_step;
      const std::size_t u_axis = k->chart().size() + l->chart().size();
      p.kernel_mode.reset();
      p.integrand = make_pair_integrand(
          k, l,
          [kd, ld, rows, h, u_axis](const PairTables& t, std::size_t ik, std::size_t il,
                                    const NodeView& v) {
            const Vector x = column(t.k.frame(ik), rows);
            const Vector y = column(t.l.frame(il), rows);
            const double u = v.coords[u_axis];
            Matrix m(rows, rows);
            m.col(0) = join_point(x, y, u);
            int c = 1;
            // Orientation of K x L x [0,1]: s, then t, then u.
            for (int a = 0; a < kd; ++a, ++c) {
              const Vector xp = column(t.k.shift(ik, a, 0), rows);
              const Vector xm = column(t.k.shift(ik, a, 1), rows);
              m.col(c) = (join_point(xp, y, u) - join_point(xm, y, u)) / (2 * h);
            }
            for (int a = 0; a < ld; ++a, ++c) {
              const Vector yp = column(t.l.shift(il, a, 0), rows);
              const Vector ym = column(t.l.shift(il, a, 1), rows);
              m.col(c) = (join_point(x, yp, u) - join_point(x, ym, u)) / (2 * h);
            }
            m.col(c) = (join_point(x, y, u + h) - join_point(x, y, u - h)) / (2 * h);
            return Eigen::PartialPivLU<Matrix>(m).determinant();
          },
          scan, check, true, opt.fd_step);
      break;
    }
  }
  return p;
}

LinkingReport run(const Submanifold& k, const Submanifold& l, Method method,
                  const EvaluationOptions& opt) {
  Prepared p = prepare(k, l, method, opt);
  const Estimate e = refine_until(p.grid, p.integrand, opt.tol * sphere_volume(k->ambient_n()),
                                  opt.max_level, opt.reduction);
  LinkingReport rep = finish(method, e, sphere_volume(k->ambient_n()), *p.scan, opt.thresholds);
  rep.kernel_mode = p.kernel_mode;
  return rep;
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::main_theorem:
      return "main_theorem";
    case Method::corollary:
      return "corollary";
    case Method::join_degree_full:
      return "join_degree_full";
    case Method::join_degree_reduced:
      return "join_degree_reduced";
    case Method::gauss_oracle:
      return "gauss_oracle";
  }
  return "unknown";
}

RoundedLinking round_to_linking(double raw, double error_estimate, const Thresholds& th) {
  RoundedLinking r;
  if (!std::isfinite(raw)) {
    r.value = 0;
    r.residual = std::numeric_limits<double>::infinity();
    r.accepted = false;
    return r;
  }
  const double nearest = std::nearbyint(raw);
  r.value = static_cast<long>(nearest);
  r.residual = std::abs(raw - nearest);
  r.accepted = r.residual <= th.max_residual &&
               r.residual <= th.error_factor * error_estimate + th.error_floor;
  return r;
}

int default_nodes_per_axis(int dim) { return dim == 1 ? 64 : 32; }

QuadratureRule1D rule_for_axis(const ChartAxis& axis, int nodes) {
  switch (axis.kind) {
    case AxisKind::periodic:
      return periodic_trapezoid(nodes, axis.lo, axis.hi);
    case AxisKind::interval:
      return gauss_legendre(nodes, axis.lo, axis.hi);
    case AxisKind::discrete:
      return discrete_rule(axis.signs);
  }
  throw DomainError("rule_for_axis: unknown axis kind");
}

ProductGrid pair_grid(const OrientedSubmanifold& k, const OrientedSubmanifold& l,
                      const GridSpec& spec, bool with_u) {
  std::vector<QuadratureRule1D> factors;
  const int kn = spec.k_nodes > 0 ? spec.k_nodes : default_nodes_per_axis(k.dim());
  const int ln = spec.l_nodes > 0 ? spec.l_nodes : default_nodes_per_axis(l.dim());
  for (const auto& axis : k.chart()) factors.push_back(rule_for_axis(axis, kn));
  for (const auto& axis : l.chart()) factors.push_back(rule_for_axis(axis, ln));
  if (with_u) factors.push_back(gauss_legendre(spec.u_nodes > 0 ? spec.u_nodes : kDefaultUNodes, 0.0, 1.0));
  return ProductGrid(std::move(factors));
}

AlphaRange scan_alpha(const OrientedSubmanifold& k, const OrientedSubmanifold& l,
                      const ProductGrid& grid) {
  std::span<const QuadratureRule1D> all(grid.factors());
  PairTables t;
  t.k = tabulate(k, all.subspan(0, k.chart().size()), false, 0.0);
  t.l = tabulate(l, all.subspan(k.chart().size(), l.chart().size()), false, 0.0);
  return scan_tables(t);
}

void require_complementary(const OrientedSubmanifold& k, const OrientedSubmanifold& l) {
  if (k.ambient_n() != l.ambient_n()) {
    throw DimensionError("K lives in S^" + std::to_string(k.ambient_n()) + " but L in S^" +
                         std::to_string(l.ambient_n()));
  }
  const int n = k.ambient_n();
  if (k.dim() + l.dim() != n - 1) {
    throw DimensionError("dimensions must satisfy k + l = n - 1, got k = " +
                         std::to_string(k.dim()) + ", l = " + std::to_string(l.dim()) +
                         ", n = " + std::to_string(n));
  }
}

JoinMapFrame join_frame(const SpherePoint& x, const SpherePoint& y, double u) {
  const PairGeometry g = geodesic_distance(x, y);
  if (!(g.alpha > 0.0 && g.alpha < kPi) || !(g.sin_alpha > 0.0)) {
    throw DomainError("join_map: need 0 < alpha(x, y) < pi");
  }
  const double w = u * (kPi - g.alpha);
  const double cw = std::cos(w);
  const double sw = std::sin(w);
  Vector f = x.coords() * cw - (y.coords() - x.coords() * g.cos_alpha) / g.sin_alpha * sw;
  JoinMapFrame frame{g.alpha, u, g.sin_alpha * cw + g.cos_alpha * sw, sw, SpherePoint(f)};
  return frame;
}

SpherePoint join_map(const SpherePoint& x, const SpherePoint& y, double u) {
  return join_frame(x, y, u).f;
}

LinkingReport evaluate_main_theorem(const Submanifold& k, const Submanifold& l,
                                    const EvaluationOptions& options) {
  LinkingReport r = run(k, l, Method::main_theorem, options);
  r.linking_number = r.nearest_integer;
  return r;
}

LinkingReport evaluate_corollary(const Submanifold& k, const Submanifold& l,
                                 const EvaluationOptions& options) {
  LinkingReport r = run(k, l, Method::corollary, options);
  if (options.hemisphere) r.linking_number = r.nearest_integer;
  return r;
}

LinkingReport evaluate_join_degree(const Submanifold& k, const Submanifold& l,
                                   JoinVariant variant, const EvaluationOptions& options) {
  LinkingReport r = run(k, l,
                        variant == JoinVariant::full ? Method::join_degree_full
                                                     : Method::join_degree_reduced,
                        options);
  r.linking_number = signs::degree_to_linking() * r.nearest_integer;
  return r;
}

LinkingReport evaluate_antipodal_substitution(const Submanifold& k, const Submanifold& l,
                                              const EvaluationOptions& opt) {
  require_complementary(*k, *l);
  const int kd = k->dim();
  const int ld = l->dim();
  const int rows = k->ambient_n() + 1;
  auto kernel = std::make_shared<KernelEvaluator>(kd, ld, opt.kernel_mode);
  auto scan = std::make_shared<ScanState>();
  // -L must stay away from K: alpha(x, -y) = pi - alpha(x, y).
  Check check{0.0, kPi - opt.thresholds.min_alpha, true};
  const double sign = signs::antipodal_bracket(ld);
  Integrand integrand = make_pair_integrand(
      k, l,
      [kernel, kd, ld, rows, sign](const PairTables& t, std::size_t ik, std::size_t il,
                                   const NodeView&) {
        const double* x = t.k.frame(ik);
        const double* y = t.l.frame(il);
        return sign * kernel->reflected_kernel_ratio(alpha_of(x, y, rows)) *
               bracket(t, ik, il);
      },
      scan, check, false, opt.fd_step);
  const double vol = sphere_volume(k->ambient_n());
  const Estimate e = refine_until(pair_grid(*k, *l, opt.grid, false), integrand, opt.tol * vol,
                                  opt.max_level, opt.reduction);
  LinkingReport r = finish(Method::main_theorem, e, vol, *scan, opt.thresholds);
  r.kernel_mode = kernel->phi_mode();
  r.linking_number = r.nearest_integer;
  return r;
}

std::vector<double> sample_integrand(const Submanifold& k, const Submanifold& l, Method method,
                                     const EvaluationOptions& options) {
  Prepared p = prepare(k, l, method, options);
  const NodeFunction f = p.integrand(p.grid);
  const auto& factors = p.grid.factors();
  std::vector<std::size_t> idx(factors.size(), 0);
  std::vector<double> coords(factors.size());
  std::vector<double> out;
  out.reserve(p.grid.total_points());
  for (std::size_t node = 0; node < p.grid.total_points(); ++node) {
    for (std::size_t d = 0; d < factors.size(); ++d) coords[d] = factors[d].nodes[idx[d]];
    out.push_back(f(NodeView{coords, idx}));
    for (std::size_t d = factors.size(); d-- > 0;) {
      if (++idx[d] < factors[d].size()) break;
      idx[d] = 0;
    }
  }
  return out;
}

}  // namespace linking
