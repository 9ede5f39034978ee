#include "linking/phi_functions.hpp"

#include "linking/errors.hpp"
#include "linking/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace linking {

namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha(double alpha, const char* who) {
  if (!(alpha >= 0.0 && alpha <= kPi)) {
    throw DomainError(std::string(who) + ": alpha must lie in [0, pi], got " +
                      std::to_string(alpha));
  }
}

void require_orders(int k, int l, const char* who) {
  if (k < 0 || l < 0) throw DomainError(std::string(who) + ": k and l must be >= 0");
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double closed_phi(int k, int l, double alpha) {
  if (k == 0 && l == 0) return kPi - alpha;
  if (k == 1 && l == 1) return 0.5 * ((kPi - alpha) * std::cos(alpha) + std::sin(alpha));
  const double c = 1.0 + std::cos(alpha);
  return c * c / 3.0;  // (1,2) and (2,1)
}

double closed_convolution(int k, double alpha) {
  const double c = std::cos(alpha);
  if (k == 1) return -0.5 * kPi * c;
  return kPi / 8.0 * (1.0 + 2.0 * c * c);  // (2,2)
}

constexpr int kTableDegree = 64;

// One Gauss-Legendre panel with a fixed node count. Used to sample the kernel
// tables: unlike the adaptive rule it is analytic in the endpoints, so the
// Chebyshev coefficients of the sampled function keep decaying.
double fixed_rule(const QuadratureRule1D& ref, double a, double b,
                  const std::function<double(double)>& f) {
  std::vector<double> parts(ref.size());
  for (std::size_t j = 0; j < ref.size(); ++j) {
    parts[j] = 0.5 * (b - a) * ref.weights[j] * f(0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[j]);
  }
  return pairwise_sum(parts);
}

}  // namespace

const char* to_string(KernelMode mode) {
  return mode == KernelMode::closed_form ? "closed_form" : "numeric";
}

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int nodes) {
  if (nodes < 1) throw DomainError("adaptive_gauss_legendre: nodes must be positive");
  if (b == a) return 0.0;
  const QuadratureRule1D ref = gauss_legendre(nodes, -1.0, 1.0);
  auto panels = [&](int count) {
    const double width = (b - a) / count;
    std::vector<double> parts;
    parts.reserve(static_cast<std::size_t>(count) * ref.size());
    for (int p = 0; p < count; ++p) {
      const double mid = a + width * (p + 0.5);
      for (std::size_t j = 0; j < ref.size(); ++j) {
        parts.push_back(0.5 * width * ref.weights[j] * f(mid + 0.5 * width * ref.nodes[j]));
      }
    }
    return pairwise_sum(parts);
  };
  double coarse = panels(1);
  for (int count = 2; count <= (1 << 14); count *= 2) {
    const double fine = panels(count);
    if (std::abs(fine - coarse) < abs_tol) return fine;
    coarse = fine;
  }
  return coarse;
}

bool has_closed_form_phi(int k, int l) {
  return (k == 0 && l == 0) || (k == 1 && l == 1) || (k == 1 && l == 2) || (k == 2 && l == 1);
}

bool has_closed_form_convolution(int k, int l) {
  return (k == 1 && l == 1) || (k == 2 && l == 2);
}

double phi_numeric(int k, int l, double alpha, int nodes) {
  require_orders(k, l, "phi_numeric");
  require_alpha(alpha, "phi_numeric");
  return adaptive_gauss_legendre(
      [k, l, alpha](double beta) {
        return ipow(std::sin(beta - alpha), k) * ipow(std::sin(beta), l);
      },
      alpha, kPi, 1e-12, nodes);
}

double convolution_numeric(int k, int l, double alpha, int nodes) {
  require_orders(k, l, "convolution_numeric");
  require_alpha(alpha, "convolution_numeric");
  return adaptive_gauss_legendre(
      [k, l, alpha](double beta) {
        return ipow(std::sin(alpha - beta), k) * ipow(std::sin(beta), l);
      },
      0.0, kPi, 1e-12, nodes);
}

double phi(int k, int l, double alpha) {
  require_orders(k, l, "phi");
  require_alpha(alpha, "phi");
  if (alpha == kPi) return 0.0;
  return has_closed_form_phi(k, l) ? closed_phi(k, l, alpha) : phi_numeric(k, l, alpha);
}

double convolution(int k, int l, double alpha) {
  require_orders(k, l, "convolution");
  require_alpha(alpha, "convolution");
  return has_closed_form_convolution(k, l) ? closed_convolution(k, alpha)
                                           : convolution_numeric(k, l, alpha);
}

double kernel_ratio_limit(int k, int l) {
  require_orders(k, l, "kernel_ratio_limit");
  return factorial(k) * factorial(l) / factorial(k + l + 1);
}

double kernel_ratio_series(int k, int l, double alpha) {
  require_orders(k, l, "kernel_ratio_series");
  const int n = k + l + 1;
  const double eps = kPi - alpha;
  const double c0 = kernel_ratio_limit(k, l);
  // phi = eps^n [c0 - d eps^2 + ...], sin^n = eps^n [1 - n eps^2 / 6 + ...]
  const double d = (k * factorial(k + 2) * factorial(l) + l * factorial(k) * factorial(l + 2)) /
                   (6.0 * factorial(n + 2));
  return c0 + eps * eps * (c0 * n / 6.0 - d);
}

double phi_kernel_ratio(int k, int l, double alpha) {
  require_orders(k, l, "phi_kernel_ratio");
  if (!(alpha >= kMinKernelAlpha)) {
    throw DisjointnessError("phi_kernel_ratio: alpha = " + std::to_string(alpha) +
                            " below 1e-8, the integrand is unbounded");
  }
  require_alpha(alpha, "phi_kernel_ratio");
  if (kPi - alpha < kSeriesSwitchover) return kernel_ratio_series(k, l, alpha);
  const int n = k + l + 1;
  return phi(k, l, alpha) / ipow(std::sin(alpha), n);
}

ChebyshevSeries ChebyshevSeries::fit(const std::function<double(double)>& f, double a, double b,
                                     int degree) {
  if (degree < 0 || !(b > a)) throw DomainError("ChebyshevSeries::fit: bad interval or degree");
  const int m = degree + 1;
  std::vector<double> values(m);
  for (int j = 0; j < m; ++j) {
    const double t = std::cos(kPi * (j + 0.5) / m);
    values[j] = f(0.5 * (a + b) + 0.5 * (b - a) * t);
  }
  ChebyshevSeries s;
  s.a_ = a;
  s.b_ = b;
  s.c_.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += values[j] * std::cos(kPi * i * (j + 0.5) / m);
    s.c_[i] = 2.0 * acc / m;
  }
  s.c_[0] *= 0.5;
  double largest = 0.0;
  for (double c : s.c_) largest = std::max(largest, std::abs(c));
  while (s.c_.size() > 1 && std::abs(s.c_.back()) <= 1e-14 * largest) s.c_.pop_back();
  return s;
}

double ChebyshevSeries::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = c_.size(); i-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c_[i];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c_[0];
}

KernelEvaluator::KernelEvaluator(int k, int l, KernelMode mode, int numeric_nodes)
    : k_(k), l_(l) {
  require_orders(k, l, "KernelEvaluator");
  if (numeric_nodes < 16) throw DomainError("KernelEvaluator: numeric_nodes must be >= 16");
  // the integrands are trigonometric polynomials of degree <= k + l
  phi_closed_ = mode == KernelMode::closed_form && has_closed_form_phi(k, l);
  conv_closed_ = mode == KernelMode::closed_form && has_closed_form_convolution(k, l);
  const QuadratureRule1D ref = gauss_legendre(numeric_nodes, -1.0, 1.0);
  // With beta = a + t eps, eps = pi - a:
  //   h = phi / eps^n = int_0^1 (t sinc(t eps))^k ((1 - t) sinc((1 - t) eps))^l dt,
  // which never forms sin(beta) near pi and needs no division by eps.
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
  h_table_ = ChebyshevSeries::fit(
      [&](double a) {
        const double eps = kPi - a;
        return fixed_rule(ref, 0.0, 1.0, [&](double t) {
          return ipow(t * sinc(t * eps), k) * ipow((1.0 - t) * sinc((1.0 - t) * eps), l);
        });
      },
      0.0, kPi, kTableDegree);
  if (!conv_closed_) {
    conv_table_ = ChebyshevSeries::fit(
        [&](double a) {
          return fixed_rule(ref, 0.0, kPi, [&](double b) {
            return ipow(std::sin(a - b), k) * ipow(std::sin(b), l);
          });
        },
        0.0, kPi, kTableDegree);
  }
}

double KernelEvaluator::h(double alpha) const { return h_table_(alpha); }

double KernelEvaluator::phi(double alpha) const {
  require_alpha(alpha, "KernelEvaluator::phi");
  if (alpha == kPi) return 0.0;
  if (phi_closed_) return closed_phi(k_, l_, alpha);
  return h(alpha) * ipow(kPi - alpha, n());
}

double KernelEvaluator::convolution(double alpha) const {
  require_alpha(alpha, "KernelEvaluator::convolution");
  if (conv_closed_) return closed_convolution(k_, alpha);
  return conv_table_(alpha);
}

double KernelEvaluator::kernel_ratio(double alpha) const {
  if (!(alpha >= kMinKernelAlpha)) {
    throw DisjointnessError("kernel_ratio: alpha = " + std::to_string(alpha) +
                            " below 1e-8, the integrand is unbounded");
  }
  require_alpha(alpha, "KernelEvaluator::kernel_ratio");
  const double eps = kPi - alpha;
  if (eps < kSeriesSwitchover) return kernel_ratio_series(k_, l_, alpha);
  // Closed forms cancel badly as alpha -> pi; the tabulated h does not.
  if (phi_closed_ && eps >= 0.1) return closed_phi(k_, l_, alpha) / ipow(std::sin(alpha), n());
  return h(alpha) * ipow(eps / std::sin(alpha), n());
}

double KernelEvaluator::reflected_kernel_ratio(double alpha) const {
  require_alpha(alpha, "KernelEvaluator::reflected_kernel_ratio");
  // sin(pi - a) = sin(a)
  return kernel_ratio(kPi - alpha);
}

double KernelEvaluator::convolution_ratio(double alpha) const {
  if (!(alpha >= kMinKernelAlpha && alpha <= kPi - kMinKernelAlpha)) {
    throw DisjointnessError("convolution_ratio: alpha = " + std::to_string(alpha) +
                            " too close to 0 or pi, the integrand is unbounded");
  }
  return convolution(alpha) / ipow(std::sin(alpha), n());
}

}  // namespace linking
