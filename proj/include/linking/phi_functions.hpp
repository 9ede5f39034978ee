#pragma once

// Kernels of the linking integrals:
//
//   phi_{k,l}(a)      = int_{b=a}^{pi} sin^k(b - a) sin^l(b) db
//   (sin^k * sin^l)(a) = int_{b=0}^{pi} sin^k(a - b) sin^l(b) db
//
// Closed forms exist for phi with (k,l) in {(0,0),(1,1),(1,2),(2,1)} and for
// the convolution with (k,l) in {(1,1),(2,2)}; everything else is numeric.

#include <functional>
#include <vector>

namespace linking {

enum class KernelMode { closed_form, numeric };

const char* to_string(KernelMode mode);

/// Below this distance phi/sin^n is treated as a disjointness violation.
inline constexpr double kMinKernelAlpha = 1e-8;
/// For pi - alpha below this the kernel ratio comes from its expansion at pi.
inline constexpr double kSeriesSwitchover = 1e-3;

/// Panel-doubling Gauss-Legendre: 1, 2, 4, ... panels of `nodes` points until
/// two successive sums differ by less than abs_tol.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double abs_tol = 1e-12, int nodes = 16);

bool has_closed_form_phi(int k, int l);
bool has_closed_form_convolution(int k, int l);

double phi_numeric(int k, int l, double alpha, int nodes = 16);
double convolution_numeric(int k, int l, double alpha, int nodes = 16);

/// Closed form when available, adaptive quadrature otherwise.
double phi(int k, int l, double alpha);
double convolution(int k, int l, double alpha);

/// k! l! / n!, the value of phi/sin^n at alpha = pi.
double kernel_ratio_limit(int k, int l);
/// Two-term expansion of phi/sin^n about alpha = pi (error O((pi - alpha)^4)).
double kernel_ratio_series(int k, int l, double alpha);

/// phi_{k,l}(alpha) / sin^n(alpha), n = k + l + 1, with the alpha -> pi limit
/// handled by kernel_ratio_series. Throws DisjointnessError for alpha < 1e-8.
double phi_kernel_ratio(int k, int l, double alpha);

/// x^e for a small non-negative integer e by repeated multiplication.
inline double ipow(double x, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

/// Chebyshev interpolant on [a, b] evaluated by Clenshaw recurrence.
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  /// Interpolant at Chebyshev points; trailing coefficients below
  /// 1e-14 of the largest (the quadrature noise floor) are dropped.
  static ChebyshevSeries fit(const std::function<double(double)>& f, double a, double b,
                             int degree);

  double operator()(double x) const;
  const std::vector<double>& coefficients() const { return c_; }

 private:
  double a_ = 0.0;
  double b_ = 1.0;
  std::vector<double> c_;
};

/// Kernel evaluator for one (k, l). Numeric kernels are tabulated once at
/// construction from a fixed `numeric_nodes`-point Gauss-Legendre rule
/// (exact up to rounding for these trigonometric integrands); afterwards the object is read-only
/// and safe to share between threads.
///
/// phi is stored as h(a) = phi(a) / (pi - a)^n, which is smooth and bounded
/// away from zero on [0, pi], so the tabulated ratio keeps full relative
/// accuracy right up to the antipodal end.
class KernelEvaluator {
 public:
  KernelEvaluator(int k, int l, KernelMode mode = KernelMode::closed_form,
                  int numeric_nodes = 48);

  int k() const { return k_; }
  int l() const { return l_; }
  int n() const { return k_ + l_ + 1; }
  /// Effective mode of the phi kernel (closed_form requested but unavailable -> numeric).
  KernelMode phi_mode() const { return phi_closed_ ? KernelMode::closed_form : KernelMode::numeric; }
  KernelMode convolution_mode() const {
    return conv_closed_ ? KernelMode::closed_form : KernelMode::numeric;
  }

  double phi(double alpha) const;
  double convolution(double alpha) const;
  /// phi / sin^n, same contract as phi_kernel_ratio().
  double kernel_ratio(double alpha) const;
  /// phi(pi - alpha) / sin^n(alpha), the kernel of the antipodal substitution.
  double reflected_kernel_ratio(double alpha) const;
  /// (sin^k * sin^l)(alpha) / sin^n(alpha).
  double convolution_ratio(double alpha) const;

 private:
  double h(double alpha) const;

  int k_;
  int l_;
  bool phi_closed_;
  bool conv_closed_;
  ChebyshevSeries h_table_;
  ChebyshevSeries conv_table_;
};

}  // namespace linking
