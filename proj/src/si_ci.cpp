#include "dmnkit/si_ci.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmnkit {
namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double half_pi = 1.57079632679489661923132169163975144;

// Power series, accurate to full double precision for x < 4.
si_ci series_small(double x) {
  const double x2 = x * x;
  double si = x;
  double term = x;
  for (int k = 1; k < 40; ++k) {
    // term_k = (-1)^k x^(2k+1) / (2k+1)!; series divides each by (2k+1)
    term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double add = term / (2.0 * k + 1.0);
    si += add;
    if (std::abs(add) < 1e-18 * std::abs(si)) break;
  }
  double ci = euler_gamma + std::log(x);
  double cterm = 1.0;
  for (int k = 1; k < 40; ++k) {
    cterm *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = cterm / (2.0 * k);
    ci += add;
    if (std::abs(add) < 1e-18) break;
  }
  return {si, ci};
}

// Exponential integral E1(j*x) via the modified Lentz continued fraction:
//   E1(z) = exp(-z) / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...))))
// For x >= 4 the fraction converges on the imaginary axis; then
//   Ci(x) = -Re{E1(jx)},  Si(x) = pi/2 + Im{E1(jx)}.
si_ci continued_fraction_large(double x) {
  const std::complex<double> z(0.0, x);
  const double tiny = 1e-290;
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i < 20000; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const std::complex<double> e1 = h * std::exp(-z);
  return {half_pi + e1.imag(), -e1.real()};
}

si_ci eval_positive(double x) {
  return x < 4.0 ? series_small(x) : continued_fraction_large(x);
}

}  // namespace

double sine_integral(double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -sine_integral(-x);
  return eval_positive(x).si;
}

double cosine_integral(double x) {
  if (!(x > 0.0)) throw std::domain_error("Ci(x) requires x > 0");
  return eval_positive(x).ci;
}

si_ci sine_cosine_integrals(double x) {
  if (!(x > 0.0)) {
    if (x == 0.0) throw std::domain_error("Ci(x) requires x > 0");
    throw std::domain_error("Ci(x) requires x > 0");
  }
  return eval_positive(x);
}

std::complex<double> emf_kernel(double x) {
  const si_ci v = sine_cosine_integrals(x);
  return {v.ci, -v.si};
}

}  // namespace dmnkit
