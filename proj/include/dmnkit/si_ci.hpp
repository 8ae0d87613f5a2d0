#pragma once
#include <complex>

namespace dmnkit {

// Si(x) = integral of sin(t)/t over [0, x]; odd in x.
double sine_integral(double x);

// Ci(x) = -integral of cos(t)/t over [x, inf); throws std::domain_error for x <= 0.
double cosine_integral(double x);

struct si_ci {
  double si;
  double ci;
};
si_ci sine_cosine_integrals(double x);

// Ci(x) - j*Si(x): the combination the induced-EMF impedance forms consume.
std::complex<double> emf_kernel(double x);

}  // namespace dmnkit
