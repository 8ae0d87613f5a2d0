#include "dmnkit/emf_dipole.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dmnkit/si_ci.hpp"

namespace dmnkit {
namespace {

using cd = std::complex<double>;
constexpr cd j{0.0, 1.0};

// Mutual impedance of two parallel side-by-side sinusoidal-current dipoles of
// half-length h at separation d, referred to the current maxima.  Closed form
// in Ci/Si of kd, k(sqrt(d^2+h^2) +/- h) and k(sqrt(d^2+4h^2) +/- 2h); the
// +/- differences are evaluated as d^2/(R + h) to avoid cancellation.
cd mutual_max_referred(double d, double h, double k) {
  const double rh = std::hypot(d, h);
  const double r2h = std::hypot(d, 2.0 * h);
  const double sp = k * (rh + h);
  const double sm = k * (d * d / (rh + h));
  const double tp = k * (r2h + 2.0 * h);
  const double tm = k * (d * d / (r2h + 2.0 * h));
  const double u0 = k * d;
  const cd ej = std::exp(2.0 * j * k * h);
  const cd emj = std::exp(-2.0 * j * k * h);
  const cd ea = emf_kernel(u0);
  const cd esp = emf_kernel(sp);
  const cd esm = emf_kernel(sm);
  const cd etp = emf_kernel(tp);
  const cd etm = emf_kernel(tm);

  const cd A = (2.0 * ea - (1.0 + ej) * esp - (1.0 + emj) * esm + ej * etp + emj * etm) /
               (2.0 * j);
  const cd B = (std::exp(j * k * h) * esp + std::exp(-j * k * h) * esm -
                2.0 * std::cos(k * h) * ea) /
               j;
  return j * free_space_eta / (4.0 * std::numbers::pi) *
         (2.0 * A - 2.0 * std::cos(k * h) * B);
}

cd input_referred(double d, const array_geometry& g, double frequency) {
  if (!(frequency > 0)) throw std::invalid_argument("frequency must be > 0");
  const double k = 2.0 * std::numbers::pi * frequency / speed_of_light;
  const double h = g.dipole_length / 2.0;
  const double s = std::sin(k * h);
  if (std::abs(s) < 1e-9)
    throw std::runtime_error(
        "dipole length is an integer number of wavelengths; "
        "input-referred impedance is undefined");
  return mutual_max_referred(d, h, k) / (s * s);
}

}  // namespace

void array_geometry::validate() const {
  if (element_count != 2 && element_count != 3)
    throw std::invalid_argument("element_count must be 2 or 3");
  if (!(dipole_length > 0)) throw std::invalid_argument("dipole_length must be > 0");
  if (!(spacing > 0)) throw std::invalid_argument("spacing must be > 0");
  if (!(wire_radius > 0)) throw std::invalid_argument("wire_radius must be > 0");
  if (!(wire_radius < dipole_length / 100.0))
    throw std::invalid_argument("wire_radius must be below dipole_length/100 (thin wire)");
  if (!(reference_frequency > 0))
    throw std::invalid_argument("reference_frequency must be > 0");
}

array_geometry make_default_array(int elements, double f_r, double spacing_wavelengths,
                                  double wire_radius_wavelengths) {
  const double lambda = speed_of_light / f_r;
  array_geometry g;
  g.element_count = elements;
  g.dipole_length = lambda / 2.0;
  g.spacing = spacing_wavelengths * lambda;
  g.wire_radius = wire_radius_wavelengths * lambda;
  g.reference_frequency = f_r;
  g.validate();
  return g;
}

std::complex<double> dipole_self_impedance(const array_geometry& g, double frequency) {
  g.validate();
  // Same kernel as the mutual form with the field evaluated on the wire surface.
  return input_referred(g.wire_radius, g, frequency);
}

std::complex<double> dipole_mutual_impedance(double spacing, const array_geometry& g,
                                             double frequency) {
  g.validate();
  if (!(spacing > 0)) throw std::invalid_argument("spacing must be > 0");
  return input_referred(spacing, g, frequency);
}

array_impedance array_impedance_at(const array_geometry& g, double frequency) {
  g.validate();
  const cd a = dipole_self_impedance(g, frequency);
  const cd b = dipole_mutual_impedance(g.spacing, g, frequency);
  array_impedance out;
  out.frequency = frequency;
  if (g.element_count == 2) {
    out.z.resize(2, 2);
    out.z << a, b, b, a;
  } else {
    // Center element sits midway between the outer pair; its self impedance is
    // pinned to a so the matrix keeps the [[a,b,c],[b,a,c],[c,c,a]] structure
    // the three-source solve assumes.
    const cd c = dipole_mutual_impedance(g.spacing / 2.0, g, frequency);
    out.z.resize(3, 3);
    out.z << a, b, c, b, a, c, c, c, a;
  }
  return out;
}

}  // namespace dmnkit
