#include "dmnkit/microstrip.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dmnkit {
namespace {

constexpr double c0 = 299792458.0;

// Width-to-height ratio of the zero-thickness line for a target impedance.
double synthesize_w_over_h(double z0, double er) {
  const double a = z0 / 60.0 * std::sqrt((er + 1.0) / 2.0) +
                   (er - 1.0) / (er + 1.0) * (0.23 + 0.11 / er);
  const double wh_narrow = 8.0 * std::exp(a) / (std::exp(2.0 * a) - 2.0);
  if (wh_narrow < 2.0) return wh_narrow;
  const double b = 377.0 * std::numbers::pi / (2.0 * z0 * std::sqrt(er));
  return 2.0 / std::numbers::pi *
         (b - 1.0 - std::log(2.0 * b - 1.0) +
          (er - 1.0) / (2.0 * er) * (std::log(b - 1.0) + 0.39 - 0.61 / er));
}

double effective_eps(double w_over_h, double er, double t_over_h) {
  double e = (er + 1.0) / 2.0 + (er - 1.0) / 2.0 / std::sqrt(1.0 + 12.0 / w_over_h);
  if (w_over_h <= 1.0) {
    const double d = 1.0 - w_over_h;
    e += (er - 1.0) / 2.0 * 0.04 * d * d;
  }
  // conductor-thickness reduction
  e -= (er - 1.0) / 4.6 * t_over_h / std::sqrt(w_over_h);
  return e;
}

}  // namespace

microstrip_line microstrip_dimensions(double z0, double theta_deg, const substrate& sub,
                                      double f) {
  if (z0 < 10.0 || z0 > 200.0) {
    std::ostringstream os;
    os << "target impedance " << z0 << " outside the synthesis range [10, 200] ohms";
    throw std::invalid_argument(os.str());
  }
  if (!(f > 0)) throw std::invalid_argument("frequency must be > 0");
  if (!(sub.eps_r > 1) || !(sub.height > 0) || !(sub.thickness >= 0))
    throw std::invalid_argument("bad substrate parameters");

  const double wh_eff = synthesize_w_over_h(z0, sub.eps_r);
  // finite conductor thickness makes a strip of width W behave wider by
  // dW = t/pi (1 + ln(2h/t)); etch the synthesized width down accordingly
  double w = wh_eff * sub.height;
  if (sub.thickness > 0) {
    const double dw =
        sub.thickness / std::numbers::pi * (1.0 + std::log(2.0 * sub.height / sub.thickness));
    w -= dw;
  }
  if (w <= 0) {
    std::ostringstream os;
    os << "synthesized width is non-positive at " << z0
       << " ohms on this substrate (impedance too high)";
    throw std::invalid_argument(os.str());
  }

  microstrip_line m;
  m.target_impedance = z0;
  m.electrical_length_deg = theta_deg;
  m.width = w;
  m.effective_eps = effective_eps(w / sub.height, sub.eps_r, sub.thickness / sub.height);
  const double lambda0 = c0 / f;
  m.physical_length = theta_deg / 360.0 * lambda0 / std::sqrt(m.effective_eps);
  return m;
}

}  // namespace dmnkit
