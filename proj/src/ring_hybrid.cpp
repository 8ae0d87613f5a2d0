#include "dmnkit/ring_hybrid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dmnkit {
namespace {

using cd = std::complex<double>;
constexpr double rad2deg = 180.0 / std::numbers::pi;

cd line_input(cd z_load, double zc, double theta_rad) {
  const double t = std::tan(theta_rad);
  return zc * (z_load + cd(0, zc * t)) / (zc + cd(0, 1) * z_load * t);
}

}  // namespace

single_line_match match_single_line(cd z, double r) {
  single_line_match m;
  if (std::abs(z.real() - r) < 1e-12) {
    if (std::abs(z.imag()) < 1e-12) {  // already matched
      m.feasible = true;
      m.z0i = r;
      m.theta_deg = 0;
      return m;
    }
    m.feasible = false;  // formula pole: one line cannot do it
    m.imag_z0i = std::numeric_limits<double>::infinity();
    return m;
  }
  const double radicand = r * z.real() - r * z.imag() * z.imag() / (r - z.real());
  if (radicand < 0) {
    m.feasible = false;
    m.imag_z0i = std::sqrt(-radicand);
    return m;
  }
  m.feasible = true;
  m.z0i = std::sqrt(radicand);
  if (std::abs(z.imag()) < 1e-12) {
    m.theta_deg = 90.0;  // quarter-wave transformer limit (tan -> infinity)
  } else {
    double th = std::atan((r - z.real()) * m.z0i / (r * z.imag())) * rad2deg;
    if (th < 0) th += 180.0;  // negative branch folded into (0, 180]
    m.theta_deg = th;
  }
  return m;
}

quarter_wave_t2 match_t2_quarter_wave(cd z2, double r) {
  if (!(z2.real() > 0)) throw std::invalid_argument("z2 must have a positive real part");
  quarter_wave_t2 q;
  if (std::abs(z2.imag()) < 1e-12) {  // already real: no rotation needed
    q.theta21_deg = 0;
    q.r_x = z2.real();
    q.z22 = std::sqrt(r * q.r_x);
    return q;
  }
  // input of the r-line is real where tan(theta) solves t^2 - beta t - 1 = 0
  const double beta = (r * r - std::norm(z2)) / (r * z2.imag());
  const double t_pos = 0.5 * (beta + std::hypot(beta, 2.0));  // positive root
  q.theta21_deg = std::atan(t_pos) * rad2deg;                 // smallest positive angle
  const cd zin = line_input(z2, r, std::atan(t_pos));
  if (std::abs(zin.imag()) > 1e-6)
    throw std::runtime_error("rotation did not land on the real axis");
  q.r_x = zin.real();
  q.z22 = std::sqrt(r * q.r_x);
  return q;
}

std::optional<stub_t2> match_t2_stub(cd z2, double r) {
  const cd y2 = 1.0 / z2;
  // a shorted 45-degree stub presents -j/z_s1; it can only cancel a
  // capacitive (positive) port susceptance
  if (y2.imag() < 1e-12) return std::nullopt;
  stub_t2 s;
  s.z_s1 = 1.0 / y2.imag();
  s.z_s2 = std::sqrt(r / y2.real());
  return s;
}

void design_ring_impedances(cd a, cd b, double r, double& z0, cd& z1, cd& z2) {
  if (std::abs(a + b) < 1e-9 || std::abs(a - b) < 1e-9)
    throw std::invalid_argument("degenerate array modes (a = +/-b); ring cannot separate them");
  z0 = std::pow(4.0 * std::abs(a + b) * std::abs(a - b) * r * r, 0.25);
  z1 = (z0 * z0 / 2.0) / (a + b);
  z2 = (z0 * z0 / 2.0) / (a - b);
}

ring_hybrid_design design_ring_hybrid(cd a, cd b, double r) {
  ring_hybrid_design d;
  d.r = r;
  design_ring_impedances(a, b, r, d.z0, d.z1, d.z2);
  d.t1 = match_single_line(d.z1, r);
  d.t2_single = match_single_line(d.z2, r);
  d.t2_qw = match_t2_quarter_wave(d.z2, r);
  d.t2_stub = match_t2_stub(d.z2, r);
  return d;
}

}  // namespace dmnkit
