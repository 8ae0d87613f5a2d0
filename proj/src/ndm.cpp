#include "dmnkit/ndm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmnkit {
namespace {

using cd = std::complex<double>;

cd matched_fraction(cd z) { return 1.0 / (1.0 + z / std::conj(z)); }

void require_structure(const Eigen::Matrix3cd& z) {
  const cd a = z(0, 0), b = z(0, 1), c = z(0, 2);
  const double scale = z.cwiseAbs().maxCoeff();
  const auto near = [&](cd u, cd v) { return std::abs(u - v) <= 1e-9 * scale; };
  if (!near(z(1, 1), a) || !near(z(2, 2), a) || !near(z(1, 0), b) || !near(z(2, 0), c) ||
      !near(z(1, 2), c) || !near(z(2, 1), c) || !near(z(0, 2), c))
    throw std::invalid_argument("matrix lacks the [[a,b,c],[b,a,c],[c,c,a]] structure");
}

}  // namespace

ndm_solution ndm_solve(const Eigen::Matrix3cd& z) {
  require_structure(z);
  const cd a = z(0, 0), b = z(0, 1), c = z(0, 2);
  if (std::abs(b) < 1e-12)
    throw std::invalid_argument("b = 0: center-element solution undefined");
  ndm_solution s;
  s.z1 = std::conj(a) - std::conj(b);
  s.z2 = s.z1;
  s.z3 = std::conj(a) - std::conj(c * c / b);
  // The matching identity fixes the gain as g = (-c^2 + (a+Z3) b) / ((b-a-Z1) c);
  // note b - a - Z1 = 2 Re{b - a}, so the denominator is real.
  const cd den = (b - a - s.z1) * c;
  if (std::abs(den) < 1e-12) throw std::invalid_argument("degenerate array: zero gain denominator");
  s.g1 = (-c * c + (a + s.z3) * b) / den;
  s.g2 = s.g1;
  for (int i = 0; i < 3; ++i) {
    const cd zi = i == 2 ? s.z3 : s.z1;
    s.x[i] = 1.0 / (1.0 + std::exp(cd(0, 2.0 * std::arg(zi))));
  }
  return s;
}

matching_report verify_matching(const Eigen::Matrix3cd& z, const ndm_solution& sol,
                                cd u01, cd u02) {
  matching_report rep;
  Eigen::Matrix3cd z0 = Eigen::Matrix3cd::Zero();
  z0.diagonal() << sol.z1, sol.z2, sol.z3;
  const Eigen::Matrix3cd sum = z0 + z;
  Eigen::FullPivLU<Eigen::Matrix3cd> lu(sum);
  if (!lu.isInvertible()) throw std::runtime_error("Z0 + Z is singular");

  const Eigen::Vector3cd u0(u01, u02, sol.g1 * u01 + sol.g2 * u02);
  const Eigen::Vector3cd i = lu.solve(u0);
  const Eigen::Vector3cd u = z * i;

  const std::array<cd, 3> zs{sol.z1, sol.z2, sol.z3};
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    const double denom = std::abs(u0(k));
    if (denom < 1e-30) continue;  // undriven port contributes zero residual
    worst = std::max(worst, std::abs(u(k) - u0(k) * matched_fraction(zs[k])) / denom);
  }
  rep.worst_matching_residual = worst;

  // columnwise matrix identity: (I - Z0 (Z0+Z)^-1) [1 0; 0 1; g1 g2]
  // must equal [x1 0; 0 x2; g1 x3, g2 x3]
  const Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity() - z0 * sum.inverse();
  Eigen::Matrix<cd, 3, 2> cols;
  cols << 1, 0, 0, 1, sol.g1, sol.g2;
  Eigen::Matrix<cd, 3, 2> want;
  want << sol.x[0], 0, 0, sol.x[1], sol.g1 * sol.x[2], sol.g2 * sol.x[2];
  rep.worst_identity_residual = (m * cols - want).cwiseAbs().maxCoeff();

  // delivered power must equal the available power of conjugate-matched sources
  const double p_in = 0.5 * (i.adjoint() * u).real()(0, 0);
  double p_avail = 0;
  for (int k = 0; k < 3; ++k)
    p_avail += std::norm(u0(k)) / (8.0 * zs[k].real());
  rep.power_residual = p_avail > 0 ? std::abs(p_in - p_avail) / p_avail : 0.0;
  return rep;
}

l_section l_section_match(cd z_target, double r, double f_r) {
  if (!(z_target.real() > 0))
    throw std::invalid_argument("target impedance must have a positive real part");
  if (!(r > 0)) throw std::invalid_argument("source resistance must be > 0");
  l_section sec;
  const double re = z_target.real(), im = z_target.imag();

  if (std::abs(re - r) < 1e-9 && std::abs(im) < 1e-9) {
    sec.topology = l_topology::none;  // already matched
    return sec;
  }
  if (std::abs(re - r) < 1e-9) {
    sec.topology = l_topology::series_only;
    sec.series_x = im;
  } else {
    const cd y = 1.0 / z_target;
    if (1.0 / y.real() > r) {
      // source - series X - shunt X - array; inductor on the source side
      sec.topology = l_topology::series_first;
      sec.series_x = std::sqrt(r * (1.0 / y.real() - r));
      const cd y_se = 1.0 / cd(r, sec.series_x);
      const double bp = y.imag() - y_se.imag();
      sec.shunt_x = -1.0 / bp;
    } else {
      // source - shunt X - series X - array; inductor on the source side
      sec.topology = l_topology::shunt_first;
      sec.shunt_x = r * std::sqrt(re / (r - re));
      const cd zp = r * cd(0, sec.shunt_x) / cd(r, sec.shunt_x);
      sec.series_x = im - zp.imag();
    }
  }

  const auto as_elem = [&](double x) -> std::optional<lumped_component> {
    if (x == 0) return std::nullopt;
    const double w = 2.0 * std::numbers::pi * f_r;
    lumped_component c;
    if (x > 0) {
      c.kind = component_kind::inductor;
      c.value = x / w;
    } else {
      c.kind = component_kind::capacitor;
      c.value = -1.0 / (x * w);
    }
    return c;
  };
  if (sec.topology != l_topology::none) sec.series_elem = as_elem(sec.series_x);
  if (sec.topology == l_topology::series_first || sec.topology == l_topology::shunt_first)
    sec.shunt_elem = as_elem(sec.shunt_x);

  // open-circuit voltage transfer source EMF -> array-side terminal
  switch (sec.topology) {
    case l_topology::series_first:
      sec.voltage_transfer = cd(0, sec.shunt_x) / cd(r, sec.series_x + sec.shunt_x);
      break;
    case l_topology::shunt_first:
      sec.voltage_transfer = cd(0, sec.shunt_x) / cd(r, sec.shunt_x);
      break;
    default:
      sec.voltage_transfer = 1.0;  // no shunt path: no division at open circuit
  }
  return sec;
}

std::array<cd, 3> compensate_drives(const std::array<cd, 3>& u0,
                                    const std::array<cd, 3>& transfers) {
  std::array<cd, 3> out;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(transfers[k]) < 1e-15)
      throw std::invalid_argument("zero voltage transfer cannot be compensated");
    out[k] = u0[k] / transfers[k];
  }
  return out;
}

}  // namespace dmnkit
