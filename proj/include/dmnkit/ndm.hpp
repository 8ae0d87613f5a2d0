#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>

#include "dmnkit/lumped_dmn.hpp"

namespace dmnkit {

// Source impedances and cross-coupling gains that decouple and power-match a
// three-element array whose matrix has the [[a,b,c],[b,a,c],[c,c,a]] shape.
struct ndm_solution {
  std::complex<double> z1, z2, z3;  // source impedances, z1 == z2
  std::complex<double> g1, g2;      // third drive u03 = g1*u01 + g2*u02
  std::array<std::complex<double>, 3> x;  // x_i = 1/(1 + exp(2j arg Z_i))
};

ndm_solution ndm_solve(const Eigen::Matrix3cd& z);

struct matching_report {
  double worst_matching_residual = 0;  // max_i |u_i - u0_i/(1+Z_i/Z_i*)| / |u0_i|
  double worst_identity_residual = 0;  // columnwise residual of the matching identity
  double power_residual = 0;           // |P_in - sum |u0_i|^2 / (8 Re Z_i)| / P_avail
};

// Drives ports 1 and 2 with u01/u02 (port 3 follows via g), solves the
// loaded-source network, and reports how far each port voltage is from the
// conjugate-matched value.
matching_report verify_matching(const Eigen::Matrix3cd& z, const ndm_solution& sol,
                                std::complex<double> u01, std::complex<double> u02);

enum class l_topology { none, series_only, series_first, shunt_first };

// Lossless two-element section between an r-ohm source and the array that
// presents z_target looking back from the array side.  Reactances are chosen
// with the inductor on the source side.  voltage_transfer is the open-circuit
// array-side EMF divided by the source EMF (used to rescale drive voltages).
struct l_section {
  l_topology topology = l_topology::none;
  double series_x = 0;  // ohms at f_r (0 when absent)
  double shunt_x = 0;   // ohms at f_r (0 when absent)
  std::optional<lumped_component> series_elem;
  std::optional<lumped_component> shunt_elem;
  std::complex<double> voltage_transfer{1.0, 0.0};
};

l_section l_section_match(std::complex<double> z_target, double r, double f_r);

// u0'_i = u0_i / transfer_i; throws on a zero transfer.
std::array<std::complex<double>, 3> compensate_drives(
    const std::array<std::complex<double>, 3>& u0,
    const std::array<std::complex<double>, 3>& transfers);

}  // namespace dmnkit
