#pragma once
#include <complex>
#include <optional>

namespace dmnkit {

// Single series line transforming z_port to a real r.  When the radicand of
// the characteristic-impedance formula is negative the match is infeasible
// with one line; |z0i| of the imaginary result is reported for diagnostics.
struct single_line_match {
  bool feasible = false;
  double z0i = 0;        // ohms (valid when feasible)
  double imag_z0i = 0;   // |imaginary part| when infeasible
  double theta_deg = 0;  // electrical length in (0, 180]
};
single_line_match match_single_line(std::complex<double> z_port, double r);

// Two-section alternative: a line at r rotating z2 onto the real axis
// (smallest positive angle), then a quarter-wave transformer to r.
struct quarter_wave_t2 {
  double theta21_deg = 0;  // rotation length of the r-impedance line
  double r_x = 0;          // purely real impedance reached
  double z22 = 0;          // quarter-wave section impedance sqrt(r * r_x)
};
quarter_wave_t2 match_t2_quarter_wave(std::complex<double> z2, double r);

// Stub alternative: 45-degree short-circuited stub cancels the port
// susceptance, then a quarter-wave transformer matches the leftover
// conductance.  Infeasible (nullopt) when the port is not capacitive.
struct stub_t2 {
  double z_s1 = 0;  // stub impedance, 45 degrees, shorted
  double z_s2 = 0;  // transformer impedance, 90 degrees
};
std::optional<stub_t2> match_t2_stub(std::complex<double> z2, double r);

// Full ring design: ring impedance, the even/odd port impedances z1/z2, the
// T1 single-line match and both T2 alternatives.
struct ring_hybrid_design {
  double z0 = 0;
  std::complex<double> z1, z2;
  single_line_match t1;
  single_line_match t2_single;  // kept for reporting; infeasible for capacitive z2
  quarter_wave_t2 t2_qw;
  std::optional<stub_t2> t2_stub;
  double r = 50;
};

// Ring characteristic impedance and port impedances from the array entries.
void design_ring_impedances(std::complex<double> a, std::complex<double> b, double r,
                            double& z0, std::complex<double>& z1, std::complex<double>& z2);

ring_hybrid_design design_ring_hybrid(std::complex<double> a, std::complex<double> b,
                                      double r);

}  // namespace dmnkit
