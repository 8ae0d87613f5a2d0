#pragma once

namespace dmnkit {

struct substrate {
  double eps_r = 6.15;
  double height = 1.52e-3;      // meters
  double thickness = 35e-6;     // conductor thickness, meters
};

struct microstrip_line {
  double target_impedance = 0;     // ohms
  double electrical_length_deg = 0;
  double width = 0;                // meters, etched width
  double physical_length = 0;      // meters
  double effective_eps = 0;
};

// Closed-form width synthesis (narrow/wide branches), conductor-thickness
// correction, and effective permittivity; length set by the electrical length
// at frequency f.  target impedance restricted to [10, 200] ohms.
microstrip_line microstrip_dimensions(double target_impedance, double electrical_length_deg,
                                      const substrate& sub, double f);

}  // namespace dmnkit
