#pragma once
#include <Eigen/Dense>
#include <complex>

namespace dmnkit {

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double free_space_eta = 376.730313668;

struct array_geometry {
  int element_count = 2;        // 2 or 3
  double dipole_length = 0;     // meters (physical, fixed across a sweep)
  double spacing = 0;           // meters between the outer pair
  double wire_radius = 0;       // meters
  double reference_frequency = 0;  // Hz

  void validate() const;  // throws std::invalid_argument on a bad field
};

// Half-wave dipoles at f_r, spacing given in wavelengths, radius lambda/1000.
array_geometry make_default_array(int elements = 2, double f_r = 3e9,
                                  double spacing_wavelengths = 0.25,
                                  double wire_radius_wavelengths = 1e-3);

struct array_impedance {
  double frequency = 0;
  Eigen::MatrixXcd z;

  std::complex<double> a() const { return z(0, 0); }
  std::complex<double> b() const { return z(0, 1); }
  std::complex<double> c() const { return z(0, 2); }
};

// Induced-EMF self impedance of a center-fed cylindrical dipole (input-referred).
std::complex<double> dipole_self_impedance(const array_geometry& g, double frequency);

// Induced-EMF mutual impedance of two parallel side-by-side dipoles (input-referred).
std::complex<double> dipole_mutual_impedance(double spacing, const array_geometry& g,
                                             double frequency);

// Symmetric impedance matrix; 3-element arrays use outer spacing d and
// adjacent spacing d/2 with the center-row structure [[a,b,c],[b,a,c],[c,c,a]].
array_impedance array_impedance_at(const array_geometry& g, double frequency);

}  // namespace dmnkit
