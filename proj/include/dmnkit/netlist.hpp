#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "dmnkit/emf_dipole.hpp"

namespace dmnkit {

inline const std::string ground_node = "gnd";

namespace elem {

struct resistor {
  std::string p, n;
  double ohms = 0;
};

struct capacitor {
  std::string p, n;
  double farads = 0;
  double series_ohms = 0;  // equivalent series resistance
};

struct inductor {
  std::string p, n;
  double henries = 0;
  double series_ohms = 0;
};

// Ideal TEM line as a single-ended two-port between nodes p and n; the
// electrical length scales linearly with frequency from its value at f_ref.
struct line {
  std::string p, n;
  double z0 = 50;
  double theta_deg = 90;
  double f_ref = 0;
};

// Short-circuited stub hanging off node p.
struct stub {
  std::string p;
  double z0 = 50;
  double theta_deg = 45;
  double f_ref = 0;
};

// Voltage-controlled voltage source: V(p) - V(n) = gain * (V(cp) - V(cn)).
// The control pair only senses; it carries no current.
struct vcvs {
  std::string p, n, cp, cn;
  std::complex<double> gain{0, 0};
};

// Frequency-dependent multiport impedance block; port k sits between
// nodes[k] and ground.  Either a fixed matrix or a dipole-array model.
struct z_block {
  enum class model_kind { constant, dipole_array };
  std::vector<std::string> nodes;
  model_kind model = model_kind::constant;
  Eigen::MatrixXcd z_const;
  array_geometry geometry;

  Eigen::MatrixXcd z_at(double f) const;
};

}  // namespace elem

using element = std::variant<elem::resistor, elem::capacitor, elem::inductor, elem::line,
                             elem::stub, elem::vcvs, elem::z_block>;

struct port_spec {
  std::string name;
  std::string node;
  double ref_ohms = 50;
};

struct netlist {
  std::vector<element> elements;
  std::vector<port_spec> ports;

  // Internal EMF node of a port's excitation source; a vcvs may reference it
  // to sense the source EMF directly.
  static std::string source_node(const std::string& port_name) { return "_src_" + port_name; }
};

std::string netlist_to_json(const netlist& nl);
netlist netlist_from_json(const std::string& text);

}  // namespace dmnkit
