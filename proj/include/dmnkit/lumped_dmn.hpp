#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>

namespace dmnkit {

// Principal square root of a real symmetric positive-definite matrix.
// Throws std::invalid_argument naming the offending eigenvalue otherwise.
Eigen::MatrixXd principal_sqrt_spd(const Eigen::MatrixXd& m);

// Ideal decoupling-and-matching four-port in both immittance forms.
// Port order everywhere: T1, T2, A1, A2 (sources first, antennas last).
struct dmn_abstract {
  Eigen::Matrix2cd x1;  // source-antenna impedance block, purely imaginary
  Eigen::Matrix2cd x2;  // antenna-antenna impedance block, purely imaginary
  Eigen::Matrix2cd b1;  // source-source susceptance block (times j in Y)
  Eigen::Matrix2cd b2;  // source-antenna susceptance block (times j in Y)
  double source_resistance = 50.0;

  Eigen::Matrix4cd z_mt() const;  // [[0, X1], [X1, X2]]
  Eigen::Matrix4cd y_mt() const;  // [[jB1, jB2], [jB2, 0]]
};

// Lossless reciprocal four-port that simultaneously decouples and matches a
// two-element array with impedance matrix z_at to source resistance r.
dmn_abstract synthesize_zmt(const Eigen::Matrix2cd& z_at, double r);

// Branch admittances of the ten-branch realization:
//   Y1..Y4  shunt at T1, T2, A1, A2
//   Y5 T1-T2, Y6 T1-A1, Y7 T1-A2, Y8 T2-A1, Y9 T2-A2, Y10 A1-A2
struct branch_set {
  std::array<std::complex<double>, 10> y{};
};
branch_set extract_branches(const dmn_abstract& dmn);

// Rebuilds the four-port nodal admittance matrix from branch values.
Eigen::Matrix4cd assemble_from_branches(const branch_set& b);

enum class component_kind { capacitor, inductor };

struct lumped_component {
  component_kind kind;
  double value = 0;  // farads or henries
  std::optional<double> q_factor;
  double q_frequency = 0;  // Hz at which q_factor was specified
};

// Susceptance to element at f_r: positive imaginary -> capacitor, negative ->
// inductor; |y| below 1e-12 S -> empty (open branch).  A non-imaginary y is an
// error: a lossy branch has no pure-LC realization.
std::optional<lumped_component> realize_lc(std::complex<double> y, double f_r);

// Equivalent series resistance from the component Q at its rated frequency;
// constant across a sweep.  Requires q_factor to be set.
double apply_q_loss(const lumped_component& c);

struct lumped_design {
  dmn_abstract abstract;
  branch_set branches;
  std::array<std::optional<lumped_component>, 10> components;
  double f_r = 0;
};

lumped_design design_lumped_dmn(const Eigen::Matrix2cd& z_at, double r, double f_r);

// Attach per-branch Q factors (0 entries mean lossless) rated at f_q.
void assign_q_factors(lumped_design& d, const std::array<double, 10>& q, double f_q);

}  // namespace dmnkit
