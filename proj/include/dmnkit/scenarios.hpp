#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>

#include "dmnkit/emf_dipole.hpp"
#include "dmnkit/lumped_dmn.hpp"
#include "dmnkit/microstrip.hpp"
#include "dmnkit/ndm.hpp"
#include "dmnkit/netlist.hpp"
#include "dmnkit/ring_hybrid.hpp"
#include "dmnkit/sweep.hpp"

namespace dmnkit {

enum class scenario_kind { baseline, dmn_le, dmn_rh, dmn_rh_stub, ndm, compare };

std::string scenario_name(scenario_kind k);
scenario_kind parse_scenario(const std::string& name);

// Where the design-time array impedance matrix comes from: the dipole model,
// the published reference design values, or an explicit override matrix.
enum class z_source_kind { model, reference, override_matrix };

// Reference design values the tables and regression tests compare against.
namespace reference_values {

inline const std::complex<double> a{73.05, 42.44};   // self impedance
inline const std::complex<double> b{40.74, -28.31};  // quarter-wave-spaced mutual
inline const std::complex<double> c{64.11, -0.074};  // eighth-wave-spaced mutual

Eigen::Matrix2cd z_two();    // [[a,b],[b,a]]
Eigen::Matrix3cd z_three();  // [[a,b,c],[b,a,c],[c,c,a]]

// lumped-branch component values (farads or henries, 0 = open branch) and
// their Q ratings at q_frequency
inline constexpr std::array<double, 10> branch_value{
    0.53888e-12, 0.53888e-12, 0.63942e-12, 0.63942e-12, 2.3544e-9,
    2.7827e-9,   0.29575e-12, 0.29575e-12, 2.7827e-9,   0.0};
inline constexpr std::array<double, 10> branch_q{137, 137, 131, 131, 64.4,
                                                 78.9, 146, 146, 78.9, 0};
inline constexpr double q_frequency = 2.4e9;

// ring-hybrid chain
inline constexpr double rh_z0 = 97.1845;
inline const std::complex<double> rh_z1{40.8666, -5.0754};
inline const std::complex<double> rh_z2{25.2097, -55.2266};
inline constexpr double rh_z01 = 43.6155;
inline constexpr double rh_theta1_deg = 122.498;
inline constexpr double rh_z02_imag = 69.936;  // infeasible single-line flag
inline constexpr double rh_theta21_deg = 51.056;
inline constexpr double rh_z22 = 23.3544;
inline constexpr double rh_zs1 = 66.7342;
inline constexpr double rh_zs2 = 85.44;

// microstrip dimensions (meters): {width, length} per line
inline constexpr std::array<double, 2> dim_ring{0.4356e-3, 12.5859e-3};
inline constexpr std::array<double, 2> dim_t1{2.7999e-3, 15.8662e-3};
inline constexpr std::array<double, 2> dim_t21{2.2016e-3, 6.7001e-3};
inline constexpr std::array<double, 2> dim_t22{7.0753e-3, 11.0431e-3};
inline constexpr std::array<double, 2> dim_s1{1.2249e-3, 6.0741e-3};
inline constexpr std::array<double, 2> dim_s2{0.6503e-3, 12.4345e-3};

// networkless design
inline const std::complex<double> ndm_z1{32.3, -70.76};
inline const std::complex<double> ndm_z3{4.09, 4.66};
std::complex<double> ndm_g();                          // 0.1176 at 145.2833 deg
std::array<std::complex<double>, 3> ndm_u0();          // drive voltages
std::array<std::complex<double>, 3> ndm_u0_comp();     // compensated drives

}  // namespace reference_values

struct loss_config {
  bool use_q = false;  // false: ideal components
  std::array<double, 10> branch_q = reference_values::branch_q;
  double q_frequency = reference_values::q_frequency;
};

struct run_config {
  scenario_kind scenario = scenario_kind::baseline;
  double f_r = 3e9;
  double spacing_wl = 0.25;        // element spacing in wavelengths at f_r
  double wire_radius_wl = 1e-3;    // dipole wire radius in wavelengths
  double f_min = 2.4e9;
  double f_max = 3.6e9;
  int points = 601;
  substrate board{};
  loss_config loss{};
  z_source_kind z_source = z_source_kind::model;
  Eigen::MatrixXcd z_override;     // used when z_source == override_matrix
  std::array<std::complex<double>, 2> ndm_drives{};  // u01, u02; u03 follows
  std::string out_dir = "out";

  run_config();
  void validate() const;
};

// JSON round trip for config files; the echo embedded in reports omits
// out_dir so identical designs produce byte-identical reports anywhere.
std::string config_to_json(const run_config& cfg);
run_config config_from_json(const std::string& text);

array_geometry scenario_geometry(const run_config& cfg, int elements);
// Design-time impedance matrix at f_r (elements = 2 or 3).
Eigen::MatrixXcd scenario_z_at(const run_config& cfg, int elements);

struct le_result {
  Eigen::Matrix2cd z_at;
  lumped_design design;
};

struct rh_result {
  Eigen::Matrix2cd z_at;
  ring_hybrid_design design;
  std::optional<microstrip_line> ring_line, t1_line, t21_line, t22_line;
  std::optional<microstrip_line> s1_line, s2_line;
};

struct ndm_result {
  Eigen::Matrix3cd z_at;
  ndm_solution sol;
  std::array<l_section, 3> sections;
  std::array<std::complex<double>, 3> u0;              // u01, u02, derived u03
  std::array<std::complex<double>, 3> u0_compensated;  // u0_i / transfer_i
};

le_result design_le(const run_config& cfg);
rh_result design_rh(const run_config& cfg);
ndm_result design_ndm(const run_config& cfg);

netlist baseline_netlist(const run_config& cfg);
netlist le_netlist(const run_config& cfg, const le_result& r);
netlist rh_netlist(const run_config& cfg, const rh_result& r, bool stub_variant);
netlist ndm_netlist(const run_config& cfg, const ndm_result& r);

// Dispatch on cfg.scenario (anything but compare).
netlist scenario_netlist(const run_config& cfg);

// Designs the scenario and writes design_report.json and netlist.json into
// cfg.out_dir; with_sweep additionally writes sweep.s2p, sweep.csv and
// bandwidth.json.  The compare scenario runs every concrete scenario into a
// subdirectory each and writes a combined compare.csv.  Returns 0 on success.
int run(const run_config& cfg, bool with_sweep = true);

// Design tables with reference values and percent deviation side by side.
std::string tables_text(const run_config& cfg);

}  // namespace dmnkit
