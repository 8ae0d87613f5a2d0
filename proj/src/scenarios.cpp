#include "dmnkit/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dmnkit/sparam_io.hpp"
#include "json.hpp"

namespace dmnkit {

using nlohmann::ordered_json;

namespace {

constexpr double deg = std::numbers::pi / 180.0;

std::complex<double> polar_deg(double mag, double angle_deg) {
  return std::polar(mag, angle_deg * deg);
}

ordered_json cjson(std::complex<double> v) {
  return ordered_json::array({v.real(), v.imag()});
}

ordered_json mjson(const Eigen::MatrixXcd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cjson(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_real(double v) { return fmt("%.6g", v); }

std::string fmt_cplx(std::complex<double> v) {
  return fmt_real(v.real()) + (v.imag() < 0 ? " - j" : " + j") + fmt_real(std::abs(v.imag()));
}

std::string fmt_polar(std::complex<double> v) {
  return fmt_real(std::abs(v)) + " @ " + fmt("%.4f", std::arg(v) / deg) + " deg";
}

// One line of a computed-versus-reference table; deviation is percent of the
// reference magnitude (quiet NaN when there is no reference).
struct ref_row {
  std::string name;
  std::string computed, reference;
  double dev_pct = std::numeric_limits<double>::quiet_NaN();
  ordered_json computed_json, reference_json;
};

ref_row row_real(const std::string& name, double comp, double ref) {
  ref_row r;
  r.name = name;
  r.computed = fmt_real(comp);
  r.reference = fmt_real(ref);
  r.dev_pct = (comp - ref) / ref * 100.0;
  r.computed_json = comp;
  r.reference_json = ref;
  return r;
}

ref_row row_cplx(const std::string& name, std::complex<double> comp, std::complex<double> ref,
                 bool polar = false) {
  ref_row r;
  r.name = name;
  r.computed = polar ? fmt_polar(comp) : fmt_cplx(comp);
  r.reference = polar ? fmt_polar(ref) : fmt_cplx(ref);
  r.dev_pct = std::abs(comp - ref) / std::abs(ref) * 100.0;
  r.computed_json = cjson(comp);
  r.reference_json = cjson(ref);
  return r;
}

ref_row row_plain(const std::string& name, double comp) {
  ref_row r;
  r.name = name;
  r.computed = fmt_real(comp);
  r.reference = "-";
  r.computed_json = comp;
  r.reference_json = nullptr;
  return r;
}

ordered_json rows_json(const std::vector<ref_row>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["parameter"] = r.name;
    j["computed"] = r.computed_json;
    j["reference"] = r.reference_json;
    if (std::isnan(r.dev_pct))
      j["deviation_percent"] = nullptr;
    else
      j["deviation_percent"] = r.dev_pct;
    arr.push_back(j);
  }
  return arr;
}

std::string rows_text(const std::string& title, const std::vector<ref_row>& rows) {
  std::ostringstream os;
  os << title << "\n";
  size_t wn = 9, wc = 8, wr = 9;
  for (const auto& r : rows) {
    wn = std::max(wn, r.name.size());
    wc = std::max(wc, r.computed.size());
    wr = std::max(wr, r.reference.size());
  }
  auto pad = [](const std::string& s, size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  os << "  " << pad("parameter", wn) << "  " << pad("computed", wc) << "  "
     << pad("reference", wr) << "  deviation\n";
  os << "  " << std::string(wn, '-') << "  " << std::string(wc, '-') << "  "
     << std::string(wr, '-') << "  ---------\n";
  for (const auto& r : rows) {
    os << "  " << pad(r.name, wn) << "  " << pad(r.computed, wc) << "  "
       << pad(r.reference, wr) << "  ";
    if (std::isnan(r.dev_pct))
      os << "-";
    else
      os << fmt("%+.2f", r.dev_pct) << "%";
    os << "\n";
  }
  return os.str();
}

const std::array<std::array<std::string, 2>, 10> branch_nodes{{{"t1", ground_node},
                                                               {"t2", ground_node},
                                                               {"a1", ground_node},
                                                               {"a2", ground_node},
                                                               {"t1", "t2"},
                                                               {"t1", "a1"},
                                                               {"t1", "a2"},
                                                               {"t2", "a1"},
                                                               {"t2", "a2"},
                                                               {"a1", "a2"}}};

ordered_json component_json(const std::optional<lumped_component>& c) {
  if (!c) return nullptr;
  ordered_json j;
  j["kind"] = c->kind == component_kind::capacitor ? "capacitor" : "inductor";
  if (c->kind == component_kind::capacitor)
    j["value_farads"] = c->value;
  else
    j["value_henries"] = c->value;
  if (c->q_factor) {
    j["q_factor"] = *c->q_factor;
    j["q_frequency_hz"] = c->q_frequency;
    j["series_ohms"] = apply_q_loss(*c);
  }
  return j;
}

ordered_json lsection_json(const l_section& s) {
  ordered_json j;
  switch (s.topology) {
    case l_topology::none: j["topology"] = "none"; break;
    case l_topology::series_only: j["topology"] = "series_only"; break;
    case l_topology::series_first: j["topology"] = "series_first"; break;
    case l_topology::shunt_first: j["topology"] = "shunt_first"; break;
  }
  j["series_x_ohms"] = s.series_x;
  j["shunt_x_ohms"] = s.shunt_x;
  j["series_element"] = component_json(s.series_elem);
  j["shunt_element"] = component_json(s.shunt_elem);
  j["voltage_transfer"] = cjson(s.voltage_transfer);
  return j;
}

ordered_json msline_json(const std::optional<microstrip_line>& m) {
  if (!m) return nullptr;
  ordered_json j;
  j["target_impedance_ohms"] = m->target_impedance;
  j["electrical_length_deg"] = m->electrical_length_deg;
  j["width_m"] = m->width;
  j["length_m"] = m->physical_length;
  j["effective_eps"] = m->effective_eps;
  return j;
}

std::string loss_mode_name(const loss_config& l) { return l.use_q ? "q-factor" : "ideal"; }

std::string z_source_name(z_source_kind k) {
  switch (k) {
    case z_source_kind::model: return "model";
    case z_source_kind::reference: return "reference";
    case z_source_kind::override_matrix: return "override";
  }
  throw std::logic_error("bad z_source_kind");
}

z_source_kind parse_z_source(const std::string& s) {
  if (s == "model") return z_source_kind::model;
  if (s == "reference") return z_source_kind::reference;
  if (s == "override") return z_source_kind::override_matrix;
  throw std::invalid_argument("unknown z_source: " + s);
}

}  // namespace

std::string scenario_name(scenario_kind k) {
  switch (k) {
    case scenario_kind::baseline: return "baseline";
    case scenario_kind::dmn_le: return "dmn-le";
    case scenario_kind::dmn_rh: return "dmn-rh";
    case scenario_kind::dmn_rh_stub: return "dmn-rh-stub";
    case scenario_kind::ndm: return "ndm";
    case scenario_kind::compare: return "compare";
  }
  throw std::logic_error("bad scenario_kind");
}

scenario_kind parse_scenario(const std::string& name) {
  for (scenario_kind k :
       {scenario_kind::baseline, scenario_kind::dmn_le, scenario_kind::dmn_rh,
        scenario_kind::dmn_rh_stub, scenario_kind::ndm, scenario_kind::compare})
    if (scenario_name(k) == name) return k;
  throw std::invalid_argument("unknown scenario: " + name);
}

namespace reference_values {

Eigen::Matrix2cd z_two() {
  Eigen::Matrix2cd z;
  z << a, b, b, a;
  return z;
}

Eigen::Matrix3cd z_three() {
  Eigen::Matrix3cd z;
  z << a, b, c, b, a, c, c, c, a;
  return z;
}

std::complex<double> ndm_g() { return polar_deg(0.1176, 145.2833); }

std::array<std::complex<double>, 3> ndm_u0() {
  return {polar_deg(10.6327, -41.8153), polar_deg(3.368, 124.8037),
          polar_deg(0.8736, 109.4254)};
}

std::array<std::complex<double>, 3> ndm_u0_comp() {
  return {polar_deg(13.2283, 82.5424), polar_deg(4.1514, -110.8386),
          polar_deg(2.7878, 37.6868)};
}

}  // namespace reference_values

run_config::run_config() {
  const auto u0 = reference_values::ndm_u0();
  ndm_drives = {u0[0], u0[1]};
}

void run_config::validate() const {
  if (!(f_r > 0)) throw std::invalid_argument("reference frequency must be > 0");
  if (!(f_min < f_r && f_r < f_max))
    throw std::invalid_argument("sweep must bracket the reference frequency");
  if (points < 3) throw std::invalid_argument("sweep needs at least 3 points");
  if (!(spacing_wl > 0)) throw std::invalid_argument("spacing must be > 0");
  if (!(wire_radius_wl > 0)) throw std::invalid_argument("wire radius must be > 0");
  if (z_source == z_source_kind::override_matrix &&
      (z_override.rows() == 0 || z_override.rows() != z_override.cols()))
    throw std::invalid_argument("z_override must be a square matrix");
}

std::string config_to_json(const run_config& cfg) {
  ordered_json j;
  j["scenario"] = scenario_name(cfg.scenario);
  j["reference_frequency_hz"] = cfg.f_r;
  j["spacing_wavelengths"] = cfg.spacing_wl;
  j["wire_radius_wavelengths"] = cfg.wire_radius_wl;
  j["sweep"] = {{"f_min_hz", cfg.f_min}, {"f_max_hz", cfg.f_max}, {"points", cfg.points}};
  j["substrate"] = {{"eps_r", cfg.board.eps_r},
                    {"height_m", cfg.board.height},
                    {"thickness_m", cfg.board.thickness}};
  j["loss"] = {{"mode", loss_mode_name(cfg.loss)},
               {"branch_q", cfg.loss.branch_q},
               {"q_frequency_hz", cfg.loss.q_frequency}};
  j["z_source"] = z_source_name(cfg.z_source);
  if (cfg.z_source == z_source_kind::override_matrix)
    j["z_override_ohms"] = mjson(cfg.z_override);
  j["ndm_drive_volts"] =
      ordered_json::array({cjson(cfg.ndm_drives[0]), cjson(cfg.ndm_drives[1])});
  return j.dump(2) + "\n";
}

run_config config_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  run_config cfg;
  if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario"));
  cfg.f_r = j.value("reference_frequency_hz", cfg.f_r);
  cfg.spacing_wl = j.value("spacing_wavelengths", cfg.spacing_wl);
  cfg.wire_radius_wl = j.value("wire_radius_wavelengths", cfg.wire_radius_wl);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    cfg.f_min = s.value("f_min_hz", cfg.f_min);
    cfg.f_max = s.value("f_max_hz", cfg.f_max);
    cfg.points = s.value("points", cfg.points);
  }
  if (j.contains("substrate")) {
    const auto& s = j.at("substrate");
    cfg.board.eps_r = s.value("eps_r", cfg.board.eps_r);
    cfg.board.height = s.value("height_m", cfg.board.height);
    cfg.board.thickness = s.value("thickness_m", cfg.board.thickness);
  }
  if (j.contains("loss")) {
    const auto& l = j.at("loss");
    if (l.contains("mode")) {
      const std::string mode = l.at("mode");
      if (mode == "ideal")
        cfg.loss.use_q = false;
      else if (mode == "q-factor")
        cfg.loss.use_q = true;
      else
        throw std::invalid_argument("unknown loss mode: " + mode);
    }
    if (l.contains("branch_q")) {
      const auto q = l.at("branch_q").get<std::vector<double>>();
      if (q.size() != cfg.loss.branch_q.size())
        throw std::invalid_argument("branch_q needs 10 entries");
      std::copy(q.begin(), q.end(), cfg.loss.branch_q.begin());
    }
    cfg.loss.q_frequency = l.value("q_frequency_hz", cfg.loss.q_frequency);
  }
  if (j.contains("z_source")) cfg.z_source = parse_z_source(j.at("z_source"));
  if (j.contains("z_override_ohms")) {
    const auto& m = j.at("z_override_ohms");
    const auto n = m.size();
    cfg.z_override.resize(n, n);
    for (size_t r = 0; r < n; ++r) {
      if (m.at(r).size() != n) throw std::invalid_argument("z_override must be square");
      for (size_t c = 0; c < n; ++c)
        cfg.z_override(r, c) = {m.at(r).at(c).at(0).get<double>(),
                                m.at(r).at(c).at(1).get<double>()};
    }
  }
  if (j.contains("ndm_drive_volts")) {
    const auto& d = j.at("ndm_drive_volts");
    if (d.size() != 2) throw std::invalid_argument("ndm_drive_volts needs 2 entries");
    for (int i = 0; i < 2; ++i)
      cfg.ndm_drives[i] = {d.at(i).at(0).get<double>(), d.at(i).at(1).get<double>()};
  }
  return cfg;
}

array_geometry scenario_geometry(const run_config& cfg, int elements) {
  return make_default_array(elements, cfg.f_r, cfg.spacing_wl, cfg.wire_radius_wl);
}

Eigen::MatrixXcd scenario_z_at(const run_config& cfg, int elements) {
  switch (cfg.z_source) {
    case z_source_kind::model:
      return array_impedance_at(scenario_geometry(cfg, elements), cfg.f_r).z;
    case z_source_kind::reference:
      if (elements == 2) return reference_values::z_two();
      return reference_values::z_three();
    case z_source_kind::override_matrix:
      if (cfg.z_override.rows() != elements)
        throw std::invalid_argument("z_override size does not fit the scenario");
      return cfg.z_override;
  }
  throw std::logic_error("bad z_source_kind");
}

le_result design_le(const run_config& cfg) {
  le_result r;
  r.z_at = scenario_z_at(cfg, 2);
  r.design = design_lumped_dmn(r.z_at, 50.0, cfg.f_r);
  if (cfg.loss.use_q)
    assign_q_factors(r.design, cfg.loss.branch_q, cfg.loss.q_frequency);
  return r;
}

rh_result design_rh(const run_config& cfg) {
  rh_result r;
  r.z_at = scenario_z_at(cfg, 2);
  r.design = design_ring_hybrid(r.z_at(0, 0), r.z_at(0, 1), 50.0);
  auto ms = [&](double z0, double theta) {
    return microstrip_dimensions(z0, theta, cfg.board, cfg.f_r);
  };
  r.ring_line = ms(r.design.z0, 90.0);
  if (r.design.t1.feasible) r.t1_line = ms(r.design.t1.z0i, r.design.t1.theta_deg);
  r.t21_line = ms(r.design.r, r.design.t2_qw.theta21_deg);
  r.t22_line = ms(r.design.t2_qw.z22, 90.0);
  if (r.design.t2_stub) {
    r.s1_line = ms(r.design.t2_stub->z_s1, 45.0);
    r.s2_line = ms(r.design.t2_stub->z_s2, 90.0);
  }
  return r;
}

ndm_result design_ndm(const run_config& cfg) {
  ndm_result r;
  r.z_at = scenario_z_at(cfg, 3);
  r.sol = ndm_solve(r.z_at);
  const std::array<std::complex<double>, 3> z{r.sol.z1, r.sol.z2, r.sol.z3};
  for (int i = 0; i < 3; ++i) r.sections[i] = l_section_match(z[i], 50.0, cfg.f_r);
  r.u0 = {cfg.ndm_drives[0], cfg.ndm_drives[1],
          r.sol.g1 * cfg.ndm_drives[0] + r.sol.g2 * cfg.ndm_drives[1]};
  r.u0_compensated = compensate_drives(
      r.u0, {r.sections[0].voltage_transfer, r.sections[1].voltage_transfer,
             r.sections[2].voltage_transfer});
  return r;
}

namespace {

elem::z_block scenario_z_block(const run_config& cfg, std::vector<std::string> nodes) {
  elem::z_block zb;
  zb.nodes = std::move(nodes);
  if (cfg.z_source == z_source_kind::model) {
    zb.model = elem::z_block::model_kind::dipole_array;
    zb.geometry = scenario_geometry(cfg, static_cast<int>(zb.nodes.size()));
  } else {
    zb.model = elem::z_block::model_kind::constant;
    zb.z_const = scenario_z_at(cfg, static_cast<int>(zb.nodes.size()));
  }
  return zb;
}

void append_component(netlist& nl, const lumped_component& c, const std::string& p,
                      const std::string& n) {
  const double rs = c.q_factor ? apply_q_loss(c) : 0.0;
  if (c.kind == component_kind::capacitor)
    nl.elements.push_back(elem::capacitor{p, n, c.value, rs});
  else
    nl.elements.push_back(elem::inductor{p, n, c.value, rs});
}

// Appends the section between source-side node src and the load node; returns
// the node the source should attach to (load itself for an empty section).
std::string append_l_section(netlist& nl, const l_section& s, const std::string& src,
                             const std::string& load) {
  if (s.topology == l_topology::none) return load;
  if (!s.series_elem) throw std::runtime_error("matching section series element missing");
  append_component(nl, *s.series_elem, src, load);
  if (s.topology == l_topology::series_only) return src;
  if (!s.shunt_elem) throw std::runtime_error("matching section shunt element missing");
  if (s.topology == l_topology::series_first)
    append_component(nl, *s.shunt_elem, load, ground_node);
  else
    append_component(nl, *s.shunt_elem, src, ground_node);
  return src;
}

}  // namespace

netlist baseline_netlist(const run_config& cfg) {
  netlist nl;
  nl.elements.push_back(scenario_z_block(cfg, {"a1", "a2"}));
  nl.ports = {{"P1", "a1", 50.0}, {"P2", "a2", 50.0}};
  return nl;
}

netlist le_netlist(const run_config& cfg, const le_result& r) {
  netlist nl;
  for (size_t i = 0; i < r.design.components.size(); ++i) {
    const auto& c = r.design.components[i];
    if (!c) continue;
    append_component(nl, *c, branch_nodes[i][0], branch_nodes[i][1]);
  }
  nl.elements.push_back(scenario_z_block(cfg, {"a1", "a2"}));
  nl.ports = {{"P1", "t1", 50.0}, {"P2", "t2", 50.0}};
  return nl;
}

netlist rh_netlist(const run_config& cfg, const rh_result& r, bool stub_variant) {
  const auto& d = r.design;
  if (!d.t1.feasible)
    throw std::runtime_error("sum-port single-line match is infeasible for this array");
  netlist nl;
  const double fr = cfg.f_r;
  nl.elements.push_back(elem::line{"t1", "s", d.t1.z0i, d.t1.theta_deg, fr});
  nl.elements.push_back(elem::line{"s", "a2", d.z0, 90.0, fr});
  nl.elements.push_back(elem::line{"s", "a1", d.z0, 90.0, fr});
  nl.elements.push_back(elem::line{"a1", "d", d.z0, 90.0, fr});
  nl.elements.push_back(elem::line{"d", "a2", d.z0, 270.0, fr});
  if (stub_variant) {
    if (!d.t2_stub)
      throw std::runtime_error("stub match is infeasible: difference port is not capacitive");
    nl.elements.push_back(elem::line{"t2", "d", d.t2_stub->z_s2, 90.0, fr});
    nl.elements.push_back(elem::stub{"d", d.t2_stub->z_s1, 45.0, fr});
  } else {
    nl.elements.push_back(elem::line{"t2", "m2", d.t2_qw.z22, 90.0, fr});
    nl.elements.push_back(elem::line{"m2", "d", d.r, d.t2_qw.theta21_deg, fr});
  }
  nl.elements.push_back(scenario_z_block(cfg, {"a1", "a2"}));
  nl.ports = {{"P1", "t1", 50.0}, {"P2", "t2", 50.0}};
  return nl;
}

netlist ndm_netlist(const run_config& cfg, const ndm_result& r) {
  netlist nl;
  const std::string p1 = append_l_section(nl, r.sections[0], "p1", "a1");
  const std::string p2 = append_l_section(nl, r.sections[1], "p2", "a2");
  const auto t = [&](int i) { return r.sections[i].voltage_transfer; };
  nl.elements.push_back(elem::vcvs{"n3a", ground_node, netlist::source_node("P1"),
                                   ground_node, r.sol.g1 * t(0) / t(2)});
  nl.elements.push_back(elem::vcvs{"n3b", "n3a", netlist::source_node("P2"), ground_node,
                                   r.sol.g2 * t(1) / t(2)});
  const std::string p3 = append_l_section(nl, r.sections[2], "p3", "a3");
  nl.elements.push_back(elem::resistor{"n3b", p3, 50.0});
  nl.elements.push_back(scenario_z_block(cfg, {"a1", "a2", "a3"}));
  nl.ports = {{"P1", p1, 50.0}, {"P2", p2, 50.0}};
  return nl;
}

netlist scenario_netlist(const run_config& cfg) {
  switch (cfg.scenario) {
    case scenario_kind::baseline: return baseline_netlist(cfg);
    case scenario_kind::dmn_le: return le_netlist(cfg, design_le(cfg));
    case scenario_kind::dmn_rh: return rh_netlist(cfg, design_rh(cfg), false);
    case scenario_kind::dmn_rh_stub: return rh_netlist(cfg, design_rh(cfg), true);
    case scenario_kind::ndm: return ndm_netlist(cfg, design_ndm(cfg));
    case scenario_kind::compare:
      throw std::invalid_argument("compare is not a single netlist scenario");
  }
  throw std::logic_error("bad scenario_kind");
}

namespace {

std::vector<ref_row> baseline_rows(const Eigen::Matrix2cd& z) {
  std::vector<ref_row> rows;
  rows.push_back(row_cplx("self_impedance_ohms", z(0, 0), reference_values::a));
  rows.push_back(row_cplx("mutual_impedance_ohms", z(0, 1), reference_values::b));
  return rows;
}

std::vector<ref_row> le_rows(const le_result& r) {
  static const std::array<std::string, 10> names{
      "C1 (t1-gnd)", "C2 (t2-gnd)", "C3 (a1-gnd)", "C4 (a2-gnd)", "L5 (t1-t2)",
      "L6 (t1-a1)",  "C7 (t1-a2)",  "C8 (t2-a1)",  "L9 (t2-a2)",  "Y10 (a1-a2)"};
  std::vector<ref_row> rows;
  for (size_t i = 0; i < 10; ++i) {
    const auto& c = r.design.components[i];
    const double ref = reference_values::branch_value[i];
    ref_row row;
    row.name = names[i];
    row.reference_json = ref == 0 ? ordered_json(nullptr) : ordered_json(ref);
    row.computed_json = component_json(c);
    if (!c) {
      row.computed = "open";
      row.reference = ref == 0 ? "open" : fmt_real(ref);
      if (ref == 0) row.dev_pct = 0.0;
    } else {
      const bool cap = c->kind == component_kind::capacitor;
      row.computed = cap ? fmt_real(c->value * 1e12) + " pF" : fmt_real(c->value * 1e9) + " nH";
      row.reference =
          ref == 0 ? "open" : (cap ? fmt_real(ref * 1e12) + " pF" : fmt_real(ref * 1e9) + " nH");
      if (ref != 0) row.dev_pct = (c->value - ref) / ref * 100.0;
    }
    rows.push_back(row);
  }
  return rows;
}

void append_ms_rows(std::vector<ref_row>& rows, const std::string& stem,
                    const std::optional<microstrip_line>& m,
                    const std::array<double, 2>& ref_dims) {
  if (!m) return;
  rows.push_back(row_real(stem + "_width_mm", m->width * 1e3, ref_dims[0] * 1e3));
  rows.push_back(row_real(stem + "_length_mm", m->physical_length * 1e3, ref_dims[1] * 1e3));
}

std::vector<ref_row> rh_rows(const rh_result& r, bool stub_variant) {
  namespace rv = reference_values;
  const auto& d = r.design;
  std::vector<ref_row> rows;
  rows.push_back(row_real("ring_z0_ohms", d.z0, rv::rh_z0));
  rows.push_back(row_cplx("z1_ohms", d.z1, rv::rh_z1));
  rows.push_back(row_cplx("z2_ohms", d.z2, rv::rh_z2));
  if (d.t1.feasible) {
    rows.push_back(row_real("t1_line_z0_ohms", d.t1.z0i, rv::rh_z01));
    rows.push_back(row_real("t1_line_theta_deg", d.t1.theta_deg, rv::rh_theta1_deg));
  }
  if (!d.t2_single.feasible)
    rows.push_back(row_real("t2_single_line_imag_ohms", d.t2_single.imag_z0i, rv::rh_z02_imag));
  if (!stub_variant) {
    rows.push_back(row_real("t2_rotation_theta_deg", d.t2_qw.theta21_deg, rv::rh_theta21_deg));
    rows.push_back(row_plain("t2_rotated_real_ohms", d.t2_qw.r_x));
    rows.push_back(row_real("t2_transformer_z0_ohms", d.t2_qw.z22, rv::rh_z22));
  } else if (d.t2_stub) {
    rows.push_back(row_real("stub_z0_ohms", d.t2_stub->z_s1, rv::rh_zs1));
    rows.push_back(row_real("stub_transformer_z0_ohms", d.t2_stub->z_s2, rv::rh_zs2));
  }
  append_ms_rows(rows, "ring", r.ring_line, rv::dim_ring);
  append_ms_rows(rows, "t1_line", r.t1_line, rv::dim_t1);
  if (!stub_variant) {
    append_ms_rows(rows, "t2_rotation", r.t21_line, rv::dim_t21);
    append_ms_rows(rows, "t2_transformer", r.t22_line, rv::dim_t22);
  } else {
    append_ms_rows(rows, "stub", r.s1_line, rv::dim_s1);
    append_ms_rows(rows, "stub_transformer", r.s2_line, rv::dim_s2);
  }
  return rows;
}

std::vector<ref_row> ndm_rows(const ndm_result& r) {
  namespace rv = reference_values;
  std::vector<ref_row> rows;
  rows.push_back(row_cplx("self_impedance_ohms", r.z_at(0, 0), rv::a));
  rows.push_back(row_cplx("mutual_12_ohms", r.z_at(0, 1), rv::b));
  rows.push_back(row_cplx("mutual_13_ohms", r.z_at(0, 2), rv::c));
  rows.push_back(row_cplx("z1_ohms", r.sol.z1, rv::ndm_z1));
  rows.push_back(row_cplx("z2_ohms", r.sol.z2, rv::ndm_z1));
  rows.push_back(row_cplx("z3_ohms", r.sol.z3, rv::ndm_z3));
  rows.push_back(row_cplx("g1", r.sol.g1, rv::ndm_g(), true));
  rows.push_back(row_cplx("g2", r.sol.g2, rv::ndm_g(), true));
  const auto u0_ref = rv::ndm_u0();
  const auto uc_ref = rv::ndm_u0_comp();
  for (int i = 0; i < 3; ++i)
    rows.push_back(
        row_cplx("u0" + std::to_string(i + 1) + "_volts", r.u0[i], u0_ref[i], true));
  for (int i = 0; i < 3; ++i)
    rows.push_back(row_cplx("u0" + std::to_string(i + 1) + "_compensated_volts",
                            r.u0_compensated[i], uc_ref[i], true));
  return rows;
}

ordered_json report_header(const run_config& cfg) {
  ordered_json j;
  j["scenario"] = scenario_name(cfg.scenario);
  j["config"] = ordered_json::parse(config_to_json(cfg));
  return j;
}

ordered_json le_report(const run_config& cfg, const le_result& r) {
  ordered_json j = report_header(cfg);
  j["array"] = {{"source", z_source_name(cfg.z_source)}, {"z_at_fr_ohms", mjson(r.z_at)}};
  ordered_json d;
  d["source_resistance_ohms"] = r.design.abstract.source_resistance;
  d["x1_ohms"] = mjson(r.design.abstract.x1);
  d["x2_ohms"] = mjson(r.design.abstract.x2);
  d["b1_siemens"] = mjson(r.design.abstract.b1);
  d["b2_siemens"] = mjson(r.design.abstract.b2);
  ordered_json branches = ordered_json::array();
  for (size_t i = 0; i < 10; ++i) {
    ordered_json b;
    b["branch"] = i + 1;
    b["nodes"] = ordered_json::array({branch_nodes[i][0], branch_nodes[i][1]});
    b["admittance_siemens"] = cjson(r.design.branches.y[i]);
    b["component"] = component_json(r.design.components[i]);
    branches.push_back(b);
  }
  d["branches"] = branches;
  j["design"] = d;
  j["reference_comparison"] = rows_json(le_rows(r));
  return j;
}

ordered_json rh_report(const run_config& cfg, const rh_result& r, bool stub_variant) {
  ordered_json j = report_header(cfg);
  j["array"] = {{"source", z_source_name(cfg.z_source)}, {"z_at_fr_ohms", mjson(r.z_at)}};
  const auto& d = r.design;
  ordered_json jd;
  jd["ring_z0_ohms"] = d.z0;
  jd["z1_ohms"] = cjson(d.z1);
  jd["z2_ohms"] = cjson(d.z2);
  ordered_json t1;
  t1["feasible"] = d.t1.feasible;
  if (d.t1.feasible) {
    t1["z0_ohms"] = d.t1.z0i;
    t1["theta_deg"] = d.t1.theta_deg;
  } else {
    t1["imag_z0_ohms"] = d.t1.imag_z0i;
  }
  jd["t1_line"] = t1;
  ordered_json t2s;
  t2s["feasible"] = d.t2_single.feasible;
  if (d.t2_single.feasible) {
    t2s["z0_ohms"] = d.t2_single.z0i;
    t2s["theta_deg"] = d.t2_single.theta_deg;
  } else {
    t2s["imag_z0_ohms"] = d.t2_single.imag_z0i;
  }
  jd["t2_single_line"] = t2s;
  jd["t2_quarter_wave"] = {{"theta21_deg", d.t2_qw.theta21_deg},
                           {"r_x_ohms", d.t2_qw.r_x},
                           {"z22_ohms", d.t2_qw.z22}};
  if (d.t2_stub)
    jd["t2_stub"] = {{"z_s1_ohms", d.t2_stub->z_s1}, {"z_s2_ohms", d.t2_stub->z_s2}};
  else
    jd["t2_stub"] = nullptr;
  ordered_json ms;
  ms["ring"] = msline_json(r.ring_line);
  ms["t1"] = msline_json(r.t1_line);
  ms["t2_rotation"] = msline_json(r.t21_line);
  ms["t2_transformer"] = msline_json(r.t22_line);
  ms["stub"] = msline_json(r.s1_line);
  ms["stub_transformer"] = msline_json(r.s2_line);
  jd["microstrip"] = ms;
  j["design"] = jd;
  j["reference_comparison"] = rows_json(rh_rows(r, stub_variant));
  return j;
}

ordered_json ndm_report(const run_config& cfg, const ndm_result& r) {
  ordered_json j = report_header(cfg);
  j["array"] = {{"source", z_source_name(cfg.z_source)}, {"z_at_fr_ohms", mjson(r.z_at)}};
  ordered_json d;
  d["z1_ohms"] = cjson(r.sol.z1);
  d["z2_ohms"] = cjson(r.sol.z2);
  d["z3_ohms"] = cjson(r.sol.z3);
  d["g1"] = cjson(r.sol.g1);
  d["g2"] = cjson(r.sol.g2);
  d["x"] = ordered_json::array({cjson(r.sol.x[0]), cjson(r.sol.x[1]), cjson(r.sol.x[2])});
  d["u0_volts"] =
      ordered_json::array({cjson(r.u0[0]), cjson(r.u0[1]), cjson(r.u0[2])});
  d["u0_compensated_volts"] = ordered_json::array(
      {cjson(r.u0_compensated[0]), cjson(r.u0_compensated[1]), cjson(r.u0_compensated[2])});
  d["matching_sections"] = ordered_json::array({lsection_json(r.sections[0]),
                                                lsection_json(r.sections[1]),
                                                lsection_json(r.sections[2])});
  j["design"] = d;
  j["reference_comparison"] = rows_json(ndm_rows(r));
  return j;
}

ordered_json baseline_report(const run_config& cfg, const Eigen::Matrix2cd& z) {
  ordered_json j = report_header(cfg);
  j["array"] = {{"source", z_source_name(cfg.z_source)}, {"z_at_fr_ohms", mjson(z)}};
  j["reference_comparison"] = rows_json(baseline_rows(z));
  return j;
}

ordered_json band_json(const band_interval& b) {
  ordered_json j;
  j["empty"] = b.empty;
  if (!b.empty) {
    j["lo_hz"] = b.lo;
    j["hi_hz"] = b.hi;
    j["width_hz"] = b.width();
  }
  j["clipped_lo"] = b.clipped_lo;
  j["clipped_hi"] = b.clipped_hi;
  return j;
}

ordered_json bandwidth_report(const sparam_sweep& sw, double f_r) {
  const int n = static_cast<int>(sw.ref_ohms.size());
  ordered_json j;
  j["reference_frequency_hz"] = f_r;
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      size_t min_idx = 0;
      double min_db = std::numeric_limits<double>::infinity();
      for (size_t p = 0; p < sw.freq.size(); ++p) {
        const double db = magnitude_db(sw.s[p](i, k));
        if (db < min_db) {
          min_db = db;
          min_idx = p;
        }
      }
      for (double thr : {-10.0, -20.0}) {
        ordered_json e;
        e["parameter"] = "s" + std::to_string(i + 1) + std::to_string(k + 1);
        e["threshold_db"] = thr;
        e["at_reference"] = band_json(bandwidth(sw, i, k, thr, f_r));
        ordered_json am = band_json(bandwidth(sw, i, k, thr, sw.freq[min_idx]));
        am["min_freq_hz"] = sw.freq[min_idx];
        am["min_level_db"] = min_db;
        e["around_minimum"] = am;
        entries.push_back(e);
      }
    }
  }
  j["entries"] = entries;
  return j;
}

struct scenario_run {
  netlist nl;
  sparam_sweep sw;
};

scenario_run run_one(const run_config& cfg, bool with_sweep) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const auto path = [&](const char* name) { return cfg.out_dir + "/" + name; };

  ordered_json report;
  scenario_run out;
  switch (cfg.scenario) {
    case scenario_kind::baseline: {
      const Eigen::Matrix2cd z = scenario_z_at(cfg, 2);
      report = baseline_report(cfg, z);
      out.nl = baseline_netlist(cfg);
      break;
    }
    case scenario_kind::dmn_le: {
      const le_result r = design_le(cfg);
      report = le_report(cfg, r);
      out.nl = le_netlist(cfg, r);
      break;
    }
    case scenario_kind::dmn_rh:
    case scenario_kind::dmn_rh_stub: {
      const bool stub = cfg.scenario == scenario_kind::dmn_rh_stub;
      const rh_result r = design_rh(cfg);
      report = rh_report(cfg, r, stub);
      out.nl = rh_netlist(cfg, r, stub);
      break;
    }
    case scenario_kind::ndm: {
      const ndm_result r = design_ndm(cfg);
      report = ndm_report(cfg, r);
      out.nl = ndm_netlist(cfg, r);
      break;
    }
    case scenario_kind::compare:
      throw std::invalid_argument("compare handled by run()");
  }

  write_text_file(path("design_report.json"), report.dump(2) + "\n");
  write_text_file(path("netlist.json"), netlist_to_json(out.nl));

  if (with_sweep) {
    out.sw = sweep_s_parameters(out.nl, linear_grid(cfg.f_min, cfg.f_max, cfg.points));
    write_touchstone(out.sw, path("sweep.s2p"));
    write_csv(out.sw, path("sweep.csv"));
    write_text_file(path("bandwidth.json"), bandwidth_report(out.sw, cfg.f_r).dump(2) + "\n");
  }
  return out;
}

}  // namespace

int run(const run_config& cfg, bool with_sweep) {
  cfg.validate();
  if (cfg.scenario != scenario_kind::compare) {
    run_one(cfg, with_sweep);
    return 0;
  }

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::array<scenario_kind, 5> kinds{scenario_kind::baseline, scenario_kind::dmn_le,
                                           scenario_kind::dmn_rh, scenario_kind::dmn_rh_stub,
                                           scenario_kind::ndm};
  std::vector<sparam_sweep> sweeps;
  for (scenario_kind k : kinds) {
    run_config sub = cfg;
    sub.scenario = k;
    sub.out_dir = cfg.out_dir + "/" + scenario_name(k);
    sweeps.push_back(run_one(sub, true).sw);
  }

  std::ostringstream os;
  os << "freq_hz";
  for (scenario_kind k : kinds) {
    std::string stem = scenario_name(k);
    for (auto& ch : stem)
      if (ch == '-') ch = '_';
    os << "," << stem << "_s11_db," << stem << "_s22_db," << stem << "_s12_db";
  }
  os << "\n";
  const auto f9 = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (size_t p = 0; p < sweeps[0].freq.size(); ++p) {
    os << f9(sweeps[0].freq[p]);
    for (const auto& sw : sweeps)
      os << "," << f9(magnitude_db(sw.s[p](0, 0))) << "," << f9(magnitude_db(sw.s[p](1, 1)))
         << "," << f9(magnitude_db(sw.s[p](0, 1)));
    os << "\n";
  }
  write_text_file(cfg.out_dir + "/compare.csv", os.str());
  return 0;
}

std::string tables_text(const run_config& cfg) {
  cfg.validate();
  std::ostringstream os;
  const auto one = [&](scenario_kind k) {
    run_config sub = cfg;
    sub.scenario = k;
    switch (k) {
      case scenario_kind::baseline:
        os << rows_text("two-element array impedance at f_r",
                        baseline_rows(scenario_z_at(sub, 2)));
        break;
      case scenario_kind::dmn_le:
        os << rows_text("lumped decoupling-and-matching components", le_rows(design_le(sub)));
        break;
      case scenario_kind::dmn_rh:
        os << rows_text("ring-hybrid design (quarter-wave variant)",
                        rh_rows(design_rh(sub), false));
        break;
      case scenario_kind::dmn_rh_stub:
        os << rows_text("ring-hybrid design (stub variant)", rh_rows(design_rh(sub), true));
        break;
      case scenario_kind::ndm:
        os << rows_text("networkless decoupling-and-matching design",
                        ndm_rows(design_ndm(sub)));
        break;
      case scenario_kind::compare: break;
    }
  };
  if (cfg.scenario == scenario_kind::compare) {
    bool first = true;
    for (scenario_kind k : {scenario_kind::baseline, scenario_kind::dmn_le,
                            scenario_kind::dmn_rh, scenario_kind::dmn_rh_stub,
                            scenario_kind::ndm}) {
      if (!first) os << "\n";
      first = false;
      one(k);
    }
  } else {
    one(cfg.scenario);
  }
  return os.str();
}

}  // namespace dmnkit
