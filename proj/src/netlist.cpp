#include "dmnkit/netlist.hpp"

#include <stdexcept>

#include "json.hpp"

namespace dmnkit {

using nlohmann::ordered_json;

Eigen::MatrixXcd elem::z_block::z_at(double f) const {
  if (model == model_kind::constant) return z_const;
  return array_impedance_at(geometry, f).z;
}

namespace {

ordered_json complex_to_json(std::complex<double> v) {
  return ordered_json::array({v.real(), v.imag()});
}

std::complex<double> complex_from_json(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ordered_json matrix_to_json(const Eigen::MatrixXcd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const ordered_json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXcd m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j.at(r).at(c));
  return m;
}

struct to_json_visitor {
  ordered_json operator()(const elem::resistor& e) const {
    return {{"type", "resistor"}, {"p", e.p}, {"n", e.n}, {"ohms", e.ohms}};
  }
  ordered_json operator()(const elem::capacitor& e) const {
    return {{"type", "capacitor"},
            {"p", e.p},
            {"n", e.n},
            {"farads", e.farads},
            {"series_ohms", e.series_ohms}};
  }
  ordered_json operator()(const elem::inductor& e) const {
    return {{"type", "inductor"},
            {"p", e.p},
            {"n", e.n},
            {"henries", e.henries},
            {"series_ohms", e.series_ohms}};
  }
  ordered_json operator()(const elem::line& e) const {
    return {{"type", "line"},     {"p", e.p},
            {"n", e.n},           {"z0_ohms", e.z0},
            {"theta_deg", e.theta_deg}, {"f_ref_hz", e.f_ref}};
  }
  ordered_json operator()(const elem::stub& e) const {
    return {{"type", "shorted_stub"},
            {"p", e.p},
            {"z0_ohms", e.z0},
            {"theta_deg", e.theta_deg},
            {"f_ref_hz", e.f_ref}};
  }
  ordered_json operator()(const elem::vcvs& e) const {
    return {{"type", "vcvs"}, {"p", e.p},   {"n", e.n},
            {"cp", e.cp},     {"cn", e.cn}, {"gain", complex_to_json(e.gain)}};
  }
  ordered_json operator()(const elem::z_block& e) const {
    ordered_json j{{"type", "z_block"}, {"nodes", e.nodes}};
    if (e.model == elem::z_block::model_kind::constant) {
      j["model"] = "constant";
      j["z_ohms"] = matrix_to_json(e.z_const);
    } else {
      j["model"] = "dipole_array";
      j["element_count"] = e.geometry.element_count;
      j["dipole_length_m"] = e.geometry.dipole_length;
      j["spacing_m"] = e.geometry.spacing;
      j["wire_radius_m"] = e.geometry.wire_radius;
      j["reference_frequency_hz"] = e.geometry.reference_frequency;
    }
    return j;
  }
};

element element_from_json(const ordered_json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "resistor")
    return elem::resistor{j.at("p"), j.at("n"), j.at("ohms")};
  if (type == "capacitor")
    return elem::capacitor{j.at("p"), j.at("n"), j.at("farads"),
                           j.value("series_ohms", 0.0)};
  if (type == "inductor")
    return elem::inductor{j.at("p"), j.at("n"), j.at("henries"),
                          j.value("series_ohms", 0.0)};
  if (type == "line")
    return elem::line{j.at("p"), j.at("n"), j.at("z0_ohms"), j.at("theta_deg"),
                      j.at("f_ref_hz")};
  if (type == "shorted_stub")
    return elem::stub{j.at("p"), j.at("z0_ohms"), j.at("theta_deg"), j.at("f_ref_hz")};
  if (type == "vcvs")
    return elem::vcvs{j.at("p"), j.at("n"), j.at("cp"), j.at("cn"),
                      complex_from_json(j.at("gain"))};
  if (type == "z_block") {
    elem::z_block z;
    z.nodes = j.at("nodes").get<std::vector<std::string>>();
    const std::string model = j.at("model").get<std::string>();
    if (model == "constant") {
      z.model = elem::z_block::model_kind::constant;
      z.z_const = matrix_from_json(j.at("z_ohms"));
    } else if (model == "dipole_array") {
      z.model = elem::z_block::model_kind::dipole_array;
      z.geometry.element_count = j.at("element_count");
      z.geometry.dipole_length = j.at("dipole_length_m");
      z.geometry.spacing = j.at("spacing_m");
      z.geometry.wire_radius = j.at("wire_radius_m");
      z.geometry.reference_frequency = j.at("reference_frequency_hz");
    } else {
      throw std::invalid_argument("unknown z_block model: " + model);
    }
    return z;
  }
  throw std::invalid_argument("unknown element type: " + type);
}

}  // namespace

std::string netlist_to_json(const netlist& nl) {
  ordered_json j;
  j["ground"] = ground_node;
  j["elements"] = ordered_json::array();
  for (const auto& e : nl.elements) j["elements"].push_back(std::visit(to_json_visitor{}, e));
  j["ports"] = ordered_json::array();
  for (const auto& p : nl.ports)
    j["ports"].push_back({{"name", p.name}, {"node", p.node}, {"ref_ohms", p.ref_ohms}});
  return j.dump(2) + "\n";
}

netlist netlist_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  netlist nl;
  for (const auto& e : j.at("elements")) nl.elements.push_back(element_from_json(e));
  for (const auto& p : j.at("ports"))
    nl.ports.push_back({p.at("name"), p.at("node"), p.value("ref_ohms", 50.0)});
  return nl;
}

}  // namespace dmnkit
