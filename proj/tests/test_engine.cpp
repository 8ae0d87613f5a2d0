#include "dmnkit/mna.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include "dmnkit/sweep.hpp"
#include "doctest.h"
#include "random_netlists.hpp"

using namespace dmnkit;
using cd = std::complex<double>;

namespace {

// driving-point impedance at the single port from one solve
cd port_impedance(const circuit& ckt, double f) {
  const Eigen::VectorXcd v = ckt.solve(f, {cd(1.0, 0.0)});
  const cd vp = v(ckt.node_index(ckt.source().ports[0].node));
  const double r = ckt.source().ports[0].ref_ohms;
  return vp * r / (cd(1.0, 0.0) - vp);
}

}  // namespace

TEST_CASE("resistive divider node voltage") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"mid", ground_node, 50.0});
  nl.ports.push_back({"P1", "mid", 50.0});
  const circuit ckt(nl);
  const Eigen::VectorXcd v = ckt.solve(1e9, {cd(1.0, 0.0)});
  CHECK(std::abs(v(ckt.node_index("mid")) - cd(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(v(ckt.node_index("_src_P1")) - cd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("inductor impedance at the design frequency") {
  netlist nl;
  nl.elements.push_back(elem::inductor{"in", ground_node, 2.7827e-9, 0.0});
  nl.ports.push_back({"P1", "in", 50.0});
  const cd z = port_impedance(circuit(nl), 3e9);
  CHECK(std::abs(z.real()) < 1e-9);
  CHECK(z.imag() == doctest::Approx(52.44).epsilon(1e-3));

  // a series resistance moves the real part only
  netlist lossy;
  lossy.elements.push_back(elem::inductor{"in", ground_node, 2.7827e-9, 0.53});
  lossy.ports.push_back({"P1", "in", 50.0});
  const cd zl = port_impedance(circuit(lossy), 3e9);
  CHECK(zl.real() == doctest::Approx(0.53).epsilon(1e-9));
  CHECK(zl.imag() == doctest::Approx(z.imag()).epsilon(1e-12));
}

TEST_CASE("quarter-wave transformer reflects nothing at design") {
  netlist nl;
  nl.elements.push_back(elem::line{"in", "out", 70.71067811865476, 90.0, 3e9});
  nl.elements.push_back(elem::resistor{"out", ground_node, 100.0});
  nl.ports.push_back({"P1", "in", 50.0});
  const circuit ckt(nl);
  CHECK(magnitude_db(ckt.s_at(3e9)(0, 0)) < -120.0);
  // off design the match degrades
  CHECK(magnitude_db(ckt.s_at(2.4e9)(0, 0)) > -30.0);
}

TEST_CASE("matched termination absorbs everything") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"p", ground_node, 50.0});
  nl.ports.push_back({"P1", "p", 50.0});
  CHECK(magnitude_db(circuit(nl).s_at(3e9)(0, 0)) < -120.0);
}

TEST_CASE("shorted stub input reactance") {
  netlist nl;
  nl.elements.push_back(elem::stub{"p", 100.0, 45.0, 3e9});
  nl.ports.push_back({"P1", "p", 50.0});
  const circuit ckt(nl);
  // jZ0 tan(45) = j100 at the rated frequency
  CHECK(std::abs(port_impedance(ckt, 3e9) - cd(0, 100)) < 1e-6);
  // a quarter-wave shorted stub is an open: the port sees its own EMF
  const Eigen::VectorXcd v = ckt.solve(6e9, {cd(1.0, 0.0)});
  CHECK(std::abs(v(ckt.node_index("p")) - cd(1.0, 0.0)) < 1e-12);
  // half-wave resonance is rejected
  CHECK_THROWS_AS(ckt.solve(12e9, {cd(1.0, 0.0)}), std::runtime_error);
}

TEST_CASE("controlled source gain") {
  netlist nl;
  nl.elements.push_back(elem::vcvs{"b", ground_node, "a", ground_node, cd(2.0, 0.0)});
  nl.elements.push_back(elem::resistor{"b", ground_node, 50.0});
  nl.ports.push_back({"P1", "a", 50.0});
  const circuit ckt(nl);
  const Eigen::VectorXcd v = ckt.solve(1e9, {cd(1.0, 0.0)});
  // the control pin draws no current, so the port node floats at the EMF
  CHECK(std::abs(v(ckt.node_index("a")) - cd(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(v(ckt.node_index("b")) - cd(2.0, 0.0)) < 1e-12);

  // complex gain rotates the sensed voltage
  netlist rot = nl;
  std::get<elem::vcvs>(rot.elements[0]).gain = cd(0.0, 1.5);
  const circuit ckt2(rot);
  const Eigen::VectorXcd v2 = ckt2.solve(1e9, {cd(1.0, 0.0)});
  CHECK(std::abs(v2(ckt2.node_index("b")) - cd(0.0, 1.5)) < 1e-12);
}

TEST_CASE("impedance block against the closed-form S conversion") {
  Eigen::MatrixXcd z(2, 2);
  z << cd(30, 5), cd(0, 10), cd(0, 10), cd(40, -8);
  netlist nl;
  elem::z_block zb;
  zb.nodes = {"p1", "p2"};
  zb.z_const = z;
  nl.elements.push_back(zb);
  nl.ports.push_back({"P1", "p1", 50.0});
  nl.ports.push_back({"P2", "p2", 50.0});
  const Eigen::MatrixXcd s = circuit(nl).s_at(3e9);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd zn = z / 50.0;
  const Eigen::MatrixXcd want = (zn - eye) * (zn + eye).inverse();
  CHECK((s - want).cwiseAbs().maxCoeff() < 1e-10);

  // one-port block: plain reflection coefficient
  netlist one;
  elem::z_block zb1;
  zb1.nodes = {"q"};
  zb1.z_const = Eigen::MatrixXcd::Constant(1, 1, cd(25.0, 0.0));
  one.elements.push_back(zb1);
  one.ports.push_back({"P1", "q", 50.0});
  const cd s11 = circuit(one).s_at(3e9)(0, 0);
  CHECK(std::abs(s11 - cd(-1.0 / 3.0, 0.0)) < 1e-12);
}

TEST_CASE("doubling the sources doubles every voltage exactly") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"mid", ground_node, 75.0});
  nl.elements.push_back(elem::capacitor{"mid", "far", 1e-12, 0.0});
  nl.elements.push_back(elem::inductor{"far", ground_node, 3e-9, 0.0});
  nl.ports.push_back({"P1", "mid", 50.0});
  nl.ports.push_back({"P2", "far", 50.0});
  const circuit ckt(nl);
  const Eigen::VectorXcd v1 = ckt.solve(2.9e9, {cd(0.75, 0.25), cd(-0.5, 1.0)});
  const Eigen::VectorXcd v2 = ckt.solve(2.9e9, {cd(1.5, 0.5), cd(-1.0, 2.0)});
  CHECK((v2 - 2.0 * v1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("floating node is named in the error") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"n1", ground_node, 50.0});
  nl.elements.push_back(elem::capacitor{"island_a", "island_b", 1e-12, 0.0});
  nl.ports.push_back({"P1", "n1", 50.0});
  try {
    circuit ckt(nl);
    FAIL("expected a floating-node error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("island_a") != std::string::npos);
    CHECK(std::string(e.what()).find("floating") != std::string::npos);
  }
}

TEST_CASE("resonant line is rejected with the frequency in the message") {
  netlist nl;
  nl.elements.push_back(elem::line{"in", "out", 50.0, 90.0, 3e9});
  nl.elements.push_back(elem::resistor{"out", ground_node, 50.0});
  nl.ports.push_back({"P1", "in", 50.0});
  const circuit ckt(nl);
  CHECK(magnitude_db(ckt.s_at(3e9)(0, 0)) < -120.0);  // matched through the line
  CHECK_THROWS_AS(ckt.s_at(6e9), std::runtime_error);
}

TEST_CASE("construction and input validation") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"p", ground_node, 50.0});
  const circuit no_ports(nl);
  CHECK_THROWS_AS(no_ports.s_at(1e9), std::invalid_argument);
  CHECK_THROWS_AS(no_ports.node_index("nope"), std::invalid_argument);
  CHECK(no_ports.node_index(ground_node) == -1);

  nl.ports.push_back({"P1", "p", 0.0});  // bad reference
  CHECK_THROWS_AS(circuit{nl}, std::invalid_argument);
  nl.ports[0].ref_ohms = 50.0;
  nl.elements.push_back(elem::resistor{"p", ground_node, -5.0});
  const circuit bad_r(nl);
  CHECK_THROWS_AS(bad_r.s_at(1e9), std::invalid_argument);
  CHECK_THROWS_AS(circuit(nl).solve(-1e9, {cd(1, 0)}), std::invalid_argument);
}

TEST_CASE("self-referencing unity source is singular") {
  netlist nl;
  nl.elements.push_back(elem::resistor{"n1", ground_node, 50.0});
  nl.elements.push_back(elem::vcvs{"n2", ground_node, "n2", ground_node, cd(1.0, 0.0)});
  nl.elements.push_back(elem::resistor{"n2", ground_node, 50.0});
  nl.ports.push_back({"P1", "n1", 50.0});
  CHECK_THROWS_AS(circuit(nl).s_at(1e9), std::runtime_error);
}

TEST_CASE("random passive networks are reciprocal and passive") {
  std::mt19937 rng(61);
  for (int it = 0; it < 12; ++it) {
    const bool lossless = it % 2 == 0;
    const circuit ckt(testgen::random_two_port(rng, lossless));
    for (double f : {2.6e9, 3.0e9, 3.4e9}) {
      const Eigen::MatrixXcd s = ckt.s_at(f);
      CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-9);
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
      if (lossless) {
        const Eigen::MatrixXcd gram = s.adjoint() * s;
        CHECK((gram - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
      }
      CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-9);
    }
  }
}
