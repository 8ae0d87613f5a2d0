#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dmnkit/netlist.hpp"

namespace dmnkit {

// Frequency-domain modified-nodal-analysis solver.  Compilation (node
// numbering, connectivity checks) happens once; per-frequency assembly and
// solves are const and safe to run concurrently from several threads.
class circuit {
 public:
  explicit circuit(netlist nl);

  int num_ports() const { return static_cast<int>(nl_.ports.size()); }
  const netlist& source() const { return nl_; }

  // Full S-matrix at one frequency: each port driven in turn behind its
  // reference resistance, all other port EMFs zero (dependent sources active).
  Eigen::MatrixXcd s_at(double f) const;

  // Node voltages with explicit port EMFs (volts).  Index node voltages via
  // node_index() into the returned vector.
  Eigen::VectorXcd solve(double f, const std::vector<std::complex<double>>& port_emfs) const;

  int node_index(const std::string& name) const;  // -1 for ground
  int num_unknowns() const { return n_unknowns_; }

 private:
  struct assembly {
    Eigen::MatrixXcd a;
    Eigen::VectorXcd b;
  };
  void build(double f, assembly& out,
             const std::vector<std::complex<double>>& port_emfs) const;
  Eigen::VectorXcd factor_and_solve(const assembly& as, double f) const;

  netlist nl_;
  std::vector<std::string> node_names_;
  // pre-assigned unknown columns
  int n_nodes_ = 0;
  int n_unknowns_ = 0;
  std::vector<int> port_node_;       // node index of each port
  std::vector<int> port_src_node_;   // internal EMF node of each port
  std::vector<int> port_branch_;     // EMF branch-current column
  std::vector<int> vcvs_branch_;     // per vcvs element (order of appearance)
  std::vector<std::vector<int>> zblock_branch_;  // per z_block, per block port
};

}  // namespace dmnkit
