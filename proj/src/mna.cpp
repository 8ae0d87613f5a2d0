#include "dmnkit/mna.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dmnkit {
namespace {

using cd = std::complex<double>;
constexpr cd j{0.0, 1.0};

struct union_find {
  std::vector<int> parent;
  explicit union_find(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

double theta_rad(double theta_deg, double f_ref, double f) {
  if (!(f_ref > 0)) throw std::invalid_argument("line f_ref must be > 0");
  return theta_deg * std::numbers::pi / 180.0 * (f / f_ref);
}

}  // namespace

circuit::circuit(netlist nl) : nl_(std::move(nl)) {
  std::map<std::string, int> index;
  const auto intern = [&](const std::string& name) -> int {
    if (name == ground_node) return -1;
    if (name.empty()) throw std::invalid_argument("empty node name");
    auto [it, inserted] = index.try_emplace(name, static_cast<int>(node_names_.size()));
    if (inserted) node_names_.push_back(name);
    return it->second;
  };

  // ports first so their internal source nodes exist for vcvs references
  for (const auto& p : nl_.ports) {
    port_node_.push_back(intern(p.node));
    port_src_node_.push_back(intern(netlist::source_node(p.name)));
    if (!(p.ref_ohms > 0)) throw std::invalid_argument("port reference impedance must be > 0");
  }
  for (const auto& e : nl_.elements) {
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, elem::resistor> ||
                        std::is_same_v<T, elem::capacitor> ||
                        std::is_same_v<T, elem::inductor> || std::is_same_v<T, elem::line>) {
            intern(el.p);
            intern(el.n);
          } else if constexpr (std::is_same_v<T, elem::stub>) {
            intern(el.p);
          } else if constexpr (std::is_same_v<T, elem::vcvs>) {
            intern(el.p);
            intern(el.n);
            intern(el.cp);
            intern(el.cn);
          } else if constexpr (std::is_same_v<T, elem::z_block>) {
            for (const auto& n : el.nodes) intern(n);
          }
        },
        e);
  }
  n_nodes_ = static_cast<int>(node_names_.size());

  // branch-current columns
  int col = n_nodes_;
  for (size_t k = 0; k < nl_.ports.size(); ++k) port_branch_.push_back(col++);
  for (const auto& e : nl_.elements) {
    if (std::holds_alternative<elem::vcvs>(e)) vcvs_branch_.push_back(col++);
    if (const auto* z = std::get_if<elem::z_block>(&e)) {
      std::vector<int> cols;
      for (size_t m = 0; m < z->nodes.size(); ++m) cols.push_back(col++);
      zblock_branch_.push_back(std::move(cols));
    }
  }
  n_unknowns_ = col;

  // connectivity: every node must conduct to ground
  union_find uf(n_nodes_ + 1);  // extra slot for ground
  const int gnd = n_nodes_;
  const auto id = [&](int node) { return node < 0 ? gnd : node; };
  for (size_t k = 0; k < nl_.ports.size(); ++k) {
    uf.join(id(port_src_node_[k]), gnd);                 // EMF to ground
    uf.join(id(port_src_node_[k]), id(port_node_[k]));   // series resistance
  }
  for (const auto& e : nl_.elements) {
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, elem::resistor> ||
                        std::is_same_v<T, elem::capacitor> ||
                        std::is_same_v<T, elem::inductor>) {
            uf.join(id(node_index(el.p)), id(node_index(el.n)));
          } else if constexpr (std::is_same_v<T, elem::line>) {
            uf.join(id(node_index(el.p)), id(node_index(el.n)));
            uf.join(id(node_index(el.p)), gnd);  // a line conducts to its reference
          } else if constexpr (std::is_same_v<T, elem::stub>) {
            uf.join(id(node_index(el.p)), gnd);
          } else if constexpr (std::is_same_v<T, elem::vcvs>) {
            uf.join(id(node_index(el.p)), id(node_index(el.n)));  // output branch conducts
          } else if constexpr (std::is_same_v<T, elem::z_block>) {
            for (const auto& n : el.nodes) uf.join(id(node_index(n)), gnd);
          }
        },
        e);
  }
  for (int v = 0; v < n_nodes_; ++v) {
    if (uf.find(v) != uf.find(gnd))
      throw std::invalid_argument("floating node '" + node_names_[v] +
                                  "': no conducting path to ground");
  }
}

int circuit::node_index(const std::string& name) const {
  if (name == ground_node) return -1;
  for (size_t i = 0; i < node_names_.size(); ++i)
    if (node_names_[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown node '" + name + "'");
}

void circuit::build(double f, assembly& out,
                    const std::vector<cd>& port_emfs) const {
  if (!(f > 0)) throw std::invalid_argument("frequency must be > 0");
  const double w = 2.0 * std::numbers::pi * f;
  Eigen::MatrixXcd& a = out.a;
  Eigen::VectorXcd& b = out.b;
  a = Eigen::MatrixXcd::Zero(n_unknowns_, n_unknowns_);
  b = Eigen::VectorXcd::Zero(n_unknowns_);

  const auto stamp_y = [&](int p, int n, cd y) {
    if (p >= 0) a(p, p) += y;
    if (n >= 0) a(n, n) += y;
    if (p >= 0 && n >= 0) {
      a(p, n) -= y;
      a(n, p) -= y;
    }
  };

  // element stamps
  size_t vcvs_idx = 0, zb_idx = 0;
  for (const auto& e : nl_.elements) {
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, elem::resistor>) {
            if (!(el.ohms > 0)) throw std::invalid_argument("resistor must be positive");
            stamp_y(node_index(el.p), node_index(el.n), 1.0 / el.ohms);
          } else if constexpr (std::is_same_v<T, elem::capacitor>) {
            if (!(el.farads > 0)) throw std::invalid_argument("capacitance must be positive");
            const cd zc = el.series_ohms + 1.0 / (j * w * el.farads);
            stamp_y(node_index(el.p), node_index(el.n), 1.0 / zc);
          } else if constexpr (std::is_same_v<T, elem::inductor>) {
            if (!(el.henries > 0)) throw std::invalid_argument("inductance must be positive");
            const cd zl = el.series_ohms + j * w * el.henries;
            stamp_y(node_index(el.p), node_index(el.n), 1.0 / zl);
          } else if constexpr (std::is_same_v<T, elem::line>) {
            const double th = theta_rad(el.theta_deg, el.f_ref, f);
            const double s = std::sin(th);
            if (std::abs(s) < 1e-12) {
              std::ostringstream os;
              os << "transmission line resonant (theta multiple of 180 deg) at " << f << " Hz";
              throw std::runtime_error(os.str());
            }
            const cd y0 = 1.0 / (j * el.z0 * s);
            const int p = node_index(el.p), n = node_index(el.n);
            const cd yd = y0 * std::cos(th);
            if (p >= 0) a(p, p) += yd;
            if (n >= 0) a(n, n) += yd;
            if (p >= 0 && n >= 0) {
              a(p, n) -= y0;
              a(n, p) -= y0;
            }
          } else if constexpr (std::is_same_v<T, elem::stub>) {
            const double th = theta_rad(el.theta_deg, el.f_ref, f);
            const double s = std::sin(th);
            if (std::abs(s) < 1e-12) {
              std::ostringstream os;
              os << "stub resonant (theta multiple of 180 deg) at " << f << " Hz";
              throw std::runtime_error(os.str());
            }
            const int p = node_index(el.p);
            if (p >= 0) a(p, p) += std::cos(th) / (j * el.z0 * s);
          } else if constexpr (std::is_same_v<T, elem::vcvs>) {
            const int br = vcvs_branch_[vcvs_idx++];
            const int p = node_index(el.p), n = node_index(el.n);
            const int cp = node_index(el.cp), cn = node_index(el.cn);
            if (p >= 0) a(p, br) += 1.0;
            if (n >= 0) a(n, br) -= 1.0;
            if (p >= 0) a(br, p) += 1.0;
            if (n >= 0) a(br, n) -= 1.0;
            if (cp >= 0) a(br, cp) -= el.gain;
            if (cn >= 0) a(br, cn) += el.gain;
          } else if constexpr (std::is_same_v<T, elem::z_block>) {
            const auto& cols = zblock_branch_[zb_idx++];
            const Eigen::MatrixXcd z = el.z_at(f);
            const auto nports = static_cast<Eigen::Index>(el.nodes.size());
            if (z.rows() != nports || z.cols() != nports)
              throw std::invalid_argument("z_block matrix size does not match its node count");
            for (Eigen::Index m = 0; m < nports; ++m) {
              const int node = node_index(el.nodes[m]);
              const int row = cols[m];
              if (node >= 0) {
                a(node, row) += 1.0;  // branch current leaves the node into the block
                a(row, node) += 1.0;  // V(node) - sum Z i = 0
              }
              for (Eigen::Index l = 0; l < nports; ++l) a(row, cols[l]) -= z(m, l);
            }
          }
        },
        e);
  }

  // port excitations: EMF into the internal node, reference R to the port node
  for (size_t k = 0; k < nl_.ports.size(); ++k) {
    const int s = port_src_node_[k];
    const int p = port_node_[k];
    const int br = port_branch_[k];
    stamp_y(s, p, 1.0 / nl_.ports[k].ref_ohms);
    a(s, br) += 1.0;  // EMF branch current into the source node
    a(br, s) += 1.0;  // V(s) = e_k
    b(br) = k < port_emfs.size() ? port_emfs[k] : cd{0, 0};
  }
}

namespace {

// The rcond estimate of PartialPivLU is unreliable when the matrix is exactly
// singular (a zero pivot can still yield a finite estimate), so also check the
// pivot ratio directly.  Comparisons are written so NaN counts as failure.
void check_factorization(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, double f) {
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const bool ok = dmax > 0 && diag.minCoeff() / dmax >= 1e-14 && lu.rcond() >= 1e-14;
  if (!ok) {
    std::ostringstream os;
    os << "singular circuit matrix at " << f << " Hz (degenerate loop or cut)";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

Eigen::VectorXcd circuit::factor_and_solve(const assembly& as, double f) const {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(as.a);
  check_factorization(lu, f);
  Eigen::VectorXcd x = lu.solve(as.b);
  const double bnorm = as.b.norm();
  if (bnorm > 0) {
    const double res = (as.a * x - as.b).norm();
    if (!(res <= 1e-10 * bnorm)) {
      x += lu.solve(as.b - as.a * x);  // one refinement step
      if (!((as.a * x - as.b).norm() <= 1e-10 * bnorm)) {
        std::ostringstream os;
        os << "solver residual above tolerance at " << f << " Hz";
        throw std::runtime_error(os.str());
      }
    }
  }
  return x;
}

Eigen::VectorXcd circuit::solve(double f, const std::vector<cd>& port_emfs) const {
  assembly as;
  build(f, as, port_emfs);
  return factor_and_solve(as, f);
}

Eigen::MatrixXcd circuit::s_at(double f) const {
  const int np = num_ports();
  if (np == 0) throw std::invalid_argument("netlist has no ports");
  assembly as;
  build(f, as, {});
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(as.a);
  check_factorization(lu, f);

  // multi-RHS: one excitation column per port
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n_unknowns_, np);
  for (int jp = 0; jp < np; ++jp)
    rhs(port_branch_[jp], jp) = 2.0 * std::sqrt(nl_.ports[jp].ref_ohms);
  Eigen::MatrixXcd x = lu.solve(rhs);
  const double rel = (as.a * x - rhs).norm() / rhs.norm();
  if (!(rel <= 1e-10)) {
    x += lu.solve(rhs - as.a * x);
    if (!((as.a * x - rhs).norm() / rhs.norm() <= 1e-10)) {
      std::ostringstream os;
      os << "solver residual above tolerance at " << f << " Hz";
      throw std::runtime_error(os.str());
    }
  }

  Eigen::MatrixXcd s(np, np);
  for (int jp = 0; jp < np; ++jp) {
    for (int kp = 0; kp < np; ++kp) {
      const double r = nl_.ports[kp].ref_ohms;
      const cd vs = port_src_node_[kp] >= 0 ? x(port_src_node_[kp], jp) : cd{0, 0};
      const cd vp = port_node_[kp] >= 0 ? x(port_node_[kp], jp) : cd{0, 0};
      const cd current = (vs - vp) / r;  // into the network
      s(kp, jp) = (vp - r * current) / (2.0 * std::sqrt(r));
    }
  }
  return s;
}

}  // namespace dmnkit
