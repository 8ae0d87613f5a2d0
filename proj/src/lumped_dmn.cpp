#include "dmnkit/lumped_dmn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dmnkit {
namespace {

using cd = std::complex<double>;
constexpr cd j{0.0, 1.0};

void require_symmetric(const Eigen::MatrixXcd& m, const char* what) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << what << " must be symmetric";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Eigen::MatrixXd principal_sqrt_spd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0) {
    std::ostringstream os;
    os << "matrix is not positive definite (eigenvalue " << ev.minCoeff() << ")";
    throw std::invalid_argument(os.str());
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::Matrix4cd dmn_abstract::z_mt() const {
  Eigen::Matrix4cd z = Eigen::Matrix4cd::Zero();
  z.block<2, 2>(0, 2) = x1;
  z.block<2, 2>(2, 0) = x1;
  z.block<2, 2>(2, 2) = x2;
  return z;
}

Eigen::Matrix4cd dmn_abstract::y_mt() const {
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  y.block<2, 2>(0, 0) = j * b1;
  y.block<2, 2>(0, 2) = j * b2;
  y.block<2, 2>(2, 0) = j * b2;
  return y;
}

dmn_abstract synthesize_zmt(const Eigen::Matrix2cd& z_at, double r) {
  if (!(r > 0)) throw std::invalid_argument("source resistance must be > 0");
  require_symmetric(z_at, "z_at");
  const Eigen::Matrix2d re = z_at.real();
  const Eigen::Matrix2d im = z_at.imag();
  Eigen::Matrix2d sq;
  try {
    sq = principal_sqrt_spd(re);
  } catch (const std::invalid_argument& e) {
    std::ostringstream os;
    os << "Re{z_at} is not positive definite (over-coupled array): " << e.what();
    throw std::invalid_argument(os.str());
  }
  const Eigen::Matrix2d sqi = sq.inverse();

  dmn_abstract d;
  d.source_resistance = r;
  d.x1 = -j * std::sqrt(r) * sq;          // source-antenna coupling reactance
  d.x2 = -j * im;                         // cancels the array reactance
  d.b1 = -(1.0 / r) * sqi * im * sqi;
  d.b2 = (1.0 / std::sqrt(r)) * sqi;

  // the two immittance forms must be inverses of each other
  const double rel = (d.y_mt() * d.z_mt() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
  if (rel > 1e-10)
    throw std::runtime_error("synthesized Y_MT/Z_MT inverse consistency failed");
  return d;
}

branch_set extract_branches(const dmn_abstract& dmn) {
  const Eigen::Matrix4cd y = dmn.y_mt();
  branch_set b;
  for (int k = 0; k < 4; ++k) b.y[k] = y.row(k).sum();
  b.y[4] = -y(0, 1);
  b.y[5] = -y(0, 2);
  b.y[6] = -y(0, 3);
  b.y[7] = -y(1, 2);
  b.y[8] = -y(1, 3);
  b.y[9] = -y(2, 3);
  return b;
}

Eigen::Matrix4cd assemble_from_branches(const branch_set& b) {
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  const int pair[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int k = 0; k < 4; ++k) y(k, k) += b.y[k];
  for (int k = 0; k < 6; ++k) {
    const int m = pair[k][0], n = pair[k][1];
    const cd yk = b.y[4 + k];
    y(m, m) += yk;
    y(n, n) += yk;
    y(m, n) -= yk;
    y(n, m) -= yk;
  }
  return y;
}

std::optional<lumped_component> realize_lc(std::complex<double> y, double f_r) {
  if (!(f_r > 0)) throw std::invalid_argument("f_r must be > 0");
  if (std::abs(y) < 1e-12) return std::nullopt;  // open branch
  if (std::abs(y.real()) > 1e-12 * std::abs(y))
    throw std::invalid_argument("branch admittance has a real part; not realizable as L/C");
  const double w = 2.0 * std::numbers::pi * f_r;
  lumped_component c;
  if (y.imag() > 0) {
    c.kind = component_kind::capacitor;
    c.value = y.imag() / w;
  } else {
    c.kind = component_kind::inductor;
    c.value = 1.0 / (std::abs(y.imag()) * w);
  }
  return c;
}

double apply_q_loss(const lumped_component& c) {
  if (!c.q_factor || !(c.q_frequency > 0))
    throw std::invalid_argument("component has no Q rating");
  const double w_q = 2.0 * std::numbers::pi * c.q_frequency;
  if (c.kind == component_kind::inductor) return w_q * c.value / *c.q_factor;
  return 1.0 / (w_q * c.value * *c.q_factor);
}

lumped_design design_lumped_dmn(const Eigen::Matrix2cd& z_at, double r, double f_r) {
  lumped_design d;
  d.abstract = synthesize_zmt(z_at, r);
  d.branches = extract_branches(d.abstract);
  d.f_r = f_r;
  for (int k = 0; k < 10; ++k) d.components[k] = realize_lc(d.branches.y[k], f_r);
  return d;
}

void assign_q_factors(lumped_design& d, const std::array<double, 10>& q, double f_q) {
  for (int k = 0; k < 10; ++k) {
    if (!d.components[k] || q[k] <= 0) continue;
    d.components[k]->q_factor = q[k];
    d.components[k]->q_frequency = f_q;
  }
}

}  // namespace dmnkit
