#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dmnkit/netlist.hpp"

namespace dmnkit {

struct sparam_sweep {
  std::vector<double> freq;              // Hz, strictly increasing
  std::vector<Eigen::MatrixXcd> s;       // one N x N matrix per frequency
  std::vector<double> ref_ohms;          // per port
};

std::vector<double> linear_grid(double f_min, double f_max, int points);

// Frequency points are independent; the parallel path fans them out across
// threads over one shared read-only compiled circuit.
sparam_sweep sweep_s_parameters(const netlist& nl, const std::vector<double>& freqs,
                                bool parallel = true);

double magnitude_db(std::complex<double> s);  // 20 log10 |s|, floored at -300 dB

// Maximal contiguous interval around center_hz where |S_ij| stays at or below
// threshold_db; edges are linearly interpolated between grid points.
struct band_interval {
  bool empty = true;
  double lo = 0, hi = 0;        // Hz
  bool clipped_lo = false, clipped_hi = false;
  double width() const { return empty ? 0.0 : hi - lo; }
};
band_interval bandwidth(const sparam_sweep& sw, int i, int j, double threshold_db,
                        double center_hz);

}  // namespace dmnkit
