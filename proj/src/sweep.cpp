#include "dmnkit/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "dmnkit/mna.hpp"

namespace dmnkit {

std::vector<double> linear_grid(double f_min, double f_max, int points) {
  if (!(f_min > 0) || !(f_max > f_min)) throw std::invalid_argument("bad frequency bounds");
  if (points < 3) throw std::invalid_argument("grid needs at least 3 points");
  std::vector<double> f(points);
  for (int i = 0; i < points; ++i)
    f[i] = f_min + (f_max - f_min) * static_cast<double>(i) / (points - 1);
  return f;
}

sparam_sweep sweep_s_parameters(const netlist& nl, const std::vector<double>& freqs,
                                bool parallel) {
  for (size_t i = 1; i < freqs.size(); ++i)
    if (!(freqs[i] > freqs[i - 1]))
      throw std::invalid_argument("frequency grid must be strictly increasing");

  const circuit ckt(nl);
  sparam_sweep sw;
  sw.freq = freqs;
  sw.s.resize(freqs.size());
  for (const auto& p : nl.ports) sw.ref_ohms.push_back(p.ref_ohms);

  std::exception_ptr first_error = nullptr;
#ifdef DMNKIT_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long idx = 0; idx < static_cast<long long>(freqs.size()); ++idx) {
      try {
        sw.s[idx] = ckt.s_at(freqs[idx]);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return sw;
  }
#else
  (void)parallel;
#endif
  for (size_t idx = 0; idx < freqs.size(); ++idx) sw.s[idx] = ckt.s_at(freqs[idx]);
  return sw;
}

double magnitude_db(std::complex<double> s) {
  const double mag = std::abs(s);
  if (mag < 1e-15) return -300.0;
  return std::max(20.0 * std::log10(mag), -300.0);
}

band_interval bandwidth(const sparam_sweep& sw, int i, int j, double threshold_db,
                        double center_hz) {
  const auto n = sw.freq.size();
  if (n < 2) throw std::invalid_argument("sweep too short for bandwidth analysis");
  if (center_hz < sw.freq.front() || center_hz > sw.freq.back())
    throw std::invalid_argument("center frequency outside the sweep");

  std::vector<double> db(n);
  for (size_t k = 0; k < n; ++k) db[k] = magnitude_db(sw.s[k](i, j));

  // locate the grid interval holding the center and its interpolated level
  size_t k0 = 0;
  while (k0 + 1 < n && sw.freq[k0 + 1] < center_hz) ++k0;
  const double t = (center_hz - sw.freq[k0]) / (sw.freq[k0 + 1] - sw.freq[k0]);
  const double center_db = db[k0] + t * (db[k0 + 1] - db[k0]);

  band_interval out;
  if (center_db > threshold_db) return out;  // above threshold at center: empty
  out.empty = false;

  // expand left from the last grid point at/left of center that satisfies it
  size_t left = db[k0] <= threshold_db ? k0 : k0 + 1;
  size_t right = db[k0 + 1] <= threshold_db ? k0 + 1 : k0;
  while (left > 0 && db[left - 1] <= threshold_db) --left;
  while (right + 1 < n && db[right + 1] <= threshold_db) ++right;

  if (left == 0) {
    out.lo = sw.freq.front();
    out.clipped_lo = true;
  } else {  // crossing between left-1 (above) and left (below)
    const double frac = (threshold_db - db[left - 1]) / (db[left] - db[left - 1]);
    out.lo = sw.freq[left - 1] + frac * (sw.freq[left] - sw.freq[left - 1]);
  }
  if (right == n - 1) {
    out.hi = sw.freq.back();
    out.clipped_hi = true;
  } else {
    const double frac = (threshold_db - db[right + 1]) / (db[right] - db[right + 1]);
    out.hi = sw.freq[right + 1] - frac * (sw.freq[right + 1] - sw.freq[right]);
  }
  return out;
}

}  // namespace dmnkit
