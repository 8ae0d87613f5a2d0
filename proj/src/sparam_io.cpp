#include "dmnkit/sparam_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dmnkit {
namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string touchstone_text(const sparam_sweep& sw) {
  if (sw.ref_ohms.empty()) throw std::invalid_argument("sweep has no ports");
  const auto n = sw.ref_ohms.size();
  if (n > 4) throw std::invalid_argument("touchstone export supports up to 4 ports");
  std::ostringstream os;
  os << "# GHz S RI R " << fmt9(sw.ref_ohms[0]) << "\n";
  for (size_t k = 0; k < sw.freq.size(); ++k) {
    const Eigen::MatrixXcd& s = sw.s[k];
    os << fmt9(sw.freq[k] / 1e9);
    if (n == 1) {
      os << " " << fmt9(s(0, 0).real()) << " " << fmt9(s(0, 0).imag());
    } else if (n == 2) {
      // standard two-port order: S11 S21 S12 S22
      for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}})
        os << " " << fmt9(s(i, j).real()) << " " << fmt9(s(i, j).imag());
    } else {
      // one matrix row per line
      for (size_t i = 0; i < n; ++i) {
        if (i > 0) os << " ";
        for (size_t j = 0; j < n; ++j)
          os << " " << fmt9(s(i, j).real()) << " " << fmt9(s(i, j).imag());
        os << "\n";
      }
      continue;
    }
    os << "\n";
  }
  return os.str();
}

void write_touchstone(const sparam_sweep& sw, const std::string& path) {
  write_file(path, touchstone_text(sw));
}

sparam_sweep parse_touchstone_text(const std::string& text) {
  std::istringstream in(text);
  std::string linetext;
  double unit = 1e9;
  bool mag_angle = false;
  double ref = 50.0;
  std::vector<double> numbers;
  bool have_option = false;
  while (std::getline(in, linetext)) {
    const auto bang = linetext.find('!');
    if (bang != std::string::npos) linetext.erase(bang);
    std::istringstream ls(linetext);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "#") {
      have_option = true;
      std::string t;
      while (ls >> t) {
        for (auto& ch : t) ch = static_cast<char>(std::toupper(ch));
        if (t == "HZ") unit = 1;
        else if (t == "KHZ") unit = 1e3;
        else if (t == "MHZ") unit = 1e6;
        else if (t == "GHZ") unit = 1e9;
        else if (t == "RI") mag_angle = false;
        else if (t == "MA") mag_angle = true;
        else if (t == "DB") throw std::invalid_argument("dB touchstone format not supported");
        else if (t == "R") { if (ls >> ref) {} }
        else if (t == "S") {}
        else throw std::invalid_argument("unsupported touchstone option: " + t);
      }
      continue;
    }
    ls.clear();
    ls.str(linetext);
    double v;
    while (ls >> v) numbers.push_back(v);
  }
  if (!have_option) throw std::invalid_argument("missing touchstone option line");
  if (numbers.empty()) throw std::invalid_argument("touchstone file has no data");

  // tokens per frequency: 1 + 2n^2; find n in 1..4
  size_t nports = 0;
  for (size_t n = 1; n <= 4; ++n) {
    const size_t per = 1 + 2 * n * n;
    if (numbers.size() % per == 0) {
      // frequencies must be increasing under this grouping
      bool ok = true;
      for (size_t k = per; k < numbers.size(); k += per)
        if (numbers[k] <= numbers[k - per]) { ok = false; break; }
      if (ok) { nports = n; break; }
    }
  }
  if (nports == 0) throw std::invalid_argument("cannot infer port count from token count");

  sparam_sweep sw;
  sw.ref_ohms.assign(nports, ref);
  const size_t per = 1 + 2 * nports * nports;
  for (size_t k = 0; k + per <= numbers.size(); k += per) {
    sw.freq.push_back(numbers[k] * unit);
    Eigen::MatrixXcd s(nports, nports);
    for (size_t e = 0; e < nports * nports; ++e) {
      const double u = numbers[k + 1 + 2 * e];
      const double v = numbers[k + 2 + 2 * e];
      std::complex<double> val;
      if (mag_angle)
        val = std::polar(u, v * std::numbers::pi / 180.0);
      else
        val = {u, v};
      size_t i, j;
      if (nports == 2) {  // file order S11 S21 S12 S22
        i = e % 2;
        j = e / 2;
      } else {
        i = e / nports;
        j = e % nports;
      }
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = val;
    }
    sw.s.push_back(std::move(s));
  }
  return sw;
}

sparam_sweep parse_touchstone(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_touchstone_text(buf.str());
}

std::string csv_text(const sparam_sweep& sw) {
  const auto n = sw.ref_ohms.size();
  std::ostringstream os;
  os << "freq_hz";
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= n; ++j)
      os << ",s" << i << j << "_db,s" << i << j << "_deg";
  os << "\n";
  for (size_t k = 0; k < sw.freq.size(); ++k) {
    os << fmt9(sw.freq[k]);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        const auto v = sw.s[k](i, j);
        const double db = magnitude_db(v);
        const double deg =
            db <= -300.0 ? 0.0 : std::arg(v) * 180.0 / std::numbers::pi;
        os << "," << fmt9(db) << "," << fmt9(deg);
      }
    }
    os << "\n";
  }
  return os.str();
}

void write_csv(const sparam_sweep& sw, const std::string& path) {
  write_file(path, csv_text(sw));
}

}  // namespace dmnkit
