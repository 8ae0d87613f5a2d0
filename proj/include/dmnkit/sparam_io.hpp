#pragma once
#include <string>

#include "dmnkit/sweep.hpp"

namespace dmnkit {

// Touchstone v1, real/imaginary, GHz, reference from port 0.
// Two-port data rows follow the standard S11 S21 S12 S22 order.
std::string touchstone_text(const sparam_sweep& sw);
void write_touchstone(const sparam_sweep& sw, const std::string& path);

// Parses RI/MA Touchstone with Hz/kHz/MHz/GHz units; port count from the
// per-frequency token count.
sparam_sweep parse_touchstone_text(const std::string& text);
sparam_sweep parse_touchstone(const std::string& path);

// CSV with magnitude (dB, floored at -300) and phase (degrees) per entry,
// entries in row-major order: freq_hz,s11_db,s11_deg,s12_db,...
std::string csv_text(const sparam_sweep& sw);
void write_csv(const sparam_sweep& sw, const std::string& path);

}  // namespace dmnkit
