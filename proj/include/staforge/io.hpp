#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "staforge/network.hpp"
#include "staforge/pulse.hpp"

namespace staforge::io {

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Formats a double with 17 significant digits.
std::string fmt(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

/// time_ns, re_alpha_k, im_alpha_k per mode (plus re_ro, im_ro when present).
CsvTable trace_csv(const Trace& trace);

/// time_ns, re_eps, im_eps sampled on `times`.
CsvTable pulse_csv(const Pulse& pulse, const std::vector<double>& times);

}  // namespace staforge::io
