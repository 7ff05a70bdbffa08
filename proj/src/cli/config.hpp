#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "staforge/iochain.hpp"
#include "staforge/network.hpp"

namespace staforge::cli {

struct DeviceConfig {
  std::string name;
  ModeNetwork network;
  double drive_freq_ghz = 0.0;
  /// Modes of each qubit-state block; one block holding every mode if absent.
  std::vector<std::vector<int>> blocks;
  IoChainParams io;
  double lowpass_tau_ns = 0.0;
};

struct ProblemConfig {
  int m = 10;
  double t0_ns = 0.0;
  double tf_ns = 60.0;
  cplx eps0{0.0};
  cplx epsf{1.0};
  std::uint64_t seed = 1;
  double bounds_scale = 10.0;
  int generations = 3000;
};

/// Reads and validates a device document. Throws Error{ConfigError} naming
/// the offending field, or the parse position for malformed JSON.
DeviceConfig load_device(const std::filesystem::path& path);
DeviceConfig parse_device(const nlohmann::json& doc, const std::string& source);

/// Problem fields may live in their own file or under "mmoc" in a device file.
ProblemConfig parse_problem(const nlohmann::json& doc, const std::string& source);

nlohmann::json read_json(const std::filesystem::path& path);

/// Number, or [re, im] pair.
cplx parse_complex(const nlohmann::json& v, const std::string& field);
nlohmann::json complex_json(cplx z);

}  // namespace staforge::cli
