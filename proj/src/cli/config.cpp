#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "staforge/error.hpp"

namespace staforge::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigError, source + ": field '" + field + "': " + why);
}

double number(const json& obj, const std::string& key, const std::string& path,
              const std::string& source) {
  if (!obj.contains(key)) fail(source, path + key, "missing");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(source, path + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path,
                 const std::string& source) {
  return obj.contains(key) ? number(obj, key, path, source) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& path,
            const std::string& source) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(source, path + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

cplx parse_complex(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return cplx(v[0].get<double>(), v[1].get<double>());
  }
  throw Error(ErrorCode::ConfigError, "field '" + field + "': expected a number or [re, im]");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": malformed JSON (" << e.what() << ")";
    throw Error(ErrorCode::ConfigError, msg.str());
  }
}

DeviceConfig parse_device(const json& doc, const std::string& source) {
  if (!doc.is_object()) fail(source, "<root>", "expected an object");
  DeviceConfig cfg;
  cfg.name = doc.value("name", std::string("device"));
  if (!doc.contains("modes")) fail(source, "modes", "missing");
  const json& modes = doc.at("modes");
  if (!modes.is_array() || modes.empty()) fail(source, "modes", "expected a non-empty array");
  const int n = static_cast<int>(modes.size());

  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string path = "modes[" + std::to_string(i) + "].";
    if (!modes[i].is_object()) fail(source, path, "expected an object");
    const double det = number(modes[i], "detuning_mhz", path, source);
    const double kap = number_or(modes[i], "kappa_mhz", 0.0, path, source);
    if (kap < 0.0) fail(source, path + "kappa_mhz", "must be non-negative (passive mode)");
    omega(i, i) = cplx(units::mhz_to_rad_per_ns(det), -0.5 * units::mhz_to_rad_per_ns(kap));
  }
  if (doc.contains("couplings")) {
    const json& cs = doc.at("couplings");
    if (!cs.is_array()) fail(source, "couplings", "expected an array");
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const std::string path = "couplings[" + std::to_string(c) + "].";
      if (!cs[c].contains("i") || !cs[c].contains("j")) fail(source, path + "i/j", "missing");
      const int i = integer(cs[c], "i", path, source);
      const int j = integer(cs[c], "j", path, source);
      if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
        fail(source, path + "i/j", "mode indices out of range or equal");
      }
      if (!cs[c].contains("j_mhz")) fail(source, path + "j_mhz", "missing");
      const cplx g = parse_complex(cs[c].at("j_mhz"), path + "j_mhz") * units::mhz_to_rad_per_ns(1.0);
      omega(i, j) = g;
      omega(j, i) = std::conj(g);
    }
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  if (!doc.contains("drive_coupling")) fail(source, "drive_coupling", "missing");
  const json& dc = doc.at("drive_coupling");
  if (!dc.is_array() || static_cast<int>(dc.size()) != n) {
    fail(source, "drive_coupling", "expected an array with one entry per mode");
  }
  for (int i = 0; i < n; ++i) c(i) = parse_complex(dc[i], "drive_coupling[" + std::to_string(i) + "]");
  if (c.isZero(0.0)) fail(source, "drive_coupling", "at least one entry must be nonzero");
  cfg.drive_freq_ghz = number_or(doc, "drive_freq_ghz", 0.0, "", source);
  try {
    cfg.network = validate_network(ModeNetwork(omega, c));
  } catch (const Error& e) {
    fail(source, "modes/couplings", e.what());
  }

  if (doc.contains("blocks")) {
    const json& bl = doc.at("blocks");
    if (!bl.is_array()) fail(source, "blocks", "expected an array of index arrays");
    for (std::size_t b = 0; b < bl.size(); ++b) {
      std::vector<int> idx;
      for (const auto& v : bl[b]) {
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= n) {
          fail(source, "blocks[" + std::to_string(b) + "]", "mode index out of range");
        }
        idx.push_back(v.get<int>());
      }
      cfg.blocks.push_back(idx);
    }
  } else {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    cfg.blocks.push_back(all);
  }

  // Default feedline: the quoted Gamma/theta estimates with the bare kappa_a
  // that reproduces the first driven mode's effective linewidth.
  const cplx gamma_default(0.98, -0.17);
  const double theta_default = 0.05;
  double kappa_eff = 0.0;
  for (int i = 0; i < n; ++i) {
    if (c(i) != cplx(0.0)) {
      kappa_eff = cfg.network.kappa(i);
      break;
    }
  }
  const json io = doc.value("io_chain", json::object());
  cfg.io.gamma = io.contains("gamma") ? parse_complex(io.at("gamma"), "io_chain.gamma") : gamma_default;
  cfg.io.theta = number_or(io, "theta", theta_default, "io_chain.", source);
  cfg.io.leak_scale =
      io.contains("leak_scale") ? parse_complex(io.at("leak_scale"), "io_chain.leak_scale") : cplx(1.0);
  if (io.contains("kappa_a_mhz")) {
    cfg.io.kappa_a = units::mhz_to_rad_per_ns(number(io, "kappa_a_mhz", "io_chain.", source));
  } else if (kappa_eff > 0.0) {
    cfg.io.kappa_a = bare_kappa_from_effective(cfg.io.gamma, cfg.io.theta, kappa_eff);
  } else {
    cfg.io.kappa_a = 1.0;
  }
  cfg.lowpass_tau_ns = number_or(io, "lowpass_tau_ns", 0.0, "io_chain.", source);
  try {
    validate(cfg.io);
  } catch (const Error& e) {
    fail(source, "io_chain", e.what());
  }
  return cfg;
}

DeviceConfig load_device(const std::filesystem::path& path) {
  return parse_device(read_json(path), path.string());
}

ProblemConfig parse_problem(const json& doc, const std::string& source) {
  ProblemConfig p;
  if (!doc.is_object()) fail(source, "<root>", "expected an object");
  const json& src = doc.contains("mmoc") ? doc.at("mmoc") : doc;
  const std::string path = doc.contains("mmoc") ? "mmoc." : "";
  if (src.contains("m")) p.m = integer(src, "m", path, source);
  p.t0_ns = number_or(src, "t0_ns", p.t0_ns, path, source);
  p.tf_ns = number_or(src, "tf_ns", p.tf_ns, path, source);
  if (src.contains("eps0")) p.eps0 = parse_complex(src.at("eps0"), path + "eps0");
  if (src.contains("epsf")) p.epsf = parse_complex(src.at("epsf"), path + "epsf");
  if (src.contains("seed")) {
    if (!src.at("seed").is_number_unsigned()) fail(source, path + "seed", "expected a non-negative integer");
    p.seed = src.at("seed").get<std::uint64_t>();
  }
  p.bounds_scale = number_or(src, "bounds_scale", p.bounds_scale, path, source);
  if (src.contains("generations")) p.generations = integer(src, "generations", path, source);
  if (p.m < 1) fail(source, path + "m", "must be positive");
  if (!(p.tf_ns > p.t0_ns)) fail(source, path + "tf_ns", "must exceed t0_ns");
  return p;
}

}  // namespace staforge::cli
