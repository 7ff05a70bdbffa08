#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "staforge/cdshaper.hpp"
#include "staforge/error.hpp"
#include "staforge/fockoracle.hpp"
#include "staforge/hybridizer.hpp"
#include "staforge/io.hpp"
#include "staforge/iochain.hpp"
#include "staforge/langevin.hpp"
#include "staforge/mmoc.hpp"
#include "staforge/parallel.hpp"
#include "staforge/qsl.hpp"
#include "staforge/svg.hpp"

namespace staforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ReferenceShape parse_shape(const std::string& s) {
  if (s == "sin2") return ReferenceShape::Sin2Ramp;
  if (s == "quench") return ReferenceShape::Quench;
  if (s == "hold") return ReferenceShape::Hold;
  throw Error(ErrorCode::InvalidArgument, "unknown shape '" + s + "' (sin2|quench|hold)");
}

void write(const CommonArgs& common, const std::string& name, const std::string& contents) {
  io::write_atomic(fs::path(common.out_dir) / name, contents);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> real_parts(const std::vector<cplx>& v, double (*f)(const cplx&)) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), f);
  return out;
}
double re(const cplx& z) { return z.real(); }
double im(const cplx& z) { return z.imag(); }
double mag(const cplx& z) { return std::abs(z); }

io::CsvTable ro_csv(const std::vector<double>& t, const std::vector<cplx>& r) {
  io::CsvTable csv;
  csv.header = {"time_ns", "re_ro", "im_ro", "abs_ro"};
  for (std::size_t i = 0; i < t.size(); ++i) csv.rows.push_back({t[i], r[i].real(), r[i].imag(), std::abs(r[i])});
  return csv;
}

std::vector<double> grid(double t0, double t1, double dt) {
  const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt)) + 1;
  return uniform_grid(t0, t1, std::max<std::size_t>(n, 2));
}

struct BlockSelection {
  ModeNetwork net;
  HybridSpectrum spectrum;
  int mode = 0;
};

BlockSelection select_block(const DeviceConfig& dev, int block, int mode) {
  if (block < 0 || block >= static_cast<int>(dev.blocks.size())) {
    throw Error(ErrorCode::InvalidArgument, "block index out of range");
  }
  BlockSelection sel;
  sel.net = dev.network.subnetwork(dev.blocks[static_cast<std::size_t>(block)]);
  sel.spectrum = hybridize(sel.net);
  if (mode < 0) {
    int best = 0;
    for (int k = 1; k < sel.spectrum.size(); ++k) {
      if (sel.spectrum.linewidth(k) < sel.spectrum.linewidth(best)) best = k;
    }
    sel.mode = best;
  } else {
    if (mode >= sel.spectrum.size()) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
    sel.mode = mode;
  }
  return sel;
}

struct RunOutput {
  Trace trace;
  std::vector<cplx> drive;
  std::vector<cplx> ro;
};

RunOutput run(const ModeNetwork& net, const DeviceConfig& dev, const Pulse& pulse,
              const std::vector<double>& times) {
  RunOutput out;
  const Eigen::VectorXcd alpha0 = equilibrium_state(net, pulse.value(times.front() - 1.0));
  out.trace = propagate(net, pulse, alpha0, times);
  for (double t : times) out.drive.push_back(pulse.value(t));
  out.ro = low_pass(times, output_trace(net, dev.io, times, out.drive, out.trace.alphas),
                    dev.lowpass_tau_ns);
  out.trace.output = out.ro;
  return out;
}

void print_spectrum(const HybridSpectrum& s, double drive_ghz) {
  std::cout << std::setw(4) << "k" << std::setw(14) << "det/2pi[MHz]" << std::setw(14)
            << "freq[GHz]" << std::setw(14) << "kap/2pi[MHz]" << std::setw(12) << "1/kap[ns]"
            << std::setw(14) << "t_adiab[ns]" << '\n';
  for (int k = 0; k < s.size(); ++k) {
    const double d = s.detuning(k);
    const double kap = s.linewidth(k);
    std::cout << std::setw(4) << k << std::setw(14) << std::setprecision(6)
              << units::rad_per_ns_to_mhz(d) << std::setw(14) << std::setprecision(8)
              << drive_ghz + units::rad_per_ns_to_ghz(d) << std::setw(14) << std::setprecision(6)
              << units::rad_per_ns_to_mhz(kap) << std::setw(12) << 1.0 / kap << std::setw(14)
              << (kap > 0 ? adiabatic_timescale(d, kap) : INFINITY) << '\n';
  }
}

}  // namespace

double equilibration_time(const std::vector<double>& times, const std::vector<cplx>& values,
                          double tol) {
  if (values.empty()) return NAN;
  const cplx final = values.back();
  const double bound = tol * std::abs(final);
  for (std::size_t i = values.size(); i-- > 0;) {
    if (std::abs(values[i] - final) > bound) {
      return i + 1 < times.size() ? times[i + 1] : times.back();
    }
  }
  return times.front();
}

int cmd_hybridize(const std::string& config, const CommonArgs& common) {
  const DeviceConfig dev = load_device(config);
  const HybridSpectrum s = hybridize(dev.network);
  std::cout << "device '" << dev.name << "', drive " << dev.drive_freq_ghz << " GHz, "
            << dev.network.n_modes() << " modes\n";
  print_spectrum(s, dev.drive_freq_ghz);

  json report;
  report["device"] = dev.name;
  report["drive_freq_ghz"] = dev.drive_freq_ghz;
  json modes = json::array();
  for (int k = 0; k < s.size(); ++k) {
    const double kap = s.linewidth(k);
    modes.push_back({{"detuning_mhz", units::rad_per_ns_to_mhz(s.detuning(k))},
                     {"freq_ghz", dev.drive_freq_ghz + units::rad_per_ns_to_ghz(s.detuning(k))},
                     {"kappa_mhz", units::rad_per_ns_to_mhz(kap)},
                     {"lifetime_ns", 1.0 / kap},
                     {"adiabatic_timescale_ns", kap > 0 ? adiabatic_timescale(s.detuning(k), kap) : -1.0}});
  }
  report["hybrid_modes"] = modes;
  json blocks = json::array();
  for (std::size_t b = 0; b < dev.blocks.size(); ++b) {
    const HybridSpectrum bs = hybridize(dev.network.subnetwork(dev.blocks[b]));
    json jb = json::array();
    for (int k = 0; k < bs.size(); ++k) {
      jb.push_back({{"detuning_mhz", units::rad_per_ns_to_mhz(bs.detuning(k))},
                    {"lifetime_ns", 1.0 / bs.linewidth(k)}});
    }
    blocks.push_back(jb);
  }
  report["blocks"] = blocks;
  write(common, "hybridize.json", dump(report));

  if (common.verify) {
    const Eigen::MatrixXcd rec = s.inverse_transform * s.hybrid_detunings.asDiagonal() * s.transform;
    const double err = (rec - dev.network.omega()).norm() / dev.network.omega().norm();
    const double tr = std::abs(s.hybrid_detunings.sum() - dev.network.omega().trace()) /
                      std::abs(dev.network.omega().trace());
    std::cout << "verify: reconstruction " << err << ", trace " << tr << '\n';
    if (!(err <= 1e-12 && tr <= 1e-12)) return 1;
  }
  return 0;
}

int cmd_cd(const CdArgs& args, const CommonArgs& common) {
  const DeviceConfig dev = load_device(args.config);
  const BlockSelection sel = select_block(dev, args.block, args.mode);
  const double delta = sel.spectrum.detuning(sel.mode);
  const double kappa = sel.spectrum.linewidth(sel.mode);
  const Pulse reference = reference_library(parse_shape(args.shape), args.eps0, args.tf);
  const Pulse cd = cd_pulse(reference, delta, kappa);
  const Pulse quench = reference_library(ReferenceShape::Quench, args.eps0, args.tf);

  double min_kappa = INFINITY;
  for (int k = 0; k < sel.spectrum.size(); ++k) min_kappa = std::min(min_kappa, sel.spectrum.linewidth(k));
  const double post = args.post_ns > 0 ? args.post_ns : std::max(300.0, 8.0 / min_kappa);
  // Quasi-static references would need billions of samples; cap the grid.
  const double dt = std::max(args.dt, (args.tf + post + 20.0) / 200000.0);
  if (dt > args.dt) std::cout << "output spacing raised to " << dt << " ns to bound the grid size\n";
  const auto times = grid(-20.0, args.tf + post, dt);

  const RunOutput r_cd = run(sel.net, dev, cd, times);
  const RunOutput r_ref = run(sel.net, dev, reference, times);
  const RunOutput r_q = run(sel.net, dev, quench, times);

  io::CsvTable pulses;
  pulses.header = {"time_ns", "re_eps_ref", "im_eps_ref", "re_eps_cd", "im_eps_cd"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    pulses.rows.push_back({times[i], r_ref.drive[i].real(), r_ref.drive[i].imag(),
                           r_cd.drive[i].real(), r_cd.drive[i].imag()});
  }
  write(common, "pulses.csv", pulses.str());
  write(common, "pulse_cd.csv", io::pulse_csv(cd, times).str());
  write(common, "trace_cd.csv", io::trace_csv(r_cd.trace).str());
  write(common, "trace_reference.csv", io::trace_csv(r_ref.trace).str());
  write(common, "ro_cd.csv", ro_csv(times, r_cd.ro).str());
  write(common, "ro_reference.csv", ro_csv(times, r_ref.ro).str());
  write(common, "ro_quench.csv", ro_csv(times, r_q.ro).str());

  svg::Plot p_abs{"|r_o(t)|, t_f = " + io::fmt(args.tf) + " ns", "time (ns)", "|r_o| (arb.)", {}};
  p_abs.series.push_back({"CD", times, real_parts(r_cd.ro, mag)});
  p_abs.series.push_back({args.shape + " reference", times, real_parts(r_ref.ro, mag)});
  p_abs.series.push_back({"quench", times, real_parts(r_q.ro, mag)});
  write(common, "ro_abs.svg", svg::render(p_abs));
  svg::Plot p_iq{"output IQ trajectory", "I", "Q", {}, true};
  p_iq.series.push_back({"CD", real_parts(r_cd.ro, re), real_parts(r_cd.ro, im)});
  p_iq.series.push_back({args.shape + " reference", real_parts(r_ref.ro, re), real_parts(r_ref.ro, im)});
  write(common, "iq.svg", svg::render(p_iq));
  svg::Plot p_pulse{"drive envelopes", "time (ns)", "amplitude", {}};
  p_pulse.series.push_back({"Re eps_cd", times, real_parts(r_cd.drive, re)});
  p_pulse.series.push_back({"Im eps_cd", times, real_parts(r_cd.drive, im)});
  p_pulse.series.push_back({"eps_ref", times, real_parts(r_ref.drive, re)});
  write(common, "pulses.svg", svg::render(p_pulse));

  // Equilibration is measured from the start of the drive (t = 0).
  const double t_cd = equilibration_time(times, r_cd.ro);
  const double t_ref = equilibration_time(times, r_ref.ro);
  const double t_q = equilibration_time(times, r_q.ro);
  std::cout << "target hybrid mode " << sel.mode << " of block " << args.block << ": Delta/2pi = "
            << units::rad_per_ns_to_mhz(delta) << " MHz, 1/kappa = " << 1.0 / kappa << " ns\n"
            << "output within 1% of steady state after: CD " << t_cd << " ns, " << args.shape
            << " reference " << t_ref << " ns, quench " << t_q << " ns\n";
  json summary{{"tf_ns", args.tf},
               {"target_mode", sel.mode},
               {"delta_mhz", units::rad_per_ns_to_mhz(delta)},
               {"lifetime_ns", 1.0 / kappa},
               {"equilibration_ns", {{"cd", t_cd}, {"reference", t_ref}, {"quench", t_q}}},
               {"max_added_drive", 0.0}};
  double added = 0.0;
  for (double t : times) added = std::max(added, std::abs(cd.value(t) - reference.value(t)));
  summary["max_added_drive"] = added;
  std::cout << "max |eps_cd - eps_ref| = " << added << " (" << added / std::abs(args.eps0)
            << " of eps0)\n";
  write(common, "cd_summary.json", dump(summary));

  if (common.verify) {
    // The target hybrid mode must follow its reference equilibrium exactly.
    double worst = 0.0, scale = 0.0;
    const cplx oc = (sel.spectrum.transform * sel.net.drive_coupling())(sel.mode);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const cplx beta = (sel.spectrum.transform * r_cd.trace.alphas[i])(sel.mode);
      const cplx target = oc * reference_equilibrium(reference, delta, kappa, times[i]);
      worst = std::max(worst, std::abs(beta - target));
      scale = std::max(scale, std::abs(target));
    }
    std::cout << "verify: hybrid-mode following error " << worst / scale << " (relative)\n";
    if (!(worst <= 1e-9 * scale)) return 1;
  }
  return 0;
}

int cmd_mmoc(const MmocArgs& args, const CommonArgs& common) {
  const DeviceConfig dev = load_device(args.config);
  const json doc = args.problem.empty() ? read_json(args.config) : read_json(args.problem);
  ProblemConfig pc = parse_problem(doc, args.problem.empty() ? args.config : args.problem);
  if (args.m) pc.m = *args.m;
  if (args.tf) pc.tf_ns = *args.tf;
  if (args.seed) pc.seed = *args.seed;
  if (args.generations) pc.generations = *args.generations;
  if (args.mode != "ringup" && args.mode != "reset") {
    throw Error(ErrorCode::InvalidArgument, "--mode must be ringup or reset");
  }
  // Reset runs the ringup problem backwards: start at the drive, end at zero.
  if (args.mode == "reset") {
    const cplx level = pc.epsf != cplx(0.0) ? pc.epsf : pc.eps0;
    pc.eps0 = level;
    pc.epsf = 0.0;
  }

  const HybridSpectrum spec = hybridize(dev.network);
  MmocProblem problem{spec, pc.m, pc.t0_ns, pc.tf_ns, pc.eps0, pc.epsf};
  const MmocSolution base = solve(problem);
  MmocSolution opt = base;
  if (base.null_basis.cols() > 0) {
    PmaxOptions po;
    po.bounds_scale = pc.bounds_scale;
    po.de.seed = pc.seed;
    po.de.generations = pc.generations;
    po.de.threads = common.threads;
    opt = optimize_pmax(base, po);
  } else {
    std::cout << "m equals the mode count: exactly determined, no optimization stage\n";
  }
  const cplx p0_amp = pc.epsf != cplx(0.0) ? pc.epsf : pc.eps0;
  const MmocReport rep = report(base, opt, p0_amp);
  const Pulse pulse = assemble_pulse(problem, opt);

  const auto times = grid(pc.t0_ns - 20.0, pc.tf_ns + 120.0, 0.25);
  std::vector<double> sim_times = times;
  sim_times.push_back(pc.tf_ns);
  std::sort(sim_times.begin(), sim_times.end());
  sim_times.erase(std::unique(sim_times.begin(), sim_times.end()), sim_times.end());
  const Eigen::VectorXcd a0 = equilibrium_state(dev.network, pc.eps0);
  const Eigen::VectorXcd af = equilibrium_state(dev.network, pc.epsf);
  const Trace tr = propagate(dev.network, pulse, a0, sim_times);
  const auto it_f = std::lower_bound(sim_times.begin(), sim_times.end(), pc.tf_ns);
  const Eigen::VectorXcd at_tf = tr.alphas[static_cast<std::size_t>(it_f - sim_times.begin())];
  const double scale = std::max({a0.norm(), af.norm(), 1e-300});
  const double final_error = (at_tf - af).norm() / scale;

  std::cout << "MMOC " << args.mode << ": m = " << pc.m << ", t_f = " << pc.tf_ns << " ns, "
            << spec.size() << " hybrid modes\n"
            << "  P_max/P0: min-energy " << rep.pmax_min_energy_db << " dB, optimized "
            << rep.pmax_optimized_db << " dB, lower bound " << rep.lower_bound_db << " dB\n"
            << "  reduction " << rep.reduction_db << " dB (power), peak amplitude ratio "
            << rep.peak_amplitude_ratio << "\n"
            << "  final-state error ||alpha(t_f) - alpha_f|| / scale = " << final_error << "\n";
  for (int k = 0; k < dev.network.n_modes(); ++k) {
    std::cout << "    mode " << k << ": |alpha - target| / scale = " << std::abs(at_tf(k) - af(k)) / scale
              << '\n';
  }

  json sol;
  sol["mode"] = args.mode;
  sol["m"] = pc.m;
  sol["t0_ns"] = pc.t0_ns;
  sol["tf_ns"] = pc.tf_ns;
  sol["eps0"] = complex_json(pc.eps0);
  sol["epsf"] = complex_json(pc.epsf);
  sol["seed"] = pc.seed;
  json sections = json::array(), x = json::array(), sv = json::array();
  const Eigen::VectorXcd s = opt.sections();
  for (int j = 0; j < s.size(); ++j) sections.push_back(complex_json(s(j)));
  for (int i = 0; i < opt.free_params.size(); ++i) x.push_back(complex_json(opt.free_params(i)));
  for (int i = 0; i < opt.singular_values.size(); ++i) sv.push_back(opt.singular_values(i));
  sol["sections"] = sections;
  sol["x"] = x;
  sol["singular_values"] = sv;
  sol["energy"] = rep.energy;
  sol["pmax_db"] = rep.pmax_optimized_db;
  sol["pmax_min_energy_db"] = rep.pmax_min_energy_db;
  sol["lower_bound_db"] = rep.lower_bound_db;
  sol["reduction_db"] = rep.reduction_db;
  sol["peak_amplitude_ratio"] = rep.peak_amplitude_ratio;
  sol["final_state_error"] = final_error;
  write(common, "solution.json", dump(sol));

  io::CsvTable sec;
  sec.header = {"section", "t_start_ns", "t_end_ns", "re_eps", "im_eps"};
  const double h = (pc.tf_ns - pc.t0_ns) / pc.m;
  for (int j = 0; j < pc.m; ++j) {
    sec.rows.push_back({static_cast<double>(j + 1), pc.t0_ns + h * j, pc.t0_ns + h * (j + 1), s(j).real(), s(j).imag()});
  }
  write(common, "sections.csv", sec.str());
  write(common, "pulse.csv", io::pulse_csv(pulse, times).str());

  for (std::size_t b = 0; b < dev.blocks.size(); ++b) {
    Trace bt;
    bt.times = tr.times;
    for (const auto& a : tr.alphas) {
      Eigen::VectorXcd v(static_cast<int>(dev.blocks[b].size()));
      for (std::size_t i = 0; i < dev.blocks[b].size(); ++i) v(static_cast<int>(i)) = a(dev.blocks[b][i]);
      bt.alphas.push_back(v);
    }
    const ModeNetwork sub = dev.network.subnetwork(dev.blocks[b]);
    std::vector<cplx> drive;
    for (double t : bt.times) drive.push_back(pulse.value(t));
    bt.output = output_trace(sub, dev.io, bt.times, drive, bt.alphas);
    write(common, "trace_block" + std::to_string(b) + ".csv", io::trace_csv(bt).str());

    svg::Plot plot{"block " + std::to_string(b) + ": |alpha_k| / |alpha_k(eq)|", "time (ns)",
                   "normalized amplitude", {}};
    for (std::size_t i = 0; i < dev.blocks[b].size(); ++i) {
      const int k = dev.blocks[b][i];
      const double norm = std::max(std::abs(af(k)), std::abs(a0(k)));
      std::vector<double> y;
      for (const auto& a : tr.alphas) y.push_back(std::abs(a(k)) / norm);
      plot.series.push_back({"mode " + std::to_string(k), tr.times, y});
    }
    write(common, "trace_block" + std::to_string(b) + ".svg", svg::render(plot));
  }
  svg::Plot pp{"MMOC drive (" + args.mode + ")", "time (ns)", "amplitude", {}};
  std::vector<double> pr, pi;
  for (double t : times) {
    pr.push_back(pulse.value(t).real());
    pi.push_back(pulse.value(t).imag());
  }
  pp.series.push_back({"Re eps", times, pr});
  pp.series.push_back({"Im eps", times, pi});
  write(common, "pulse.svg", svg::render(pp));

  if (common.verify) {
    const Eigen::MatrixXcd G = build_G(spec, pc.m, pc.t0_ns, pc.tf_ns);
    const Eigen::VectorXcd y = build_y(spec, pc.eps0, pc.epsf, pc.t0_ns, pc.tf_ns);
    const double resid = (G * s - y).norm() / y.norm();
    const bool ok = final_error <= 1e-6 && resid <= 1e-10 &&
                    pmax(opt) >= pmax_lower_bound(opt, pc.m) * (1 - 1e-12) && pmax(opt) <= pmax(base);
    std::cout << "verify: residual " << resid << ", transfer " << final_error << (ok ? " ok" : " FAILED")
              << '\n';
    if (!ok) return 1;
  }
  return 0;
}

namespace {

Pulse read_pulse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open pulse CSV");
  std::string line;
  std::getline(in, line);
  std::vector<double> t;
  std::vector<cplx> v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',')) {
      throw Error(ErrorCode::ConfigError, path + ":" + std::to_string(lineno) + ": expected time_ns,re_eps,im_eps");
    }
    t.push_back(std::stod(a));
    v.emplace_back(std::stod(b), std::stod(c));
  }
  if (t.size() < 2) throw Error(ErrorCode::ConfigError, path + ": need at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt) {
      throw Error(ErrorCode::ConfigError, path + ": samples must be uniformly spaced");
    }
  }
  return Pulse::sampled(t.front(), dt, v, v.front(), v.back());
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, const CommonArgs& common) {
  const DeviceConfig dev = load_device(args.config);
  const BlockSelection sel = select_block(dev, args.block, args.mode);
  Pulse pulse = args.pulse_csv.empty()
                    ? reference_library(parse_shape(args.shape), args.eps0, args.tf)
                    : read_pulse_csv(args.pulse_csv);
  if (args.cd) pulse = cd_pulse(pulse, sel.spectrum.detuning(sel.mode), sel.spectrum.linewidth(sel.mode));
  const auto times = grid(args.t0, args.t_end, args.dt);
  const RunOutput r = run(sel.net, dev, pulse, times);
  write(common, "trace.csv", io::trace_csv(r.trace).str());
  write(common, "ro.csv", ro_csv(times, r.ro).str());
  svg::Plot p{"|r_o(t)|", "time (ns)", "|r_o|", {}};
  p.series.push_back({"output", times, real_parts(r.ro, mag)});
  write(common, "ro_abs.svg", svg::render(p));
  std::cout << "simulated " << times.size() << " points on block " << args.block
            << "; output within 1% of final after " << equilibration_time(times, r.ro) << " ns\n";
  if (common.verify) {
    for (const auto& a : r.trace.alphas) {
      if (!a.allFinite()) return 1;
    }
  }
  return 0;
}

namespace {

struct EtaPoint {
  double cd = 0.0;
  double direct = 0.0;
  double bound = 0.0;
};

// Efficiency of a CD sin^2 ringup and of a direct quench to the same |alpha_f|.
EtaPoint efficiencies(double delta, double kappa, double dalpha, double tf) {
  const ModeNetwork net = ModeNetwork::single_mode(delta, kappa);
  const double eps0 = dalpha * std::abs(cplx(delta, -kappa / 2));
  const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, eps0, tf);
  const Pulse cd = cd_pulse(ref, delta, kappa);
  const Trace t_cd = propagate(net, cd, Eigen::VectorXcd::Zero(1), uniform_grid(0.0, tf, 2001));
  const Pulse quench = reference_library(ReferenceShape::Quench, eps0, 1.0);
  const double t_end = 30.0 / kappa;
  const auto times = uniform_grid(0.0, t_end, static_cast<std::size_t>(std::ceil(t_end / 0.1)) + 1);
  const Trace t_q = propagate(net, quench, Eigen::VectorXcd::Zero(1), times);
  return {quantum_efficiency(t_cd), quantum_efficiency(t_q), max_efficiency(dalpha)};
}

}  // namespace

int cmd_qsl(const QslArgs& args, const CommonArgs& common) {
  const double delta = units::mhz_to_rad_per_ns(args.delta_mhz);
  const double kappa = 1.0 / args.kappa_inv_ns;
  io::CsvTable csv;
  csv.header = {"delta_alpha", "eta_direct", "eta_cd", "eta_max", "max_added_drive"};
  std::cout << std::setw(12) << "|dalpha|" << std::setw(14) << "eta_direct" << std::setw(14)
            << "eta_cd" << std::setw(14) << "eta_max" << '\n';
  bool ok = true;
  for (double d : args.dalpha) {
    const EtaPoint e = efficiencies(delta, kappa, d, args.tf);
    const double eps0 = d * std::abs(cplx(delta, -kappa / 2));
    const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, eps0, args.tf);
    double added = 0.0;
    for (double t : uniform_grid(0.0, args.tf, 401)) {
      added = std::max(added, std::abs(cd_added_drive(ref, delta, kappa, t)));
    }
    csv.rows.push_back({d, e.direct, e.cd, e.bound, added});
    std::cout << std::setw(12) << d << std::setw(14) << e.direct << std::setw(14) << e.cd
              << std::setw(14) << e.bound << '\n';
    ok = ok && e.cd <= e.bound + 1e-9 && e.direct <= e.bound + 1e-9;
  }
  write(common, "qsl.csv", csv.str());
  if (common.verify && !ok) return 1;
  return 0;
}

int cmd_filtercheck(const FilterArgs& args, const CommonArgs& common) {
  const DeviceConfig dev = load_device(args.config);
  const HybridSpectrum spec = hybridize(dev.network);
  const double wd = units::mhz_to_rad_per_ns(args.carrier_mhz);
  const double wc = units::mhz_to_rad_per_ns(args.cutoff_mhz);
  const double lo = args.window_lo.value_or(0.0);
  const double hi = args.window_hi.value_or(args.tf);
  const Eigen::MatrixXcd G = build_G(spec, args.m, 0.0, args.tf);
  const Eigen::MatrixXcd Gp = filter_corrected_G(spec, args.m, 0.0, args.tf, wd - wc, wd + wc, lo, hi);
  const double rel = max_relative_difference(Gp, G);
  std::cout << "passband [" << units::rad_per_ns_to_mhz(wd - wc) << ", "
            << units::rad_per_ns_to_mhz(wd + wc) << "] MHz, window [" << lo << ", " << hi
            << "] ns: max |G'-G|/|G| = " << rel << '\n';
  json j{{"carrier_mhz", args.carrier_mhz}, {"cutoff_mhz", args.cutoff_mhz}, {"m", args.m},
         {"tf_ns", args.tf}, {"window_ns", {lo, hi}}, {"max_relative_difference", rel}};
  write(common, "filtercheck.json", dump(j));
  if (common.verify && !(rel < 1e-6)) return 1;
  return 0;
}

int cmd_lindblad_check(const LindbladArgs& args, const CommonArgs& common) {
  FockConfig cfg;
  cfg.delta = units::mhz_to_rad_per_ns(args.delta_mhz);
  cfg.kappa = 1.0 / args.kappa_inv_ns;
  cfg.kerr_shift = units::mhz_to_rad_per_ns(args.kerr_mhz);

  FockConfig spec_cfg = cfg;
  spec_cfg.dim = 12;
  const auto matches = liouvillian_spectrum(spec_cfg, 2, 2);
  double worst_match = 0.0;
  for (const auto& m : matches) worst_match = std::max(worst_match, std::abs(m.computed - m.predicted));
  std::cout << "Liouvillian: " << matches.size() << " predicted eigenvalues matched, worst error "
            << worst_match / cfg.kappa << " kappa\n";

  const double n_max = args.alpha_max * args.alpha_max;
  cfg.dim = args.dim > 0 ? args.dim : std::max(40, adequate_dimension(n_max));
  const cplx denom(cfg.delta, -cfg.kappa / 2);
  const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, args.alpha_max * std::abs(denom), args.tf);
  const Pulse cd = cd_pulse(ref, cfg.delta, cfg.kappa);
  const auto times = uniform_grid(0.0, args.tf + 50.0, static_cast<std::size_t>(args.tf + 50.0) + 1);
  const auto rhos = lindblad_evolve(cfg, cd, vacuum(cfg.dim), times);
  io::CsvTable csv;
  csv.header = {"time_ns", "fidelity", "purity", "n_mean", "top_level_pop"};
  double min_fid = 1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const cplx target = reference_equilibrium(ref, cfg.delta, cfg.kappa, times[i]);
    const double f = coherent_fidelity(rhos[i], target);
    min_fid = std::min(min_fid, f);
    csv.rows.push_back({times[i], f, purity(rhos[i]), mean_photon_number(rhos[i]), top_level_population(rhos[i])});
  }
  write(common, "fidelity.csv", csv.str());
  std::cout << "CD sin^2 ringup to |alpha| = " << args.alpha_max << " (dim " << cfg.dim
            << "): min fidelity to the reference coherent state " << std::setprecision(12) << min_fid
            << '\n';
  if (common.verify && !(min_fid >= 1 - 1e-6 && worst_match <= 1e-6 * cfg.kappa)) return 1;
  return 0;
}

int cmd_sweep(const SweepArgs& args, const CommonArgs& common) {
  if (args.kind == "pmax_vs_tf") {
    const DeviceConfig dev = load_device(args.config);
    const HybridSpectrum spec = hybridize(dev.network);
    std::vector<double> tfs;
    for (double t = 20.0; t <= 200.0 + 1e-9; t += 10.0) tfs.push_back(t);
    std::vector<MmocReport> reps(tfs.size());
    parallel_for(tfs.size(), [&](std::size_t i) {
      MmocProblem p{spec, 10, 0.0, tfs[i], 0.0, 1.0};
      const MmocSolution base = solve(p);
      PmaxOptions po;
      po.de.seed = args.seed;
      po.de.generations = args.generations;
      po.de.threads = 1;
      reps[i] = report(base, optimize_pmax(base, po), 1.0);
    }, common.threads);
    io::CsvTable csv;
    csv.header = {"tf_ns", "min_energy_db", "optimized_db", "lower_bound_db"};
    svg::Plot plot{"P_max vs t_f (m = 10)", "t_f (ns)", "P_max / P0 (dB)", {}};
    svg::Series a{"min-energy", tfs, {}}, b{"optimized", tfs, {}}, c{"lower bound", tfs, {}};
    bool ok = true;
    for (std::size_t i = 0; i < tfs.size(); ++i) {
      csv.rows.push_back({tfs[i], reps[i].pmax_min_energy_db, reps[i].pmax_optimized_db, reps[i].lower_bound_db});
      a.y.push_back(reps[i].pmax_min_energy_db);
      b.y.push_back(reps[i].pmax_optimized_db);
      c.y.push_back(reps[i].lower_bound_db);
      ok = ok && reps[i].pmax_optimized_db <= reps[i].pmax_min_energy_db + 1e-12 &&
           reps[i].pmax_optimized_db >= reps[i].lower_bound_db - 1e-9;
      std::cout << "t_f = " << tfs[i] << " ns: " << reps[i].pmax_min_energy_db << " / "
                << reps[i].pmax_optimized_db << " / " << reps[i].lower_bound_db << " dB\n";
    }
    plot.series = {a, b, c};
    write(common, "pmax_vs_tf.csv", csv.str());
    write(common, "pmax_vs_tf.svg", svg::render(plot));
    return (common.verify && !ok) ? 1 : 0;
  }
  if (args.kind == "eta_vs_dalpha") {
    const double kappa = 1.0 / 62.88;
    const double d3 = units::mhz_to_rad_per_ns(3.0), d6 = units::mhz_to_rad_per_ns(6.0);
    std::vector<double> da;
    for (int i = 0; i < 50; ++i) da.push_back(0.1 + 4.9 * i / 49.0);
    std::vector<EtaPoint> e3(da.size()), e6(da.size());
    parallel_for(da.size(), [&](std::size_t i) {
      e3[i] = efficiencies(d3, kappa, da[i], 100.0);
      e6[i] = efficiencies(d6, kappa, da[i], 100.0);
    }, common.threads);
    io::CsvTable csv;
    csv.header = {"delta_alpha", "eta_direct", "eta_cd", "eta_max", "eta_direct_6mhz", "eta_cd_6mhz"};
    svg::Plot plot{"quantum efficiency", "|delta alpha|", "eta", {}};
    svg::Series s_max{"max efficiency", da, {}}, s_cd{"CD (3 MHz)", da, {}, true},
        s_d3{"direct, 3 MHz", da, {}}, s_d6{"direct, 6 MHz", da, {}};
    bool ok = true;
    for (std::size_t i = 0; i < da.size(); ++i) {
      csv.rows.push_back({da[i], e3[i].direct, e3[i].cd, e3[i].bound, e6[i].direct, e6[i].cd});
      s_max.y.push_back(e3[i].bound);
      s_cd.y.push_back(e3[i].cd);
      s_d3.y.push_back(e3[i].direct);
      s_d6.y.push_back(e6[i].direct);
      ok = ok && e6[i].direct < e3[i].direct && e3[i].cd <= e3[i].bound + 1e-9;
    }
    plot.series = {s_max, s_cd, s_d3, s_d6};
    write(common, "eta_vs_dalpha.csv", csv.str());
    write(common, "eta_vs_dalpha.svg", svg::render(plot));
    std::cout << "wrote " << da.size() << " efficiency points\n";
    return (common.verify && !ok) ? 1 : 0;
  }
  if (args.kind == "cd_durations") {
    const DeviceConfig dev = load_device(args.config);
    const BlockSelection sel = select_block(dev, 0, -1);
    const double delta = sel.spectrum.detuning(sel.mode);
    const double kappa = sel.spectrum.linewidth(sel.mode);
    const double eps0 = 0.05;
    const auto times = grid(-20.0, 1400.0, 0.5);
    struct Case {
      std::string label;
      Pulse pulse;
    };
    std::vector<Case> cases;
    for (double tf : {30.0, 100.0, 800.0}) {
      const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, eps0, tf);
      cases.push_back({"cd_" + io::fmt(tf), cd_pulse(ref, delta, kappa)});
      cases.push_back({"sin2_" + io::fmt(tf), ref});
    }
    cases.push_back({"quench", reference_library(ReferenceShape::Quench, eps0, 1.0)});
    std::vector<RunOutput> outs(cases.size());
    parallel_for(cases.size(), [&](std::size_t i) { outs[i] = run(sel.net, dev, cases[i].pulse, times); },
                 common.threads);
    std::ostringstream csv;
    csv << "case,equilibration_ns\n";
    svg::Plot plot{"|r_o(t)| for CD and sin^2 ringups", "time (ns)", "|r_o|", {}};
    json summary = json::object();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const double te = equilibration_time(times, outs[i].ro);
      csv << cases[i].label << ',' << io::fmt(te) << '\n';
      summary[cases[i].label] = te;
      plot.series.push_back({cases[i].label, times, real_parts(outs[i].ro, mag)});
      std::cout << std::setw(10) << cases[i].label << ": output within 1% of final after " << te << " ns\n";
    }
    write(common, "cd_durations.csv", csv.str());
    write(common, "cd_durations.json", dump(summary));
    write(common, "cd_durations.svg", svg::render(plot));
    const bool ok = summary["cd_100"].get<double>() < summary["quench"].get<double>() &&
                    summary["quench"].get<double>() < summary["sin2_800"].get<double>();
    return (common.verify && !ok) ? 1 : 0;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown sweep kind '" + args.kind + "' (pmax_vs_tf|eta_vs_dalpha|cd_durations)");
}

}  // namespace staforge::cli
