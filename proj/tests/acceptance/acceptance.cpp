// Acceptance runner: one line per criterion, "[PASS]" or "[FAIL]", with the
// measured numbers and wall time against the budget. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "staforge/cdshaper.hpp"
#include "staforge/device.hpp"
#include "staforge/fockoracle.hpp"
#include "staforge/hybridizer.hpp"
#include "staforge/iochain.hpp"
#include "staforge/langevin.hpp"
#include "staforge/mmoc.hpp"
#include "staforge/qsl.hpp"
#include "staforge/units.hpp"

using namespace staforge;

namespace {

const double kDelta = units::mhz_to_rad_per_ns(2.45);
const double kKappa = 1.0 / 62.88;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string num(double x, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome cd_following() {
  Outcome o{true, ""};
  const ModeNetwork net = ModeNetwork::single_mode(kDelta, kKappa);
  for (double tf : {30.0, 100.0, 800.0}) {
    const auto start = std::chrono::steady_clock::now();
    const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, 0.05, tf);
    const auto times = uniform_grid(0.0, tf + 200.0, 1201);
    const auto r = diabatic_residual(net, cd_pulse(ref, kDelta, kKappa), times, ref);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, r[i]);
      scale = std::max(scale, std::abs(reference_equilibrium(ref, kDelta, kKappa, times[i])));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.pass = o.pass && worst <= 1e-9 * scale && secs < 1.0;
    o.detail += "tf=" + num(tf) + ": " + num(worst / scale) + " (" + num(secs, 2) + " s) ";
  }
  return o;
}

Outcome quench_settling() {
  // Photon residual |alpha - alpha_eq|^2 / |alpha_eq|^2 of a quench from vacuum.
  const ModeNetwork net = ModeNetwork::single_mode(kDelta, kKappa);
  const cplx eps(0.05, 0.0);
  const cplx eq = equilibrium_state(net, eps)(0);
  const auto times = uniform_grid(0.0, 600.0, 12001);
  const Trace tr = propagate(net, reference_library(ReferenceShape::Quench, eps, 1.0), Eigen::VectorXcd::Zero(1), times);
  std::vector<double> r(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) r[i] = std::norm(tr.alphas[i](0) - eq) / std::norm(eq);
  const auto settle = [&](double level) {
    // Last upward crossing of the level, interpolated in log r.
    for (std::size_t i = times.size() - 1; i > 0; --i) {
      if (r[i - 1] > level) {
        const double f = std::log(r[i - 1] / level) / std::log(r[i - 1] / r[i]);
        return times[i - 1] + f * (times[i] - times[i - 1]);
      }
    }
    return times.front();
  };
  const double t5 = settle(std::exp(-5.0)) * kKappa;
  const double t1 = settle(0.01) * kKappa;
  const bool ok = std::abs(t5 - 5.0) <= 0.02 * 5.0;
  return {ok, "residual e^-5 (0.67%) reached at " + num(t5, 5) + " / kappa = " + num(t5 / kKappa, 4) +
                  " ns; strict 1% at " + num(t1, 4) + " / kappa"};
}

struct MmocRun {
  MmocSolution base, opt;
  double worst_mode_error = 0.0;
};

MmocRun mmoc_run(const ModeNetwork& net, cplx eps0, cplx epsf, double tf) {
  const MmocProblem problem{hybridize(net), 10, 0.0, tf, eps0, epsf};
  MmocRun run;
  run.base = solve(problem);
  run.opt = optimize_pmax(run.base, PmaxOptions{});
  const Pulse pulse = assemble_pulse(problem, run.opt);
  const Eigen::VectorXcd a0 = equilibrium_state(net, eps0);
  const Eigen::VectorXcd af = equilibrium_state(net, epsf);
  const Trace tr = propagate(net, pulse, a0, {0.0, tf});
  // Both the bare modes and the hybrid modes (O alpha) must land on target.
  const Eigen::MatrixXcd& O = problem.spectrum.transform;
  const Eigen::VectorXcd miss = tr.alphas.back() - af, miss_h = O * miss;
  const double scale = std::max(a0.norm(), af.norm());
  const double scale_h = std::max((O * a0).norm(), (O * af).norm());
  for (int k = 0; k < net.n_modes(); ++k) {
    run.worst_mode_error =
        std::max({run.worst_mode_error, std::abs(miss(k)) / scale, std::abs(miss_h(k)) / scale_h});
  }
  return run;
}

Outcome mmoc_targets() {
  const ModeNetwork net = paper_device();
  const MmocRun up = mmoc_run(net, 0.0, 1.0, 60.0);
  const MmocRun down = mmoc_run(net, 1.0, 0.0, 60.0);
  return {up.worst_mode_error <= 1e-6 && down.worst_mode_error <= 1e-6,
          "worst mode error: ringup " + num(up.worst_mode_error) + ", reset " + num(down.worst_mode_error)};
}

Outcome pmax_reduction() {
  const ModeNetwork net = paper_device();
  const HybridSpectrum spec = hybridize(net);
  const MmocRun at60 = mmoc_run(net, 0.0, 1.0, 60.0);
  const MmocReport rep = report(at60.base, at60.opt, 1.0);
  bool bound_ok = true;
  double closest = INFINITY;
  for (double tf = 20.0; tf <= 200.0 + 1e-9; tf += 10.0) {
    const MmocSolution base = solve(MmocProblem{spec, 10, 0.0, tf, 0.0, 1.0});
    const MmocReport r = report(base, optimize_pmax(base, PmaxOptions{}), 1.0);
    bound_ok = bound_ok && r.pmax_optimized_db >= r.lower_bound_db - 1e-9;
    closest = std::min(closest, r.pmax_optimized_db - r.lower_bound_db);
  }
  const bool ok = std::abs(rep.pmax_optimized_db - 14.5) <= 0.5 && rep.reduction_db >= 3.5 && bound_ok;
  return {ok, "P_max " + num(rep.pmax_optimized_db, 4) + " dB (min-energy " + num(rep.pmax_min_energy_db, 4) +
                  " dB), reduction " + num(rep.reduction_db, 3) + " dB, tightest margin above bound over tf 20..200: " +
                  num(closest, 3) + " dB"};
}

double cd_efficiency(double delta, double dalpha) {
  const ModeNetwork net = ModeNetwork::single_mode(delta, kKappa);
  const double eps0 = dalpha * std::abs(cplx(delta, -kKappa / 2));
  const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, eps0, 100.0);
  return quantum_efficiency(
      propagate(net, cd_pulse(ref, delta, kKappa), Eigen::VectorXcd::Zero(1), uniform_grid(0.0, 100.0, 2001)));
}

double direct_efficiency(double delta, double dalpha) {
  const ModeNetwork net = ModeNetwork::single_mode(delta, kKappa);
  const double eps0 = dalpha * std::abs(cplx(delta, -kKappa / 2));
  return quantum_efficiency(propagate(net, reference_library(ReferenceShape::Quench, eps0, 1.0),
                                      Eigen::VectorXcd::Zero(1), uniform_grid(0.0, 30.0 / kKappa, 20001)));
}

Outcome efficiencies() {
  const double d3 = units::mhz_to_rad_per_ns(3.0), d6 = units::mhz_to_rad_per_ns(6.0);
  double worst_cd = 0.0;
  bool ordered = true;
  double eta_small = 0.0;
  for (double da : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}) {
    const double e = cd_efficiency(d3, da);
    if (da == 0.1) eta_small = e;
    worst_cd = std::max(worst_cd, std::abs(e - max_efficiency(da)));
    ordered = ordered && direct_efficiency(d6, da) < direct_efficiency(d3, da);
  }
  const bool ok = worst_cd <= 1e-3 && std::abs(eta_small - 1.0) <= 1e-3 && ordered;
  return {ok, "max |eta_cd - bound| " + num(worst_cd) + ", eta(0.1) = " + num(eta_small, 6) +
                  ", direct 6 MHz below 3 MHz at every point: " + (ordered ? "yes" : "no")};
}

Outcome fock_oracle() {
  const double target = 4.0;
  const cplx d(kDelta, -kKappa / 2);
  const Pulse ref = reference_library(ReferenceShape::Sin2Ramp, target * std::abs(d), 100.0);
  const int dim = std::max(40, adequate_dimension(target * target));
  const FockConfig cfg{dim, kDelta, kKappa, 0.0};
  const Pulse cd = cd_pulse(ref, kDelta, kKappa);
  // Fidelity to the mean-field coherent state along the ringup and after it.
  const auto times = uniform_grid(0.0, 150.0, 31);
  const auto rho = lindblad_evolve(cfg, cd, vacuum(dim), times);
  const Trace mean = propagate(ModeNetwork::single_mode(kDelta, kKappa), cd, Eigen::VectorXcd::Zero(1), times);
  double n = 0.0, fid = 1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    n = std::max(n, mean_photon_number(rho[i]));
    fid = std::min(fid, coherent_fidelity(rho[i], mean.alphas[i](0)));
  }
  double worst = 0.0;
  std::size_t matched = 0;
  bool spectrum_ok = true;
  try {
    const auto m = liouvillian_spectrum(FockConfig{12, kDelta, kKappa, 0.0}, 2, 2);
    matched = m.size();
    for (const auto& s : m) worst = std::max(worst, std::abs(s.computed - s.predicted) / kKappa);
  } catch (const std::exception&) {
    spectrum_ok = false;
  }
  const bool ok = n <= 16.0 + 1e-9 && dim >= 40 && fid >= 1.0 - 1e-6 && spectrum_ok && worst <= 1e-6;
  return {ok, "max <n> = " + num(n, 6) + ", dim " + std::to_string(dim) + ", worst 1 - F = " + num(1.0 - fid) + "; " +
                  std::to_string(matched) + " Liouvillian eigenvalues matched, worst " + num(worst) + " kappa"};
}

Outcome filter_correction() {
  const HybridSpectrum spec = hybridize(paper_device());
  const Eigen::MatrixXcd G = build_G(spec, 10, 0.0, 60.0);
  const double wc = units::mhz_to_rad_per_ns(750.0);
  double worst = 0.0;
  std::string detail;
  for (double carrier : {200.0, 250.0}) {
    const double wd = units::mhz_to_rad_per_ns(carrier);
    const Eigen::MatrixXcd Gp = filter_corrected_G(spec, 10, 0.0, 60.0, wd - wc, wd + wc, 0.0, 60.0);
    const double rel = max_relative_difference(Gp, G);
    worst = std::max(worst, rel);
    detail += "carrier " + num(carrier) + " MHz: " + num(rel) + "  ";
  }
  return {worst < 1e-6, "max |G'-G|/|G| over [0, tf]: " + detail};
}

Outcome reset_asymmetry() {
  const ModeNetwork net = paper_device();
  const MmocRun up = mmoc_run(net, 0.0, 1.0, 60.0);
  const MmocRun down = mmoc_run(net, 1.0, 0.0, 60.0);
  const int m = up.base.m();
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    worst = std::max(worst, std::abs(down.base.essential(j) - std::conj(up.base.essential(m - 1 - j))));
  }
  const bool ok = worst > 0.1 && up.worst_mode_error <= 1e-6 && down.worst_mode_error <= 1e-6;
  return {ok, "max section difference " + num(worst) + " eps_f; targets met to " +
                  num(std::max(up.worst_mode_error, down.worst_mode_error))};
}

Outcome property_suites() {
  const std::vector<props::SuiteResult> suites{
      props::propagate_linearity(1000, 1), props::propagate_semigroup(1000, 2),
      props::propagate_contraction(1000, 3), props::svd_residual_and_null_space(500, 4),
      props::efficiency_bound(500, 5)};
  bool ok = true;
  std::string detail;
  for (const auto& s : suites) {
    ok = ok && s.passed();
    detail += s.name + " " + std::to_string(s.instances - s.failures) + "/" + std::to_string(s.instances) +
              " (worst " + num(s.worst, 2) + ")  ";
  }
  return {ok, detail};
}

Outcome s21_dips_check() {
  const ModeNetwork dev = paper_device();
  const double tol = units::mhz_to_rad_per_ns(0.5);
  double worst = 0.0;
  double res_dip[2] = {0.0, 0.0};
  bool ok = true;
  for (int q = 0; q < 2; ++q) {
    const ModeNetwork block = dev.subnetwork(std::vector<int>{filter_index(q), resonator_index(q)});
    const HybridSpectrum s = hybridize(block);
    const auto dips = s21_dips(block, IoChainParams::paper(block.kappa(0)), uniform_grid(-0.3, 0.3, 6001));
    if (dips.size() != 2) {
      ok = false;
      continue;
    }
    const int narrow = s.linewidth(0) < s.linewidth(1) ? 0 : 1;
    for (int k = 0; k < 2; ++k) {
      double nearest = INFINITY;
      for (double dip : dips) nearest = std::min(nearest, std::abs(dip - s.detuning(k)));
      worst = std::max(worst, nearest);
      if (k == narrow) {
        res_dip[q] = *std::min_element(dips.begin(), dips.end(), [&](double a, double b) {
          return std::abs(a - s.detuning(k)) < std::abs(b - s.detuning(k));
        });
      }
    }
  }
  const double sep = units::rad_per_ns_to_mhz(std::abs(res_dip[0] - res_dip[1]));
  ok = ok && worst <= tol && std::abs(sep - 4.9) <= 0.5;
  return {ok, "worst dip offset " + num(units::rad_per_ns_to_mhz(worst)) + " MHz, resonator dip separation " +
                  num(sep, 4) + " MHz"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1", "CD hybrid-mode following for tf in {30, 100, 800} ns", 3.0, cd_following},
      {"C2", "quench settles at 5/kappa", 1.0, quench_settling},
      {"C3", "MMOC ringup and reset reach all four targets", 5.0, mmoc_targets},
      {"C4", "optimized P_max, reduction and lower bound over tf", 300.0, pmax_reduction},
      {"C5", "quantum efficiency of CD and direct driving", 10.0, efficiencies},
      {"C6", "Fock-space oracle: CD fidelity and Liouvillian spectrum", 120.0, fock_oracle},
      {"C7", "brick-wall filter correction to G", 30.0, filter_correction},
      {"C8", "reset is not the conjugate time-reverse of ringup", 5.0, reset_asymmetry},
      {"C9", "randomized property suites", 120.0, property_suites},
      {"C10", "S21 dips at hybrid detunings for both qubit states", 5.0, s21_dips_check},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.budget_s;
    failed += pass ? 0 : 1;
    std::printf("[%s] %-4s %s | %s | %.2f s (budget %g s)\n", pass ? "PASS" : "FAIL", c.id.c_str(),
                c.title.c_str(), o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
