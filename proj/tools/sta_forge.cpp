// Command-line front end for pulse design and verification.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "staforge/error.hpp"

using namespace staforge;

int main(int argc, char** argv) {
  CLI::App app{"sta_forge: shortcut-to-adiabaticity pulse design for lossy bosonic mode networks"};
  app.require_subcommand(1);
  cli::CommonArgs common;
  app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--verify", common.verify, "Run invariant checks; exit code 1 if any fails");
  app.add_option("--threads", common.threads, "Worker threads (default: STA_FORGE_THREADS or all cores)");

  std::string hyb_config;
  auto* hyb = app.add_subcommand("hybridize", "Hybrid detunings, linewidths and adiabatic timescales");
  hyb->add_option("config", hyb_config, "Device JSON")->required();

  cli::CdArgs cd;
  auto* cdc = app.add_subcommand("cd", "Counterdiabatic ringup of one hybrid mode");
  cdc->add_option("config", cd.config, "Device JSON")->required();
  cdc->add_option("--tf", cd.tf, "Reference duration (ns)")->capture_default_str();
  cdc->add_option("--shape", cd.shape, "sin2 | quench | hold")->capture_default_str();
  cdc->add_option("--block", cd.block, "Qubit-state block")->capture_default_str();
  cdc->add_option("--mode", cd.mode, "Hybrid mode index in the block (default: narrowest)");
  cdc->add_option("--eps0", cd.eps0, "Final drive amplitude")->capture_default_str();
  cdc->add_option("--post", cd.post_ns, "Simulated time after tf (ns)");
  cdc->add_option("--dt", cd.dt, "Output spacing (ns)")->capture_default_str();

  cli::MmocArgs mm;
  auto* mmc = app.add_subcommand("mmoc", "Multi-mode optimal control ringup or reset");
  mmc->add_option("config", mm.config, "Device JSON (may carry an \"mmoc\" problem block)")->required();
  mmc->add_option("--problem", mm.problem, "Problem JSON");
  mmc->add_option("--m", mm.m, "Section count");
  mmc->add_option("--tf", mm.tf, "Target time (ns)");
  mmc->add_option("--mode", mm.mode, "ringup | reset")->capture_default_str();
  mmc->add_option("--seed", mm.seed, "Differential-evolution seed");
  mmc->add_option("--generations", mm.generations, "Differential-evolution generations");

  cli::SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "Propagate a drive through one block and the feedline");
  simc->add_option("config", sim.config, "Device JSON")->required();
  simc->add_option("--pulse", sim.pulse_csv, "Uniformly sampled pulse CSV (time_ns,re_eps,im_eps)");
  simc->add_option("--shape", sim.shape, "Library shape when no CSV is given")->capture_default_str();
  simc->add_option("--tf", sim.tf, "Shape duration (ns)")->capture_default_str();
  simc->add_option("--eps0", sim.eps0, "Shape amplitude")->capture_default_str();
  simc->add_flag("--cd", sim.cd, "Apply the counterdiabatic correction for the selected mode");
  simc->add_option("--block", sim.block, "Qubit-state block")->capture_default_str();
  simc->add_option("--mode", sim.mode, "Hybrid mode for --cd");
  simc->add_option("--t0", sim.t0, "Start time (ns)")->capture_default_str();
  simc->add_option("--t-end", sim.t_end, "End time (ns)")->capture_default_str();
  simc->add_option("--dt", sim.dt, "Output spacing (ns)")->capture_default_str();

  cli::QslArgs qsl;
  auto* qslc = app.add_subcommand("qsl", "Quantum efficiency of CD and direct driving");
  qslc->add_option("--delta-mhz", qsl.delta_mhz, "Detuning / 2pi (MHz)")->capture_default_str();
  qslc->add_option("--kappa-inv-ns", qsl.kappa_inv_ns, "Lifetime 1/kappa (ns)")->capture_default_str();
  qslc->add_option("--dalpha", qsl.dalpha, "Target |delta alpha| values");
  qslc->add_option("--tf", qsl.tf, "CD ramp duration (ns)")->capture_default_str();

  cli::FilterArgs flt;
  auto* fltc = app.add_subcommand("filtercheck", "Brick-wall AWG filter correction to the MMOC matrix");
  fltc->add_option("config", flt.config, "Device JSON")->required();
  fltc->add_option("--m", flt.m, "Section count")->capture_default_str();
  fltc->add_option("--tf", flt.tf, "Target time (ns)")->capture_default_str();
  fltc->add_option("--carrier-mhz", flt.carrier_mhz, "AWG carrier (MHz)")->capture_default_str();
  fltc->add_option("--cutoff-mhz", flt.cutoff_mhz, "Filter cutoff (MHz)")->capture_default_str();
  fltc->add_option("--window-lo", flt.window_lo, "Integration window start (ns, default 0)");
  fltc->add_option("--window-hi", flt.window_hi, "Integration window end (ns, default tf)");

  cli::LindbladArgs lb;
  auto* lbc = app.add_subcommand("lindblad-check", "Fock-space oracle: Liouvillian spectrum and CD fidelity");
  lbc->add_option("--delta-mhz", lb.delta_mhz, "Detuning / 2pi (MHz)")->capture_default_str();
  lbc->add_option("--kappa-inv-ns", lb.kappa_inv_ns, "Lifetime (ns)")->capture_default_str();
  lbc->add_option("--alpha-max", lb.alpha_max, "Target |alpha|")->capture_default_str();
  lbc->add_option("--tf", lb.tf, "CD ramp duration (ns)")->capture_default_str();
  lbc->add_option("--dim", lb.dim, "Fock truncation (default: adequate, >= 40)");
  lbc->add_option("--kerr-mhz", lb.kerr_mhz, "Static frequency offset seen only by the oracle");

  cli::SweepArgs sw;
  auto* swc = app.add_subcommand("sweep", "Supplementary-figure sweeps");
  swc->add_option("kind", sw.kind, "pmax_vs_tf | eta_vs_dalpha | cd_durations")->required();
  swc->add_option("config", sw.config, "Device JSON (pmax_vs_tf, cd_durations)");
  swc->add_option("--seed", sw.seed, "Differential-evolution seed")->capture_default_str();
  swc->add_option("--generations", sw.generations, "Differential-evolution generations")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hyb) return cli::cmd_hybridize(hyb_config, common);
    if (*cdc) return cli::cmd_cd(cd, common);
    if (*mmc) return cli::cmd_mmoc(mm, common);
    if (*simc) return cli::cmd_simulate(sim, common);
    if (*qslc) return cli::cmd_qsl(qsl, common);
    if (*fltc) return cli::cmd_filtercheck(flt, common);
    if (*lbc) return cli::cmd_lindblad_check(lb, common);
    if (*swc) return cli::cmd_sweep(sw, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::RankDeficient) {
      std::cerr << "hint: increase --m or --tf so the hybrid modes can be told apart\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
