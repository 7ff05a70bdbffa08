#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace staforge::cli {

struct CommonArgs {
  std::string out_dir = "out";
  bool verify = false;
  int threads = 0;
};

struct CdArgs {
  std::string config;
  double tf = 100.0;
  std::string shape = "sin2";
  int block = 0;
  int mode = -1;  // hybrid index inside the block; -1 picks the narrowest mode
  double eps0 = 0.05;
  double post_ns = -1.0;
  double dt = 0.5;
};

struct MmocArgs {
  std::string config;
  std::string problem;
  std::optional<int> m;
  std::optional<double> tf;
  std::string mode = "ringup";
  std::optional<std::uint64_t> seed;
  std::optional<int> generations;
};

struct SimulateArgs {
  std::string config;
  std::string pulse_csv;
  std::string shape = "sin2";
  double tf = 100.0;
  double eps0 = 0.05;
  bool cd = false;
  int block = 0;
  int mode = -1;
  double t0 = -20.0;
  double t_end = 400.0;
  double dt = 0.5;
};

struct QslArgs {
  double delta_mhz = 3.0;
  double kappa_inv_ns = 62.88;
  std::vector<double> dalpha{0.1, 0.5, 1.0, 2.0, 5.0};
  double tf = 100.0;
};

struct FilterArgs {
  std::string config;
  int m = 10;
  double tf = 60.0;
  double carrier_mhz = 200.0;
  double cutoff_mhz = 750.0;
  std::optional<double> window_lo;
  std::optional<double> window_hi;
};

struct LindbladArgs {
  double delta_mhz = 2.45;
  double kappa_inv_ns = 62.88;
  double alpha_max = 4.0;
  double tf = 100.0;
  int dim = 0;  // 0 = smallest adequate truncation, at least 40
  double kerr_mhz = 0.0;
};

struct SweepArgs {
  std::string kind;
  std::string config;
  std::uint64_t seed = 1;
  int generations = 3000;
};

int cmd_hybridize(const std::string& config, const CommonArgs& common);
int cmd_cd(const CdArgs& args, const CommonArgs& common);
int cmd_mmoc(const MmocArgs& args, const CommonArgs& common);
int cmd_simulate(const SimulateArgs& args, const CommonArgs& common);
int cmd_qsl(const QslArgs& args, const CommonArgs& common);
int cmd_filtercheck(const FilterArgs& args, const CommonArgs& common);
int cmd_lindblad_check(const LindbladArgs& args, const CommonArgs& common);
int cmd_sweep(const SweepArgs& args, const CommonArgs& common);

/// First time after which |r(t) - r_final| stays within tol * |r_final|.
double equilibration_time(const std::vector<double>& times, const std::vector<std::complex<double>>& values,
                          double tol = 0.01);

}  // namespace staforge::cli
