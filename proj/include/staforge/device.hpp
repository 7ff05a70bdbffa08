#pragma once

#include <array>
#include <vector>

#include "staforge/network.hpp"

namespace staforge {

/// Bare parameters of one qubit-state block: filter a coupled to resonator b.
struct BlockParams {
  double delta_a = 0.0;  // rad/ns
  double kappa_a = 0.0;  // 1/ns
  double delta_b = 0.0;  // rad/ns
  double j = 0.0;        // rad/ns
};

/// Hybrid values of one block as quoted in a calibration table.
struct HybridPair {
  cplx resonator;  // Delta' - i kappa'/2 of the resonator-like mode
  cplx filter;     // same for the filter-like mode
};

/// Target table of the reference device, in the drive frame.
struct DeviceTable {
  double drive_freq_ghz = 6.44025;
  std::array<double, 2> resonator_freq_ghz{6.4427, 6.4378};
  std::array<double, 2> filter_freq_ghz{6.4634, 6.4673};
  std::array<double, 2> resonator_lifetime_ns{62.88, 77.93};
  std::array<double, 2> filter_lifetime_ns{17.86, 15.64};
  double nominal_j_mhz = 10.5;
  double nominal_kappa_a_mhz = 11.4;

  HybridPair block(int q) const;
};

/// Outcome of the least-squares fit with one shared (Delta_a, J, kappa_a).
struct SharedFit {
  double delta_a = 0.0;
  std::array<double, 2> delta_b{};
  double j = 0.0;
  double kappa_a = 0.0;
  /// Largest relative deviation over all table entries (frequencies measured
  /// from the drive, lifetimes as 1/kappa).
  double max_relative_residual = 0.0;
};

struct DeviceCalibration {
  ModeNetwork network;
  std::array<BlockParams, 2> blocks{};
  /// Largest relative deviation of the hybridized network from the table.
  double max_relative_residual = 0.0;
  SharedFit shared;
};

/// Exact inversion of a 2x2 block [[Da - i ka/2, J], [J, Db]] from its two
/// eigenvalues. Throws CalibrationInfeasible if no real J exists.
BlockParams invert_block(const HybridPair& pair);

/// 4-mode block-diagonal network (a0, b0, a1, b1) for given block parameters,
/// driven through the filters.
ModeNetwork block_network(const std::array<BlockParams, 2>& blocks);

/// Relative least-squares fit of a single shared (Delta_a, J, kappa_a).
SharedFit fit_shared_device(const DeviceTable& table = {});

DeviceCalibration calibrate_device(const DeviceTable& table = {});

/// The reference two-state readout device reproducing the calibration table.
/// Throws CalibrationInfeasible if the table cannot be matched to 1e-6.
ModeNetwork paper_device();

/// Mode indices of the resonator/filter of qubit-state block q in paper_device.
inline int filter_index(int q) { return 2 * q; }
inline int resonator_index(int q) { return 2 * q + 1; }

}  // namespace staforge
