#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace staforge {

struct DeOptions {
  int population_factor = 15;  // population = factor * dim
  double mutation = 0.8;       // F
  double crossover = 0.9;      // CR
  int generations = 3000;
  std::uint64_t seed = 1;
  /// Members evaluated concurrently; 0 means the parallel_for default.
  int threads = 0;
  /// Starting points placed in the initial population before random fill.
  std::vector<Eigen::VectorXd> initial_members;
};

struct DeResult {
  Eigen::VectorXd best;
  double best_value = 0.0;
  int generations_run = 0;
  long evaluations = 0;
};

/// rand/1/bin differential evolution on the box [lower, upper].
///
/// All random draws happen on the calling thread in a fixed order, and only
/// the objective evaluations are farmed out, so the result is bit-identical
/// for a given seed regardless of thread count.
DeResult differential_evolution(const std::function<double(const Eigen::VectorXd&)>& objective,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const DeOptions& options);

}  // namespace staforge
