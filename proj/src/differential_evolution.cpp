#include "staforge/differential_evolution.hpp"

#include <algorithm>
#include <random>

#include "staforge/error.hpp"
#include "staforge/parallel.hpp"

namespace staforge {

DeResult differential_evolution(const std::function<double(const Eigen::VectorXd&)>& objective,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const DeOptions& options) {
  const int dim = static_cast<int>(lower.size());
  if (upper.size() != dim || dim == 0) {
    throw Error(ErrorCode::DimensionMismatch, "bounds must be non-empty and equally sized");
  }
  if ((upper - lower).minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "upper bound below lower bound");
  }
  const int pop = std::max(4, options.population_factor * dim);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, pop - 1);
  std::uniform_int_distribution<int> pick_dim(0, dim - 1);

  std::vector<Eigen::VectorXd> members(static_cast<std::size_t>(pop), Eigen::VectorXd(dim));
  for (int i = 0; i < pop; ++i) {
    if (static_cast<std::size_t>(i) < options.initial_members.size()) {
      members[i] = options.initial_members[i].cwiseMax(lower).cwiseMin(upper);
      continue;
    }
    for (int d = 0; d < dim; ++d) members[i](d) = lower(d) + unit(rng) * (upper(d) - lower(d));
  }
  std::vector<double> values(static_cast<std::size_t>(pop));
  parallel_for(static_cast<std::size_t>(pop),
               [&](std::size_t i) { values[i] = objective(members[i]); }, options.threads);

  DeResult result;
  result.evaluations = pop;
  std::vector<Eigen::VectorXd> trials(static_cast<std::size_t>(pop), Eigen::VectorXd(dim));
  std::vector<double> trial_values(static_cast<std::size_t>(pop));
  for (int g = 0; g < options.generations; ++g) {
    for (int i = 0; i < pop; ++i) {
      int a, b, c;
      do a = pick(rng); while (a == i);
      do b = pick(rng); while (b == i || b == a);
      do c = pick(rng); while (c == i || c == a || c == b);
      const int forced = pick_dim(rng);
      Eigen::VectorXd& trial = trials[i];
      for (int d = 0; d < dim; ++d) {
        if (d == forced || unit(rng) < options.crossover) {
          double v = members[a](d) + options.mutation * (members[b](d) - members[c](d));
          // Out-of-box components are resampled inside the box.
          if (v < lower(d) || v > upper(d)) v = lower(d) + unit(rng) * (upper(d) - lower(d));
          trial(d) = v;
        } else {
          trial(d) = members[i](d);
        }
      }
    }
    parallel_for(static_cast<std::size_t>(pop),
                 [&](std::size_t i) { trial_values[i] = objective(trials[i]); }, options.threads);
    result.evaluations += pop;
    for (int i = 0; i < pop; ++i) {
      if (trial_values[i] <= values[i]) {
        members[i] = trials[i];
        values[i] = trial_values[i];
      }
    }
    result.generations_run = g + 1;
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  result.best = members[static_cast<std::size_t>(best)];
  result.best_value = values[static_cast<std::size_t>(best)];
  return result;
}

}  // namespace staforge
