#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diff/graph.hpp"

namespace argpair::diff {

// Central finite-difference verdict for one parameter.
// Relative error is |a - n| / max(|a|, |n|, 1e-8) over the sampled coordinates.
struct GradReport {
  std::string param;
  double max_rel_err = 0.0;
  std::vector<double> analytic;
  std::vector<double> numeric;
};

struct GradCheckResult {
  std::vector<GradReport> reports;

  double max_rel_err() const {
    double m = 0.0;
    for (const auto& r : reports) m = std::max(m, r.max_rel_err);
    return m;
  }
};

// Builds the loss graph once via `build` (any stochastic inputs become frozen
// constants inside the graph), backpropagates for analytic gradients, then
// perturbs `samples` random coordinates of each parameter and re-runs the
// forward pass for central differences. 64-bit graphs only.
GradCheckResult grad_check(const std::function<Node*(Graph&)>& build,
                           const std::vector<Parameter*>& params, double epsilon,
                           int samples, uint64_t seed);

}  // namespace argpair::diff
