#include "diff/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace argpair::diff {

GradCheckResult grad_check(const std::function<Node*(Graph&)>& build,
                           const std::vector<Parameter*>& params, double epsilon,
                           int samples, uint64_t seed) {
  if (epsilon < 1e-6 || epsilon > 1e-3)
    throw config_error("grad_check: epsilon must lie in [1e-6, 1e-3]");
  if (samples <= 0) throw config_error("grad_check: samples must be positive");

  Graph g(Dtype::f64);
  Node* root = build(g);
  if (root->value.size() != 1)
    throw internal_error("grad_check: loss must be scalar");
  if (!root->value.all_finite())
    throw numeric_error("grad_check: non-finite loss");

  for (Parameter* p : params) p->zero_grad();
  g.backward(root);

  Rng rng(seed);
  GradCheckResult result;
  for (Parameter* p : params) {
    GradReport report;
    report.param = p->name;

    int n = p->value.size();
    std::vector<int> coords;
    if (n <= samples) {
      coords.resize(n);
      for (int i = 0; i < n; ++i) coords[i] = i;
    } else {
      for (int i = 0; i < samples; ++i) coords.push_back(rng.uniform_int(n));
    }

    for (int c : coords) {
      double saved = p->value[c];
      p->value[c] = saved + epsilon;
      double up = g.forward(root).value();
      p->value[c] = saved - epsilon;
      double down = g.forward(root).value();
      p->value[c] = saved;

      if (!std::isfinite(up) || !std::isfinite(down))
        throw numeric_error("grad_check: non-finite loss at perturbed " + p->name);

      double numeric = (up - down) / (2.0 * epsilon);
      double analytic = p->grad[c];
      double rel = std::fabs(analytic - numeric) /
                   std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
      report.analytic.push_back(analytic);
      report.numeric.push_back(numeric);
      report.max_rel_err = std::max(report.max_rel_err, rel);
    }
    result.reports.push_back(std::move(report));
  }

  // Leave the graph consistent with the unperturbed parameters.
  g.forward(root);
  return result;
}

}  // namespace argpair::diff
