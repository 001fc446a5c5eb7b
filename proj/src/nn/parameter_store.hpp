#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "diff/graph.hpp"

namespace argpair::nn {

using diff::DenseArray;
using diff::Dtype;
using diff::Parameter;

// Owns every trainable array by name. Iteration is name-ordered so updates,
// clipping and serialization are deterministic.
class ParameterStore {
 public:
  explicit ParameterStore(Dtype dtype = Dtype::f64) : dtype_(dtype) {}

  Parameter& create(const std::string& name, std::vector<int> shape);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool has(const std::string& name) const { return params_.count(name) > 0; }

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  size_t count() const { return params_.size(); }

  void zero_grads();
  double grad_norm() const;

  // SGD update with optional global-norm clipping (clip <= 0 disables).
  void sgd_step(double lr, double clip);

  std::map<std::string, DenseArray> snapshot_values() const;
  void load_values(const std::map<std::string, DenseArray>& values);

  Dtype dtype() const { return dtype_; }

 private:
  std::map<std::string, std::unique_ptr<Parameter>> params_;
  Dtype dtype_;
};

// Uniform in ±sqrt(6 / (fan_in + fan_out)); for matrices [out, in].
void init_glorot(Parameter& p, Rng& rng);
void init_normal(Parameter& p, Rng& rng, double stddev);

}  // namespace argpair::nn
