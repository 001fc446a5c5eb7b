#include "nn/parameter_store.hpp"

#include <cmath>

#include "common/error.hpp"

namespace argpair::nn {

Parameter& ParameterStore::create(const std::string& name, std::vector<int> shape) {
  if (params_.count(name)) throw internal_error("parameter already exists: " + name);
  auto p = std::make_unique<Parameter>(name, DenseArray(std::move(shape)));
  Parameter& ref = *p;
  params_[name] = std::move(p);
  return ref;
}

Parameter& ParameterStore::get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw internal_error("unknown parameter: " + name);
  return *it->second;
}

const Parameter& ParameterStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw internal_error("unknown parameter: " + name);
  return *it->second;
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& [_, p] : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParameterStore::all() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const auto& [_, p] : params_) out.push_back(p.get());
  return out;
}

void ParameterStore::zero_grads() {
  for (auto& [_, p] : params_) p->zero_grad();
}

double ParameterStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& [_, p] : params_)
    for (int i = 0; i < p->grad.size(); ++i) sq += p->grad[i] * p->grad[i];
  return std::sqrt(sq);
}

void ParameterStore::sgd_step(double lr, double clip) {
  double scale = 1.0;
  if (clip > 0.0) {
    double norm = grad_norm();
    if (norm > clip) scale = clip / norm;
  }
  if (dtype_ == Dtype::f64) {
    for (auto& [_, p] : params_)
      for (int i = 0; i < p->value.size(); ++i)
        p->value[i] -= lr * scale * p->grad[i];
  } else {
    float step = static_cast<float>(lr) * static_cast<float>(scale);
    for (auto& [_, p] : params_)
      for (int i = 0; i < p->value.size(); ++i)
        p->value[i] = static_cast<double>(static_cast<float>(p->value[i]) -
                                          step * static_cast<float>(p->grad[i]));
  }
}

std::map<std::string, DenseArray> ParameterStore::snapshot_values() const {
  std::map<std::string, DenseArray> out;
  for (const auto& [name, p] : params_) out.emplace(name, p->value);
  return out;
}

void ParameterStore::load_values(const std::map<std::string, DenseArray>& values) {
  for (auto& [name, p] : params_) {
    auto it = values.find(name);
    if (it == values.end()) throw data_error("snapshot missing parameter: " + name);
    if (it->second.shape() != p->value.shape())
      throw data_error("snapshot shape mismatch for " + name);
    p->value = it->second;
  }
}

void init_glorot(Parameter& p, Rng& rng) {
  int fan_in, fan_out;
  if (p.value.rank() == 2) {
    fan_out = p.value.rows();
    fan_in = p.value.cols();
  } else {
    fan_in = fan_out = std::max(1, p.value.size());
  }
  double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (int i = 0; i < p.value.size(); ++i) p.value[i] = rng.uniform(-bound, bound);
}

void init_normal(Parameter& p, Rng& rng, double stddev) {
  for (int i = 0; i < p.value.size(); ++i) p.value[i] = rng.normal(0.0, stddev);
}

}  // namespace argpair::nn
