#pragma once

#include <cmath>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "common/error.hpp"

namespace argpair::diff {

// Arithmetic precision of a value path. Storage is always double; in f32 mode
// every kernel loads, computes and rounds through IEEE single precision, so
// results are bit-equal to a genuine float pipeline.
enum class Dtype { f32, f64 };

// Row-major dense array. Rank 0 (empty shape) is a scalar of size 1.
class DenseArray {
 public:
  DenseArray() = default;

  explicit DenseArray(std::vector<int> shape, double fill = 0.0)
      : shape_(std::move(shape)), v_(checked_size(shape_), fill) {}

  static DenseArray scalar(double v) {
    DenseArray a{std::vector<int>{}};
    a.v_[0] = v;
    return a;
  }

  static DenseArray vec(std::vector<double> values) {
    DenseArray a{std::vector<int>{static_cast<int>(values.size())}};
    a.v_ = std::move(values);
    return a;
  }

  static DenseArray mat(int rows, int cols, std::vector<double> values = {}) {
    DenseArray a{std::vector<int>{rows, cols}};
    if (!values.empty()) {
      if (static_cast<int>(values.size()) != rows * cols)
        throw internal_error("DenseArray::mat: value count does not match shape");
      a.v_ = std::move(values);
    }
    return a;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int size() const { return static_cast<int>(v_.size()); }
  bool is_scalar() const { return shape_.empty(); }

  int rows() const { return shape_.at(0); }
  int cols() const { return shape_.at(1); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }

  double& at(int r, int c) { return v_[static_cast<size_t>(r) * shape_[1] + c]; }
  double at(int r, int c) const { return v_[static_cast<size_t>(r) * shape_[1] + c]; }

  double value() const {
    if (size() != 1) throw internal_error("DenseArray::value: not a scalar");
    return v_[0];
  }

  bool same_shape(const DenseArray& o) const { return shape_ == o.shape_; }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

  std::string shape_str() const { return ShapeError::shape_str(shape_); }

 private:
  static size_t checked_size(const std::vector<int>& shape) {
    size_t n = 1;
    for (int d : shape) {
      if (d <= 0) throw internal_error("DenseArray: dimensions must be positive");
      n *= static_cast<size_t>(d);
    }
    return n;
  }

  std::vector<int> shape_;
  std::vector<double> v_;
};

}  // namespace argpair::diff
