#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "diff/dense_array.hpp"

namespace argpair::diff {

// A named trainable array. Owned by a ParameterStore; graphs reference it
// through Param leaves and accumulate into `grad` on backward().
struct Parameter {
  std::string name;
  DenseArray value;
  DenseArray grad;

  Parameter(std::string n, DenseArray v) : name(std::move(n)), value(std::move(v)) {
    grad = DenseArray(value.shape());
  }

  void zero_grad() { grad.fill(0.0); }
};

enum class Op : uint8_t {
  param,
  constant,
  matvec,    // A[m,k] * x[k] -> [m]
  matvec_t,  // A[m,k]^T * x[m] -> [k]
  matmul,    // A[m,k] * B[k,n] -> [m,n]
  matmul_nt, // A[m,k] * B[n,k]^T -> [m,n]
  add,
  sub,
  mul,
  add_row,  // M[p,f] + b[f] broadcast over rows
  sigmoid,
  tanh_fn,
  relu,
  exp_fn,
  log_fn,
  softmax,      // rank-1
  log_softmax,  // rank-1
  conv1d,       // X[t,e], W[f,ws*e] -> [t-ws+1, f], valid windows only
  rows,         // gather rows of a matrix by index list
  row,          // single row of a matrix as a vector
  concat,       // rank-1 concatenation
  sum,
  mean,
  dot,
  smul,  // tensor * scalar node
  pick,  // vector coordinate -> scalar
  cmul,  // tensor * compile-time constant
};

const char* op_name(Op op);

struct Node {
  Op op;
  bool requires_grad = false;
  DenseArray value;
  DenseArray grad;  // allocated during backward for nodes that need it
  std::vector<Node*> inputs;

  int iattr = 0;      // conv window / row index / pick index
  double cattr = 0.0; // cmul factor
  std::vector<int> ids;  // rows gather indices
  Parameter* pref = nullptr;
};

// Define-by-run computation tape. Ops evaluate eagerly at construction; the
// tape order is a topological order, so backward() is a single reverse sweep
// and forward() can re-evaluate the whole graph after leaf values change
// (used by the finite-difference checker). Single-owner: one thread builds
// and differentiates a graph; parameter snapshots may be read concurrently.
class Graph {
 public:
  explicit Graph(Dtype dtype = Dtype::f64) : dtype_(dtype) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Dtype dtype() const { return dtype_; }
  size_t size() const { return tape_.size(); }

  // Leaves.
  Node* param(Parameter& p);
  Node* constant(DenseArray v);
  Node* scalar(double v) { return constant(DenseArray::scalar(v)); }
  Node* ones(int n);   // memoized per graph
  Node* zeros(int n);  // memoized per graph

  // Linear algebra.
  Node* matvec(Node* a, Node* x);
  Node* matvec_t(Node* a, Node* x);
  Node* matmul(Node* a, Node* b);
  Node* matmul_nt(Node* a, Node* b);
  Node* dot(Node* a, Node* b);

  // Elementwise.
  Node* add(Node* a, Node* b);
  Node* sub(Node* a, Node* b);
  Node* mul(Node* a, Node* b);
  Node* add_row(Node* m, Node* b);
  Node* sigmoid(Node* x);
  Node* tanh(Node* x);
  Node* relu(Node* x);
  Node* max0(Node* x) { return relu(x); }
  Node* exp(Node* x);
  Node* log(Node* x);
  Node* cmul(Node* x, double c);
  Node* smul(Node* x, Node* s);

  // Shape / gather.
  Node* rows(Node* table, std::vector<int> ids);
  Node* row(Node* m, int r);
  Node* concat(const std::vector<Node*>& parts);
  Node* pick(Node* v, int i);

  // Distributions and reductions (rank-1 / full-array).
  Node* softmax(Node* x);
  Node* log_softmax(Node* x);
  Node* sum(Node* x);
  Node* mean(Node* x);

  Node* conv1d(Node* x, Node* w, int window);

  // Re-evaluates every node in tape order (Param leaves re-read their
  // parameter) and returns the root's value.
  const DenseArray& forward(Node* root);

  // Reverse sweep from a scalar root; accumulates into Parameter::grad.
  void backward(Node* root);

 private:
  Node* make(Op op, DenseArray value, std::vector<Node*> inputs);
  void eval(Node* n);

  Dtype dtype_;
  std::vector<std::unique_ptr<Node>> tape_;
  std::unordered_map<const Parameter*, Node*> param_leaves_;
  std::map<int, Node*> ones_;
  std::map<int, Node*> zeros_;
};

}  // namespace argpair::diff
