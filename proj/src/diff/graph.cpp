#include "diff/graph.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace argpair::diff {

const char* op_name(Op op) {
  switch (op) {
    case Op::param: return "param";
    case Op::constant: return "constant";
    case Op::matvec: return "matvec";
    case Op::matvec_t: return "matvec_t";
    case Op::matmul: return "matmul";
    case Op::matmul_nt: return "matmul_nt";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::add_row: return "add_row";
    case Op::sigmoid: return "sigmoid";
    case Op::tanh_fn: return "tanh";
    case Op::relu: return "relu";
    case Op::exp_fn: return "exp";
    case Op::log_fn: return "log";
    case Op::softmax: return "softmax";
    case Op::log_softmax: return "log_softmax";
    case Op::conv1d: return "conv1d";
    case Op::rows: return "rows";
    case Op::row: return "row";
    case Op::concat: return "concat";
    case Op::sum: return "sum";
    case Op::mean: return "mean";
    case Op::dot: return "dot";
    case Op::smul: return "smul";
    case Op::pick: return "pick";
    case Op::cmul: return "cmul";
  }
  return "?";
}

namespace {

template <typename Real>
Real sigmoid_of(Real x) {
  if (x >= Real(0)) return Real(1) / (Real(1) + std::exp(-x));
  Real e = std::exp(x);
  return e / (Real(1) + e);
}

// Forward kernels. Storage is double; all arithmetic routes through Real so
// an f32 graph reproduces single-precision results exactly.
template <typename Real>
void eval_impl(Node& n) {
  const auto in = [&](int i) -> const DenseArray& { return n.inputs[i]->value; };
  DenseArray& out = n.value;

  switch (n.op) {
    case Op::param: {
      const DenseArray& src = n.pref->value;
      for (int i = 0; i < src.size(); ++i) out[i] = static_cast<double>(Real(src[i]));
      break;
    }
    case Op::constant:
      break;
    case Op::matvec: {
      const DenseArray& a = in(0);
      const DenseArray& x = in(1);
      int m = a.rows(), k = a.cols();
      for (int i = 0; i < m; ++i) {
        Real acc = 0;
        const double* arow = a.data() + static_cast<size_t>(i) * k;
        for (int j = 0; j < k; ++j) acc += Real(arow[j]) * Real(x[j]);
        out[i] = static_cast<double>(acc);
      }
      break;
    }
    case Op::matvec_t: {
      const DenseArray& a = in(0);
      const DenseArray& x = in(1);
      int m = a.rows(), k = a.cols();
      std::vector<Real> acc(k, Real(0));
      for (int i = 0; i < m; ++i) {
        const double* arow = a.data() + static_cast<size_t>(i) * k;
        Real xi = Real(x[i]);
        for (int j = 0; j < k; ++j) acc[j] += Real(arow[j]) * xi;
      }
      for (int j = 0; j < k; ++j) out[j] = static_cast<double>(acc[j]);
      break;
    }
    case Op::matmul: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      int m = a.rows(), k = a.cols(), p = b.cols();
      std::vector<Real> acc(static_cast<size_t>(m) * p, Real(0));
      for (int i = 0; i < m; ++i) {
        const double* arow = a.data() + static_cast<size_t>(i) * k;
        Real* crow = acc.data() + static_cast<size_t>(i) * p;
        for (int t = 0; t < k; ++t) {
          Real av = Real(arow[t]);
          const double* brow = b.data() + static_cast<size_t>(t) * p;
          for (int j = 0; j < p; ++j) crow[j] += av * Real(brow[j]);
        }
      }
      for (size_t i = 0; i < acc.size(); ++i) out[static_cast<int>(i)] = static_cast<double>(acc[i]);
      break;
    }
    case Op::matmul_nt: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      int m = a.rows(), k = a.cols(), p = b.rows();
      for (int i = 0; i < m; ++i) {
        const double* arow = a.data() + static_cast<size_t>(i) * k;
        for (int j = 0; j < p; ++j) {
          const double* brow = b.data() + static_cast<size_t>(j) * k;
          Real acc = 0;
          for (int t = 0; t < k; ++t) acc += Real(arow[t]) * Real(brow[t]);
          out.at(i, j) = static_cast<double>(acc);
        }
      }
      break;
    }
    case Op::add: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      for (int i = 0; i < a.size(); ++i)
        out[i] = static_cast<double>(Real(a[i]) + Real(b[i]));
      break;
    }
    case Op::sub: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      for (int i = 0; i < a.size(); ++i)
        out[i] = static_cast<double>(Real(a[i]) - Real(b[i]));
      break;
    }
    case Op::mul: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      for (int i = 0; i < a.size(); ++i)
        out[i] = static_cast<double>(Real(a[i]) * Real(b[i]));
      break;
    }
    case Op::add_row: {
      const DenseArray& m = in(0);
      const DenseArray& b = in(1);
      int rows = m.rows(), cols = m.cols();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          out.at(r, c) = static_cast<double>(Real(m.at(r, c)) + Real(b[c]));
      break;
    }
    case Op::sigmoid: {
      const DenseArray& x = in(0);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(sigmoid_of(Real(x[i])));
      break;
    }
    case Op::tanh_fn: {
      const DenseArray& x = in(0);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(std::tanh(Real(x[i])));
      break;
    }
    case Op::relu: {
      const DenseArray& x = in(0);
      for (int i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
      break;
    }
    case Op::exp_fn: {
      const DenseArray& x = in(0);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(std::exp(Real(x[i])));
      break;
    }
    case Op::log_fn: {
      const DenseArray& x = in(0);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(std::log(Real(x[i])));
      break;
    }
    case Op::softmax: {
      const DenseArray& x = in(0);
      Real m = Real(x[0]);
      for (int i = 1; i < x.size(); ++i) m = std::max(m, Real(x[i]));
      Real z = 0;
      for (int i = 0; i < x.size(); ++i) {
        Real e = std::exp(Real(x[i]) - m);
        out[i] = static_cast<double>(e);
        z += e;
      }
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(Real(out[i]) / z);
      break;
    }
    case Op::log_softmax: {
      const DenseArray& x = in(0);
      Real m = Real(x[0]);
      for (int i = 1; i < x.size(); ++i) m = std::max(m, Real(x[i]));
      Real z = 0;
      for (int i = 0; i < x.size(); ++i) z += std::exp(Real(x[i]) - m);
      Real lz = m + std::log(z);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(Real(x[i]) - lz);
      break;
    }
    case Op::conv1d: {
      const DenseArray& x = in(0);
      const DenseArray& w = in(1);
      int e = x.cols(), f = w.rows(), ws = n.iattr;
      int positions = x.rows() - ws + 1;
      int span = ws * e;
      for (int p = 0; p < positions; ++p) {
        const double* win = x.data() + static_cast<size_t>(p) * e;
        for (int fi = 0; fi < f; ++fi) {
          const double* wrow = w.data() + static_cast<size_t>(fi) * span;
          Real acc = 0;
          for (int t = 0; t < span; ++t) acc += Real(wrow[t]) * Real(win[t]);
          out.at(p, fi) = static_cast<double>(acc);
        }
      }
      break;
    }
    case Op::rows: {
      const DenseArray& t = in(0);
      int e = t.cols();
      for (size_t i = 0; i < n.ids.size(); ++i) {
        const double* src = t.data() + static_cast<size_t>(n.ids[i]) * e;
        double* dst = out.data() + i * e;
        std::copy(src, src + e, dst);
      }
      break;
    }
    case Op::row: {
      const DenseArray& m = in(0);
      int e = m.cols();
      const double* src = m.data() + static_cast<size_t>(n.iattr) * e;
      std::copy(src, src + e, out.data());
      break;
    }
    case Op::concat: {
      int off = 0;
      for (Node* part : n.inputs) {
        const DenseArray& v = part->value;
        for (int i = 0; i < v.size(); ++i) out[off + i] = v[i];
        off += v.size();
      }
      break;
    }
    case Op::sum: {
      const DenseArray& x = in(0);
      Real acc = 0;
      for (int i = 0; i < x.size(); ++i) acc += Real(x[i]);
      out[0] = static_cast<double>(acc);
      break;
    }
    case Op::mean: {
      const DenseArray& x = in(0);
      Real acc = 0;
      for (int i = 0; i < x.size(); ++i) acc += Real(x[i]);
      out[0] = static_cast<double>(acc / Real(x.size()));
      break;
    }
    case Op::dot: {
      const DenseArray& a = in(0);
      const DenseArray& b = in(1);
      Real acc = 0;
      for (int i = 0; i < a.size(); ++i) acc += Real(a[i]) * Real(b[i]);
      out[0] = static_cast<double>(acc);
      break;
    }
    case Op::smul: {
      const DenseArray& x = in(0);
      Real s = Real(in(1).value());
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(Real(x[i]) * s);
      break;
    }
    case Op::pick: {
      out[0] = in(0)[n.iattr];
      break;
    }
    case Op::cmul: {
      const DenseArray& x = in(0);
      Real c = Real(n.cattr);
      for (int i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(Real(x[i]) * c);
      break;
    }
  }
}

// Backward kernels: distribute n.grad into the inputs' grads. Guards on
// requires_grad keep constants free of gradient buffers.
template <typename Real>
void backprop_impl(Node& n) {
  const DenseArray& g = n.grad;
  auto want = [&](int i) { return n.inputs[i]->requires_grad; };
  auto gin = [&](int i) -> DenseArray& { return n.inputs[i]->grad; };
  auto vin = [&](int i) -> const DenseArray& { return n.inputs[i]->value; };
  auto acc = [](double& slot, Real delta) {
    slot = static_cast<double>(Real(slot) + delta);
  };

  switch (n.op) {
    case Op::param:
    case Op::constant:
      break;
    case Op::matvec: {
      const DenseArray& a = vin(0);
      const DenseArray& x = vin(1);
      int m = a.rows(), k = a.cols();
      if (want(0)) {
        DenseArray& ga = gin(0);
        for (int i = 0; i < m; ++i) {
          Real gi = Real(g[i]);
          double* garow = ga.data() + static_cast<size_t>(i) * k;
          for (int j = 0; j < k; ++j) acc(garow[j], gi * Real(x[j]));
        }
      }
      if (want(1)) {
        DenseArray& gx = gin(1);
        for (int i = 0; i < m; ++i) {
          Real gi = Real(g[i]);
          const double* arow = a.data() + static_cast<size_t>(i) * k;
          for (int j = 0; j < k; ++j) acc(gx[j], Real(arow[j]) * gi);
        }
      }
      break;
    }
    case Op::matvec_t: {
      const DenseArray& a = vin(0);
      const DenseArray& x = vin(1);
      int m = a.rows(), k = a.cols();
      if (want(0)) {
        DenseArray& ga = gin(0);
        for (int i = 0; i < m; ++i) {
          Real xi = Real(x[i]);
          double* garow = ga.data() + static_cast<size_t>(i) * k;
          for (int j = 0; j < k; ++j) acc(garow[j], xi * Real(g[j]));
        }
      }
      if (want(1)) {
        DenseArray& gx = gin(1);
        for (int i = 0; i < m; ++i) {
          const double* arow = a.data() + static_cast<size_t>(i) * k;
          Real s = 0;
          for (int j = 0; j < k; ++j) s += Real(arow[j]) * Real(g[j]);
          acc(gx[i], s);
        }
      }
      break;
    }
    case Op::matmul: {
      const DenseArray& a = vin(0);
      const DenseArray& b = vin(1);
      int m = a.rows(), k = a.cols(), p = b.cols();
      if (want(0)) {
        DenseArray& ga = gin(0);
        for (int i = 0; i < m; ++i) {
          const double* grow = g.data() + static_cast<size_t>(i) * p;
          double* garow = ga.data() + static_cast<size_t>(i) * k;
          for (int t = 0; t < k; ++t) {
            const double* brow = b.data() + static_cast<size_t>(t) * p;
            Real s = 0;
            for (int j = 0; j < p; ++j) s += Real(grow[j]) * Real(brow[j]);
            acc(garow[t], s);
          }
        }
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        for (int i = 0; i < m; ++i) {
          const double* arow = a.data() + static_cast<size_t>(i) * k;
          const double* grow = g.data() + static_cast<size_t>(i) * p;
          for (int t = 0; t < k; ++t) {
            Real av = Real(arow[t]);
            double* gbrow = gb.data() + static_cast<size_t>(t) * p;
            for (int j = 0; j < p; ++j) acc(gbrow[j], av * Real(grow[j]));
          }
        }
      }
      break;
    }
    case Op::matmul_nt: {
      const DenseArray& a = vin(0);
      const DenseArray& b = vin(1);
      int m = a.rows(), k = a.cols(), p = b.rows();
      if (want(0)) {
        DenseArray& ga = gin(0);
        for (int i = 0; i < m; ++i) {
          const double* grow = g.data() + static_cast<size_t>(i) * p;
          double* garow = ga.data() + static_cast<size_t>(i) * k;
          for (int j = 0; j < p; ++j) {
            Real gv = Real(grow[j]);
            const double* brow = b.data() + static_cast<size_t>(j) * k;
            for (int t = 0; t < k; ++t) acc(garow[t], gv * Real(brow[t]));
          }
        }
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        for (int i = 0; i < m; ++i) {
          const double* arow = a.data() + static_cast<size_t>(i) * k;
          const double* grow = g.data() + static_cast<size_t>(i) * p;
          for (int j = 0; j < p; ++j) {
            Real gv = Real(grow[j]);
            double* gbrow = gb.data() + static_cast<size_t>(j) * k;
            for (int t = 0; t < k; ++t) acc(gbrow[t], gv * Real(arow[t]));
          }
        }
      }
      break;
    }
    case Op::add: {
      for (int s = 0; s < 2; ++s)
        if (want(s)) {
          DenseArray& gi = gin(s);
          for (int i = 0; i < g.size(); ++i) acc(gi[i], Real(g[i]));
        }
      break;
    }
    case Op::sub: {
      if (want(0)) {
        DenseArray& ga = gin(0);
        for (int i = 0; i < g.size(); ++i) acc(ga[i], Real(g[i]));
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        for (int i = 0; i < g.size(); ++i) acc(gb[i], -Real(g[i]));
      }
      break;
    }
    case Op::mul: {
      if (want(0)) {
        DenseArray& ga = gin(0);
        const DenseArray& b = vin(1);
        for (int i = 0; i < g.size(); ++i) acc(ga[i], Real(g[i]) * Real(b[i]));
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        const DenseArray& a = vin(0);
        for (int i = 0; i < g.size(); ++i) acc(gb[i], Real(g[i]) * Real(a[i]));
      }
      break;
    }
    case Op::add_row: {
      int rows = g.rows(), cols = g.cols();
      if (want(0)) {
        DenseArray& gm = gin(0);
        for (int i = 0; i < g.size(); ++i) acc(gm[i], Real(g[i]));
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c) acc(gb[c], Real(g.at(r, c)));
      }
      break;
    }
    case Op::sigmoid: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        for (int i = 0; i < g.size(); ++i) {
          Real y = Real(n.value[i]);
          acc(gx[i], Real(g[i]) * y * (Real(1) - y));
        }
      }
      break;
    }
    case Op::tanh_fn: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        for (int i = 0; i < g.size(); ++i) {
          Real y = Real(n.value[i]);
          acc(gx[i], Real(g[i]) * (Real(1) - y * y));
        }
      }
      break;
    }
    case Op::relu: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        const DenseArray& x = vin(0);
        for (int i = 0; i < g.size(); ++i)
          if (x[i] > 0.0) acc(gx[i], Real(g[i]));
      }
      break;
    }
    case Op::exp_fn: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        for (int i = 0; i < g.size(); ++i)
          acc(gx[i], Real(g[i]) * Real(n.value[i]));
      }
      break;
    }
    case Op::log_fn: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        const DenseArray& x = vin(0);
        for (int i = 0; i < g.size(); ++i) acc(gx[i], Real(g[i]) / Real(x[i]));
      }
      break;
    }
    case Op::softmax: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        Real s = 0;
        for (int i = 0; i < g.size(); ++i) s += Real(g[i]) * Real(n.value[i]);
        for (int i = 0; i < g.size(); ++i) {
          Real y = Real(n.value[i]);
          acc(gx[i], y * (Real(g[i]) - s));
        }
      }
      break;
    }
    case Op::log_softmax: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        Real s = 0;
        for (int i = 0; i < g.size(); ++i) s += Real(g[i]);
        for (int i = 0; i < g.size(); ++i)
          acc(gx[i], Real(g[i]) - std::exp(Real(n.value[i])) * s);
      }
      break;
    }
    case Op::conv1d: {
      const DenseArray& x = vin(0);
      const DenseArray& w = vin(1);
      int e = x.cols(), f = w.rows(), ws = n.iattr;
      int positions = x.rows() - ws + 1;
      int span = ws * e;
      for (int p = 0; p < positions; ++p) {
        const double* win = x.data() + static_cast<size_t>(p) * e;
        double* gwin = want(0) ? gin(0).data() + static_cast<size_t>(p) * e : nullptr;
        for (int fi = 0; fi < f; ++fi) {
          Real gv = Real(g.at(p, fi));
          if (gv == Real(0)) continue;
          const double* wrow = w.data() + static_cast<size_t>(fi) * span;
          if (want(1)) {
            double* gwrow = gin(1).data() + static_cast<size_t>(fi) * span;
            for (int t = 0; t < span; ++t) acc(gwrow[t], gv * Real(win[t]));
          }
          if (gwin)
            for (int t = 0; t < span; ++t) acc(gwin[t], gv * Real(wrow[t]));
        }
      }
      break;
    }
    case Op::rows: {
      if (want(0)) {
        DenseArray& gt = gin(0);
        int e = vin(0).cols();
        for (size_t i = 0; i < n.ids.size(); ++i) {
          double* dst = gt.data() + static_cast<size_t>(n.ids[i]) * e;
          const double* src = g.data() + i * e;
          for (int j = 0; j < e; ++j) acc(dst[j], Real(src[j]));
        }
      }
      break;
    }
    case Op::row: {
      if (want(0)) {
        DenseArray& gm = gin(0);
        int e = vin(0).cols();
        double* dst = gm.data() + static_cast<size_t>(n.iattr) * e;
        for (int j = 0; j < e; ++j) acc(dst[j], Real(g[j]));
      }
      break;
    }
    case Op::concat: {
      int off = 0;
      for (size_t s = 0; s < n.inputs.size(); ++s) {
        int sz = n.inputs[s]->value.size();
        if (n.inputs[s]->requires_grad) {
          DenseArray& gi = n.inputs[s]->grad;
          for (int i = 0; i < sz; ++i) acc(gi[i], Real(g[off + i]));
        }
        off += sz;
      }
      break;
    }
    case Op::sum: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        Real gv = Real(g[0]);
        for (int i = 0; i < gx.size(); ++i) acc(gx[i], gv);
      }
      break;
    }
    case Op::mean: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        Real gv = Real(g[0]) / Real(gx.size());
        for (int i = 0; i < gx.size(); ++i) acc(gx[i], gv);
      }
      break;
    }
    case Op::dot: {
      Real gv = Real(g[0]);
      if (want(0)) {
        DenseArray& ga = gin(0);
        const DenseArray& b = vin(1);
        for (int i = 0; i < ga.size(); ++i) acc(ga[i], gv * Real(b[i]));
      }
      if (want(1)) {
        DenseArray& gb = gin(1);
        const DenseArray& a = vin(0);
        for (int i = 0; i < gb.size(); ++i) acc(gb[i], gv * Real(a[i]));
      }
      break;
    }
    case Op::smul: {
      Real s = Real(vin(1).value());
      if (want(0)) {
        DenseArray& gx = gin(0);
        for (int i = 0; i < g.size(); ++i) acc(gx[i], Real(g[i]) * s);
      }
      if (want(1)) {
        const DenseArray& x = vin(0);
        Real t = 0;
        for (int i = 0; i < g.size(); ++i) t += Real(g[i]) * Real(x[i]);
        acc(gin(1)[0], t);
      }
      break;
    }
    case Op::pick: {
      if (want(0)) acc(gin(0)[n.iattr], Real(g[0]));
      break;
    }
    case Op::cmul: {
      if (want(0)) {
        DenseArray& gx = gin(0);
        Real c = Real(n.cattr);
        for (int i = 0; i < g.size(); ++i) acc(gx[i], Real(g[i]) * c);
      }
      break;
    }
  }
}

}  // namespace

Node* Graph::make(Op op, DenseArray value, std::vector<Node*> inputs) {
  auto node = std::make_unique<Node>();
  node->op = op;
  node->value = std::move(value);
  node->inputs = std::move(inputs);
  for (Node* in : node->inputs)
    if (in->requires_grad) node->requires_grad = true;
  tape_.push_back(std::move(node));
  return tape_.back().get();
}

void Graph::eval(Node* n) {
  if (dtype_ == Dtype::f64)
    eval_impl<double>(*n);
  else
    eval_impl<float>(*n);
}

Node* Graph::param(Parameter& p) {
  auto it = param_leaves_.find(&p);
  if (it != param_leaves_.end()) return it->second;
  Node* n = make(Op::param, DenseArray(p.value.shape()), {});
  n->pref = &p;
  n->requires_grad = true;
  eval(n);
  param_leaves_[&p] = n;
  return n;
}

Node* Graph::constant(DenseArray v) {
  Node* n = make(Op::constant, std::move(v), {});
  if (dtype_ == Dtype::f32)
    for (int i = 0; i < n->value.size(); ++i)
      n->value[i] = static_cast<double>(static_cast<float>(n->value[i]));
  return n;
}

Node* Graph::ones(int n) {
  auto it = ones_.find(n);
  if (it != ones_.end()) return it->second;
  Node* c = constant(DenseArray({n}, 1.0));
  ones_[n] = c;
  return c;
}

Node* Graph::zeros(int n) {
  auto it = zeros_.find(n);
  if (it != zeros_.end()) return it->second;
  Node* c = constant(DenseArray({n}, 0.0));
  zeros_[n] = c;
  return c;
}

namespace {
void require(bool ok, const char* op, const DenseArray& a, const DenseArray& b) {
  if (!ok) throw ShapeError(op, a.shape(), b.shape());
}
}  // namespace

Node* Graph::matvec(Node* a, Node* x) {
  require(a->value.rank() == 2 && x->value.rank() == 1 && a->value.cols() == x->value.size(),
          "matvec", a->value, x->value);
  Node* n = make(Op::matvec, DenseArray({a->value.rows()}), {a, x});
  eval(n);
  return n;
}

Node* Graph::matvec_t(Node* a, Node* x) {
  require(a->value.rank() == 2 && x->value.rank() == 1 && a->value.rows() == x->value.size(),
          "matvec_t", a->value, x->value);
  Node* n = make(Op::matvec_t, DenseArray({a->value.cols()}), {a, x});
  eval(n);
  return n;
}

Node* Graph::matmul(Node* a, Node* b) {
  require(a->value.rank() == 2 && b->value.rank() == 2 && a->value.cols() == b->value.rows(),
          "matmul", a->value, b->value);
  Node* n = make(Op::matmul, DenseArray({a->value.rows(), b->value.cols()}), {a, b});
  eval(n);
  return n;
}

Node* Graph::matmul_nt(Node* a, Node* b) {
  require(a->value.rank() == 2 && b->value.rank() == 2 && a->value.cols() == b->value.cols(),
          "matmul_nt", a->value, b->value);
  Node* n = make(Op::matmul_nt, DenseArray({a->value.rows(), b->value.rows()}), {a, b});
  eval(n);
  return n;
}

Node* Graph::dot(Node* a, Node* b) {
  require(a->value.rank() == 1 && b->value.rank() == 1 && a->value.size() == b->value.size(),
          "dot", a->value, b->value);
  Node* n = make(Op::dot, DenseArray::scalar(0.0), {a, b});
  eval(n);
  return n;
}

Node* Graph::add(Node* a, Node* b) {
  require(a->value.same_shape(b->value), "add", a->value, b->value);
  Node* n = make(Op::add, DenseArray(a->value.shape()), {a, b});
  eval(n);
  return n;
}

Node* Graph::sub(Node* a, Node* b) {
  require(a->value.same_shape(b->value), "sub", a->value, b->value);
  Node* n = make(Op::sub, DenseArray(a->value.shape()), {a, b});
  eval(n);
  return n;
}

Node* Graph::mul(Node* a, Node* b) {
  require(a->value.same_shape(b->value), "mul", a->value, b->value);
  Node* n = make(Op::mul, DenseArray(a->value.shape()), {a, b});
  eval(n);
  return n;
}

Node* Graph::add_row(Node* m, Node* b) {
  require(m->value.rank() == 2 && b->value.rank() == 1 && m->value.cols() == b->value.size(),
          "add_row", m->value, b->value);
  Node* n = make(Op::add_row, DenseArray(m->value.shape()), {m, b});
  eval(n);
  return n;
}

#define ARGPAIR_UNARY(NAME, OP)                            \
  Node* Graph::NAME(Node* x) {                             \
    Node* n = make(OP, DenseArray(x->value.shape()), {x}); \
    eval(n);                                               \
    return n;                                              \
  }

ARGPAIR_UNARY(sigmoid, Op::sigmoid)
ARGPAIR_UNARY(tanh, Op::tanh_fn)
ARGPAIR_UNARY(relu, Op::relu)
ARGPAIR_UNARY(exp, Op::exp_fn)
ARGPAIR_UNARY(log, Op::log_fn)
#undef ARGPAIR_UNARY

Node* Graph::cmul(Node* x, double c) {
  Node* n = make(Op::cmul, DenseArray(x->value.shape()), {x});
  n->cattr = c;
  eval(n);
  return n;
}

Node* Graph::smul(Node* x, Node* s) {
  if (s->value.size() != 1)
    throw ShapeError("smul", x->value.shape(), s->value.shape());
  Node* n = make(Op::smul, DenseArray(x->value.shape()), {x, s});
  eval(n);
  return n;
}

Node* Graph::rows(Node* table, std::vector<int> ids) {
  if (table->value.rank() != 2)
    throw ShapeError("rows", table->value.shape(), {static_cast<int>(ids.size())});
  if (ids.empty()) throw internal_error("rows: empty index list");
  for (int id : ids)
    if (id < 0 || id >= table->value.rows())
      throw internal_error("rows: index out of range");
  Node* n = make(Op::rows, DenseArray({static_cast<int>(ids.size()), table->value.cols()}),
                 {table});
  n->ids = std::move(ids);
  eval(n);
  return n;
}

Node* Graph::row(Node* m, int r) {
  if (m->value.rank() != 2 || r < 0 || r >= m->value.rows())
    throw internal_error("row: index out of range");
  Node* n = make(Op::row, DenseArray({m->value.cols()}), {m});
  n->iattr = r;
  eval(n);
  return n;
}

Node* Graph::concat(const std::vector<Node*>& parts) {
  if (parts.empty()) throw internal_error("concat: no inputs");
  int total = 0;
  for (Node* p : parts) {
    if (p->value.rank() > 1)
      throw ShapeError("concat", p->value.shape(), {});
    total += p->value.size();
  }
  Node* n = make(Op::concat, DenseArray({total}), parts);
  eval(n);
  return n;
}

Node* Graph::pick(Node* v, int i) {
  if (v->value.rank() != 1 || i < 0 || i >= v->value.size())
    throw internal_error("pick: index out of range");
  Node* n = make(Op::pick, DenseArray::scalar(0.0), {v});
  n->iattr = i;
  eval(n);
  return n;
}

Node* Graph::softmax(Node* x) {
  if (x->value.rank() != 1) throw ShapeError("softmax", x->value.shape(), {});
  Node* n = make(Op::softmax, DenseArray(x->value.shape()), {x});
  eval(n);
  return n;
}

Node* Graph::log_softmax(Node* x) {
  if (x->value.rank() != 1) throw ShapeError("log_softmax", x->value.shape(), {});
  Node* n = make(Op::log_softmax, DenseArray(x->value.shape()), {x});
  eval(n);
  return n;
}

Node* Graph::sum(Node* x) {
  Node* n = make(Op::sum, DenseArray::scalar(0.0), {x});
  eval(n);
  return n;
}

Node* Graph::mean(Node* x) {
  Node* n = make(Op::mean, DenseArray::scalar(0.0), {x});
  eval(n);
  return n;
}

Node* Graph::conv1d(Node* x, Node* w, int window) {
  if (window <= 0) throw internal_error("conv1d: window must be positive");
  require(x->value.rank() == 2 && w->value.rank() == 2 &&
              w->value.cols() == window * x->value.cols() && x->value.rows() >= window,
          "conv1d", x->value, w->value);
  Node* n = make(Op::conv1d, DenseArray({x->value.rows() - window + 1, w->value.rows()}),
                 {x, w});
  n->iattr = window;
  eval(n);
  return n;
}

const DenseArray& Graph::forward(Node* root) {
  for (auto& n : tape_) eval(n.get());
  return root->value;
}

void Graph::backward(Node* root) {
  if (root->value.size() != 1)
    throw internal_error("backward: root must be scalar, got shape " + root->value.shape_str());

  // Reachability from the root, restricted to grad-requiring nodes.
  std::unordered_map<Node*, bool> reach;
  reach.reserve(tape_.size());
  std::vector<Node*> stack{root};
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    if (!n->requires_grad || reach.count(n)) continue;
    reach[n] = true;
    for (Node* in : n->inputs)
      if (in->requires_grad && !reach.count(in)) stack.push_back(in);
  }
  if (!root->requires_grad) return;  // nothing trainable below the root

  for (auto& n : tape_)
    if (reach.count(n.get())) {
      n->grad = DenseArray(n->value.shape());
    }
  root->grad[0] = 1.0;

  for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) {
    Node* n = it->get();
    if (!reach.count(n)) continue;
    if (dtype_ == Dtype::f64)
      backprop_impl<double>(*n);
    else
      backprop_impl<float>(*n);
  }

  // Fold leaf gradients into their parameters.
  for (auto& [p, leaf] : param_leaves_) {
    if (!reach.count(leaf)) continue;
    Parameter* target = leaf->pref;
    if (dtype_ == Dtype::f64) {
      for (int i = 0; i < leaf->grad.size(); ++i) target->grad[i] += leaf->grad[i];
    } else {
      for (int i = 0; i < leaf->grad.size(); ++i)
        target->grad[i] = static_cast<double>(static_cast<float>(target->grad[i]) +
                                              static_cast<float>(leaf->grad[i]));
    }
  }
}

}  // namespace argpair::diff
