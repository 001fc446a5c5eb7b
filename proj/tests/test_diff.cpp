#include <doctest.h>

#include <cmath>
#include <cstring>

#include "common/rng.hpp"
#include "diff/grad_check.hpp"
#include "diff/graph.hpp"

using namespace argpair;
using namespace argpair::diff;

namespace {

DenseArray random_array(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  DenseArray a(std::move(shape));
  for (int i = 0; i < a.size(); ++i) a[i] = rng.uniform(lo, hi);
  return a;
}

// Magnitudes bounded away from zero, signs random: keeps relu/log kinks and
// poles out of finite-difference range.
DenseArray random_signed_array(std::vector<int> shape, Rng& rng) {
  DenseArray a(std::move(shape));
  for (int i = 0; i < a.size(); ++i) {
    double mag = rng.uniform(0.3, 1.0);
    a[i] = rng.uniform() < 0.5 ? -mag : mag;
  }
  return a;
}

// Reduce any output to a scalar with fixed random weights so every
// coordinate contributes a distinct gradient.
Node* weighted_sum(Graph& g, Node* out, Rng& rng) {
  DenseArray w(out->value.shape());
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
  if (out->value.is_scalar()) return out;
  return g.sum(g.mul(out, g.constant(std::move(w))));
}

}  // namespace

TEST_CASE("scalar square: forward value and gradient") {
  Parameter x("x", DenseArray::scalar(3.0));
  Graph g;
  Node* xn = g.param(x);
  Node* y = g.mul(xn, xn);
  CHECK(y->value.value() == doctest::Approx(9.0));

  g.backward(y);
  CHECK(x.grad.value() == doctest::Approx(6.0));
}

TEST_CASE("softmax of zeros is uniform") {
  Graph g;
  Node* s = g.softmax(g.constant(DenseArray({5}, 0.0)));
  for (int i = 0; i < 5; ++i) CHECK(s->value[i] == doctest::Approx(0.2));
}

TEST_CASE("valid convolution emits n - ws + 1 positions") {
  Graph g;
  Rng rng(3);
  Node* x = g.constant(random_array({5, 2}, rng));
  Node* w = g.constant(random_array({3, 10}, rng));
  Node* out = g.conv1d(x, w, 5);
  CHECK(out->value.rows() == 1);
  CHECK(out->value.cols() == 3);
}

TEST_CASE("gradient of sum(A*v) w.r.t. v is the column sums of A") {
  Rng rng(17);
  Parameter a("A", random_array({4, 3}, rng));
  Parameter v("v", random_array({3}, rng));
  Graph g;
  Node* y = g.sum(g.matvec(g.param(a), g.param(v)));
  g.backward(y);
  for (int c = 0; c < 3; ++c) {
    double colsum = 0;
    for (int r = 0; r < 4; ++r) colsum += a.value.at(r, c);
    CHECK(v.grad[c] == doctest::Approx(colsum));
  }
}

TEST_CASE("fan-out accumulates: y = x + x has gradient 2") {
  Parameter x("x", DenseArray::scalar(1.5));
  Graph g;
  Node* xn = g.param(x);
  g.backward(g.add(xn, xn));
  CHECK(x.grad.value() == doctest::Approx(2.0));
}

TEST_CASE("backward rejects non-scalar roots") {
  Parameter x("x", DenseArray({3}, 1.0));
  Graph g;
  Node* y = g.cmul(g.param(x), 2.0);
  CHECK_THROWS_AS(g.backward(y), Error);
}

TEST_CASE("shape mismatch reports op and both shapes") {
  Graph g;
  Node* a = g.constant(DenseArray({3, 4}, 1.0));
  Node* x = g.constant(DenseArray({5}, 1.0));
  try {
    g.matvec(a, x);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(e.op() == "matvec");
    CHECK(std::string(e.what()).find("[3x4]") != std::string::npos);
    CHECK(std::string(e.what()).find("[5]") != std::string::npos);
  }
}

TEST_CASE("grad_check on x^2 at 3") {
  Parameter x("x", DenseArray::scalar(3.0));
  auto result = grad_check([&](Graph& g) { Node* n = g.param(x); return g.mul(n, n); },
                           {&x}, 1e-5, 4, 1);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].numeric[0] == doctest::Approx(6.0));
  CHECK(result.max_rel_err() < 1e-7);
}

TEST_CASE("grad_check validates epsilon range") {
  Parameter x("x", DenseArray::scalar(3.0));
  auto build = [&](Graph& g) { Node* n = g.param(x); return g.mul(n, n); };
  CHECK_THROWS_AS(grad_check(build, {&x}, 1e-2, 4, 1), Error);
  CHECK_THROWS_AS(grad_check(build, {&x}, 1e-7, 4, 1), Error);
}

TEST_CASE("grad_check rejects non-finite loss") {
  Parameter x("x", DenseArray::scalar(-1.0));
  auto build = [&](Graph& g) { return g.log(g.param(x)); };
  CHECK_THROWS_AS(grad_check(build, {&x}, 1e-5, 1, 1), Error);
}

TEST_CASE("softmax simplex and log-softmax consistency") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + rng.uniform_int(12);
    DenseArray x(std::vector<int>{n});
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-20.0, 20.0);

    Graph g;
    Node* c = g.constant(x);
    Node* sm = g.softmax(c);
    Node* lsm = g.log_softmax(c);

    double total = 0;
    for (int i = 0; i < n; ++i) {
      CHECK(sm->value[i] > 0.0);
      CHECK(sm->value[i] < 1.0);
      total += sm->value[i];
      CHECK(std::fabs(lsm->value[i] - std::log(sm->value[i])) < 1e-9);
    }
    CHECK(std::fabs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("forward is bit-deterministic") {
  Rng rng(5);
  DenseArray a = random_array({6, 6}, rng);
  DenseArray v = random_array({6}, rng);

  auto run = [&](DenseArray& out) {
    Graph g;
    Node* r = g.tanh(g.matvec(g.constant(a), g.constant(v)));
    Node* s = g.softmax(r);
    out = s->value;
  };
  DenseArray o1, o2;
  run(o1);
  run(o2);
  REQUIRE(o1.size() == o2.size());
  CHECK(std::memcmp(o1.data(), o2.data(), sizeof(double) * o1.size()) == 0);
}

TEST_CASE("f32 graphs round through single precision") {
  Rng rng(11);
  DenseArray a = random_array({4, 4}, rng);
  DenseArray v = random_array({4}, rng);

  Graph g64(Dtype::f64), g32(Dtype::f32);
  Node* y64 = g64.sigmoid(g64.matvec(g64.constant(a), g64.constant(v)));
  Node* y32 = g32.sigmoid(g32.matvec(g32.constant(a), g32.constant(v)));
  for (int i = 0; i < 4; ++i) {
    CHECK(y32->value[i] == doctest::Approx(y64->value[i]).epsilon(1e-5));
    // value must be exactly representable as float
    CHECK(static_cast<double>(static_cast<float>(y32->value[i])) == y32->value[i]);
  }
}

// Finite differences against every differentiable op, five seeds each.
TEST_CASE("per-op gradients match central finite differences") {
  struct Case {
    const char* name;
    std::function<double(uint64_t)> run;  // returns max relative error
  };

  auto check_unary = [](uint64_t seed, auto make_op, bool positive_input = false) {
    Rng rng(seed);
    int n = 2 + rng.uniform_int(6);
    Parameter x("x", positive_input ? random_array({n}, rng, 0.5, 2.0)
                                    : random_signed_array({n}, rng));
    Rng wrng(seed + 1000);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, make_op(g, g.param(x)), wrng); }, {&x},
        1e-5, 10, seed);
    return res.max_rel_err();
  };

  std::vector<Case> cases;
  cases.push_back({"sigmoid", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.sigmoid(x); });
  }});
  cases.push_back({"tanh", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.tanh(x); });
  }});
  cases.push_back({"relu", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.relu(x); });
  }});
  cases.push_back({"exp", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.exp(x); });
  }});
  cases.push_back({"log", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.log(x); }, true);
  }});
  cases.push_back({"softmax", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.softmax(x); });
  }});
  cases.push_back({"log_softmax", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.log_softmax(x); });
  }});
  cases.push_back({"cmul", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.cmul(x, -1.7); });
  }});
  cases.push_back({"sum", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.sum(x); });
  }});
  cases.push_back({"mean", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.mean(x); });
  }});
  cases.push_back({"pick", [&](uint64_t s) {
    return check_unary(s, [](Graph& g, Node* x) { return g.pick(x, 1); });
  }});

  cases.push_back({"matvec", [](uint64_t s) {
    Rng rng(s);
    int m = 2 + rng.uniform_int(5), k = 2 + rng.uniform_int(5);
    Parameter a("A", random_array({m, k}, rng));
    Parameter x("x", random_array({k}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.matvec(g.param(a), g.param(x)), wrng); },
        {&a, &x}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"matvec_t", [](uint64_t s) {
    Rng rng(s);
    int m = 2 + rng.uniform_int(5), k = 2 + rng.uniform_int(5);
    Parameter a("A", random_array({m, k}, rng));
    Parameter x("x", random_array({m}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.matvec_t(g.param(a), g.param(x)), wrng); },
        {&a, &x}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"matmul", [](uint64_t s) {
    Rng rng(s);
    int m = 2 + rng.uniform_int(4), k = 2 + rng.uniform_int(4), p = 2 + rng.uniform_int(4);
    Parameter a("A", random_array({m, k}, rng));
    Parameter b("B", random_array({k, p}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.matmul(g.param(a), g.param(b)), wrng); },
        {&a, &b}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"matmul_nt", [](uint64_t s) {
    Rng rng(s);
    int m = 2 + rng.uniform_int(4), k = 2 + rng.uniform_int(4), p = 2 + rng.uniform_int(4);
    Parameter a("A", random_array({m, k}, rng));
    Parameter b("B", random_array({p, k}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.matmul_nt(g.param(a), g.param(b)), wrng); },
        {&a, &b}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"binary-elementwise", [](uint64_t s) {
    Rng rng(s);
    int n = 2 + rng.uniform_int(6);
    Parameter a("a", random_array({n}, rng));
    Parameter b("b", random_array({n}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) {
          Node* an = g.param(a);
          Node* bn = g.param(b);
          Node* mixed = g.add(g.mul(an, bn), g.sub(an, bn));
          return weighted_sum(g, mixed, wrng);
        },
        {&a, &b}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"add_row", [](uint64_t s) {
    Rng rng(s);
    int r = 2 + rng.uniform_int(4), c = 2 + rng.uniform_int(4);
    Parameter m("M", random_array({r, c}, rng));
    Parameter b("b", random_array({c}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.add_row(g.param(m), g.param(b)), wrng); },
        {&m, &b}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"conv1d", [](uint64_t s) {
    Rng rng(s);
    int t = 5 + rng.uniform_int(4), e = 2 + rng.uniform_int(3), f = 1 + rng.uniform_int(3);
    int ws = 2 + rng.uniform_int(3);
    Parameter x("X", random_array({t, e}, rng));
    Parameter w("W", random_array({f, ws * e}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) { return weighted_sum(g, g.conv1d(g.param(x), g.param(w), ws), wrng); },
        {&x, &w}, 1e-5, 10, s);
    return res.max_rel_err();
  }});
  cases.push_back({"rows-row-concat", [](uint64_t s) {
    Rng rng(s);
    Parameter table("T", random_array({6, 3}, rng));
    std::vector<int> ids{1, 4, 1, 0};  // repeated id exercises scatter-add
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) {
          Node* gathered = g.rows(g.param(table), ids);
          Node* joined = g.concat({g.row(gathered, 0), g.row(gathered, 2)});
          return weighted_sum(g, joined, wrng);
        },
        {&table}, 1e-5, 12, s);
    return res.max_rel_err();
  }});
  cases.push_back({"dot-smul", [](uint64_t s) {
    Rng rng(s);
    int n = 2 + rng.uniform_int(5);
    Parameter a("a", random_array({n}, rng));
    Parameter b("b", random_array({n}, rng));
    Rng wrng(s + 1);
    auto res = grad_check(
        [&](Graph& g) {
          Node* d = g.dot(g.param(a), g.param(b));
          return weighted_sum(g, g.smul(g.param(a), d), wrng);
        },
        {&a, &b}, 1e-5, 10, s);
    return res.max_rel_err();
  }});

  for (const auto& c : cases) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      double err = c.run(seed);
      INFO(c.name << " seed " << seed);
      CHECK(err < 1e-4);
    }
  }
}
