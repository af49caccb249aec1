#include <doctest.h>

#include <cmath>
#include <functional>

#include "taxorl/rng.hpp"
#include "taxorl/tape.hpp"

using namespace taxorl;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double r = 0.8) {
  Tensor t(shape);
  for (double& x : t.v) x = uniform_range(rng, -r, r);
  return t;
}

// Central finite differences for every element of every parameter.
// loss_fn must rebuild the computation from scratch each call.
void check_gradients(std::vector<Parameter*> params,
                     const std::function<double()>& loss_fn,
                     const std::function<void()>& backward_fn,
                     double tol = 1e-6) {
  for (Parameter* p : params) p->zero_grad();
  backward_fn();
  const double h = 1e-5;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.v.size(); ++i) {
      double saved = p->value.v[i];
      p->value.v[i] = saved + h;
      double up = loss_fn();
      p->value.v[i] = saved - h;
      double dn = loss_fn();
      p->value.v[i] = saved;
      double fd = (up - dn) / (2 * h);
      INFO(p->name, "[", i, "] analytic=", p->grad.v[i], " fd=", fd);
      CHECK(p->grad.v[i] ==
            doctest::Approx(fd).epsilon(1e-4).scale(std::abs(fd) + 1.0));
    }
    (void)tol;
  }
}

}  // namespace

TEST_CASE("feed-forward chain gradient matches finite differences") {
  Rng rng(3);
  Parameter w("w", random_tensor({3, 4}, rng));
  Parameter b("b", random_tensor({3}, rng));
  Parameter x("x", random_tensor({4}, rng));

  auto loss = [&]() {
    Tape tape;
    NodeId h = tape.relu(
        tape.add(tape.matvec(tape.leaf(w), tape.leaf(x)), tape.leaf(b)));
    NodeId s = tape.tanh_(h);
    return tape.value(tape.log_softmax_pick(s, 1)).v[0];
  };
  auto backward = [&]() {
    Tape tape;
    NodeId h = tape.relu(
        tape.add(tape.matvec(tape.leaf(w), tape.leaf(x)), tape.leaf(b)));
    NodeId s = tape.tanh_(h);
    tape.backward(tape.log_softmax_pick(s, 1));
  };
  check_gradients({&w, &b, &x}, loss, backward);
}

TEST_CASE("lstm step gradient matches finite differences") {
  Rng rng(11);
  int d = 3, hdim = 4;
  Parameter wx("wx", random_tensor({4 * hdim, d}, rng));
  Parameter wh("wh", random_tensor({4 * hdim, hdim}, rng));
  Parameter bias("bias", random_tensor({4 * hdim}, rng));
  Parameter x0("x0", random_tensor({d}, rng));
  Parameter x1("x1", random_tensor({d}, rng));

  auto build = [&](Tape& tape) {
    NodeId h = tape.constant(Tensor({hdim}));
    NodeId c = tape.constant(Tensor({hdim}));
    auto [h1, c1] = tape.lstm_step(tape.leaf(x0), h, c, tape.leaf(wx),
                                   tape.leaf(wh), tape.leaf(bias));
    auto [h2, c2] = tape.lstm_step(tape.leaf(x1), h1, c1, tape.leaf(wx),
                                   tape.leaf(wh), tape.leaf(bias));
    (void)c2;
    return tape.log_softmax_pick(h2, 2);
  };
  auto loss = [&]() {
    Tape tape;
    return tape.value(build(tape)).v[0];
  };
  auto backward = [&]() {
    Tape tape;
    tape.backward(build(tape));
  };
  check_gradients({&wx, &wh, &bias, &x0, &x1}, loss, backward);
}

TEST_CASE("embedding lookup scatters gradients into the right rows") {
  Rng rng(5);
  Parameter table("table", random_tensor({4, 3}, rng));
  Tape tape;
  NodeId sum = tape.scalar_combo(
      {tape.log_softmax_pick(tape.lookup(table, 2), 0)}, {1.0});
  table.zero_grad();
  tape.backward(sum);
  for (int r = 0; r < 4; ++r) {
    double norm = 0;
    for (int c = 0; c < 3; ++c) norm += std::abs(table.grad.at(r, c));
    if (r == 2)
      CHECK(norm > 0);
    else
      CHECK(norm == 0);
  }
}

TEST_CASE("parameter gradients accumulate across backward passes") {
  Rng rng(9);
  Parameter w("w", random_tensor({2, 2}, rng));
  Parameter x("x", random_tensor({2}, rng));
  auto run = [&]() {
    Tape tape;
    tape.backward(tape.log_softmax_pick(tape.matvec(tape.leaf(w), tape.leaf(x)), 0));
  };
  w.zero_grad();
  x.zero_grad();
  run();
  Tensor g1 = w.grad;
  run();
  for (std::size_t i = 0; i < g1.v.size(); ++i)
    CHECK(w.grad.v[i] == doctest::Approx(2 * g1.v[i]).epsilon(1e-12));
}

TEST_CASE("softmax produces a distribution; bce matches closed form") {
  Rng rng(2);
  Tape tape;
  NodeId logits = tape.constant(random_tensor({5}, rng, 3.0));
  NodeId sm = tape.softmax_vec(logits);
  double s = 0;
  for (double p : tape.value(sm).v) {
    CHECK(p > 0);
    s += p;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  Parameter z("z", Tensor({1}));
  z.value.v[0] = 1.3;
  Tape t2;
  double l1 = t2.value(t2.bce_with_logit(t2.leaf(z), 1.0)).v[0];
  double expected = std::log(1 + std::exp(-1.3));
  CHECK(l1 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bce_with_logit is stable at extreme logits") {
  Parameter z("z", Tensor({1}));
  for (double v : {-800.0, 800.0}) {
    z.value.v[0] = v;
    Tape tape;
    double l0 = tape.value(tape.bce_with_logit(tape.leaf(z), 0.0)).v[0];
    double l1 = tape.value(tape.bce_with_logit(tape.leaf(z), 1.0)).v[0];
    CHECK(std::isfinite(l0));
    CHECK(std::isfinite(l1));
  }
}
