#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "povshift/nn.hpp"

using namespace povshift;

TEST_CASE("ranking loss is zero exactly when the margin holds") {
  CHECK(ranking_loss(1.0, {0.0, -0.5}, 1.0) == doctest::Approx(0.0));
  CHECK(ranking_loss(1.0, {0.5}, 1.0) == doctest::Approx(0.5));
  CHECK(ranking_loss(0.0, {0.0}, 1.0) == doctest::Approx(1.0));
  CHECK(ranking_loss(2.0, {}, 1.0) == doctest::Approx(0.0));

  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    double gold = rng.normal() * 3.0;
    double margin = rng.uniform(0.1, 1.1);
    std::vector<double> others;
    size_t n = 1 + rng.next_index(6);
    for (size_t i = 0; i < n; ++i) others.push_back(rng.normal() * 3.0);

    double loss = ranking_loss(gold, others, margin);
    CHECK(loss >= 0.0);

    double expected = 0.0;
    bool margin_holds = true;
    for (double s : others) {
      expected += std::max(0.0, margin - gold + s);
      if (gold - s < margin) margin_holds = false;
    }
    CHECK(loss == doctest::Approx(expected));
    CHECK((loss == 0.0) == margin_holds);

    // Summing over the others commutes.
    std::vector<double> reversed(others.rbegin(), others.rend());
    CHECK(ranking_loss(gold, reversed, margin) == doctest::Approx(loss));
  }
}

TEST_CASE("argmax prefers the earliest maximal score") {
  CHECK(stable_argmax({0.2, 0.9, 0.4}) == 1);
  CHECK(stable_argmax({0.5, 0.5, 0.5}) == 0);
  CHECK(stable_argmax({0.1, 0.7, 0.7}) == 1);
  CHECK(stable_argmax({-3.0}) == 0);
}

TEST_CASE("lstm forward has the right shape and handles empty input") {
  Rng rng(3);
  LstmParams p;
  p.init(5, 4, rng);
  CHECK(p.input_dim() == 5);
  CHECK(p.hidden() == 4);
  CHECK(p.W.rows() == 16);
  CHECK(p.W.cols() == 5);
  CHECK(p.U.rows() == 16);
  CHECK(p.U.cols() == 4);
  CHECK(p.b.size() == 16);

  Eigen::VectorXd empty_out = lstm_forward(p, {});
  CHECK(empty_out.size() == 4);
  CHECK(empty_out.norm() == doctest::Approx(0.0));

  std::vector<Eigen::VectorXd> xs;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x(i) = rng.normal();
    xs.push_back(x);
  }
  LstmTrace trace;
  Eigen::VectorXd h = lstm_forward(p, xs, &trace);
  CHECK(h.size() == 4);
  CHECK(h.norm() > 0.0);
  CHECK(trace.steps() == 3);
  // tanh cells keep activations bounded.
  for (int i = 0; i < 4; ++i) CHECK(std::abs(h(i)) < 1.0);
  // The recorded final hidden state matches the return value.
  CHECK((trace.h.back() - h).norm() == doctest::Approx(0.0));
}

TEST_CASE("lstm forward is deterministic for fixed parameters") {
  Rng rng(11);
  LstmParams p;
  p.init(3, 2, rng);
  std::vector<Eigen::VectorXd> xs(4, Eigen::VectorXd::Ones(3));
  Eigen::VectorXd a = lstm_forward(p, xs);
  Eigen::VectorXd b = lstm_forward(p, xs);
  CHECK((a - b).norm() == doctest::Approx(0.0));
}

TEST_CASE("lstm backward matches numerical gradients") {
  Rng rng(23);
  LstmParams p;
  p.init(3, 2, rng);
  std::vector<Eigen::VectorXd> xs;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.normal();
    xs.push_back(x);
  }
  // Scalar objective: sum of the final hidden state.
  Eigen::VectorXd dh = Eigen::VectorXd::Ones(2);

  LstmTrace trace;
  lstm_forward(p, xs, &trace);
  p.zero_grad();
  std::vector<Eigen::VectorXd> dx = lstm_backward(p, trace, dh);
  REQUIRE(dx.size() == 3);

  std::vector<ParamView> views;
  p.views("lstm", views);
  const double eps = 1e-6;
  for (const ParamView& view : views) {
    for (long k = 0; k < std::min<long>(view.size, 6); ++k) {
      double saved = view.value[k];
      view.value[k] = saved + eps;
      double up = lstm_forward(p, xs).sum();
      view.value[k] = saved - eps;
      double down = lstm_forward(p, xs).sum();
      view.value[k] = saved;
      double numeric = (up - down) / (2 * eps);
      CHECK(view.grad[k] == doctest::Approx(numeric).epsilon(1e-4));
    }
  }

  // Input gradients too.
  for (int t = 0; t < 3; ++t)
    for (int i = 0; i < 3; ++i) {
      double saved = xs[t](i);
      xs[t](i) = saved + eps;
      double up = lstm_forward(p, xs).sum();
      xs[t](i) = saved - eps;
      double down = lstm_forward(p, xs).sum();
      xs[t](i) = saved;
      double numeric = (up - down) / (2 * eps);
      CHECK(dx[t](i) == doctest::Approx(numeric).epsilon(1e-4));
    }
}

TEST_CASE("adam minimizes a quadratic") {
  // f(w) = 0.5 * ||w - target||^2, df/dw = w - target.
  std::vector<double> w = {5.0, -3.0};
  std::vector<double> g = {0.0, 0.0};
  std::vector<double> target = {1.0, 2.0};
  std::vector<ParamView> views = {{"w", w.data(), g.data(), 2}};

  AdamOptimizer opt(0.05);
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < 2; ++i) g[i] = w[i] - target[i];
    opt.step(views);
  }
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(w[1] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("adam reset restarts moment estimates") {
  std::vector<double> w = {1.0};
  std::vector<double> g = {1.0};
  std::vector<ParamView> views = {{"w", w.data(), g.data(), 1}};

  AdamOptimizer opt(0.1);
  opt.step(views);
  double first_delta = 1.0 - w[0];

  opt.reset();
  w[0] = 1.0;
  g[0] = 1.0;
  opt.step(views);
  CHECK(1.0 - w[0] == doctest::Approx(first_delta));
}
