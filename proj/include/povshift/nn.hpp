#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "povshift/util.hpp"

namespace povshift {

// Named view over a parameter block and its gradient accumulator. The
// optimizer and the serializer both walk these views, so their order defines
// the model's on-disk layout.
struct ParamView {
  std::string name;
  double* value = nullptr;
  double* grad = nullptr;
  long size = 0;
};

// One LSTM direction. Gate pre-activations are packed row-wise in the order
// input, forget, cell, output: W is (4H x D), U is (4H x H), b is 4H.
struct LstmParams {
  Eigen::MatrixXd W, U;
  Eigen::VectorXd b;
  Eigen::MatrixXd dW, dU;
  Eigen::VectorXd db;

  int hidden() const { return static_cast<int>(U.cols()); }
  int input_dim() const { return static_cast<int>(W.cols()); }

  void init(int input_dim, int hidden, Rng& rng);
  void zero_grad();
  void views(const std::string& prefix, std::vector<ParamView>& out);
};

// Forward-pass activations kept for backpropagation.
struct LstmTrace {
  std::vector<Eigen::VectorXd> x, i, f, g, o, c, h, tanh_c;
  size_t steps() const { return x.size(); }
};

// Runs the sequence and returns the final hidden state (zeros for an empty
// sequence). When trace is given, activations are recorded.
Eigen::VectorXd lstm_forward(const LstmParams& p, const std::vector<Eigen::VectorXd>& xs,
                             LstmTrace* trace = nullptr);

// Backpropagates the gradient at the final hidden state, accumulating into
// p's gradient buffers. Returns gradients with respect to the inputs.
std::vector<Eigen::VectorXd> lstm_backward(LstmParams& p, const LstmTrace& trace,
                                           const Eigen::VectorXd& dh_final);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // Applies one update from the accumulated gradients, then advances time.
  void step(const std::vector<ParamView>& params);
  void reset();

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::map<std::string, std::vector<double>> m_, v_;
};

// Margin ranking loss: sum over others of max(0, margin - gold + other).
double ranking_loss(double gold_score, const std::vector<double>& other_scores, double margin);

// Index of the largest score; earlier elements win ties.
size_t stable_argmax(const std::vector<double>& scores);

}  // namespace povshift
