#include "povshift/nn.hpp"

#include <cmath>

namespace povshift {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

}  // namespace

void LstmParams::init(int input_dim, int hidden, Rng& rng) {
  double r = 1.0 / std::sqrt(static_cast<double>(hidden > 0 ? hidden : 1));
  W.resize(4 * hidden, input_dim);
  U.resize(4 * hidden, hidden);
  b = Eigen::VectorXd::Zero(4 * hidden);
  for (long i = 0; i < W.size(); ++i) W.data()[i] = rng.uniform(-r, r);
  for (long i = 0; i < U.size(); ++i) U.data()[i] = rng.uniform(-r, r);
  // A positive forget-gate bias keeps early training from erasing state.
  b.segment(hidden, hidden).setOnes();
  zero_grad();
}

void LstmParams::zero_grad() {
  dW = Eigen::MatrixXd::Zero(W.rows(), W.cols());
  dU = Eigen::MatrixXd::Zero(U.rows(), U.cols());
  db = Eigen::VectorXd::Zero(b.size());
}

void LstmParams::views(const std::string& prefix, std::vector<ParamView>& out) {
  out.push_back({prefix + ".W", W.data(), dW.data(), W.size()});
  out.push_back({prefix + ".U", U.data(), dU.data(), U.size()});
  out.push_back({prefix + ".b", b.data(), db.data(), b.size()});
}

Eigen::VectorXd lstm_forward(const LstmParams& p, const std::vector<Eigen::VectorXd>& xs,
                             LstmTrace* trace) {
  const int h = p.hidden();
  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
  for (const Eigen::VectorXd& x : xs) {
    Eigen::VectorXd z = p.W * x + p.U * h_prev + p.b;
    Eigen::VectorXd i = sigmoid(z.segment(0, h));
    Eigen::VectorXd f = sigmoid(z.segment(h, h));
    Eigen::VectorXd g = z.segment(2 * h, h).array().tanh();
    Eigen::VectorXd o = sigmoid(z.segment(3 * h, h));
    Eigen::VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    Eigen::VectorXd tc = c.array().tanh();
    Eigen::VectorXd hh = o.cwiseProduct(tc);
    if (trace) {
      trace->x.push_back(x);
      trace->i.push_back(i);
      trace->f.push_back(f);
      trace->g.push_back(g);
      trace->o.push_back(o);
      trace->c.push_back(c);
      trace->h.push_back(hh);
      trace->tanh_c.push_back(tc);
    }
    h_prev = std::move(hh);
    c_prev = std::move(c);
  }
  return h_prev;
}

std::vector<Eigen::VectorXd> lstm_backward(LstmParams& p, const LstmTrace& trace,
                                           const Eigen::VectorXd& dh_final) {
  const int h = p.hidden();
  const int T = static_cast<int>(trace.steps());
  std::vector<Eigen::VectorXd> dx(T);
  Eigen::VectorXd dh = dh_final;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(h);
  for (int t = T - 1; t >= 0; --t) {
    const Eigen::VectorXd& i = trace.i[t];
    const Eigen::VectorXd& f = trace.f[t];
    const Eigen::VectorXd& g = trace.g[t];
    const Eigen::VectorXd& o = trace.o[t];
    const Eigen::VectorXd& tc = trace.tanh_c[t];
    Eigen::VectorXd c_prev = t > 0 ? trace.c[t - 1] : Eigen::VectorXd::Zero(h);
    Eigen::VectorXd h_prev = t > 0 ? trace.h[t - 1] : Eigen::VectorXd::Zero(h);

    Eigen::VectorXd d_o = dh.cwiseProduct(tc);
    dc += dh.cwiseProduct(o).cwiseProduct(
        (1.0 - tc.array().square()).matrix());
    Eigen::VectorXd d_i = dc.cwiseProduct(g);
    Eigen::VectorXd d_g = dc.cwiseProduct(i);
    Eigen::VectorXd d_f = dc.cwiseProduct(c_prev);

    Eigen::VectorXd da(4 * h);
    da.segment(0, h) = d_i.cwiseProduct(i).cwiseProduct((1.0 - i.array()).matrix());
    da.segment(h, h) = d_f.cwiseProduct(f).cwiseProduct((1.0 - f.array()).matrix());
    da.segment(2 * h, h) = d_g.cwiseProduct((1.0 - g.array().square()).matrix());
    da.segment(3 * h, h) = d_o.cwiseProduct(o).cwiseProduct((1.0 - o.array()).matrix());

    p.dW += da * trace.x[t].transpose();
    p.dU += da * h_prev.transpose();
    p.db += da;
    dx[t] = p.W.transpose() * da;
    dh = p.U.transpose() * da;
    dc = dc.cwiseProduct(f);
  }
  return dx;
}

void AdamOptimizer::step(const std::vector<ParamView>& params) {
  ++t_;
  double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (const ParamView& p : params) {
    std::vector<double>& m = m_[p.name];
    std::vector<double>& v = v_[p.name];
    if (m.empty()) {
      m.assign(p.size, 0.0);
      v.assign(p.size, 0.0);
    }
    for (long i = 0; i < p.size; ++i) {
      double g = p.grad[i];
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      p.value[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_);
    }
  }
}

void AdamOptimizer::reset() {
  t_ = 0;
  m_.clear();
  v_.clear();
}

double ranking_loss(double gold_score, const std::vector<double>& other_scores, double margin) {
  double loss = 0.0;
  for (double s : other_scores) loss += std::max(0.0, margin - gold_score + s);
  return loss;
}

size_t stable_argmax(const std::vector<double>& scores) {
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

}  // namespace povshift
