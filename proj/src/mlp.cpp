#include "gridattack/mlp.hpp"

#include <cmath>

#include "gridattack/errors.hpp"

namespace gridattack::ppo {

Mlp::Mlp(const std::vector<int>& sizes, Rng& rng, double weight_scale) : sizes_(sizes) {
  if (sizes.size() < 2) throw core::ContractError("Mlp needs at least input and output sizes");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    // orthogonal-ish init is overkill at this scale; scaled uniform fan-in
    const double scale = weight_scale > 0 ? weight_scale : std::sqrt(1.0 / in);
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) w(i, j) = scale * (2.0 * rng.uniform() - 1.0);
    }
    w_.push_back(std::move(w));
    b_.push_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    a = w_[l] * a + b_[l];
    if (l + 1 < w_.size()) a = a.array().tanh();
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Tape& tape) const {
  tape.pre.resize(w_.size());
  tape.post.resize(w_.size() + 1);
  tape.post[0] = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    tape.pre[l] = w_[l] * tape.post[l] + b_[l];
    tape.post[l + 1] = (l + 1 < w_.size()) ? tape.pre[l].array().tanh().matrix() : tape.pre[l];
  }
  return tape.post.back();
}

Eigen::VectorXd Mlp::backward(const Tape& tape, const Eigen::VectorXd& dout,
                              std::vector<Eigen::MatrixXd>& grad_w,
                              std::vector<Eigen::VectorXd>& grad_b) const {
  Eigen::VectorXd d = dout;
  for (int l = static_cast<int>(w_.size()) - 1; l >= 0; --l) {
    if (l + 1 < static_cast<int>(w_.size())) {
      // through tanh: post = tanh(pre)
      d = d.cwiseProduct(
          (1.0 - tape.post[l + 1].array().square()).matrix());
    }
    grad_w[l].noalias() += d * tape.post[l].transpose();
    grad_b[l] += d;
    d = w_[l].transpose() * d;
  }
  return d;  // dL/dinput
}

void Mlp::zero_like_grads(std::vector<Eigen::MatrixXd>& grad_w,
                          std::vector<Eigen::VectorXd>& grad_b) const {
  grad_w.resize(w_.size());
  grad_b.resize(b_.size());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    grad_w[l] = Eigen::MatrixXd::Zero(w_[l].rows(), w_[l].cols());
    grad_b[l] = Eigen::VectorXd::Zero(b_[l].size());
  }
}

int Mlp::parameter_count() const {
  int n = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    n += static_cast<int>(w_[l].size() + b_[l].size());
  }
  return n;
}

void Mlp::get_flat(Eigen::VectorXd& out, int& offset) const {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int j = 0; j < w_[l].cols(); ++j) {
      for (int i = 0; i < w_[l].rows(); ++i) out[offset++] = w_[l](i, j);
    }
    for (int i = 0; i < b_[l].size(); ++i) out[offset++] = b_[l][i];
  }
}

void Mlp::set_flat(const Eigen::VectorXd& in, int& offset) {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (int j = 0; j < w_[l].cols(); ++j) {
      for (int i = 0; i < w_[l].rows(); ++i) w_[l](i, j) = in[offset++];
    }
    for (int i = 0; i < b_[l].size(); ++i) b_[l][i] = in[offset++];
  }
}

}  // namespace gridattack::ppo
