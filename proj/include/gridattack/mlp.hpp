#ifndef GRIDATTACK_MLP_HPP_
#define GRIDATTACK_MLP_HPP_

#include <Eigen/Dense>
#include <vector>

#include "gridattack/rng.hpp"

namespace gridattack::ppo {

// Fully connected net with tanh hidden activations and a linear output head.
// Reverse-mode gradients are hand-rolled over this fixed topology; the
// analysis is small enough (64x64 hiddens) that no general autodiff is
// warranted, and the finite-difference tests pin the arithmetic.
class Mlp {
 public:
  Mlp() = default;
  // sizes = [in, h1, ..., out]
  Mlp(const std::vector<int>& sizes, Rng& rng, double weight_scale = -1.0);

  int input_dim() const { return sizes_.empty() ? 0 : sizes_.front(); }
  int output_dim() const { return sizes_.empty() ? 0 : sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // Forward pass retaining layer activations for backprop.
  struct Tape {
    std::vector<Eigen::VectorXd> pre;   // pre-activation per layer
    std::vector<Eigen::VectorXd> post;  // post-activation (post[0] = input)
  };
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Tape& tape) const;

  // Accumulate parameter gradients for upstream dL/dout; returns dL/dinput.
  Eigen::VectorXd backward(const Tape& tape, const Eigen::VectorXd& dout,
                           std::vector<Eigen::MatrixXd>& grad_w,
                           std::vector<Eigen::VectorXd>& grad_b) const;

  void zero_like_grads(std::vector<Eigen::MatrixXd>& grad_w,
                       std::vector<Eigen::VectorXd>& grad_b) const;

  std::vector<Eigen::MatrixXd>& weights() { return w_; }
  std::vector<Eigen::VectorXd>& biases() { return b_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

  int parameter_count() const;
  void get_flat(Eigen::VectorXd& out, int& offset) const;
  void set_flat(const Eigen::VectorXd& in, int& offset);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> w_;
  std::vector<Eigen::VectorXd> b_;
};

}  // namespace gridattack::ppo

#endif  // GRIDATTACK_MLP_HPP_
