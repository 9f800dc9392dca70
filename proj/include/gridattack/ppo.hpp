#ifndef GRIDATTACK_PPO_HPP_
#define GRIDATTACK_PPO_HPP_

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gridattack/mlp.hpp"
#include "gridattack/rng.hpp"

namespace gridattack::ppo {

// Whether the actor net emits only means (log-std kept as a separate learned
// vector) or a stacked (mean, log-std) head.
enum class ActorHead { SeparateLogStd, MeanLogStd };

struct PPOConfig {
  double learning_rate = 3e-4;
  int minibatch_size = 64;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  double clip_ratio = 0.2;
  int rollout_horizon = 2048;
  int epochs_per_update = 10;
  long total_steps = 300000;
  int num_envs = 1;
  int hidden = 64;
  double log_std_init = 0.0;
  ActorHead actor_head = ActorHead::SeparateLogStd;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PolicyParams {
  Mlp actor;
  Mlp critic;
  Eigen::VectorXd log_std;  // used with ActorHead::SeparateLogStd
  ActorHead head = ActorHead::SeparateLogStd;
  int action_dim = 0;

  static PolicyParams init(int obs_dim, int action_dim, const PPOConfig& cfg, Rng& rng);
  int parameter_count() const;
  Eigen::VectorXd flat() const;
  void set_flat(const Eigen::VectorXd& v);
};

struct PolicyEval {
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;
  double value = 0.0;
};

// Deterministic forward pass of actor and critic.
PolicyEval policy_forward(const PolicyParams& params, const Eigen::VectorXd& obs);

struct ActionSample {
  Eigen::VectorXd action;
  double log_prob = 0.0;
};

// Diagonal Gaussian sample; log-std floored at -20.
ActionSample sample_action(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std, Rng& rng);
double gaussian_log_prob(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std);

struct RolloutBuffer {
  std::vector<Eigen::VectorXd> obs;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;       // episode ended after this transition
  std::vector<int> segment_starts;       // contiguous time-ordered segments
  std::vector<double> bootstrap_values;  // per segment, value of state after last transition

  int size() const { return static_cast<int>(obs.size()); }
  void clear();
};

// GAE over each segment: delta_t = r_t + gamma*V(s_{t+1})*(1-done) - V(s_t),
// A_t = delta_t + gamma*lambda*(1-done)*A_{t+1}; returns = advantages + values.
void compute_gae(const RolloutBuffer& buffer, double gamma, double lambda,
                 Eigen::VectorXd& advantages, Eigen::VectorXd& returns);

struct UpdateDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double grad_norm_pre_clip = 0.0;
  double grad_norm_post_clip = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

struct MinibatchStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
};

// Total minibatch loss: policy + value_coef*value - entropy_coef*entropy.
// Exposed so gradients can be pinned against finite differences.
double minibatch_loss(const PolicyParams& params, const RolloutBuffer& buffer,
                      const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                      const std::vector<int>& idx, const PPOConfig& cfg);

// Analytic gradient of the same loss in flat-parameter layout; returns false
// on non-finite loss.
bool minibatch_gradient(const PolicyParams& params, const RolloutBuffer& buffer,
                        const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                        const std::vector<int>& idx, const PPOConfig& cfg,
                        Eigen::VectorXd& flat_grad, MinibatchStats& stats);

class AdamOptimizer {
 public:
  AdamOptimizer(int n_params, double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

// One PPO update (several epochs of minibatch clipped-surrogate steps).
// Advantages are normalized over the whole batch. On a non-finite loss the
// update aborts and params are left untouched.
UpdateDiagnostics ppo_update(PolicyParams& params, const RolloutBuffer& buffer,
                             const PPOConfig& cfg, AdamOptimizer& opt, Rng& rng);

// Minimal environment interface for the trainer; AttackEnv and test toys
// adapt to it.
class TrainEnv {
 public:
  virtual ~TrainEnv() = default;
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;
  // returns (obs, reward, done)
  virtual std::tuple<Eigen::VectorXd, double, bool> step(const Eigen::VectorXd& action) = 0;
};

using EnvFactory = std::function<std::unique_ptr<TrainEnv>(int worker_index)>;

struct EpisodeRecord {
  int episode = 0;
  double reward = 0.0;
  double moving_average_40 = 0.0;
};

struct TrainResult {
  PolicyParams params;       // final
  PolicyParams best_params;  // best 40-episode moving average
  double best_moving_average = 0.0;
  std::vector<EpisodeRecord> curve;
  long steps_collected = 0;
  int updates = 0;
  int aborted_updates = 0;
};

using TrainCallback = std::function<void(const TrainResult& partial)>;

// Alternate rollout collection (optionally across parallel envs, each with
// its own deterministic stream) and PPO updates until total_steps.
TrainResult train(const EnvFactory& factory, const PPOConfig& cfg,
                  const TrainCallback& progress = nullptr);

// Checkpoint serialization (JSON, full-precision doubles).
std::string checkpoint_to_text(const PolicyParams& params, const PPOConfig& cfg,
                               long steps_collected);
void checkpoint_from_text(const std::string& text, PolicyParams& params, PPOConfig& cfg,
                          long& steps_collected);

}  // namespace gridattack::ppo

#endif  // GRIDATTACK_PPO_HPP_
