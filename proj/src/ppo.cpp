#include "gridattack/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "gridattack/errors.hpp"

namespace gridattack::ppo {

using nlohmann::json;

namespace {
constexpr double kLogStdFloor = -20.0;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // ln(2*pi)/2
}  // namespace

void PPOConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw core::ContractError("gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw core::ContractError("gae_lambda must be in [0, 1]");
  }
  if (!(learning_rate > 0) || !std::isfinite(learning_rate) || !std::isfinite(entropy_coef) ||
      !std::isfinite(value_coef) || !std::isfinite(max_grad_norm) || !std::isfinite(clip_ratio)) {
    throw core::ContractError("PPO coefficients must be finite");
  }
  if (minibatch_size <= 0 || rollout_horizon <= 0 || epochs_per_update <= 0 || num_envs <= 0) {
    throw core::ContractError("PPO sizes must be positive");
  }
}

PolicyParams PolicyParams::init(int obs_dim, int action_dim, const PPOConfig& cfg, Rng& rng) {
  PolicyParams p;
  p.head = cfg.actor_head;
  p.action_dim = action_dim;
  const int actor_out = (cfg.actor_head == ActorHead::MeanLogStd) ? 2 * action_dim : action_dim;
  p.actor = Mlp({obs_dim, cfg.hidden, cfg.hidden, actor_out}, rng);
  p.critic = Mlp({obs_dim, cfg.hidden, cfg.hidden, 1}, rng);
  p.log_std = Eigen::VectorXd::Constant(action_dim, cfg.log_std_init);
  // small output-layer weights keep initial actions near the action-space
  // midpoint and the value head near zero
  p.actor.weights().back() *= 0.01;
  p.critic.weights().back() *= 0.1;
  return p;
}

int PolicyParams::parameter_count() const {
  int n = actor.parameter_count() + critic.parameter_count();
  if (head == ActorHead::SeparateLogStd) n += static_cast<int>(log_std.size());
  return n;
}

Eigen::VectorXd PolicyParams::flat() const {
  Eigen::VectorXd v(parameter_count());
  int off = 0;
  actor.get_flat(v, off);
  critic.get_flat(v, off);
  if (head == ActorHead::SeparateLogStd) {
    for (int i = 0; i < log_std.size(); ++i) v[off++] = log_std[i];
  }
  return v;
}

void PolicyParams::set_flat(const Eigen::VectorXd& v) {
  int off = 0;
  actor.set_flat(v, off);
  critic.set_flat(v, off);
  if (head == ActorHead::SeparateLogStd) {
    for (int i = 0; i < log_std.size(); ++i) log_std[i] = v[off++];
  }
}

PolicyEval policy_forward(const PolicyParams& params, const Eigen::VectorXd& obs) {
  if (obs.size() != params.actor.input_dim()) {
    throw core::ContractError("policy_forward: observation dim " + std::to_string(obs.size()) +
                              " != network input " + std::to_string(params.actor.input_dim()));
  }
  PolicyEval out;
  const Eigen::VectorXd a = params.actor.forward(obs);
  if (params.head == ActorHead::MeanLogStd) {
    out.mean = a.head(params.action_dim);
    out.log_std = a.tail(params.action_dim).cwiseMax(kLogStdFloor);
  } else {
    out.mean = a;
    out.log_std = params.log_std.cwiseMax(kLogStdFloor);
  }
  out.value = params.critic.forward(obs)[0];
  return out;
}

ActionSample sample_action(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std,
                           Rng& rng) {
  if (!mean.allFinite() || !log_std.allFinite()) {
    throw core::InvalidStateError("sample_action: non-finite policy parameters");
  }
  ActionSample s;
  s.action.resize(mean.size());
  for (int i = 0; i < mean.size(); ++i) {
    const double ls = std::max(log_std[i], kLogStdFloor);
    s.action[i] = mean[i] + std::exp(ls) * rng.normal();
  }
  s.log_prob = gaussian_log_prob(s.action, mean, log_std);
  return s;
}

double gaussian_log_prob(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std) {
  double lp = 0.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double ls = std::max(log_std[i], kLogStdFloor);
    const double z = (action[i] - mean[i]) / std::exp(ls);
    lp += -0.5 * z * z - ls - kHalfLog2Pi;
  }
  return lp;
}

void RolloutBuffer::clear() {
  obs.clear();
  actions.clear();
  log_probs.clear();
  rewards.clear();
  values.clear();
  dones.clear();
  segment_starts.clear();
  bootstrap_values.clear();
}

void compute_gae(const RolloutBuffer& buffer, double gamma, double lambda,
                 Eigen::VectorXd& advantages, Eigen::VectorXd& returns) {
  const int n = buffer.size();
  if (n == 0) throw core::ContractError("compute_gae: empty buffer");
  advantages.resize(n);
  returns.resize(n);
  const int n_seg = static_cast<int>(buffer.segment_starts.size());
  for (int s = 0; s < n_seg; ++s) {
    const int start = buffer.segment_starts[s];
    const int end = (s + 1 < n_seg) ? buffer.segment_starts[s + 1] : n;
    double gae = 0.0;
    for (int t = end - 1; t >= start; --t) {
      const double nonterminal = buffer.dones[t] ? 0.0 : 1.0;
      const double next_value =
          (t == end - 1) ? buffer.bootstrap_values[s] : buffer.values[t + 1];
      const double delta =
          buffer.rewards[t] + gamma * next_value * nonterminal - buffer.values[t];
      gae = delta + gamma * lambda * nonterminal * gae;
      advantages[t] = gae;
    }
  }
  for (int t = 0; t < n; ++t) returns[t] = advantages[t] + buffer.values[t];
}

AdamOptimizer::AdamOptimizer(int n_params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(n_params)), v_(Eigen::VectorXd::Zero(n_params)) {}

void AdamOptimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step_size = lr_ / bc1;
  params -= step_size *
            (m_.array() / ((v_.array() / bc2).sqrt() + eps_)).matrix();
}

double minibatch_loss(const PolicyParams& params, const RolloutBuffer& buffer,
                      const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                      const std::vector<int>& idx, const PPOConfig& cfg) {
  const int bsz = static_cast<int>(idx.size());
  const double inv_b = 1.0 / bsz;
  double policy_loss = 0.0, value_loss = 0.0, entropy = 0.0;
  for (const int t : idx) {
    const PolicyEval pe = policy_forward(params, buffer.obs[t]);
    const double new_lp = gaussian_log_prob(buffer.actions[t], pe.mean, pe.log_std);
    const double ratio = std::exp(new_lp - buffer.log_probs[t]);
    const double adv = advantages[t];
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio) * adv;
    policy_loss += -std::min(unclipped, clipped) * inv_b;
    const double verr = pe.value - returns[t];
    value_loss += 0.5 * verr * verr * inv_b;
    for (int i = 0; i < pe.log_std.size(); ++i) {
      entropy += (pe.log_std[i] + kHalfLog2Pi + 0.5) * inv_b;
    }
  }
  return policy_loss + cfg.value_coef * value_loss - cfg.entropy_coef * entropy;
}

bool minibatch_gradient(const PolicyParams& params, const RolloutBuffer& buffer,
                        const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                        const std::vector<int>& idx, const PPOConfig& cfg,
                        Eigen::VectorXd& flat_grad, MinibatchStats& diag) {
  const int bsz = static_cast<int>(idx.size());
  const int adim = params.action_dim;

  std::vector<Eigen::MatrixXd> ga_w, gc_w;
  std::vector<Eigen::VectorXd> ga_b, gc_b;
  params.actor.zero_like_grads(ga_w, ga_b);
  params.critic.zero_like_grads(gc_w, gc_b);
  Eigen::VectorXd g_log_std = Eigen::VectorXd::Zero(adim);

  diag = MinibatchStats{};
  const double inv_b = 1.0 / bsz;

  for (int k = 0; k < bsz; ++k) {
    const int t = idx[k];
    Mlp::Tape atape, ctape;
    const Eigen::VectorXd aout = params.actor.forward(buffer.obs[t], atape);
    const Eigen::VectorXd vout = params.critic.forward(buffer.obs[t], ctape);

    Eigen::VectorXd mean, log_std;
    if (params.head == ActorHead::MeanLogStd) {
      mean = aout.head(adim);
      log_std = aout.tail(adim).cwiseMax(kLogStdFloor);
    } else {
      mean = aout;
      log_std = params.log_std.cwiseMax(kLogStdFloor);
    }

    const double new_lp = gaussian_log_prob(buffer.actions[t], mean, log_std);
    const double log_ratio = new_lp - buffer.log_probs[t];
    const double ratio = std::exp(log_ratio);
    const double adv = advantages[t];

    // clipped surrogate: loss_k = -min(ratio*A, clip(ratio)*A)
    const double lo = 1.0 - cfg.clip_ratio;
    const double hi = 1.0 + cfg.clip_ratio;
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, lo, hi) * adv;
    const double pg_k = -std::min(unclipped, clipped);
    diag.policy_loss += pg_k * inv_b;
    diag.approx_kl += ((ratio - 1.0) - log_ratio) * inv_b;

    // d(pg_k)/d(ratio): zero when the clipped branch is active
    double dpg_dratio = 0.0;
    if (unclipped <= clipped) {
      dpg_dratio = -adv;
    } else if (ratio > lo && ratio < hi) {
      dpg_dratio = -adv;
    }
    const double dpg_dlogp = dpg_dratio * ratio;  // dratio/dlogp = ratio

    // entropy of the diagonal Gaussian
    double ent = 0.0;
    for (int i = 0; i < adim; ++i) ent += log_std[i] + kHalfLog2Pi + 0.5;
    diag.entropy += ent * inv_b;

    // value loss 0.5*(v - R)^2 scaled by value_coef
    const double verr = vout[0] - returns[t];
    diag.value_loss += 0.5 * verr * verr * inv_b;

    // backprop actor: dlogp/dmean_i = (a_i - mu_i)/sigma_i^2
    //                 dlogp/dls_i = z_i^2 - 1
    Eigen::VectorXd dmean(adim), dls(adim);
    for (int i = 0; i < adim; ++i) {
      const double sigma = std::exp(log_std[i]);
      const double z = (buffer.actions[t][i] - mean[i]) / sigma;
      dmean[i] = dpg_dlogp * (z / sigma) * inv_b;
      const double dlogp_dls = z * z - 1.0;
      // entropy term: dH/dls = 1
      dls[i] = (dpg_dlogp * dlogp_dls - cfg.entropy_coef) * inv_b;
    }
    if (params.head == ActorHead::MeanLogStd) {
      Eigen::VectorXd dout(2 * adim);
      dout.head(adim) = dmean;
      // through the floor: zero gradient when clamped
      for (int i = 0; i < adim; ++i) {
        dout[adim + i] = (aout[adim + i] > kLogStdFloor) ? dls[i] : 0.0;
      }
      params.actor.backward(atape, dout, ga_w, ga_b);
    } else {
      params.actor.backward(atape, dmean, ga_w, ga_b);
      for (int i = 0; i < adim; ++i) {
        g_log_std[i] += (params.log_std[i] > kLogStdFloor) ? dls[i] : 0.0;
      }
    }

    Eigen::VectorXd dv(1);
    dv[0] = cfg.value_coef * verr * inv_b;
    params.critic.backward(ctape, dv, gc_w, gc_b);
  }

  const double total_loss =
      diag.policy_loss + cfg.value_coef * diag.value_loss - cfg.entropy_coef * diag.entropy;
  if (!std::isfinite(total_loss)) return false;

  // flatten in PolicyParams order: actor, critic, log_std
  flat_grad.resize(0);
  std::vector<double> flat;
  auto push_mlp = [&flat](const std::vector<Eigen::MatrixXd>& gw,
                          const std::vector<Eigen::VectorXd>& gb) {
    for (std::size_t l = 0; l < gw.size(); ++l) {
      for (int j = 0; j < gw[l].cols(); ++j) {
        for (int i = 0; i < gw[l].rows(); ++i) flat.push_back(gw[l](i, j));
      }
      for (int i = 0; i < gb[l].size(); ++i) flat.push_back(gb[l][i]);
    }
  };
  push_mlp(ga_w, ga_b);
  push_mlp(gc_w, gc_b);
  if (params.head == ActorHead::SeparateLogStd) {
    for (int i = 0; i < adim; ++i) flat.push_back(g_log_std[i]);
  }
  flat_grad = Eigen::Map<Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  return flat_grad.allFinite();
}

UpdateDiagnostics ppo_update(PolicyParams& params, const RolloutBuffer& buffer,
                             const PPOConfig& cfg, AdamOptimizer& opt, Rng& rng) {
  const int n = buffer.size();
  if (n == 0) throw core::ContractError("ppo_update: empty buffer");

  Eigen::VectorXd advantages, returns;
  compute_gae(buffer, cfg.gamma, cfg.gae_lambda, advantages, returns);

  // normalize advantages over the whole update batch
  const double mean = advantages.mean();
  const double stdev = std::sqrt((advantages.array() - mean).square().sum() / advantages.size());
  advantages = (advantages.array() - mean) / (stdev + 1e-8);

  const PolicyParams backup = params;
  Eigen::VectorXd theta = params.flat();

  UpdateDiagnostics diag;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    rng.shuffle(order);
    for (int start = 0; start < n; start += cfg.minibatch_size) {
      const int end = std::min(start + cfg.minibatch_size, n);
      const std::vector<int> idx(order.begin() + start, order.begin() + end);

      Eigen::VectorXd grad;
      MinibatchStats lg;
      if (!minibatch_gradient(params, buffer, advantages, returns, idx, cfg, grad, lg)) {
        params = backup;
        diag.aborted = true;
        diag.abort_reason = "non-finite loss or gradient";
        return diag;
      }
      diag.policy_loss = lg.policy_loss;
      diag.value_loss = lg.value_loss;
      diag.entropy = lg.entropy;
      diag.approx_kl = lg.approx_kl;

      const double gnorm = grad.norm();
      diag.grad_norm_pre_clip = gnorm;
      if (gnorm > cfg.max_grad_norm && gnorm > 0.0) {
        grad *= cfg.max_grad_norm / gnorm;
      }
      diag.grad_norm_post_clip = grad.norm();
      opt.step(theta, grad);
      params.set_flat(theta);
    }
  }
  return diag;
}

namespace {

struct WorkerRollout {
  RolloutBuffer buffer;
  std::vector<double> finished_episode_rewards;
  Eigen::VectorXd last_obs;
  bool last_done = false;
  double episode_reward_acc = 0.0;
  std::uint64_t episodes_started = 0;
};

}  // namespace

TrainResult train(const EnvFactory& factory, const PPOConfig& cfg,
                  const TrainCallback& progress) {
  cfg.validate();
  Rng master(cfg.seed);

  // probe dims
  auto probe = factory(0);
  const int obs_dim = probe->observation_dim();
  const int act_dim = probe->action_dim();
  probe.reset();

  Rng init_rng = master.spawn(0xA11CE);
  TrainResult result;
  result.params = PolicyParams::init(obs_dim, act_dim, cfg, init_rng);
  result.best_params = result.params;
  result.best_moving_average = -std::numeric_limits<double>::infinity();

  if (cfg.total_steps <= 0) return result;

  AdamOptimizer opt(result.params.parameter_count(), cfg.learning_rate);
  Rng update_rng = master.spawn(0xB0B);

  const int n_envs = cfg.num_envs;
  const int horizon_per_env = std::max(1, cfg.rollout_horizon / n_envs);

  struct WorkerState {
    std::unique_ptr<TrainEnv> env;
    Rng rng;
    Eigen::VectorXd obs;
    double episode_reward = 0.0;
    std::uint64_t episode_counter = 0;
  };
  std::vector<WorkerState> workers;
  for (int w = 0; w < n_envs; ++w) {
    WorkerState ws{factory(w), master.spawn(1000 + w), {}, 0.0, 0};
    ws.obs = ws.env->reset(Rng::seed_mix(cfg.seed, 7000 + w));
    workers.push_back(std::move(ws));
  }

  std::vector<double> recent_rewards;  // all finished episode rewards in order
  auto moving_avg40 = [&recent_rewards]() {
    const int n = static_cast<int>(recent_rewards.size());
    const int k = std::min(n, 40);
    if (k == 0) return 0.0;
    double s = 0.0;
    for (int i = n - k; i < n; ++i) s += recent_rewards[i];
    return s / k;
  };

  while (result.steps_collected < cfg.total_steps) {
    RolloutBuffer buffer;
    std::vector<WorkerRollout> rollouts(n_envs);

    auto run_worker = [&](int w) {
      WorkerState& ws = workers[w];
      WorkerRollout& ro = rollouts[w];
      ro.buffer.segment_starts.push_back(0);
      for (int t = 0; t < horizon_per_env; ++t) {
        const PolicyEval pe = policy_forward(result.params, ws.obs);
        const ActionSample as = sample_action(pe.mean, pe.log_std, ws.rng);
        auto [next_obs, reward, done] = ws.env->step(as.action);
        ro.buffer.obs.push_back(ws.obs);
        ro.buffer.actions.push_back(as.action);
        ro.buffer.log_probs.push_back(as.log_prob);
        ro.buffer.rewards.push_back(reward);
        ro.buffer.values.push_back(pe.value);
        ro.buffer.dones.push_back(done ? 1 : 0);
        ws.episode_reward += reward;
        if (done) {
          ro.finished_episode_rewards.push_back(ws.episode_reward);
          ws.episode_reward = 0.0;
          ++ws.episode_counter;
          ws.obs = ws.env->reset(
              Rng::seed_mix(cfg.seed, 7000 + w + 131 * ws.episode_counter));
        } else {
          ws.obs = next_obs;
        }
      }
      ro.last_obs = ws.obs;
      ro.last_done = ro.buffer.dones.back() != 0;
    };

    if (n_envs == 1) {
      run_worker(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(n_envs);
      for (int w = 0; w < n_envs; ++w) threads.emplace_back(run_worker, w);
      for (auto& th : threads) th.join();
    }

    // concatenate in fixed worker order for determinism
    for (int w = 0; w < n_envs; ++w) {
      WorkerRollout& ro = rollouts[w];
      const int base = buffer.size();
      buffer.segment_starts.push_back(base);
      buffer.obs.insert(buffer.obs.end(), ro.buffer.obs.begin(), ro.buffer.obs.end());
      buffer.actions.insert(buffer.actions.end(), ro.buffer.actions.begin(),
                            ro.buffer.actions.end());
      buffer.log_probs.insert(buffer.log_probs.end(), ro.buffer.log_probs.begin(),
                              ro.buffer.log_probs.end());
      buffer.rewards.insert(buffer.rewards.end(), ro.buffer.rewards.begin(),
                            ro.buffer.rewards.end());
      buffer.values.insert(buffer.values.end(), ro.buffer.values.begin(),
                           ro.buffer.values.end());
      buffer.dones.insert(buffer.dones.end(), ro.buffer.dones.begin(), ro.buffer.dones.end());
      const double bootstrap =
          ro.last_done ? 0.0 : policy_forward(result.params, ro.last_obs).value;
      buffer.bootstrap_values.push_back(bootstrap);
      for (double er : ro.finished_episode_rewards) {
        recent_rewards.push_back(er);
        EpisodeRecord rec;
        rec.episode = static_cast<int>(recent_rewards.size());
        rec.reward = er;
        rec.moving_average_40 = 0.0;  // filled below
        result.curve.push_back(rec);
        result.curve.back().moving_average_40 = moving_avg40();
      }
    }

    result.steps_collected += buffer.size();

    const UpdateDiagnostics diag = ppo_update(result.params, buffer, cfg, opt, update_rng);
    ++result.updates;
    if (diag.aborted) ++result.aborted_updates;

    const double ma = moving_avg40();
    if (!recent_rewards.empty() && ma > result.best_moving_average) {
      result.best_moving_average = ma;
      result.best_params = result.params;
    }
    if (progress) progress(result);
  }
  return result;
}

namespace {

json mlp_to_json(const Mlp& m) {
  json j;
  j["sizes"] = m.sizes();
  json layers = json::array();
  for (std::size_t l = 0; l < m.weights().size(); ++l) {
    json jl;
    std::vector<double> w(m.weights()[l].data(),
                          m.weights()[l].data() + m.weights()[l].size());
    std::vector<double> b(m.biases()[l].data(), m.biases()[l].data() + m.biases()[l].size());
    jl["w"] = w;  // column-major
    jl["b"] = b;
    layers.push_back(jl);
  }
  j["layers"] = layers;
  return j;
}

Mlp mlp_from_json(const json& j) {
  const std::vector<int> sizes = j.at("sizes").get<std::vector<int>>();
  Rng dummy(0);
  Mlp m(sizes, dummy);
  for (std::size_t l = 0; l < m.weights().size(); ++l) {
    const auto& jl = j.at("layers").at(l);
    const std::vector<double> w = jl.at("w").get<std::vector<double>>();
    const std::vector<double> b = jl.at("b").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != m.weights()[l].size() ||
        static_cast<Eigen::Index>(b.size()) != m.biases()[l].size()) {
      throw core::ParseError("checkpoint layer size mismatch");
    }
    std::copy(w.begin(), w.end(), m.weights()[l].data());
    std::copy(b.begin(), b.end(), m.biases()[l].data());
  }
  return m;
}

}  // namespace

std::string checkpoint_to_text(const PolicyParams& params, const PPOConfig& cfg,
                               long steps_collected) {
  json j;
  j["format_version"] = 1;
  j["steps_collected"] = steps_collected;
  j["actor_head"] = params.head == ActorHead::MeanLogStd ? "mean_logstd" : "separate";
  j["action_dim"] = params.action_dim;
  j["actor"] = mlp_to_json(params.actor);
  j["critic"] = mlp_to_json(params.critic);
  j["log_std"] = std::vector<double>(params.log_std.data(),
                                     params.log_std.data() + params.log_std.size());
  json jc;
  jc["learning_rate"] = cfg.learning_rate;
  jc["minibatch_size"] = cfg.minibatch_size;
  jc["gamma"] = cfg.gamma;
  jc["gae_lambda"] = cfg.gae_lambda;
  jc["entropy_coef"] = cfg.entropy_coef;
  jc["value_coef"] = cfg.value_coef;
  jc["max_grad_norm"] = cfg.max_grad_norm;
  jc["clip_ratio"] = cfg.clip_ratio;
  jc["rollout_horizon"] = cfg.rollout_horizon;
  jc["epochs_per_update"] = cfg.epochs_per_update;
  jc["total_steps"] = cfg.total_steps;
  jc["num_envs"] = cfg.num_envs;
  jc["hidden"] = cfg.hidden;
  jc["log_std_init"] = cfg.log_std_init;
  jc["seed"] = cfg.seed;
  j["config"] = jc;
  return j.dump(2);
}

void checkpoint_from_text(const std::string& text, PolicyParams& params, PPOConfig& cfg,
                          long& steps_collected) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw core::ParseError(std::string("checkpoint: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw core::ParseError("unsupported checkpoint format version");
    }
    steps_collected = j.at("steps_collected").get<long>();
    params.head = j.at("actor_head").get<std::string>() == "mean_logstd"
                      ? ActorHead::MeanLogStd
                      : ActorHead::SeparateLogStd;
    params.action_dim = j.at("action_dim").get<int>();
    params.actor = mlp_from_json(j.at("actor"));
    params.critic = mlp_from_json(j.at("critic"));
    const std::vector<double> ls = j.at("log_std").get<std::vector<double>>();
    params.log_std = Eigen::Map<const Eigen::VectorXd>(ls.data(),
                                                       static_cast<Eigen::Index>(ls.size()));
    const auto& jc = j.at("config");
    cfg.learning_rate = jc.at("learning_rate").get<double>();
    cfg.minibatch_size = jc.at("minibatch_size").get<int>();
    cfg.gamma = jc.at("gamma").get<double>();
    cfg.gae_lambda = jc.at("gae_lambda").get<double>();
    cfg.entropy_coef = jc.at("entropy_coef").get<double>();
    cfg.value_coef = jc.at("value_coef").get<double>();
    cfg.max_grad_norm = jc.at("max_grad_norm").get<double>();
    cfg.clip_ratio = jc.at("clip_ratio").get<double>();
    cfg.rollout_horizon = jc.at("rollout_horizon").get<int>();
    cfg.epochs_per_update = jc.at("epochs_per_update").get<int>();
    cfg.total_steps = jc.at("total_steps").get<long>();
    cfg.num_envs = jc.at("num_envs").get<int>();
    cfg.hidden = jc.at("hidden").get<int>();
    cfg.log_std_init = jc.at("log_std_init").get<double>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();
    cfg.actor_head = params.head;
  } catch (const json::exception& e) {
    throw core::ParseError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace gridattack::ppo
