#include "pdsc/agents/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pdsc/common/seeding.hpp"
#include "pdsc/nn/checkpoint.hpp"

namespace pdsc::agents {

using nn::Matrix;
using nn::Vector;

namespace {

std::vector<int> layer_sizes(std::size_t in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{static_cast<int>(in)};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

void write_matrix(BinaryWriter& out, const Matrix& m) {
    out.write_u32(static_cast<std::uint32_t>(m.rows()));
    out.write_u32(static_cast<std::uint32_t>(m.cols()));
    out.write_f64s(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

Matrix read_matrix(BinaryReader& in, Eigen::Index rows, Eigen::Index cols) {
    const auto r = in.read_u32();
    const auto c = in.read_u32();
    if (r != rows || c != cols) throw ShapeMismatchError("stored curvature factor has unexpected shape");
    const auto values = in.read_f64s(static_cast<std::size_t>(r) * c);
    return Eigen::Map<const Matrix>(values.data(), r, c);
}

void write_stats(BinaryWriter& out, const nn::KfacStats& stats) {
    out.write_u32(static_cast<std::uint32_t>(stats.layers().size()));
    for (const auto& f : stats.layers()) {
        write_matrix(out, f.a);
        write_matrix(out, f.s);
    }
}

void read_stats(BinaryReader& in, nn::KfacStats& stats) {
    const auto n = in.read_u32();
    if (n != stats.layers().size()) throw ShapeMismatchError("stored curvature layer count mismatch");
    for (auto& f : stats.layers()) {
        f.a = read_matrix(in, f.a.rows(), f.a.cols());
        f.s = read_matrix(in, f.s.rows(), f.s.cols());
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw nn::DivergenceError(std::string("non-finite ") + what);
}

PolicyBatch select_columns(const PolicyBatch& batch, std::span<const int> idx) {
    PolicyBatch sub;
    sub.states.resize(batch.states.rows(), static_cast<Eigen::Index>(idx.size()));
    sub.advantages.resize(static_cast<Eigen::Index>(idx.size()));
    sub.old_log_probs.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto j = static_cast<Eigen::Index>(k);
        sub.states.col(j) = batch.states.col(idx[k]);
        sub.actions.push_back(batch.actions[static_cast<std::size_t>(idx[k])]);
        sub.advantages(j) = batch.advantages(idx[k]);
        sub.old_log_probs(j) = batch.old_log_probs(idx[k]);
    }
    return sub;
}

}  // namespace

ActorCriticAgent::ActorCriticAgent(const AgentConfig& config, std::size_t observation_size)
    : Agent(config, observation_size) {
    const auto a = config_.algorithm;
    if (a != Algorithm::A2C && a != Algorithm::PPO && a != Algorithm::ACKTR) {
        throw ConfigError("ActorCriticAgent supports A2C, PPO and ACKTR only");
    }
    const auto actor_sizes = layer_sizes(observation_size, config_.hidden_layers, env::kActionCount);
    const auto critic_sizes = layer_sizes(observation_size, config_.hidden_layers, 1);
    actor_ = nn::Mlp::create(actor_sizes, nn::Activation::Tanh, nn::Activation::Identity,
                             derive_seed(config_.seed, {1}));
    critic_ = nn::Mlp::create(critic_sizes, nn::Activation::Tanh, nn::Activation::Identity,
                              derive_seed(config_.seed, {2}));
    const auto kind = a == Algorithm::ACKTR ? nn::OptimizerKind::Sgd : config_.optimizer;
    actor_opt_ = nn::Optimizer(kind, actor_);
    critic_opt_ = nn::Optimizer(kind, critic_);
    if (a == Algorithm::ACKTR) {
        actor_stats_ = nn::KfacStats::for_network(actor_, config_.kfac_damping, config_.kfac_decay, config_.kfac_bias);
        critic_stats_ =
            nn::KfacStats::for_network(critic_, config_.kfac_damping, config_.kfac_decay, config_.kfac_bias);
    }
    rng_.seed(derive_seed(config_.seed, {3}));
}

Vector ActorCriticAgent::action_probabilities(const env::Observation& obs) const {
    check_observation(obs);
    return softmax(actor_.forward(encode_observation(obs, config_)));
}

double ActorCriticAgent::value(const env::Observation& obs) const {
    check_observation(obs);
    return critic_.forward(encode_observation(obs, config_))(0);
}

env::Action ActorCriticAgent::act(const env::Observation& obs, bool explore) {
    if (!explore) return greedy_action(obs);
    const Vector p = action_probabilities(obs);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng_) < p(0) ? env::Action::Keep : env::Action::Switch;
}

env::Action ActorCriticAgent::greedy_action(const env::Observation& obs) const {
    return static_cast<env::Action>(argmax(action_probabilities(obs)));
}

void ActorCriticAgent::observe(const Transition& transition) {
    buffer_.push_back(transition);
    ++training_steps_;
}

bool ActorCriticAgent::update_due() const {
    return buffer_.size() >= static_cast<std::size_t>(config_.rollout_length);
}

UpdateStats ActorCriticAgent::update() {
    if (buffer_.empty()) return {};
    UpdateStats stats;
    switch (config_.algorithm) {
        case Algorithm::A2C: stats = a2c_update(buffer_); break;
        case Algorithm::PPO: stats = ppo_update(buffer_); break;
        case Algorithm::ACKTR: stats = acktr_update(buffer_); break;
        default: break;
    }
    buffer_.clear();
    return stats;
}

PreparedRollout ActorCriticAgent::prepare_rollout(std::span<const Transition> rollout) const {
    if (rollout.empty()) throw nn::DimensionError("empty rollout");
    std::vector<const env::Observation*> states;
    std::vector<const env::Observation*> next_states;
    for (const auto& t : rollout) {
        check_observation(t.state);
        check_observation(t.next_state);
        states.push_back(&t.state);
        next_states.push_back(&t.next_state);
    }
    PreparedRollout p;
    p.policy.states = encode_batch(states, config_);
    const Matrix next = encode_batch(next_states, config_);
    p.values = critic_.forward_batch(p.policy.states).row(0).transpose();
    const Vector next_values = critic_.forward_batch(next).row(0).transpose();
    const Matrix logp = log_softmax_columns(actor_.forward_batch(p.policy.states));

    const auto n = static_cast<Eigen::Index>(rollout.size());
    p.critic_targets.resize(n);
    p.policy.advantages.resize(n);
    p.policy.old_log_probs.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& t = rollout[static_cast<std::size_t>(j)];
        require_finite(t.reward, "reward");
        const double r = t.reward * config_.reward_scale;
        const int action = static_cast<int>(t.action);
        p.policy.actions.push_back(action);
        p.critic_targets(j) = r + (t.done ? 0.0 : config_.gamma * next_values(j));
        p.policy.advantages(j) = compute_advantage(r, next_values(j), p.values(j), config_.gamma, t.done);
        p.policy.old_log_probs(j) = logp(action, j);
    }
    return p;
}

UpdateStats ActorCriticAgent::apply_a2c(const PreparedRollout& p) {
    UpdateStats stats;
    stats.updated = true;
    stats.actor_loss = -policy_gradient_objective(actor_, p.policy, 0.0);
    stats.critic_loss = value_loss(critic_, p.policy.states, p.critic_targets);
    require_finite(stats.actor_loss, "actor loss");
    require_finite(stats.critic_loss, "critic loss");

    nn::Gradients actor_dir = policy_gradient(actor_, p.policy, config_.entropy_coef);
    clip_norm(actor_dir, config_.max_grad_norm);
    nn::Gradients critic_dir = value_descent_direction(critic_, p.policy.states, p.critic_targets);
    clip_norm(critic_dir, config_.max_grad_norm);
    actor_opt_.step(actor_, actor_dir, config_.actor_lr);
    critic_opt_.step(critic_, critic_dir, config_.critic_lr);
    return stats;
}

UpdateStats ActorCriticAgent::apply_ppo(const PreparedRollout& p) {
    UpdateStats stats;
    stats.updated = true;
    const int n = static_cast<int>(p.policy.actions.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const int mb = std::min(config_.ppo_minibatch, n);
    int batches = 0;
    for (int epoch = 0; epoch < config_.ppo_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng_);
        for (int start = 0; start < n; start += mb) {
            const int width = std::min(mb, n - start);
            const std::span<const int> idx(order.data() + start, static_cast<std::size_t>(width));
            const PolicyBatch sub = select_columns(p.policy, idx);
            Vector targets(width);
            for (int k = 0; k < width; ++k) targets(k) = p.critic_targets(idx[static_cast<std::size_t>(k)]);

            const double actor_loss = -clipped_objective(actor_, sub, config_.clip_epsilon, 0.0);
            const double critic_loss = value_loss(critic_, sub.states, targets);
            require_finite(actor_loss, "actor loss");
            require_finite(critic_loss, "critic loss");
            stats.actor_loss += actor_loss;
            stats.critic_loss += critic_loss;
            ++batches;

            nn::Gradients actor_dir = clipped_gradient(actor_, sub, config_.clip_epsilon, config_.entropy_coef);
            clip_norm(actor_dir, config_.max_grad_norm);
            nn::Gradients critic_dir = value_descent_direction(critic_, sub.states, targets);
            clip_norm(critic_dir, config_.max_grad_norm);
            actor_opt_.step(actor_, actor_dir, config_.actor_lr);
            critic_opt_.step(critic_, critic_dir, config_.critic_lr);
        }
    }
    stats.actor_loss /= batches;
    stats.critic_loss /= batches;
    return stats;
}

void ActorCriticAgent::refresh_curvature(const PreparedRollout& p) {
    const auto n = p.policy.states.cols();
    {
        const nn::ForwardCache cache = actor_.forward_cached(p.policy.states);
        const Matrix probs = softmax_columns(cache.output);
        // Fisher of the policy: score of an action sampled from the current policy.
        Matrix out_grad = -probs;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double draw = u(rng_);
            double acc = 0.0;
            Eigen::Index sampled = probs.rows() - 1;
            for (Eigen::Index k = 0; k < probs.rows(); ++k) {
                acc += probs(k, j);
                if (draw < acc) {
                    sampled = k;
                    break;
                }
            }
            out_grad(sampled, j) += 1.0;
        }
        const nn::BackwardResult back = actor_.backward_full(cache, out_grad);
        actor_stats_.update(cache, back.preactivation_grads);
    }
    {
        const nn::ForwardCache cache = critic_.forward_cached(p.policy.states);
        // Unit-variance Gaussian value distribution: score is a standard normal draw.
        std::normal_distribution<double> noise(0.0, 1.0);
        Matrix out_grad(1, n);
        for (Eigen::Index j = 0; j < n; ++j) out_grad(0, j) = noise(rng_);
        const nn::BackwardResult back = critic_.backward_full(cache, out_grad);
        critic_stats_.update(cache, back.preactivation_grads);
    }
}

void ActorCriticAgent::apply_natural_step(nn::Mlp& net, const nn::KfacStats& stats, nn::Gradients direction,
                                          double lr) {
    const nn::Gradients natural = stats.precondition(direction);
    if (!natural.all_finite()) throw nn::DivergenceError("non-finite natural-gradient direction");
    const double norm = std::sqrt(natural.squared_norm());
    double scale = lr;
    if (lr * norm > config_.max_step_norm) scale = norm > 0.0 ? config_.max_step_norm / norm : 0.0;
    nn::optimizer_step(net, natural, scale);
}

UpdateStats ActorCriticAgent::apply_acktr(const PreparedRollout& p) {
    UpdateStats stats;
    stats.updated = true;
    stats.actor_loss = -policy_gradient_objective(actor_, p.policy, 0.0);
    stats.critic_loss = value_loss(critic_, p.policy.states, p.critic_targets);
    require_finite(stats.actor_loss, "actor loss");
    require_finite(stats.critic_loss, "critic loss");

    if (!fixed_curvature_) refresh_curvature(p);
    nn::Gradients actor_dir = policy_gradient(actor_, p.policy, config_.entropy_coef);
    nn::Gradients critic_dir = value_descent_direction(critic_, p.policy.states, p.critic_targets);
    apply_natural_step(actor_, actor_stats_, std::move(actor_dir), config_.actor_lr);
    apply_natural_step(critic_, critic_stats_, std::move(critic_dir), config_.critic_lr);
    return stats;
}

UpdateStats ActorCriticAgent::a2c_update(std::span<const Transition> rollout) {
    return apply_a2c(prepare_rollout(rollout));
}

UpdateStats ActorCriticAgent::ppo_update(std::span<const Transition> rollout) {
    return apply_ppo(prepare_rollout(rollout));
}

UpdateStats ActorCriticAgent::acktr_update(std::span<const Transition> rollout) {
    return apply_acktr(prepare_rollout(rollout));
}

void ActorCriticAgent::set_fixed_curvature(nn::KfacStats actor, nn::KfacStats critic) {
    if (actor.layers().size() != actor_.layers().size() || critic.layers().size() != critic_.layers().size()) {
        throw nn::DimensionError("curvature factors do not match the networks");
    }
    actor_stats_ = std::move(actor);
    critic_stats_ = std::move(critic);
    fixed_curvature_ = true;
}

std::unique_ptr<Agent> ActorCriticAgent::clone() const { return std::make_unique<ActorCriticAgent>(*this); }

std::vector<double> ActorCriticAgent::parameters() const {
    std::vector<double> out = actor_.flatten();
    const auto c = critic_.flatten();
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

void ActorCriticAgent::write_payload(BinaryWriter& out) const {
    nn::write_mlp(out, actor_);
    nn::write_mlp(out, critic_);
    actor_opt_.write(out);
    critic_opt_.write(out);
    out.write_u8(fixed_curvature_ ? 1 : 0);
    write_stats(out, actor_stats_);
    write_stats(out, critic_stats_);
    std::ostringstream rng_state;
    rng_state << rng_;
    out.write_string(rng_state.str());
}

void ActorCriticAgent::read_payload(BinaryReader& in) {
    nn::Mlp actor = nn::read_mlp(in);
    nn::Mlp critic = nn::read_mlp(in);
    auto same_shape = [](const nn::Mlp& a, const nn::Mlp& b) {
        if (a.layers().size() != b.layers().size()) return false;
        for (std::size_t i = 0; i < a.layers().size(); ++i) {
            if (a.layers()[i].weight.rows() != b.layers()[i].weight.rows() ||
                a.layers()[i].weight.cols() != b.layers()[i].weight.cols()) {
                return false;
            }
        }
        return true;
    };
    if (!same_shape(actor, actor_) || !same_shape(critic, critic_)) {
        throw ShapeMismatchError("stored networks do not match the configured architecture");
    }
    actor_ = std::move(actor);
    critic_ = std::move(critic);
    actor_opt_.read(in);
    critic_opt_.read(in);
    fixed_curvature_ = in.read_u8() != 0;
    read_stats(in, actor_stats_);
    read_stats(in, critic_stats_);
    std::istringstream rng_state(in.read_string());
    rng_state >> rng_;
    if (!rng_state) throw FormatError("corrupt random-stream state");
}

}  // namespace pdsc::agents
