#include "pdsc/agents/dql.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdsc/agents/policy_math.hpp"
#include "pdsc/common/seeding.hpp"
#include "pdsc/nn/batch_kernels.hpp"
#include "pdsc/nn/checkpoint.hpp"

namespace pdsc::agents {

using nn::Matrix;
using nn::Vector;

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

void ReplayBuffer::push(const Transition& t) {
    if (items_.size() < capacity_) {
        items_.push_back(t);
    } else {
        items_[next_] = t;
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, std::mt19937_64& rng) const {
    std::vector<const Transition*> out;
    if (items_.empty()) return out;
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(&items_[pick(rng)]);
    return out;
}

void ReplayBuffer::clear() {
    items_.clear();
    next_ = 0;
}

DqlAgent::DqlAgent(const AgentConfig& config, std::size_t observation_size)
    : Agent(config, observation_size), replay_(static_cast<std::size_t>(config.replay_capacity)) {
    if (config_.algorithm != Algorithm::DQL) throw ConfigError("DqlAgent requires algorithm DQL");
    std::vector<int> sizes{static_cast<int>(observation_size)};
    sizes.insert(sizes.end(), config_.hidden_layers.begin(), config_.hidden_layers.end());
    sizes.push_back(env::kActionCount);
    q_ = nn::Mlp::create(sizes, nn::Activation::Tanh, nn::Activation::Identity, derive_seed(config_.seed, {1}));
    target_ = q_;
    optimizer_ = nn::Optimizer(config_.optimizer, q_);
    rng_.seed(derive_seed(config_.seed, {3}));
}

double DqlAgent::epsilon() const {
    const double horizon = config_.epsilon_fraction * static_cast<double>(config_.exploration_steps);
    const double progress = std::min(1.0, static_cast<double>(training_steps_) / horizon);
    return config_.epsilon_start + (config_.epsilon_end - config_.epsilon_start) * progress;
}

Vector DqlAgent::q_values(const env::Observation& obs) const {
    check_observation(obs);
    return q_.forward(encode_observation(obs, config_));
}

env::Action DqlAgent::act(const env::Observation& obs, bool explore) {
    if (explore) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(rng_) < epsilon()) {
            std::uniform_int_distribution<int> pick(0, env::kActionCount - 1);
            return static_cast<env::Action>(pick(rng_));
        }
    }
    return greedy_action(obs);
}

env::Action DqlAgent::greedy_action(const env::Observation& obs) const {
    return static_cast<env::Action>(argmax(q_values(obs)));
}

void DqlAgent::observe(const Transition& transition) {
    check_observation(transition.state);
    check_observation(transition.next_state);
    replay_.push(transition);
    ++training_steps_;
    ++pending_;
}

bool DqlAgent::update_due() const {
    return training_steps_ >= static_cast<std::uint64_t>(config_.learning_starts) &&
           pending_ >= static_cast<std::uint64_t>(config_.train_frequency);
}

UpdateStats DqlAgent::update() {
    UpdateStats stats;
    if (replay_.size() == 0 || pending_ == 0) return stats;
    const std::uint64_t steps = std::max<std::uint64_t>(1, pending_ / static_cast<std::uint64_t>(config_.train_frequency));
    pending_ = 0;
    double loss = 0.0;
    for (std::uint64_t k = 0; k < steps; ++k) {
        const auto batch = replay_.sample(static_cast<std::size_t>(config_.batch_size), rng_);
        loss += dql_update(batch);
    }
    stats.updated = true;
    stats.critic_loss = loss / static_cast<double>(steps);
    return stats;
}

double DqlAgent::dql_update(std::span<const Transition* const> batch) {
    if (batch.empty()) throw nn::DimensionError("empty DQL batch");
    std::vector<const env::Observation*> states;
    std::vector<const env::Observation*> next_states;
    for (const auto* t : batch) {
        states.push_back(&t->state);
        next_states.push_back(&t->next_state);
    }
    const Matrix s = encode_batch(states, config_);
    const Matrix s_next = encode_batch(next_states, config_);
    const Matrix q = q_.forward_batch(s);
    const Matrix q_next = target_.forward_batch(s_next);

    const auto n = static_cast<Eigen::Index>(batch.size());
    Matrix out_grad = Matrix::Zero(q.rows(), n);
    double loss = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& t = *batch[static_cast<std::size_t>(j)];
        const int a = static_cast<int>(t.action);
        const double target = t.reward * config_.reward_scale + (t.done ? 0.0 : config_.gamma * q_next.col(j).maxCoeff());
        const double td = q(a, j) - target;
        loss += td * td;
        // Descent direction of mean squared error.
        out_grad(a, j) = -2.0 * td / static_cast<double>(n);
    }
    loss /= static_cast<double>(n);
    if (!std::isfinite(loss)) throw nn::DivergenceError("non-finite DQL loss");

    nn::Gradients direction = nn::parallel::batch_gradient(q_, s, out_grad);
    clip_norm(direction, config_.q_grad_clip);
    optimizer_.step(q_, direction, config_.q_lr);
    ++gradient_steps_;
    if (training_steps_ - last_sync_ >= static_cast<std::uint64_t>(config_.target_sync)) sync_target();
    return loss;
}

void DqlAgent::sync_target() {
    target_ = q_;
    last_sync_ = training_steps_;
}

std::unique_ptr<Agent> DqlAgent::clone() const { return std::make_unique<DqlAgent>(*this); }

std::vector<double> DqlAgent::parameters() const { return q_.flatten(); }

void DqlAgent::write_payload(BinaryWriter& out) const {
    nn::write_mlp(out, q_);
    nn::write_mlp(out, target_);
    optimizer_.write(out);
    out.write_u64(pending_);
    out.write_u64(gradient_steps_);
    out.write_u64(last_sync_);
    std::ostringstream rng_state;
    rng_state << rng_;
    out.write_string(rng_state.str());
}

void DqlAgent::read_payload(BinaryReader& in) {
    nn::Mlp q = nn::read_mlp(in);
    nn::Mlp target = nn::read_mlp(in);
    if (q.parameter_count() != q_.parameter_count() || target.parameter_count() != q_.parameter_count() ||
        q.input_size() != q_.input_size()) {
        throw ShapeMismatchError("stored Q network does not match the configured architecture");
    }
    q_ = std::move(q);
    target_ = std::move(target);
    optimizer_.read(in);
    pending_ = in.read_u64();
    gradient_steps_ = in.read_u64();
    last_sync_ = in.read_u64();
    std::istringstream rng_state(in.read_string());
    rng_state >> rng_;
    if (!rng_state) throw FormatError("corrupt random-stream state");
}

}  // namespace pdsc::agents
