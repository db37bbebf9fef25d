#include "pdsc/agents/policy_math.hpp"

#include <algorithm>
#include <cmath>

#include "pdsc/nn/batch_kernels.hpp"

namespace pdsc::agents {

using nn::Matrix;
using nn::Vector;

Vector softmax(const Vector& logits) {
    const Vector shifted = (logits.array() - logits.maxCoeff()).matrix();
    const Vector e = shifted.array().exp().matrix();
    return e / e.sum();
}

Matrix softmax_columns(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) out.col(j) = softmax(logits.col(j));
    return out;
}

Matrix log_softmax_columns(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const double m = logits.col(j).maxCoeff();
        const double lse = m + std::log((logits.col(j).array() - m).exp().sum());
        out.col(j) = (logits.col(j).array() - lse).matrix();
    }
    return out;
}

int argmax(const Vector& values) {
    int best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values(i) > values(best)) best = static_cast<int>(i);
    }
    return best;
}

double compute_advantage(double reward, double v_next, double v_now, double gamma, bool done) {
    return reward + (done ? 0.0 : gamma * v_next) - v_now;
}

double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon) {
    const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

namespace {

void check_batch(const Matrix& logits, const PolicyBatch& batch) {
    const auto n = static_cast<std::size_t>(logits.cols());
    if (n == 0 || batch.actions.size() != n || static_cast<std::size_t>(batch.advantages.size()) != n) {
        throw nn::DimensionError("policy batch is empty or inconsistent");
    }
}

double mean_entropy(const Matrix& probs, const Matrix& logp) {
    return -(probs.array() * logp.array()).sum() / static_cast<double>(probs.cols());
}

// d H / d logits for one column: -p_j (log p_j + H).
void add_entropy_grad(Matrix& grad, const Matrix& probs, const Matrix& logp, double weight) {
    if (weight == 0.0) return;
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
        const double h = -(probs.col(j).array() * logp.col(j).array()).sum();
        grad.col(j).array() += weight * (-probs.col(j).array() * (logp.col(j).array() + h));
    }
}

}  // namespace

double policy_gradient_objective(const nn::Mlp& actor, const PolicyBatch& batch, double entropy_coef) {
    const Matrix logits = actor.forward_batch(batch.states);
    check_batch(logits, batch);
    const Matrix logp = log_softmax_columns(logits);
    double total = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        total += logp(batch.actions[static_cast<std::size_t>(j)], j) * batch.advantages(j);
    }
    const double n = static_cast<double>(logits.cols());
    double objective = total / n;
    if (entropy_coef != 0.0) objective += entropy_coef * mean_entropy(logp.array().exp().matrix(), logp);
    return objective;
}

Matrix policy_gradient_logit_grad(const Matrix& logits, const PolicyBatch& batch, double entropy_coef) {
    check_batch(logits, batch);
    const Matrix logp = log_softmax_columns(logits);
    const Matrix probs = logp.array().exp().matrix();
    const double n = static_cast<double>(logits.cols());
    Matrix grad(logits.rows(), logits.cols());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const double a = batch.advantages(j);
        grad.col(j) = -a * probs.col(j);
        grad(batch.actions[static_cast<std::size_t>(j)], j) += a;
    }
    add_entropy_grad(grad, probs, logp, entropy_coef);
    return grad / n;
}

nn::Gradients policy_gradient(const nn::Mlp& actor, const PolicyBatch& batch, double entropy_coef) {
    const Matrix logits = actor.forward_batch(batch.states);
    return nn::parallel::batch_gradient(actor, batch.states, policy_gradient_logit_grad(logits, batch, entropy_coef));
}

double clipped_objective(const nn::Mlp& actor, const PolicyBatch& batch, double clip_epsilon, double entropy_coef) {
    const Matrix logits = actor.forward_batch(batch.states);
    check_batch(logits, batch);
    const Matrix logp = log_softmax_columns(logits);
    double total = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const double ratio = std::exp(logp(batch.actions[static_cast<std::size_t>(j)], j) - batch.old_log_probs(j));
        total += clipped_surrogate_term(ratio, batch.advantages(j), clip_epsilon);
    }
    const double n = static_cast<double>(logits.cols());
    double objective = total / n;
    if (entropy_coef != 0.0) objective += entropy_coef * mean_entropy(logp.array().exp().matrix(), logp);
    return objective;
}

Matrix clipped_logit_grad(const Matrix& logits, const PolicyBatch& batch, double clip_epsilon, double entropy_coef) {
    check_batch(logits, batch);
    if (static_cast<Eigen::Index>(batch.old_log_probs.size()) != logits.cols()) {
        throw nn::DimensionError("clipped objective needs one old log-probability per sample");
    }
    const Matrix logp = log_softmax_columns(logits);
    const Matrix probs = logp.array().exp().matrix();
    const double n = static_cast<double>(logits.cols());
    Matrix grad = Matrix::Zero(logits.rows(), logits.cols());
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const int action = batch.actions[static_cast<std::size_t>(j)];
        const double adv = batch.advantages(j);
        const double ratio = std::exp(logp(action, j) - batch.old_log_probs(j));
        const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
        // The unclipped branch carries the gradient whenever it attains the min; otherwise the
        // clipped branch is active and constant in theta.
        if (ratio * adv <= clipped * adv) {
            grad.col(j) = -ratio * adv * probs.col(j);
            grad(action, j) += ratio * adv;
        }
    }
    add_entropy_grad(grad, probs, logp, entropy_coef);
    return grad / n;
}

nn::Gradients clipped_gradient(const nn::Mlp& actor, const PolicyBatch& batch, double clip_epsilon,
                               double entropy_coef) {
    const Matrix logits = actor.forward_batch(batch.states);
    return nn::parallel::batch_gradient(actor, batch.states,
                                        clipped_logit_grad(logits, batch, clip_epsilon, entropy_coef));
}

double value_loss(const nn::Mlp& critic, const Matrix& states, const Vector& targets) {
    const Matrix v = critic.forward_batch(states);
    return 0.5 * (v.row(0).transpose() - targets).squaredNorm() / static_cast<double>(targets.size());
}

nn::Gradients value_descent_direction(const nn::Mlp& critic, const Matrix& states, const Vector& targets) {
    const Matrix v = critic.forward_batch(states);
    const Matrix out_grad = -(v.row(0) - targets.transpose()) / static_cast<double>(targets.size());
    return nn::parallel::batch_gradient(critic, states, out_grad);
}

void clip_norm(nn::Gradients& g, double max_norm) {
    if (max_norm <= 0.0) return;
    const double norm = std::sqrt(g.squared_norm());
    if (norm > max_norm) g *= max_norm / norm;
}

}  // namespace pdsc::agents
