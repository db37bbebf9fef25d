#pragma once

#include <vector>

#include "pdsc/nn/mlp.hpp"

namespace pdsc::agents {

nn::Vector softmax(const nn::Vector& logits);
// Column-wise softmax and log-softmax, numerically stabilized by the column max.
nn::Matrix softmax_columns(const nn::Matrix& logits);
nn::Matrix log_softmax_columns(const nn::Matrix& logits);

// Lowest index wins ties.
int argmax(const nn::Vector& values);

// A = r + gamma * v_next - v_now, with no bootstrap at a terminal step.
double compute_advantage(double reward, double v_next, double v_now, double gamma, bool done);

// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)
double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon);

// Inputs of a policy-gradient objective; states are encoded, one sample per column.
struct PolicyBatch {
    nn::Matrix states;
    std::vector<int> actions;
    nn::Vector advantages;
    nn::Vector old_log_probs;  // used by the clipped objective only
};

// mean[log pi(a|s) A] + entropy_coef * mean[H(pi(.|s))]
double policy_gradient_objective(const nn::Mlp& actor, const PolicyBatch& batch, double entropy_coef);
// d objective / d logits, one column per sample (already divided by the batch size).
nn::Matrix policy_gradient_logit_grad(const nn::Matrix& logits, const PolicyBatch& batch, double entropy_coef);
nn::Gradients policy_gradient(const nn::Mlp& actor, const PolicyBatch& batch, double entropy_coef);

// mean[min(r A, clip(r) A)] + entropy_coef * mean[H], r = exp(log pi - old_log_prob).
double clipped_objective(const nn::Mlp& actor, const PolicyBatch& batch, double clip_epsilon, double entropy_coef);
nn::Matrix clipped_logit_grad(const nn::Matrix& logits, const PolicyBatch& batch, double clip_epsilon,
                              double entropy_coef);
nn::Gradients clipped_gradient(const nn::Mlp& actor, const PolicyBatch& batch, double clip_epsilon,
                               double entropy_coef);

// 0.5 * mean[(V(s) - target)^2] and its descent direction (negative gradient).
double value_loss(const nn::Mlp& critic, const nn::Matrix& states, const nn::Vector& targets);
nn::Gradients value_descent_direction(const nn::Mlp& critic, const nn::Matrix& states, const nn::Vector& targets);

// Rescales `g` in place so its norm is at most max_norm (no-op when max_norm <= 0).
void clip_norm(nn::Gradients& g, double max_norm);

}  // namespace pdsc::agents
