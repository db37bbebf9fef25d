#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "pdsc/nn/mlp.hpp"

namespace pdsc::nn {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Separate: biases preconditioned by the S factor alone.
// Augmented: activations extended with a constant 1 so A carries the bias column.
enum class BiasMode : std::uint8_t { Separate, Augmented };

std::string_view to_string(BiasMode m);
BiasMode parse_bias_mode(std::string_view text);

struct KfacFactors {
    Matrix a;  // in x in (in+1 when augmented), running E[a a^T]
    Matrix s;  // out x out, running E[dL/ds dL/ds^T]
};

// Per-layer Kronecker factors of the Fisher block F_l ~ A (x) S.
class KfacStats {
public:
    KfacStats() = default;

    // Factors start at identity.
    static KfacStats for_network(const Mlp& net, double damping, double decay, BiasMode mode = BiasMode::Separate);

    // A <- decay A + (1-decay) mean(a a^T); S likewise from per-sample dL/ds columns.
    void update(const ForwardCache& cache, const std::vector<Matrix>& preactivation_grads);

    // Per layer: (S + damping I)^-1 G (A + damping I)^-1.
    Gradients precondition(const Gradients& grads) const;

    std::vector<KfacFactors>& layers() { return layers_; }
    const std::vector<KfacFactors>& layers() const { return layers_; }
    double damping() const { return damping_; }
    double decay() const { return decay_; }
    BiasMode bias_mode() const { return bias_mode_; }
    void set_damping(double d) { damping_ = d; }

private:
    std::vector<KfacFactors> layers_;
    double damping_ = 1e-2;
    double decay_ = 0.95;
    BiasMode bias_mode_ = BiasMode::Separate;
};

// Applies (factor + damping I)^-1 to `rhs` via Cholesky; throws NumericalError when the
// damped factor is not positive definite.
Matrix damped_solve(const Matrix& factor, double damping, const Matrix& rhs);

}  // namespace pdsc::nn
