#include "pdsc/nn/kfac.hpp"

#include <string>

#include "pdsc/nn/batch_kernels.hpp"

namespace pdsc::nn {

std::string_view to_string(BiasMode m) { return m == BiasMode::Separate ? "separate" : "augmented"; }

BiasMode parse_bias_mode(std::string_view text) {
    if (text == "separate") return BiasMode::Separate;
    if (text == "augmented") return BiasMode::Augmented;
    throw std::invalid_argument("unknown K-FAC bias mode '" + std::string(text) + "'");
}

KfacStats KfacStats::for_network(const Mlp& net, double damping, double decay, BiasMode mode) {
    if (damping < 0.0) throw std::invalid_argument("K-FAC damping must be non-negative");
    if (!(decay >= 0.0 && decay <= 1.0)) throw std::invalid_argument("K-FAC decay must lie in [0,1]");
    KfacStats stats;
    stats.damping_ = damping;
    stats.decay_ = decay;
    stats.bias_mode_ = mode;
    for (const auto& layer : net.layers()) {
        const Eigen::Index in = layer.weight.cols() + (mode == BiasMode::Augmented ? 1 : 0);
        const Eigen::Index out = layer.weight.rows();
        stats.layers_.push_back({Matrix::Identity(in, in), Matrix::Identity(out, out)});
    }
    return stats;
}

void KfacStats::update(const ForwardCache& cache, const std::vector<Matrix>& preactivation_grads) {
    if (cache.inputs.size() != layers_.size() || preactivation_grads.size() != layers_.size()) {
        throw DimensionError("K-FAC update: cache does not match tracked layers");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        OuterProductMeans means;
        if (bias_mode_ == BiasMode::Augmented) {
            Matrix augmented(cache.inputs[l].rows() + 1, cache.inputs[l].cols());
            augmented.topRows(cache.inputs[l].rows()) = cache.inputs[l];
            augmented.bottomRows(1).setOnes();
            means = parallel::outer_product_means(augmented, preactivation_grads[l]);
        } else {
            means = parallel::outer_product_means(cache.inputs[l], preactivation_grads[l]);
        }
        auto& f = layers_[l];
        if (means.a.rows() != f.a.rows() || means.g.rows() != f.s.rows()) {
            throw DimensionError("K-FAC update: layer " + std::to_string(l) + " shape mismatch");
        }
        f.a = decay_ * f.a + (1.0 - decay_) * means.a;
        f.s = decay_ * f.s + (1.0 - decay_) * means.g;
        // Keep exact symmetry against rounding drift.
        f.a = 0.5 * (f.a + f.a.transpose()).eval();
        f.s = 0.5 * (f.s + f.s.transpose()).eval();
    }
}

Matrix damped_solve(const Matrix& factor, double damping, const Matrix& rhs) {
    Matrix damped = factor;
    damped.diagonal().array() += damping;
    Eigen::LLT<Matrix> llt(damped);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("K-FAC factor is not positive definite (damping " + std::to_string(damping) + ")");
    }
    return llt.solve(rhs);
}

Gradients KfacStats::precondition(const Gradients& grads) const {
    if (grads.layers.size() != layers_.size()) throw DimensionError("K-FAC precondition: layer count mismatch");
    Gradients out = grads;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& f = layers_[l];
        const auto& g = grads.layers[l];
        if (bias_mode_ == BiasMode::Augmented) {
            Matrix joined(g.weight.rows(), g.weight.cols() + 1);
            joined.leftCols(g.weight.cols()) = g.weight;
            joined.rightCols(1) = g.bias;
            // (S^-1 G) A^-1 = (A^-1 (S^-1 G)^T)^T since A is symmetric.
            const Matrix left = damped_solve(f.s, damping_, joined);
            const Matrix result = damped_solve(f.a, damping_, left.transpose()).transpose();
            out.layers[l].weight = result.leftCols(g.weight.cols());
            out.layers[l].bias = result.rightCols(1);
        } else {
            const Matrix left = damped_solve(f.s, damping_, g.weight);
            out.layers[l].weight = damped_solve(f.a, damping_, left.transpose()).transpose();
            out.layers[l].bias = damped_solve(f.s, damping_, g.bias);
        }
    }
    return out;
}

}  // namespace pdsc::nn
