#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pdsc::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation : std::uint8_t { Tanh, Relu, Identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Layer {
    Matrix weight;  // out x in
    Vector bias;    // out
    Activation activation = Activation::Identity;
};

// Batches are column-major: one sample per column.
struct ForwardCache {
    std::vector<Matrix> inputs;          // a_l: layer input, in_l x batch
    std::vector<Matrix> preactivations;  // s_l = W a_l + b, out_l x batch
    Matrix output;

    Eigen::Index batch_size() const { return output.cols(); }
};

struct LayerGradient {
    Matrix weight;
    Vector bias;
};

class Mlp;

struct Gradients {
    std::vector<LayerGradient> layers;

    static Gradients zeros_like(const Mlp& net);

    Gradients& operator+=(const Gradients& other);
    Gradients& operator*=(double scale);
    double squared_norm() const;
    bool all_finite() const;
    bool same_shape(const Mlp& net) const;
    std::vector<double> flatten() const;
    static Gradients unflatten(const Mlp& shape, std::span<const double> flat);
};

struct BackwardResult {
    Gradients gradients;
    // dL/ds per layer, out_l x batch (per-sample columns).
    std::vector<Matrix> preactivation_grads;
};

class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<Layer> layers, std::uint64_t seed = 0);

    // sizes = {in, hidden..., out}. Weights ~ U(-g/sqrt(fan_in), g/sqrt(fan_in)), biases zero.
    static Mlp create(std::span<const int> sizes, Activation hidden, Activation output, std::uint64_t seed,
                      double output_gain = 1.0);

    Vector forward(const Vector& input) const;
    Matrix forward_batch(const Matrix& batch) const;
    ForwardCache forward_cached(const Matrix& batch) const;

    // Gradients summed over the batch columns of `output_grad` (dL/d output).
    Gradients backward(const ForwardCache& cache, const Matrix& output_grad) const;
    BackwardResult backward_full(const ForwardCache& cache, const Matrix& output_grad) const;

    // W += scale * direction.
    void apply(const Gradients& direction, double scale);

    // Layer by layer: weight in row-major order, then bias.
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

    std::size_t parameter_count() const;
    Eigen::Index input_size() const;
    Eigen::Index output_size() const;
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& mutable_layers() { return layers_; }
    std::uint64_t seed() const { return seed_; }

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    std::vector<Layer> layers_;
    std::uint64_t seed_ = 0;
};

Matrix activate(Activation a, const Matrix& s);

}  // namespace pdsc::nn
