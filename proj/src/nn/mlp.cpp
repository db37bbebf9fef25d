#include "pdsc/nn/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

namespace pdsc::nn {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "?";
}

Activation parse_activation(std::string_view name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

Matrix activate(Activation a, const Matrix& s) {
    switch (a) {
        case Activation::Tanh: return s.array().tanh().matrix();
        case Activation::Relu: return s.cwiseMax(0.0);
        case Activation::Identity: return s;
    }
    return s;
}

namespace {

// d activation / d s, expressed through s and the activated value y.
Matrix activation_derivative(Activation a, const Matrix& s, const Matrix& y) {
    switch (a) {
        case Activation::Tanh: return (1.0 - y.array().square()).matrix();
        case Activation::Relu: return (s.array() > 0.0).cast<double>().matrix();
        case Activation::Identity: return Matrix::Ones(s.rows(), s.cols());
    }
    return Matrix::Ones(s.rows(), s.cols());
}

}  // namespace

Gradients Gradients::zeros_like(const Mlp& net) {
    Gradients g;
    g.layers.reserve(net.layers().size());
    for (const auto& layer : net.layers()) {
        g.layers.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()), Vector::Zero(layer.bias.size())});
    }
    return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
    if (other.layers.size() != layers.size()) throw DimensionError("gradient layer count mismatch");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        layers[i].weight += other.layers[i].weight;
        layers[i].bias += other.layers[i].bias;
    }
    return *this;
}

Gradients& Gradients::operator*=(double scale) {
    for (auto& l : layers) {
        l.weight *= scale;
        l.bias *= scale;
    }
    return *this;
}

double Gradients::squared_norm() const {
    double total = 0.0;
    for (const auto& l : layers) total += l.weight.squaredNorm() + l.bias.squaredNorm();
    return total;
}

bool Gradients::all_finite() const {
    for (const auto& l : layers) {
        if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
}

bool Gradients::same_shape(const Mlp& net) const {
    if (layers.size() != net.layers().size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& w = net.layers()[i].weight;
        if (layers[i].weight.rows() != w.rows() || layers[i].weight.cols() != w.cols() ||
            layers[i].bias.size() != w.rows()) {
            return false;
        }
    }
    return true;
}

std::vector<double> Gradients::flatten() const {
    std::vector<double> flat;
    for (const auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
    }
    return flat;
}

Gradients Gradients::unflatten(const Mlp& shape, std::span<const double> flat) {
    Gradients g = zeros_like(shape);
    if (flat.size() != shape.parameter_count()) throw DimensionError("flat gradient size mismatch");
    std::size_t k = 0;
    for (auto& l : g.layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
    }
    return g;
}

Mlp::Mlp(std::vector<Layer> layers, std::uint64_t seed) : layers_(std::move(layers)), seed_(seed) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].bias.size() != layers_[i].weight.rows()) {
            throw DimensionError("layer " + std::to_string(i) + ": bias size does not match weight rows");
        }
        if (i > 0 && layers_[i].weight.cols() != layers_[i - 1].weight.rows()) {
            throw DimensionError("layer " + std::to_string(i) + ": input size does not match previous output");
        }
    }
}

Mlp Mlp::create(std::span<const int> sizes, Activation hidden, Activation output, std::uint64_t seed,
                double output_gain) {
    if (sizes.size() < 2) throw DimensionError("an MLP needs at least input and output sizes");
    std::mt19937_64 rng(seed);
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const int in = sizes[i];
        const int out = sizes[i + 1];
        if (in <= 0 || out <= 0) throw DimensionError("layer sizes must be positive");
        const bool last = i + 2 == sizes.size();
        const double gain = last ? output_gain : 1.0;
        const double bound = gain / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> u(-bound, bound);
        Layer layer;
        layer.weight.resize(out, in);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) layer.weight(r, c) = u(rng);
        layer.bias = Vector::Zero(out);
        layer.activation = last ? output : hidden;
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers), seed);
}

Vector Mlp::forward(const Vector& input) const {
    if (input.size() != input_size()) {
        throw DimensionError("input has " + std::to_string(input.size()) + " entries, network expects " +
                             std::to_string(input_size()));
    }
    Vector a = input;
    for (const auto& layer : layers_) {
        a = activate(layer.activation, layer.weight * a + layer.bias);
    }
    return a;
}

Matrix Mlp::forward_batch(const Matrix& batch) const {
    if (batch.rows() != input_size()) throw DimensionError("batch row count does not match network input");
    Matrix a = batch;
    for (const auto& layer : layers_) {
        Matrix s = layer.weight * a;
        s.colwise() += layer.bias;
        a = activate(layer.activation, s);
    }
    return a;
}

ForwardCache Mlp::forward_cached(const Matrix& batch) const {
    if (batch.rows() != input_size()) throw DimensionError("batch row count does not match network input");
    ForwardCache cache;
    cache.inputs.reserve(layers_.size());
    cache.preactivations.reserve(layers_.size());
    Matrix a = batch;
    for (const auto& layer : layers_) {
        Matrix s = layer.weight * a;
        s.colwise() += layer.bias;
        Matrix next = activate(layer.activation, s);
        cache.inputs.push_back(std::move(a));
        cache.preactivations.push_back(std::move(s));
        a = std::move(next);
    }
    cache.output = std::move(a);
    return cache;
}

BackwardResult Mlp::backward_full(const ForwardCache& cache, const Matrix& output_grad) const {
    if (cache.inputs.size() != layers_.size()) throw DimensionError("forward cache does not match network");
    if (output_grad.rows() != output_size() || output_grad.cols() != cache.batch_size()) {
        throw DimensionError("output gradient shape does not match forward output");
    }
    BackwardResult result;
    result.gradients = Gradients::zeros_like(*this);
    result.preactivation_grads.resize(layers_.size());

    Matrix upstream = output_grad;
    for (std::size_t k = layers_.size(); k-- > 0;) {
        const auto& layer = layers_[k];
        const Matrix& post = (k + 1 == layers_.size()) ? cache.output : cache.inputs[k + 1];
        Matrix ds = upstream.cwiseProduct(activation_derivative(layer.activation, cache.preactivations[k], post));
        result.gradients.layers[k].weight.noalias() = ds * cache.inputs[k].transpose();
        result.gradients.layers[k].bias = ds.rowwise().sum();
        if (k > 0) upstream.noalias() = layer.weight.transpose() * ds;
        result.preactivation_grads[k] = std::move(ds);
    }
    return result;
}

Gradients Mlp::backward(const ForwardCache& cache, const Matrix& output_grad) const {
    return backward_full(cache, output_grad).gradients;
}

void Mlp::apply(const Gradients& direction, double scale) {
    if (!direction.same_shape(*this)) throw DimensionError("update direction shape does not match network");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        layers_[i].weight += scale * direction.layers[i].weight;
        layers_[i].bias += scale * direction.layers[i].bias;
    }
}

std::vector<double> Mlp::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& l : layers_) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
    }
    return flat;
}

void Mlp::unflatten(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw DimensionError("flat parameter vector has " + std::to_string(flat.size()) + " entries, expected " +
                             std::to_string(parameter_count()));
    }
    std::size_t k = 0;
    for (auto& l : layers_) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
}

Eigen::Index Mlp::input_size() const { return layers_.empty() ? 0 : layers_.front().weight.cols(); }
Eigen::Index Mlp::output_size() const { return layers_.empty() ? 0 : layers_.back().weight.rows(); }

bool operator==(const Mlp& a, const Mlp& b) {
    if (a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
        const auto& x = a.layers_[i];
        const auto& y = b.layers_[i];
        if (x.activation != y.activation || x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols() ||
            x.weight != y.weight || x.bias != y.bias) {
            return false;
        }
    }
    return true;
}

}  // namespace pdsc::nn
