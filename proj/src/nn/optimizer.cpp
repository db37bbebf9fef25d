#include "pdsc/nn/optimizer.hpp"

#include <cmath>
#include <string>

namespace pdsc::nn {

std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(std::string_view text) {
    if (text == "sgd") return OptimizerKind::Sgd;
    if (text == "adam") return OptimizerKind::Adam;
    throw std::invalid_argument("unknown optimizer '" + std::string(text) + "'");
}

void optimizer_step(Mlp& net, const Gradients& direction, double learning_rate) {
    if (!direction.all_finite()) throw DivergenceError("non-finite update direction");
    if (learning_rate == 0.0) return;
    net.apply(direction, learning_rate);
}

Optimizer::Optimizer(OptimizerKind kind, const Mlp& shape, AdamSettings settings)
    : kind_(kind), settings_(settings) {
    if (kind_ == OptimizerKind::Adam) {
        first_.assign(shape.parameter_count(), 0.0);
        second_.assign(shape.parameter_count(), 0.0);
    }
}

void Optimizer::step(Mlp& net, const Gradients& direction, double learning_rate) {
    if (kind_ == OptimizerKind::Sgd) {
        optimizer_step(net, direction, learning_rate);
        ++steps_;
        return;
    }
    if (!direction.all_finite()) throw DivergenceError("non-finite update direction");
    const std::vector<double> g = direction.flatten();
    if (g.size() != first_.size()) throw DimensionError("optimizer state does not match network");
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double c1 = 1.0 - std::pow(settings_.beta1, t);
    const double c2 = 1.0 - std::pow(settings_.beta2, t);
    std::vector<double> params = net.flatten();
    for (std::size_t i = 0; i < g.size(); ++i) {
        first_[i] = settings_.beta1 * first_[i] + (1.0 - settings_.beta1) * g[i];
        second_[i] = settings_.beta2 * second_[i] + (1.0 - settings_.beta2) * g[i] * g[i];
        const double m_hat = first_[i] / c1;
        const double v_hat = second_[i] / c2;
        params[i] += learning_rate * m_hat / (std::sqrt(v_hat) + settings_.epsilon);
    }
    net.unflatten(params);
}

void Optimizer::write(BinaryWriter& out) const {
    out.write_u8(static_cast<std::uint8_t>(kind_));
    out.write_f64(settings_.beta1);
    out.write_f64(settings_.beta2);
    out.write_f64(settings_.epsilon);
    out.write_u64(steps_);
    out.write_u64(first_.size());
    out.write_f64s(first_);
    out.write_f64s(second_);
}

void Optimizer::read(BinaryReader& in) {
    const auto kind = static_cast<OptimizerKind>(in.read_u8());
    if (kind != OptimizerKind::Sgd && kind != OptimizerKind::Adam) throw FormatError("unknown optimizer kind");
    AdamSettings settings;
    settings.beta1 = in.read_f64();
    settings.beta2 = in.read_f64();
    settings.epsilon = in.read_f64();
    const std::uint64_t steps = in.read_u64();
    const std::uint64_t n = in.read_u64();
    if (n != first_.size()) throw ShapeMismatchError("optimizer state size does not match network");
    first_ = in.read_f64s(n);
    second_ = in.read_f64s(n);
    kind_ = kind;
    settings_ = settings;
    steps_ = steps;
}

}  // namespace pdsc::nn
