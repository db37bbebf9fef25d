#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pdsc/common/binary_io.hpp"
#include "pdsc/nn/mlp.hpp"

namespace pdsc::nn {

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OptimizerKind : std::uint8_t { Sgd, Adam };

std::string_view to_string(OptimizerKind k);
OptimizerKind parse_optimizer(std::string_view text);

// Plain step, ascent convention: W <- W + learning_rate * direction.
// Throws DivergenceError when the direction holds a non-finite value.
void optimizer_step(Mlp& net, const Gradients& direction, double learning_rate);

struct AdamSettings {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Stateful optimizer over one network. Adam keeps bias-corrected first and second moments
// of the supplied directions.
class Optimizer {
public:
    Optimizer() = default;
    Optimizer(OptimizerKind kind, const Mlp& shape, AdamSettings settings = {});

    void step(Mlp& net, const Gradients& direction, double learning_rate);

    OptimizerKind kind() const { return kind_; }
    std::uint64_t steps() const { return steps_; }

    void write(BinaryWriter& out) const;
    void read(BinaryReader& in);

private:
    OptimizerKind kind_ = OptimizerKind::Sgd;
    AdamSettings settings_;
    std::vector<double> first_;
    std::vector<double> second_;
    std::uint64_t steps_ = 0;
};

}  // namespace pdsc::nn
