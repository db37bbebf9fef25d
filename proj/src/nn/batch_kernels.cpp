#include "pdsc/nn/batch_kernels.hpp"

#include <omp.h>

namespace pdsc::nn {

namespace {

void check_batch(const Mlp& net, const Matrix& inputs, const Matrix& output_grads) {
    if (inputs.rows() != net.input_size() || output_grads.rows() != net.output_size() ||
        inputs.cols() != output_grads.cols()) {
        throw DimensionError("batch_gradient: inputs/output gradients do not match network");
    }
}

Eigen::Index chunk_count(Eigen::Index n) { return (n + kKernelChunk - 1) / kKernelChunk; }

}  // namespace

namespace serial {

Gradients batch_gradient(const Mlp& net, const Matrix& inputs, const Matrix& output_grads) {
    check_batch(net, inputs, output_grads);
    Gradients total = Gradients::zeros_like(net);
    for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
        const ForwardCache cache = net.forward_cached(inputs.col(i));
        total += net.backward(cache, output_grads.col(i));
    }
    return total;
}

OuterProductMeans outer_product_means(const Matrix& activations, const Matrix& grads) {
    if (activations.cols() != grads.cols() || activations.cols() == 0) {
        throw DimensionError("outer_product_means: empty or mismatched batch");
    }
    OuterProductMeans out{Matrix::Zero(activations.rows(), activations.rows()), Matrix::Zero(grads.rows(), grads.rows())};
    for (Eigen::Index i = 0; i < activations.cols(); ++i) {
        out.a += activations.col(i) * activations.col(i).transpose();
        out.g += grads.col(i) * grads.col(i).transpose();
    }
    const double n = static_cast<double>(activations.cols());
    out.a /= n;
    out.g /= n;
    return out;
}

}  // namespace serial

namespace parallel {

Gradients batch_gradient(const Mlp& net, const Matrix& inputs, const Matrix& output_grads) {
    check_batch(net, inputs, output_grads);
    const Eigen::Index n = inputs.cols();
    const Eigen::Index chunks = chunk_count(n);
    std::vector<Gradients> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < chunks; ++c) {
        const Eigen::Index first = c * kKernelChunk;
        const Eigen::Index width = std::min(kKernelChunk, n - first);
        const ForwardCache cache = net.forward_cached(inputs.middleCols(first, width));
        partial[static_cast<std::size_t>(c)] = net.backward(cache, output_grads.middleCols(first, width));
    }

    Gradients total = Gradients::zeros_like(net);
    for (const auto& p : partial) total += p;
    return total;
}

OuterProductMeans outer_product_means(const Matrix& activations, const Matrix& grads) {
    if (activations.cols() != grads.cols() || activations.cols() == 0) {
        throw DimensionError("outer_product_means: empty or mismatched batch");
    }
    const Eigen::Index n = activations.cols();
    const Eigen::Index chunks = chunk_count(n);
    std::vector<OuterProductMeans> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < chunks; ++c) {
        const Eigen::Index first = c * kKernelChunk;
        const Eigen::Index width = std::min(kKernelChunk, n - first);
        const auto a = activations.middleCols(first, width);
        const auto g = grads.middleCols(first, width);
        partial[static_cast<std::size_t>(c)] = {a * a.transpose(), g * g.transpose()};
    }

    OuterProductMeans out{Matrix::Zero(activations.rows(), activations.rows()), Matrix::Zero(grads.rows(), grads.rows())};
    for (const auto& p : partial) {
        out.a += p.a;
        out.g += p.g;
    }
    out.a /= static_cast<double>(n);
    out.g /= static_cast<double>(n);
    return out;
}

}  // namespace parallel

}  // namespace pdsc::nn
