#pragma once

#include <vector>

#include "pdsc/nn/mlp.hpp"

// Batched training kernels in two flavours. `serial` walks one sample at a time and is the
// reference the tests compare against; `parallel` splits the batch into fixed-size column
// chunks processed under OpenMP and reduces the chunk results in chunk order, so its output
// does not depend on the thread count.
namespace pdsc::nn {

inline constexpr Eigen::Index kKernelChunk = 64;

// Mean outer products of one layer: E[a a^T] over columns of `a`, E[g g^T] over columns of `g`.
struct OuterProductMeans {
    Matrix a;
    Matrix g;
};

namespace serial {

// Sum over columns of the per-sample parameter gradients given dL/d output per sample.
Gradients batch_gradient(const Mlp& net, const Matrix& inputs, const Matrix& output_grads);

OuterProductMeans outer_product_means(const Matrix& activations, const Matrix& grads);

}  // namespace serial

namespace parallel {

Gradients batch_gradient(const Mlp& net, const Matrix& inputs, const Matrix& output_grads);

OuterProductMeans outer_product_means(const Matrix& activations, const Matrix& grads);

}  // namespace parallel

}  // namespace pdsc::nn
