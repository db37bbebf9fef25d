// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare thread counts.
#include <random>

#include <benchmark/benchmark.h>

#include "pdsc/agents/fixed_time.hpp"
#include "pdsc/harness/evaluation.hpp"
#include "pdsc/nn/batch_kernels.hpp"

namespace {

using pdsc::nn::Matrix;

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
    }
    return m;
}

pdsc::nn::Mlp bench_net() {
    const std::vector<int> sizes{11, 64, 64, 2};
    return pdsc::nn::Mlp::create(sizes, pdsc::nn::Activation::Tanh, pdsc::nn::Activation::Identity, 7);
}

template <bool Parallel>
void BM_BatchGradient(benchmark::State& state) {
    const auto net = bench_net();
    const auto batch = static_cast<Eigen::Index>(state.range(0));
    const Matrix x = random_matrix(11, batch, 1);
    const Matrix g = random_matrix(2, batch, 2);
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(pdsc::nn::parallel::batch_gradient(net, x, g));
        } else {
            benchmark::DoNotOptimize(pdsc::nn::serial::batch_gradient(net, x, g));
        }
    }
    state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_OuterProducts(benchmark::State& state) {
    const auto batch = static_cast<Eigen::Index>(state.range(0));
    const Matrix a = random_matrix(65, batch, 3);
    const Matrix g = random_matrix(64, batch, 4);
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(pdsc::nn::parallel::outer_product_means(a, g));
        } else {
            benchmark::DoNotOptimize(pdsc::nn::serial::outer_product_means(a, g));
        }
    }
    state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_Evaluation(benchmark::State& state) {
    pdsc::env::EnvConfig env;
    env.episode_length = 600.0;
    const auto agent = pdsc::agents::make_agent(pdsc::agents::default_agent_config(pdsc::agents::Algorithm::FixedTime),
                                                env.observation_size());
    const int episodes = static_cast<int>(state.range(0));
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(pdsc::harness::parallel::evaluate(*agent, env, episodes, 1));
        } else {
            benchmark::DoNotOptimize(pdsc::harness::serial::evaluate(*agent, env, episodes, 1));
        }
    }
}

BENCHMARK(BM_BatchGradient<false>)->Name("batch_gradient/serial")->Arg(256)->Arg(2048);
BENCHMARK(BM_BatchGradient<true>)->Name("batch_gradient/parallel")->Arg(256)->Arg(2048);
BENCHMARK(BM_OuterProducts<false>)->Name("outer_products/serial")->Arg(256)->Arg(2048);
BENCHMARK(BM_OuterProducts<true>)->Name("outer_products/parallel")->Arg(256)->Arg(2048);
BENCHMARK(BM_Evaluation<false>)->Name("evaluation/serial")->Arg(8);
BENCHMARK(BM_Evaluation<true>)->Name("evaluation/parallel")->Arg(8);

}  // namespace

BENCHMARK_MAIN();
