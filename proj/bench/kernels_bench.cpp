// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "cavity/kernels.hpp"

using namespace cavity::kernels;

namespace {

std::vector<cplx> random_amplitudes(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& a : v) a = {d(rng), d(rng)};
    return v;
}

std::vector<XXCoupling> all_pairs(int qubits) {
    std::vector<XXCoupling> c;
    for (int a = 0; a < qubits; ++a) {
        for (int b = a + 1; b < qubits; ++b) c.push_back({a, b, 0.01 * (a + 1) * (b + 2)});
    }
    return c;
}

template <auto Kernel>
void xx_all(benchmark::State& state) {
    const int qubits = static_cast<int>(state.range(0));
    const auto couplings = all_pairs(qubits);
    auto amps = random_amplitudes(std::size_t{1} << qubits);
    for (auto _ : state) {
        Kernel(amps, couplings);
        benchmark::ClobberMemory();
    }
}

template <auto Kernel>
void mode_sum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> w(n * n), L(n * n), K(n * n), table(n * n);
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            w[l * n + k] = 1.0 / (1.0 + l + k);
            L[l * n + k] = 2.0 * M_PI * l / n;
            K[l * n + k] = 2.0 * M_PI * k / n;
        }
    }
    for (auto _ : state) {
        Kernel(w, L, K, n, n, table);
        benchmark::DoNotOptimize(table.data());
    }
}

template <auto Kernel>
void fock_matvec(benchmark::State& state) {
    const FockLayout layout(4, 4, static_cast<int>(state.range(0)));
    const std::size_t columns = 16;
    std::vector<cplx> lower(16), raise(16);
    for (std::size_t i = 0; i < 16; ++i) {
        lower[i] = std::polar(0.25, 0.3 * static_cast<double>(i));
        raise[i] = std::conj(lower[i]);
    }
    const auto in = random_amplitudes(layout.dim * columns);
    std::vector<cplx> out(in.size());
    for (auto _ : state) {
        Kernel(layout, lower, raise, in, out, columns);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(xx_all<serial::apply_xx_all>)->Name("apply_xx_all/serial")->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(xx_all<parallel::apply_xx_all>)->Name("apply_xx_all/parallel")->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(mode_sum<serial::mode_sum_table>)->Name("mode_sum_table/serial")->Arg(19)->Arg(29)->Arg(61);
BENCHMARK(mode_sum<parallel::mode_sum_table>)->Name("mode_sum_table/parallel")->Arg(19)->Arg(29)->Arg(61);
BENCHMARK(fock_matvec<serial::apply_fock_interaction>)->Name("fock_matvec/serial")->Arg(3)->Arg(4);
BENCHMARK(fock_matvec<parallel::apply_fock_interaction>)->Name("fock_matvec/parallel")->Arg(3)->Arg(4);

BENCHMARK_MAIN();
