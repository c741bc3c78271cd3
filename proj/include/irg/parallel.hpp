#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "irg/rng.hpp"

namespace irg {

// Serial is the reference path; Parallel distributes the same fixed work units
// across OpenMP threads. Both produce bit-identical results.
enum class Execution { Serial, Parallel };

int max_threads();
void set_threads(int n);

// Applies IRG_THREADS from the environment, if set. Returns the thread count in use.
int apply_thread_env();

// Calls body(i) for i in [0, n). Iterations must be independent. If any
// iteration throws, the exception of the lowest failing index is rethrown
// after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body)
{
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr error;
    std::size_t error_index = n;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(irg_for_each_index)
            {
                if (static_cast<std::size_t>(i) < error_index) {
                    error_index = static_cast<std::size_t>(i);
                    error = std::current_exception();
                }
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

// Running moments of a block of Monte Carlo samples.
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x) noexcept
    {
        sum += x;
        sum_sq += x * x;
        ++count;
    }

    friend Moments operator+(const Moments& a, const Moments& b) noexcept
    {
        return {a.sum + b.sum, a.sum_sq + b.sum_sq, a.count + b.count};
    }
};

// Pairwise (tree) summation over block moments. The tree shape depends only on
// the number of blocks.
Moments pairwise_sum(std::span<const Moments> blocks);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

MeanEstimate to_estimate(const Moments& m);

inline constexpr std::size_t kMonteCarloBlock = 1024;

// Monte Carlo means of the N components of sample(rng) over n draws. Draws are
// grouped in fixed blocks, each with its own stream derived from (key, block),
// so the estimates are a function of (key, n) only.
template <std::size_t N, class Sampler>
std::array<MeanEstimate, N> monte_carlo_means(std::size_t n, std::uint64_t key, Execution exec,
                                              Sampler&& sample)
{
    std::array<MeanEstimate, N> out{};
    if (n == 0) {
        return out;
    }
    const std::size_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<std::array<Moments, N>> partial(blocks);
    for_each_index(blocks, exec, [&](std::size_t b) {
        RandomState rng(derive_key(key, b));
        const std::size_t begin = b * kMonteCarloBlock;
        const std::size_t end = std::min(n, begin + kMonteCarloBlock);
        std::array<Moments, N> m{};
        for (std::size_t i = begin; i < end; ++i) {
            const std::array<double, N> v = sample(rng);
            for (std::size_t c = 0; c < N; ++c) {
                m[c].add(v[c]);
            }
        }
        partial[b] = m;
    });
    std::vector<Moments> column(blocks);
    for (std::size_t c = 0; c < N; ++c) {
        for (std::size_t b = 0; b < blocks; ++b) {
            column[b] = partial[b][c];
        }
        out[c] = to_estimate(pairwise_sum(column));
    }
    return out;
}

template <class Sampler>
MeanEstimate monte_carlo_mean(std::size_t n, std::uint64_t key, Execution exec, Sampler&& sample)
{
    return monte_carlo_means<1>(n, key, exec, [&](RandomState& rng) {
        return std::array<double, 1>{sample(rng)};
    })[0];
}

} // namespace irg
