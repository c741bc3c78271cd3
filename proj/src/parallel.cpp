#include "irg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace irg {

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n)
{
#ifdef _OPENMP
    omp_set_num_threads(std::max(1, n));
#else
    (void)n;
#endif
}

int apply_thread_env()
{
    if (const char* value = std::getenv("IRG_THREADS")) {
        try {
            const int n = std::stoi(value);
            if (n > 0) {
                set_threads(n);
            }
        } catch (const std::exception&) {
            // ignored: malformed override leaves the OpenMP default in place
        }
    }
    return max_threads();
}

Moments pairwise_sum(std::span<const Moments> blocks)
{
    if (blocks.empty()) {
        return {};
    }
    if (blocks.size() == 1) {
        return blocks.front();
    }
    const std::size_t half = blocks.size() / 2;
    return pairwise_sum(blocks.first(half)) + pairwise_sum(blocks.subspan(half));
}

MeanEstimate to_estimate(const Moments& m)
{
    MeanEstimate e;
    e.samples = m.count;
    if (m.count == 0) {
        return e;
    }
    const double n = static_cast<double>(m.count);
    e.mean = m.sum / n;
    if (m.count > 1) {
        const double var = std::max(0.0, (m.sum_sq - n * e.mean * e.mean) / (n - 1.0));
        e.std_error = std::sqrt(var / n);
    }
    return e;
}

} // namespace irg
