#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace smd {

// Serial is the reference implementation; Parallel runs the same blocks
// under OpenMP. Per-block results are merged in block order, so both
// policies produce bit-identical output.
enum class ExecPolicy { Serial, Parallel };

inline ExecPolicy default_policy() {
#ifdef _OPENMP
    return ExecPolicy::Parallel;
#else
    return ExecPolicy::Serial;
#endif
}

// Partitions [0, n) into fixed-size blocks; body(begin, end, acc) fills the
// per-block accumulator; merge(total, block_acc) folds blocks in index order.
template <class R, class Body, class Merge>
R block_reduce(std::size_t n, std::size_t block_size, ExecPolicy policy, R init, Body&& body,
               Merge&& merge) {
    if (block_size == 0) block_size = 1;
    const std::size_t nblocks = n == 0 ? 0 : (n + block_size - 1) / block_size;
    std::vector<R> partial(nblocks, init);

    if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (long long b = 0; b < (long long)nblocks; ++b) {
            std::size_t begin = std::size_t(b) * block_size;
            std::size_t end = std::min(n, begin + block_size);
            body(begin, end, partial[std::size_t(b)]);
        }
#else
        policy = ExecPolicy::Serial;
#endif
    }
    if (policy == ExecPolicy::Serial) {
        for (std::size_t b = 0; b < nblocks; ++b) {
            std::size_t begin = b * block_size;
            std::size_t end = std::min(n, begin + block_size);
            body(begin, end, partial[b]);
        }
    }

    R total = init;
    for (std::size_t b = 0; b < nblocks; ++b) total = merge(total, partial[b]);
    return total;
}

}  // namespace smd
