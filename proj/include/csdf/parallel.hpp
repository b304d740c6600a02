#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csdf {

// Deterministic parallel kernels. Work is split into fixed-size chunks that
// do not depend on the thread count; chunk partials are combined serially in
// chunk order. Runs with any number of threads therefore produce bit-identical
// results, which the solver and CLI rely on.

inline constexpr std::size_t kReductionChunk = 4096;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_cap(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Parallel loop over [0, n); body must only write to disjoint per-index state.
template <typename Body>
void parallel_for(std::size_t n, const Body& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(n); ++i) body(std::size_t(i));
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

// Sum of f(i) over [0, n) with thread-count-independent rounding.
template <typename F>
double chunked_sum(std::size_t n, const F& f) {
    if (n == 0) return 0.0;
    const std::size_t nchunks = (n + kReductionChunk - 1) / kReductionChunk;
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t c = 0; c < std::int64_t(nchunks); ++c) {
        const std::size_t lo = std::size_t(c) * kReductionChunk;
        const std::size_t hi = lo + kReductionChunk < n ? lo + kReductionChunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[std::size_t(c)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// Serial reference for chunked_sum: same chunking, one thread. Used by tests
// and the benchmark to validate the parallel path.
template <typename F>
double chunked_sum_serial(std::size_t n, const F& f) {
    if (n == 0) return 0.0;
    const std::size_t nchunks = (n + kReductionChunk - 1) / kReductionChunk;
    double total = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = c * kReductionChunk;
        const std::size_t hi = lo + kReductionChunk < n ? lo + kReductionChunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        total += s;
    }
    return total;
}

// Accumulates per-element contributions into a shared dense vector:
// acc += sum_i contribution(i). Each chunk accumulates into a private buffer;
// buffers merge serially in chunk order.
template <typename Body>
void chunked_accumulate(std::size_t n, std::size_t dim, std::vector<double>& acc,
                        const Body& body) {
    if (n == 0 || dim == 0) return;
    const std::size_t nchunks = (n + kReductionChunk - 1) / kReductionChunk;
    std::vector<std::vector<double>> partial(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t c = 0; c < std::int64_t(nchunks); ++c) {
        const std::size_t lo = std::size_t(c) * kReductionChunk;
        const std::size_t hi = lo + kReductionChunk < n ? lo + kReductionChunk : n;
        auto& buf = partial[std::size_t(c)];
        buf.assign(dim, 0.0);
        for (std::size_t i = lo; i < hi; ++i) body(i, buf);
    }
    for (const auto& buf : partial)
        for (std::size_t k = 0; k < dim; ++k) acc[k] += buf[k];
}

} // namespace csdf
