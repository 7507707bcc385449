#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asmlab {

// How a kernel schedules its per-sample work. Results are identical for
// both policies: parallel kernels write disjoint per-sample slots and all
// reductions run serially in fixed index order afterwards.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Runs fn(i) for i in [0, n). Under Exec::Parallel the iterations are
// distributed over OpenMP threads; fn must only touch slot i of any
// shared output.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    (void)exec;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

// SplitMix64. Used to derive independent RNG streams (per-seed, per-epoch,
// per-sample) so that draws never depend on thread scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream));
}

}  // namespace asmlab
