// Times the serial and OpenMP paths of the two data-parallel kernels: the
// full-dataset prediction pass and tri-term batch gradient accumulation.
// Both paths produce bit-identical results; this target measures the
// scheduling difference only.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "asmlab/dataset.hpp"
#include "asmlab/engine.hpp"
#include "asmlab/parallel.hpp"

using namespace asmlab;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int repeats, const std::function<void()>& fn) {
    fn();  // warm up
    const auto start = Clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
    int threads = max_threads();
    if (argc > 1) threads = std::stoi(argv[1]);
    set_threads(threads);

    DataGenConfig gen;
    gen.n_per_class = 2000;
    gen.n_test_per_class = 0;
    gen.noise_ratio = 0.3;
    const NoisyDataset ds = build_dataset(gen);
    const auto rows = ds.train_indices();

    const DualNet nets = make_dual_net({gen.d, 64, 32, gen.k}, 11, 22);

    std::printf("kernel benchmark: %zu samples, dims 8-64-32-3, %d thread(s)\n", rows.size(),
                threads);
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");

    {
        const auto serial = time_ms(5, [&] { predict(nets.net1, nets.net2, ds, rows, Exec::Serial); });
        const auto parallel =
            time_ms(5, [&] { predict(nets.net1, nets.net2, ds, rows, Exec::Parallel); });
        std::printf("%-28s %12.3f %12.3f %7.2fx\n", "predict (full pass)", serial, parallel,
                    serial / parallel);
    }

    {
        // one large mixed batch: clean/ambiguous/noisy round-robin
        std::vector<std::size_t> batch(rows.begin(), rows.begin() + 1024);
        std::vector<Subset> tags(batch.size());
        for (std::size_t i = 0; i < tags.size(); ++i)
            tags[i] = static_cast<Subset>(i % 3);
        BatchContext ctx;
        ctx.lambda = 0.5;
        ctx.aug_seed = 99;
        GradientBundle g1, g2;
        const auto serial = time_ms(5, [&] {
            accumulate_batch(nets.net1, nets.net2, ds, batch, tags, ctx, g1, g2, Exec::Serial);
        });
        const auto parallel = time_ms(5, [&] {
            accumulate_batch(nets.net1, nets.net2, ds, batch, tags, ctx, g1, g2, Exec::Parallel);
        });
        std::printf("%-28s %12.3f %12.3f %7.2fx\n", "batch gradients (1024)", serial, parallel,
                    serial / parallel);
    }

    return 0;
}
