// Timing comparison of the OpenMP kernels against the serial reference paths.

#include <chrono>
#include <cstdio>
#include <vector>

#include "hsd/kernel.hpp"
#include "hsd/parallel.hpp"
#include "hsd/symbol.hpp"

using namespace hsd;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

} // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    set_threads(threads);
    std::printf("threads: %d\n", effective_threads());

    const Symbol sym = parse_symbol("n 2\nm 4\n4 0 1\n2 2 2\n0 4 1\n2 0 1\n0 2 1\n");

    {
        const FftGrid grid = plan_fft_grid(sym, 1.0, 8.0, 512);
        std::vector<std::vector<double>> pts;
        for (int k = 0; k < 24; ++k) pts.push_back({0.3 * k, 0.1 * k});

        auto t0 = clk::now();
        const auto serial = kernel_points(sym, 1.0, pts, grid, 3, false);
        auto t1 = clk::now();
        const auto parallel = kernel_points(sym, 1.0, pts, grid, 3, true);
        auto t2 = clk::now();

        double diff = 0.0;
        for (size_t k = 0; k < pts.size(); ++k)
            diff = std::max(diff, std::abs(serial[k].value - parallel[k].value));
        std::printf("direct sums   : serial %.3fs  parallel %.3fs  speedup %.2fx  "
                    "max diff %.2e\n",
                    seconds(t0, t1), seconds(t1, t2),
                    seconds(t0, t1) / seconds(t1, t2), diff);
    }

    {
        const Cutoff cutoff{2.0};
        RadialOpts opts;
        opts.estimate_error = false;
        auto run = [&](bool par) {
            opts.parallel = par;
            std::complex<double> acc = 0.0;
            for (int k = 0; k < 6; ++k) {
                const double x[2] = {6.0 + 2.0 * k, 0.0};
                acc += kernel_radial(sym, 1.0, x, 0.02, cutoff, opts).value;
            }
            return acc;
        };
        auto t0 = clk::now();
        const auto serial = run(false);
        auto t1 = clk::now();
        const auto parallel = run(true);
        auto t2 = clk::now();
        std::printf("radial pipeline: serial %.3fs  parallel %.3fs  speedup %.2fx  "
                    "diff %.2e\n",
                    seconds(t0, t1), seconds(t1, t2),
                    seconds(t0, t1) / seconds(t1, t2),
                    std::abs(serial - parallel));
    }
    return 0;
}
