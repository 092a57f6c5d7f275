#include <cmath>
#include <complex>

#include "doctest.h"
#include "hsd/kernel.hpp"
#include "hsd/parallel.hpp"

using namespace hsd;

namespace {
const std::string kData = std::string(HSD_SOURCE_DIR) + "/data/symbols/";
}

TEST_CASE("thread count plumbing") {
    const int before = thread_count();
    set_threads(2);
    CHECK(effective_threads() >= 1);
    set_threads(before);
}

TEST_CASE("parallel direct sums match the serial reference bitwise") {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const FftGrid grid = plan_fft_grid(sym, 1.0, 4.0, 128);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 8; ++k)
        pts.push_back({0.5 * k - 2.0, 0.3 * k - 1.0});
    const auto serial = kernel_points(sym, 1.0, pts, grid, 3, false);
    const auto parallel = kernel_points(sym, 1.0, pts, grid, 3, true);
    REQUIRE(serial.size() == parallel.size());
    for (size_t k = 0; k < serial.size(); ++k) {
        // per-point accumulation order is identical, so results are bitwise equal
        CHECK(serial[k].value.real() == parallel[k].value.real());
        CHECK(serial[k].value.imag() == parallel[k].value.imag());
    }
}

TEST_CASE("parallel radial pipeline agrees with the serial reference") {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const Cutoff cutoff{2.0};
    const double x[2] = {7.0, 1.0};
    RadialOpts opts;
    opts.estimate_error = false;
    opts.parallel = false;
    const auto serial = kernel_radial(sym, 1.0, x, 0.02, cutoff, opts);
    opts.parallel = true;
    const auto parallel = kernel_radial(sym, 1.0, x, 0.02, cutoff, opts);
    const double scale = std::max(std::abs(serial.value), 1e-30);
    CHECK(std::abs(serial.value - parallel.value) / scale <= 1e-12);
}
