#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "hsd/propagator.hpp"

using namespace hsd;

namespace {
const std::string kData = std::string(HSD_SOURCE_DIR) + "/data/symbols/";

// Exact free-particle evolution of e^{-|x|^2/(2 w^2)} under e^{it|D|^2}:
// product over axes of w / sqrt(w^2 - 2 i t) * exp(-x_d^2 / (2 (w^2 - 2 i t))).
std::complex<double> gaussian_evolved(double w, double t, double x, double y) {
    const std::complex<double> denom(w * w, -2.0 * t);
    const std::complex<double> amp = w * w / denom;
    return amp * std::exp(-(x * x + y * y) / (2.0 * denom));
}
}

TEST_CASE("zero time is the identity") {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const GridFunction u0 = gaussian_data(128, 12.8, 0.8);
    const GridFunction u = evolve(sym, u0, 0.0);
    double worst = 0.0;
    for (size_t k = 0; k < u.samples.size(); ++k)
        worst = std::max(worst, std::abs(u.samples[k] - u0.samples[k]));
    CHECK(worst <= 1e-13);
}

TEST_CASE("mass is conserved exactly") {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    const GridFunction u0 = gaussian_data(128, 12.8, 0.6);
    const double n0 = lp_norm(u0, 2.0);
    for (double t : {0.3, 2.0, 11.0})
        CHECK(lp_norm(evolve(sym, u0, t), 2.0) == doctest::Approx(n0).epsilon(1e-13));
}

TEST_CASE("free-particle evolution matches the closed form") {
    const Symbol sym = load_symbol(kData + "xi2.sym");
    const double w = 1.0, t = 0.5;
    const GridFunction u0 = gaussian_data(256, 25.6, w);
    const GridFunction ut = evolve(sym, u0, t);
    double worst = 0.0;
    for (long i = 0; i < 256; i += 13)
        for (long j = 0; j < 256; j += 13)
            worst = std::max(worst, std::abs(ut.at(i, j) - gaussian_evolved(
                                                w, t, ut.coord(i), ut.coord(j))));
    CHECK(worst <= 1e-6);
}

TEST_CASE("lp norms of Gaussians") {
    const GridFunction g = gaussian_data(256, 25.6, 1.0);
    // ||e^{-|x|^2/2}||_1 = 2 pi, ||.||_2 = sqrt(pi), ||.||_inf = 1
    CHECK(lp_norm(g, 1.0) == doctest::Approx(2.0 * M_PI).epsilon(1e-10));
    CHECK(lp_norm(g, 2.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(lp_norm(g, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    CHECK_THROWS(lp_norm(g, 0.5));
}

TEST_CASE("evolution commutes with lattice translations") {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const long N = 128;
    const double L = 12.8;
    const GridFunction u0 = gaussian_data(N, L, 0.7);
    const double shift[2] = {2.0 * L / N * 9, 0.0};
    const GridFunction v0 = gaussian_data(N, L, 0.7, {}, shift);
    const GridFunction ut = evolve(sym, u0, 1.3);
    const GridFunction vt = evolve(sym, v0, 1.3);
    double worst = 0.0;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j)
            worst = std::max(worst, std::abs(vt.at((i + 9) % N, j) - ut.at(i, j)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("unresolved data is rejected at the Nyquist shell") {
    const Symbol sym = load_symbol(kData + "xi2.sym");
    // width well below the grid spacing: spectrum hits the Nyquist ring
    const GridFunction sharp = gaussian_data(64, 32.0, 0.3);
    CHECK_THROWS(evolve(sym, sharp, 1.0));
}

TEST_CASE("admissibility classification of the exponent quadrilateral") {
    CHECK(admissible(2.0, 2.0, 4).classification == "apex_A_excluded");
    CHECK(admissible(1.0, 3.0, 4).classification == "endpoint_B");
    CHECK(admissible(1.0, INFINITY, 4).classification == "edge");
    CHECK(admissible(1.5, INFINITY, 4).classification == "endpoint_D");
    CHECK(admissible(1.25, 10.0, 4).classification == "interior");
    CHECK(admissible(1.25, INFINITY, 4).classification == "edge");
    CHECK(admissible(4.0, 2.0, 4).classification == "outside");
    // duality: B = (1, tau) maps to D = (tau', infinity) with 1/tau + 1/tau' ... check m = 6
    const double inv_tau = 4.0 / 10.0;
    CHECK(admissible(1.0, 1.0 / inv_tau, 6).classification == "endpoint_B");
    CHECK(admissible(1.0 / (1.0 - inv_tau), INFINITY, 6).classification == "endpoint_D");
    // m = 2 degenerates to the diagonal segment
    CHECK(admissible(2.0, 2.0, 2).classification == "apex_A_excluded");
    CHECK(admissible(1.0, INFINITY, 2).classification == "edge");
    CHECK(admissible(1.0, 2.0, 2).classification == "outside");
    CHECK_THROWS(admissible(0.5, 2.0, 4));
}

TEST_CASE("exponent fit refuses unusable pairs") {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    const double ts[] = {0.1, 0.2};
    CHECK_THROWS(lpq_exponent_fit(sym, 4.0, 2.0, ts, true));  // outside
    CHECK_THROWS(lpq_exponent_fit(sym, 1.0, 3.0, ts, true));  // endpoint
    CHECK_THROWS(lpq_exponent_fit(sym, 1.5, INFINITY, ts, true)); // endpoint
}

TEST_CASE("the conservative pair fits a flat exponent") {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    std::vector<double> ts;
    for (int k = 0; k < 6; ++k) ts.push_back(0.1 * std::pow(2.0, k));
    FitOpts opts;
    opts.points_per_axis = 128;
    opts.extent = 12.8;
    opts.widths = {0.6, 0.9};
    const NormEstimate est = lpq_exponent_fit(sym, 2.0, 2.0, ts, true, opts);
    CHECK(est.predicted_exponent == doctest::Approx(0.0));
    CHECK(est.fitted_exponent == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(est.pass);
}

TEST_CASE("spectral highpass removes low modes and keeps the rest intact") {
    const GridFunction u0 = gaussian_data(128, 12.8, 0.5, std::vector<double>{4.0, 0.0});
    const GridFunction hp = spectral_highpass(u0, 1.0);
    // removing a second time changes nothing (projection)
    const GridFunction hp2 = spectral_highpass(hp, 1.0);
    double worst = 0.0;
    for (size_t k = 0; k < hp.samples.size(); ++k)
        worst = std::max(worst, std::abs(hp.samples[k] - hp2.samples[k]));
    CHECK(worst <= 1e-12);
    // most of the energy survives for data centered at frequency 4
    CHECK(lp_norm(hp, 2.0) >= 0.95 * lp_norm(u0, 2.0));
    // evolution still conserves the truncated mass
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    CHECK(lp_norm(evolve(sym, hp, 2.0), 2.0) ==
          doctest::Approx(lp_norm(hp, 2.0)).epsilon(1e-13));
}

TEST_CASE("random band-limited data evolves unitarily") {
    const Symbol sym = load_symbol(kData + "aniso_quartic.sym");
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const long N = 64;
    GridFunction u0 = make_grid(N, 16.0);
    for (int k = 0; k < 12; ++k) {
        const int k0 = int(rng() % 9) - 4, k1 = int(rng() % 9) - 4;
        const std::complex<double> c(amp(rng), amp(rng));
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j)
                u0.at(i, j) += c * std::polar(1.0, M_PI / 16.0 *
                                                       (k0 * u0.coord(i) + k1 * u0.coord(j)));
    }
    const double n0 = lp_norm(u0, 2.0);
    for (double t : {0.1, 1.0, 10.0})
        CHECK(lp_norm(evolve(sym, u0, t), 2.0) / n0 == doctest::Approx(1.0).epsilon(1e-12));
}
