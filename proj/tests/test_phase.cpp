#include <cmath>
#include <complex>

#include "doctest.h"
#include "hsd/phase.hpp"

using namespace hsd;

namespace {
const std::string kData = std::string(HSD_SOURCE_DIR) + "/data/symbols/";
const double kU[2] = {1.0, 0.0};

Symbol xi4() { return load_symbol(kData + "xi4.sym"); }
Symbol mixed() { return load_symbol(kData + "xi4_plus_xi2.sym"); }
}

TEST_CASE("phase value oracles") {
    // Homogeneous symbol: phi(s, omega) = <u, omega> for any s.
    const Symbol h = xi4();
    const double w[2] = {1.0, 0.0};
    CHECK(phase_value(h, kU, 17.0, w) == doctest::Approx(1.0));
    const double w2[2] = {0.0, 1.0};
    CHECK(phase_value(h, kU, 17.0, w2) == doctest::Approx(0.0).epsilon(1e-12));

    // |xi|^4 + |xi|^2 at s = 100, omega = u: rho * s^{-1/4}.
    const double rho = std::sqrt((-1.0 + std::sqrt(401.0)) / 2.0);
    CHECK(phase_value(mixed(), kU, 100.0, w) ==
          doctest::Approx(rho / std::pow(100.0, 0.25)));
}

TEST_CASE("critical points of a radial symbol sit at +-u") {
    const auto pair = find_critical_points(mixed(), kU, 100.0);
    CHECK(pair.plus.omega[0] == doctest::Approx(1.0));
    CHECK(pair.plus.omega[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pair.minus.omega[0] == doctest::Approx(-1.0));
    CHECK(pair.plus.tangential_gradient_norm <= 1e-9);
    CHECK_FALSE(pair.duplicate_warning);

    // Homogeneous: phi_+ = 1, phi_- = -1 exactly.
    const auto hp = find_critical_points(xi4(), kU, 7.0);
    CHECK(hp.plus.phase_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hp.minus.phase_value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("critical point of an anisotropic symbol matches a dense scan") {
    const Symbol sym = load_symbol(kData + "aniso_quartic.sym");
    const double u[2] = {std::cos(0.7), std::sin(0.7)};
    const double s = 50.0;
    const auto pair = find_critical_points(sym, u, s);

    double best = -1e300, best_th = 0.0;
    for (int k = 0; k < 4096; ++k) {
        const double th = 2.0 * M_PI * k / 4096;
        const double w[2] = {std::cos(th), std::sin(th)};
        const double v = phase_value(sym, u, s, w);
        if (v > best) { best = v; best_th = th; }
    }
    const double got_th = std::atan2(pair.plus.omega[1], pair.plus.omega[0]);
    CHECK(std::abs(std::remainder(got_th - best_th, 2.0 * M_PI)) < 2.0 * M_PI / 2048);
    CHECK(pair.plus.phase_value >= best - 1e-10);
}

TEST_CASE("critical path: radial symbols have constant branches") {
    const PhasePath path = critical_path(mixed(), kU, 2.0, 2000.0, 24);
    CHECK(path.constant_plus);
    CHECK(path.constant_minus);
    CHECK(path.c1_plus == doctest::Approx(0.0));
}

TEST_CASE("critical path: anisotropic drift decays like a symbol-class path") {
    const Symbol sym = parse_symbol("n 2\nm 4\n4 0 1\n2 2 1\n0 4 1\n2 0 1\n");
    const double u[2] = {std::cos(0.7), std::sin(0.7)};
    const PhasePath path = critical_path(sym, u, 2.0, 2000.0, 32);
    CHECK_FALSE(path.constant_plus);
    // |omega'(s)| should decay at least like (1+s)^{-1-1/m} (up to fit slack)
    CHECK(path.exponent_plus <= -(1.0 + 0.25) + 0.1);
    CHECK(path.c1_plus > 0.0);
}

TEST_CASE("radial phase assembles t, r and the critical phase") {
    // Homogeneous: phi_pm(t,r,s) = s t +- r s^{1/m}.
    const Symbol h = xi4();
    const double t = 2.0, r = 3.0, s = 16.0;
    CHECK(radial_phase(h, kU, t, r, s, +1) == doctest::Approx(s * t + r * 2.0));
    CHECK(radial_phase(h, kU, t, r, s, -1) == doctest::Approx(s * t - r * 2.0));

    // Mixed symbol at s = 100: s t + r * rho(100).
    const double rho = std::sqrt((-1.0 + std::sqrt(401.0)) / 2.0);
    CHECK(radial_phase(mixed(), kU, 1.0, 1.0, 100.0, +1) ==
          doctest::Approx(100.0 + rho));
}

TEST_CASE("phase inequality audit: homogeneous constants are exactly one") {
    const PhaseAudit audit = phase_inequality_audit(xi4(), kU, 1.0, 1.0, 2.0, 1000.0, 48);
    CHECK(audit.pass);
    CHECK(audit.sign_bounds.c1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(audit.sign_bounds.c2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("phase inequality audit: mixed symbol passes with stable constants") {
    const PhaseAudit audit =
        phase_inequality_audit(mixed(), kU, 1.0, 10.0, 2.0, 1000.0, 48);
    CHECK(audit.pass);
    CHECK(audit.stability < 2.0);
    CHECK(audit.sign_bounds.c1 > 0.0);
    CHECK(audit.slope_plus.c1 > 0.0);
    CHECK(audit.curvature_minus.c1 > 0.0);
    CHECK(std::isfinite(audit.high_order.c2));
}

TEST_CASE("a1 threshold is at least the ellipticity threshold") {
    CHECK(a1_threshold(mixed(), 1.0) >= 1.0);
    CHECK(a1_threshold(xi4(), 1.0) >= 1.0);
}

TEST_CASE("sphere integral of a homogeneous radial symbol is a Bessel function") {
    // P = |xi|^m: phi = cos(theta), b = 1/m, so Phi(lambda, 1) = (2 pi / m) J_0.
    const Symbol h = xi4();
    for (double lambda : {0.0, 1.0, 10.0, 300.0}) {
        const auto val = sphere_integral(h, kU, lambda, 1.0);
        const double expect = 2.0 * M_PI / 4.0 * std::cyl_bessel_j(0, lambda);
        CHECK(val.real() == doctest::Approx(expect).epsilon(1e-6));
        CHECK(val.imag() == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("sphere integral error estimate brackets the truth") {
    const Symbol h = xi4();
    double err = 0.0;
    const auto val = sphere_integral(h, kU, 50.0, 1.0, {}, &err);
    const double expect = 2.0 * M_PI / 4.0 * std::cyl_bessel_j(0, 50.0);
    CHECK(std::abs(val.real() - expect) <= std::max(err * 10.0, 1e-10));
}

TEST_CASE("partition of unity sums to one and is plateau near the centers") {
    const PartitionOfUnity pou = make_partition(mixed(), kU, 100.0);
    for (int k = 0; k < 257; ++k) {
        const double th = 2.0 * M_PI * k / 257;
        const double w[2] = {std::cos(th), std::sin(th)};
        const double sum = pou.weight_plus(w) + pou.weight_minus(w) + pou.weight_zero(w);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pou.weight_plus(w) >= -1e-15);
        CHECK(pou.weight_zero(w) >= -1e-15);
    }
    // Identically one within the plateau radius.
    const double near[2] = {std::cos(0.2), std::sin(0.2)};
    CHECK(pou.weight_plus(near) == doctest::Approx(1.0).epsilon(1e-14));
    const double far[2] = {0.0, 1.0};
    CHECK(pou.weight_plus(far) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("stationary decomposition reconstructs the full sphere integral") {
    const Symbol sym = mixed();
    const PartitionOfUnity pou = make_partition(sym, kU, 100.0);
    for (double lambda : {5.0, 80.0}) {
        const auto full = sphere_integral(sym, kU, lambda, 100.0);
        const auto dec = stationary_decomposition(sym, kU, lambda, 100.0, pou);
        const auto sum = dec.Phi_plus + dec.Phi_minus + dec.Psi0;
        CHECK(std::abs(sum - full) <= 1e-8 * std::max(1.0, std::abs(full)));
        CHECK(std::abs(dec.Phi - full) <= 1e-8);
    }
}

TEST_CASE("non-stationary piece decays faster than any power") {
    const Symbol sym = mixed();
    const PartitionOfUnity pou = make_partition(sym, kU, 100.0);
    double prev = 1e300;
    for (double lambda : {20.0, 320.0, 1000.0}) {
        const auto dec = stationary_decomposition(sym, kU, lambda, 100.0, pou);
        const double weighted = lambda * lambda * std::abs(dec.Psi0);
        CHECK(weighted < prev);
        prev = weighted;
    }
}

TEST_CASE("stationary amplitudes approach the quadratic-phase limit") {
    // For P = |xi|^m in n = 2: |Psi_pm| -> sqrt(2 pi / |phi''|) * b = sqrt(pi/2) * (2/m)
    const Symbol h = xi4();
    const PartitionOfUnity pou = make_partition(h, kU, 1.0);
    const double limit = std::sqrt(M_PI / 2.0) * 2.0 / 4.0;
    const auto dec = stationary_decomposition(h, kU, 800.0, 1.0, pou);
    CHECK(std::abs(dec.Psi_plus) == doctest::Approx(limit).epsilon(0.02));
    CHECK(std::abs(dec.Psi_minus) == doctest::Approx(limit).epsilon(0.02));
}
