// Acceptance gate: one check per shipped claim, each printing a single
// PASS/FAIL line with its measured figure of merit. Exit status is the number
// of failing checks.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hsd/decay.hpp"
#include "hsd/kernel.hpp"
#include "hsd/levelset.hpp"
#include "hsd/phase.hpp"
#include "hsd/propagator.hpp"
#include "hsd/symbol.hpp"

using namespace hsd;
using clk = std::chrono::steady_clock;

namespace {

const std::string kData = std::string(HSD_SOURCE_DIR) + "/data/symbols/";

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s: criterion %d — %s (%s)\n", pass ? "PASS" : "FAIL", id,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void guarded(int id, const std::string& what, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// 1. Free-particle grid oracle: |I(t,x)| = (4 pi t)^{-1} within 1% over the
//    interior, t in {0.25, 1, 4}, 1024^2, under a minute.
void criterion_1() {
    const auto t0 = clk::now();
    const Symbol sym = load_symbol(kData + "xi2.sym");
    double worst = 0.0;
    for (double t : {0.25, 1.0, 4.0}) {
        const FftGrid grid = plan_fft_grid(sym, t, 10.0, 1024);
        const GridKernel gk = kernel_fft(sym, t, grid);
        const double expect = 1.0 / (4.0 * M_PI * t);
        const long N = grid.points_per_axis;
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) {
                const double x[2] = {gk.values.coord(i), gk.values.coord(j)};
                if (std::hypot(x[0], x[1]) > 10.0) continue;
                worst = std::max(worst,
                                 std::abs(std::abs(gk.values.at(i, j)) - expect) /
                                     expect);
            }
    }
    const double dt = seconds_since(t0);
    report(1, worst <= 0.01 && dt < 60.0, "free-particle modulus oracle",
           fmt("max rel err %.2e, %.1f s", worst, dt));
}

// 2. Exact self-similarity of the homogeneous quartic kernel:
//    I(t, x) = t^{-1/2} I(1, t^{-1/4} x) at 100 points, 0.1% relative.
void criterion_2() {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    KernelOpts opts;
    opts.samples_per_period = 8.0;
    opts.boundary_factor = 1.6;

    std::vector<std::vector<double>> base_pts; // points in the t = 1 frame
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const double r = 0.5 + 5.5 * a / 9.0;
            const double th = 2.0 * M_PI * (b + 0.37) / 10.0;
            base_pts.push_back({r * std::cos(th), r * std::sin(th)});
        }
    const FftGrid g1 = plan_fft_grid(sym, 1.0, 6.0, 4096, opts);
    const auto ref = kernel_points(sym, 1.0, base_pts, g1, 3);

    double worst = 0.0;
    for (double t : {1.0 / 16.0, 0.25, 4.0}) {
        const double lam = std::pow(t, 0.25);
        std::vector<std::vector<double>> pts;
        for (const auto& y : base_pts) pts.push_back({lam * y[0], lam * y[1]});
        const long N = t > 1.0 ? 4096 : 2048;
        const FftGrid gt = plan_fft_grid(sym, t, 6.0 * lam, N, opts);
        const auto vals = kernel_points(sym, t, pts, gt, 3);
        for (size_t k = 0; k < pts.size(); ++k) {
            const auto scaled = std::pow(t, -0.5) * ref[k].value;
            worst = std::max(worst,
                             std::abs(vals[k].value - scaled) / std::abs(scaled));
        }
    }
    report(2, worst <= 1e-3, "self-similar scaling of the quartic kernel",
           fmt("max rel defect %.2e over 300 comparisons", worst));
}

// 3. Sharp spatial exponent for |D|^4 at t = 1: slope -2/3 +- 0.1 on [8, 64],
//    compensated modulus within a factor-10 band, under 10 minutes.
void criterion_3() {
    const auto t0 = clk::now();
    DecayOpts opts;
    opts.points_per_axis = 2048;
    const SharpnessReport rep = sharpness_check(4, 2, 8.0, 64.0, 0.1, 10.0, opts);
    const double dt = seconds_since(t0);
    report(3, rep.pass && dt < 600.0, "sharp spatial decay exponent",
           fmt("slope %.4f (target -2/3 +- 0.1), band factor %.2f", rep.slope,
               rep.q_max / rep.q_min) +
               fmt(", %.1f s", dt));
}

// 4. Two-regime envelope for |D|^4 + |D|^2: finite max ratio, stable under
//    doubled kernel resolution in both regimes.
void criterion_4() {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    std::vector<double> radii;
    for (int k = 0; k <= 32; ++k) radii.push_back(8.0 * k / 32.0);

    DecayOpts opts;
    opts.points_per_axis = 1024;
    // t = 16 pushes the stationary frequencies close to the window transition
    // at 1024^2; a slightly wider plateau keeps every plan feasible.
    opts.kernel.boundary_factor = 1.2;
    const double large[] = {1.0, 4.0, 16.0};
    const auto lf = envelope_check(sym, Regime::large_t, large, radii, opts);
    const double small[] = {0.02, 0.05, 0.1};
    const auto sf = envelope_check(sym, Regime::small_t, small, radii, opts);
    report(4, lf.pass && sf.pass, "two-regime envelope ratio stability",
           fmt("large-t max ratio %.3g (x%.2f under 2x res), ", lf.max_ratio,
               lf.stability) +
               fmt("small-t max ratio %.3g (x%.2f)", sf.max_ratio, sf.stability));
}

// 5. Radial-phase inequality audits over s in [a1, 1e3], (t, r) in {1, 10}^2,
//    stable constants; homogeneous symbol gives c1 = c2 = 1 to 1e-9.
void criterion_5() {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const double u[2] = {1.0, 0.0};
    const double a1 = a1_threshold(sym, find_threshold(sym).a);
    bool pass = true;
    double worst_stab = 1.0;
    for (double t : {1.0, 10.0})
        for (double r : {1.0, 10.0}) {
            const auto audit = phase_inequality_audit(sym, u, t, r, a1, 1e3, 48);
            pass = pass && audit.pass && audit.sign_bounds.c1 > 0.0 &&
                   audit.sign_bounds.c1 <= audit.sign_bounds.c2;
            worst_stab = std::max(worst_stab, audit.stability);
        }
    const Symbol hom = load_symbol(kData + "xi4.sym");
    const auto haudit = phase_inequality_audit(hom, u, 1.0, 1.0, 2.0, 1e3, 48);
    const double hdev = std::max(std::abs(haudit.sign_bounds.c1 - 1.0),
                                 std::abs(haudit.sign_bounds.c2 - 1.0));
    pass = pass && hdev <= 1e-9;
    report(5, pass, "radial-phase inequality audits",
           fmt("worst stability x%.2f, homogeneous sign constants off by %.1e",
               worst_stab, hdev));
}

// 6. Stationary decomposition for |D|^2: Phi(lambda, 1) = pi J0(lambda) to
//    0.5%; |Psi_pm| within a 2x band over [10, 1e3]; lambda^2 |Psi0| decreasing.
void criterion_6() {
    const Symbol sym = load_symbol(kData + "xi2.sym");
    const double u[2] = {1.0, 0.0};

    double worst = 0.0;
    for (int k = 0; k <= 24; ++k) {
        const double lam = std::pow(10.0, 3.0 * k / 24.0);
        const auto val = sphere_integral(sym, u, lam, 1.0);
        const double expect = M_PI * std::cyl_bessel_j(0, lam);
        // relative to the local envelope of pi J0, not the (vanishing) value
        const double scale =
            std::max(std::abs(expect), M_PI * std::sqrt(2.0 / (M_PI * lam)));
        worst = std::max(worst, std::abs(val.real() - expect) / scale);
    }

    const PartitionOfUnity pou = make_partition(sym, u, 1.0);
    double band_lo = 1e300, band_hi = 0.0;
    std::vector<double> weighted;
    for (int k = 0; k <= 12; ++k) {
        const double lam = 10.0 * std::pow(100.0, k / 12.0);
        const auto dec = stationary_decomposition(sym, u, lam, 1.0, pou);
        band_lo = std::min({band_lo, std::abs(dec.Psi_plus), std::abs(dec.Psi_minus)});
        band_hi = std::max({band_hi, std::abs(dec.Psi_plus), std::abs(dec.Psi_minus)});
        weighted.push_back(lam * lam * std::abs(dec.Psi0));
    }
    // |Psi0| oscillates through near-zeros, so compare octave maxima of the
    // lambda^2-weighted modulus: each must undercut the previous one.
    bool decreasing = true;
    double prev = 1e300;
    for (size_t k = 0; k + 1 < weighted.size(); k += 2) {
        const double w = std::max(weighted[k], weighted[k + 1]);
        if (w > prev * (1.0 + 1e-6)) decreasing = false;
        prev = w;
    }
    if (weighted.back() > prev) decreasing = false;
    const bool pass = worst <= 0.005 && band_hi / band_lo < 2.0 && decreasing;
    report(6, pass, "stationary sphere decomposition",
           fmt("Bessel defect %.2e, |Psi| band x%.2f, ", worst, band_hi / band_lo) +
               (decreasing ? "lambda^2 |Psi0| decreasing"
                           : "lambda^2 |Psi0| NOT decreasing"));
}

// 7. Cross-method equivalence: radial + compact vs the direct damped sums at
//    t = 1, |x| in [5, 20], within 5%.
void criterion_7() {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const double t = 1.0;
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 20; ++k) pts.push_back({5.0 + 15.0 * k / 19.0, 0.0});
    KernelOpts opts;
    opts.samples_per_period = 6.0;
    const FftGrid grid = plan_fft_grid(sym, t, 20.0, 2048, opts);
    const auto ref = kernel_points(sym, t, pts, grid, 3);

    double worst = 0.0;
    for (size_t k = 0; k < pts.size(); ++k) {
        const auto split = kernel_eval(sym, t, pts[k], KernelStrategy::split);
        worst = std::max(worst, std::abs(split.value - ref[k].value) /
                                    std::abs(ref[k].value));
    }
    report(7, worst <= 0.05, "radial + compact pipeline vs grid oracle",
           fmt("max rel deviation %.2e at 20 points", worst));
}

// 8. Compact-piece decay: slope of |I2(1, x)| on [10, 100] at most -(2 + 1/4),
//    and (1 + t + |x|)^{1/4} |I2| bounded over t in {0.5, 1, 2, 4}.
void criterion_8() {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    const Cutoff cutoff{a1_threshold(sym, find_threshold(sym).a)};
    std::vector<double> radii, mods;
    for (int k = 0; k <= 19; ++k)
        radii.push_back(10.0 * std::pow(10.0, k / 19.0));
    for (double r : radii) {
        const double x[2] = {r, 0.0};
        mods.push_back(std::abs(kernel_compact(sym, 1.0, x, cutoff).value));
    }
    const PowerLawFit fit = fit_power_law(radii, mods);

    bool bounded = true;
    double weighted_max = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        std::vector<double> weighted;
        for (double r : radii) {
            const double x[2] = {r, 0.0};
            const double w = std::abs(kernel_compact(sym, t, x, cutoff).value) *
                             std::pow(1.0 + t + r, 0.25);
            if (!std::isfinite(w)) bounded = false;
            weighted.push_back(w);
            weighted_max = std::max(weighted_max, w);
        }
        // no upward trend in the compensated modulus
        if (fit_power_law(radii, weighted).slope > 0.05) bounded = false;
    }
    const bool pass = fit.slope <= -2.25 && bounded;
    report(8, pass, "compact-piece spatial decay",
           fmt("slope %.3f (need <= -2.25), compensated sup %.2e", fit.slope,
               weighted_max));
}

// 9. Propagator unitarity on random band-limited data.
void criterion_9() {
    const Symbol sym = load_symbol(kData + "xi4_plus_xi2.sym");
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const long N = 128;
    const double L = 16.0;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        GridFunction u0 = make_grid(N, L);
        for (int k = 0; k < 16; ++k) {
            const int k0 = int(rng() % 17) - 8, k1 = int(rng() % 17) - 8;
            const std::complex<double> coeff(amp(rng), amp(rng));
            for (long i = 0; i < N; ++i)
                for (long j = 0; j < N; ++j)
                    u0.at(i, j) += coeff * std::polar(1.0, M_PI / L *
                                                               (k0 * u0.coord(i) +
                                                                k1 * u0.coord(j)));
        }
        const double n0 = lp_norm(u0, 2.0);
        for (double t : {0.1, 1.0, 10.0})
            worst = std::max(worst,
                             std::abs(lp_norm(evolve(sym, u0, t), 2.0) / n0 - 1.0));
    }
    report(9, worst <= 1e-12, "propagator unitarity",
           fmt("max |ratio - 1| = %.2e over 30 evolutions", worst));
}

// 10. Dispersive norm-ratio exponent at (p, q) = (1, inf) for |D|^4 plus the
//     admissible-set classifier on the documented 7-point set.
void criterion_10() {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    std::vector<double> ts;
    for (int k = 0; k < 9; ++k) ts.push_back(0.05 * std::pow(10.0, k / 8.0));
    const double inf = INFINITY;
    // A 204.8 half-width box keeps the periodized kernel images (decaying only
    // like r^{-2/3}) from flattening the large-t end of the fit.
    FitOpts fopts;
    fopts.points_per_axis = 4096;
    fopts.extent = 204.8;
    const NormEstimate est = lpq_exponent_fit(sym, 1.0, inf, ts, true, fopts);

    const struct {
        double p, q;
        const char* want;
    } table[] = {{2.0, 2.0, "apex_A_excluded"}, {1.0, 3.0, "endpoint_B"},
                 {1.0, inf, "edge"},            {1.5, inf, "endpoint_D"},
                 {1.25, 10.0, "interior"},      {1.25, inf, "edge"},
                 {4.0, 2.0, "outside"}};
    bool classified = true;
    for (const auto& row : table)
        classified =
            classified && admissible(row.p, row.q, 4).classification == row.want;

    report(10, est.pass && classified, "L1 -> Linf exponent fit + classifier",
           fmt("fitted slope %.4f (target -0.5 +- 0.05), ", est.fitted_exponent) +
               (classified ? "7/7 classifications" : "classifier MISMATCH"));
}

// 11. High-frequency data keeps the small-time rate at all times.
void criterion_11() {
    const Symbol sym = load_symbol(kData + "xi4.sym");
    std::vector<double> ts;
    for (int k = 0; k < 9; ++k) ts.push_back(0.1 * std::pow(100.0, k / 8.0));
    FitOpts opts;
    opts.exponent_tol = 0.1;
    // Broadband (delta-like) data with only the low frequencies removed probes
    // sup |I_{>=a}|; a modulated packet would instead see the faster
    // nondegenerate-Hessian rate. Wide box for the same image-decay reason as
    // in criterion 10; slightly wider data keeps the wrapped high-frequency
    // speckle below the coherent peak at t = 10.
    opts.points_per_axis = 4096;
    opts.extent = 204.8;
    opts.widths = {0.2, 0.25, 0.3};
    const NormEstimate est = highfreq_check(sym, 1.0, INFINITY, 0.5, 0.0, ts, opts);
    report(11, est.pass, "high-frequency persistence of the small-time rate",
           fmt("fitted slope %.4f (target -0.5 +- 0.1) over t in [0.1, 10]",
               est.fitted_exponent));
}

} // namespace

int main() {
    const auto t0 = clk::now();
    guarded(1, "free-particle modulus oracle", criterion_1);
    guarded(2, "self-similar scaling of the quartic kernel", criterion_2);
    guarded(3, "sharp spatial decay exponent", criterion_3);
    guarded(4, "two-regime envelope ratio stability", criterion_4);
    guarded(5, "radial-phase inequality audits", criterion_5);
    guarded(6, "stationary sphere decomposition", criterion_6);
    guarded(7, "radial + compact pipeline vs grid oracle", criterion_7);
    guarded(8, "compact-piece spatial decay", criterion_8);
    guarded(9, "propagator unitarity", criterion_9);
    guarded(10, "L1 -> Linf exponent fit + classifier", criterion_10);
    guarded(11, "high-frequency persistence of the small-time rate", criterion_11);
    std::printf("acceptance: %d/11 passed in %.1f s\n", 11 - failures,
                seconds_since(t0));
    return failures;
}
