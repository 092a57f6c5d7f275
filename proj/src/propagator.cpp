#include "hsd/propagator.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsd/fit.hpp"

namespace hsd {

namespace {

constexpr double kPi = std::numbers::pi;

// DFT frequency for index i on an N-point grid of half-width L: k pi / L
// with k wrapped to [-N/2, N/2).
double freq(long i, long N, double L) {
    long k = i < N / 2 ? i : i - N;
    return k * kPi / L;
}

void fft2(std::vector<std::complex<double>>& data, long N, int sign) {
    fftw_plan plan = fftw_plan_dft_2d(
        static_cast<int>(N), static_cast<int>(N),
        reinterpret_cast<fftw_complex*>(data.data()),
        reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

} // namespace

GridFunction make_grid(long points_per_axis, double extent) {
    if (points_per_axis < 2 || extent <= 0.0)
        throw std::invalid_argument("make_grid: bad dimensions");
    GridFunction g;
    g.n = 2;
    g.points_per_axis = points_per_axis;
    g.extent = extent;
    g.samples.assign(points_per_axis * points_per_axis, 0.0);
    return g;
}

GridFunction gaussian_data(long points_per_axis, double extent, double width,
                           std::span<const double> center_freq,
                           std::span<const double> center) {
    GridFunction g = make_grid(points_per_axis, extent);
    const double k0 = center_freq.size() > 0 ? center_freq[0] : 0.0;
    const double k1 = center_freq.size() > 1 ? center_freq[1] : 0.0;
    const double c0 = center.size() > 0 ? center[0] : 0.0;
    const double c1 = center.size() > 1 ? center[1] : 0.0;
    for (long i = 0; i < points_per_axis; ++i) {
        const double x = g.coord(i) - c0;
        for (long j = 0; j < points_per_axis; ++j) {
            const double y = g.coord(j) - c1;
            g.at(i, j) = std::polar(std::exp(-(x * x + y * y) / (2.0 * width * width)),
                                    k0 * (x + c0) + k1 * (y + c1));
        }
    }
    return g;
}

GridFunction evolve(const Symbol& sym, const GridFunction& u0, double t,
                    double nyquist_tol) {
    if (sym.dim() != 2 || u0.n != 2)
        throw std::invalid_argument("evolve: only n=2 is implemented");
    const long N = u0.points_per_axis;
    GridFunction u = u0;
    fft2(u.samples, N, FFTW_FORWARD);

    // Energy at the outermost frequency ring must be negligible.
    double shell = 0.0, total = 0.0;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) {
            const double e = std::norm(u.at(i, j));
            total += e;
            const long ki = std::min(i, N - i), kj = std::min(j, N - j);
            if (std::max(ki, kj) >= N / 2 - 1) shell += e;
        }
    if (total == 0.0) return u0;
    if (shell / total > nyquist_tol)
        throw std::runtime_error("evolve: data not resolved (energy at the Nyquist "
                                 "shell)");

    for (long i = 0; i < N; ++i) {
        const double xi0 = freq(i, N, u0.extent);
        for (long j = 0; j < N; ++j) {
            const double xi[2] = {xi0, freq(j, N, u0.extent)};
            u.at(i, j) *= std::polar(1.0, t * sym(xi));
        }
    }
    fft2(u.samples, N, FFTW_BACKWARD);
    const double norm = 1.0 / double(N * N);
    for (auto& v : u.samples) v *= norm;
    return u;
}

GridFunction spectral_highpass(const GridFunction& u0, double a_cut) {
    const long N = u0.points_per_axis;
    GridFunction u = u0;
    fft2(u.samples, N, FFTW_FORWARD);
    for (long i = 0; i < N; ++i) {
        const double xi0 = freq(i, N, u0.extent);
        for (long j = 0; j < N; ++j) {
            if (std::hypot(xi0, freq(j, N, u0.extent)) <= a_cut) u.at(i, j) = 0.0;
        }
    }
    fft2(u.samples, N, FFTW_BACKWARD);
    const double norm = 1.0 / double(N * N);
    for (auto& v : u.samples) v *= norm;
    return u;
}

double lp_norm(const GridFunction& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
    if (std::isinf(p)) {
        double mx = 0.0;
        for (const auto& v : f.samples) mx = std::max(mx, std::abs(v));
        return mx;
    }
    const double cell = f.dx() * f.dx();
    double acc = 0.0;
    for (const auto& v : f.samples) acc += std::pow(std::abs(v), p);
    return std::pow(acc * cell, 1.0 / p);
}

IndexPair admissible(double p, double q, int m) {
    if (p < 1.0 || q < 1.0)
        throw std::invalid_argument("admissible: p, q must be in [1, inf]");
    const double x = 1.0 / p, y = 1.0 / q; // 0 for p = inf
    const double tol = 1e-12;
    IndexPair pair{p, q, ""};

    const double Ax = 0.5, Ay = 0.5;
    const double Cx = 1.0, Cy = 0.0;
    auto near = [&](double a, double b, double c, double d) {
        return std::abs(a - c) <= tol && std::abs(b - d) <= tol;
    };

    if (m == 2) {
        // Degenerate quadrilateral: the segment from A to C.
        const double cross = (Cx - Ax) * (y - Ay) - (Cy - Ay) * (x - Ax);
        const bool on = std::abs(cross) <= tol && x >= Ax - tol && x <= Cx + tol;
        if (!on) pair.classification = "outside";
        else if (near(x, y, Ax, Ay)) pair.classification = "apex_A_excluded";
        else if (near(x, y, Cx, Cy)) pair.classification = "edge";
        else pair.classification = "edge";
        return pair;
    }

    const double inv_tau = (m - 2) / (2.0 * (m - 1));
    const double Bx = 1.0, By = inv_tau;
    const double Dx = 1.0 - inv_tau, Dy = 0.0;
    const double vx[4] = {Ax, Bx, Cx, Dx};
    const double vy[4] = {Ay, By, Cy, Dy};

    bool inside = true, boundary = false;
    for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        const double cross =
            (vx[f] - vx[e]) * (y - vy[e]) - (vy[f] - vy[e]) * (x - vx[e]);
        if (cross > tol) inside = false; // vertices are clockwise
        else if (cross > -tol) boundary = true;
    }
    if (!inside) pair.classification = "outside";
    else if (near(x, y, Ax, Ay)) pair.classification = "apex_A_excluded";
    else if (near(x, y, Bx, By)) pair.classification = "endpoint_B";
    else if (near(x, y, Dx, Dy)) pair.classification = "endpoint_D";
    else if (boundary) pair.classification = "edge";
    else pair.classification = "interior";
    return pair;
}

namespace {

NormEstimate ratio_fit(const Symbol& sym, double p, double q,
                       std::span<const double> t_grid, double predicted, double tol,
                       const std::vector<GridFunction>& family) {
    NormEstimate est;
    est.pair = admissible(p, q, sym.order());
    est.t_grid.assign(t_grid.begin(), t_grid.end());
    est.predicted_exponent = predicted;
    est.family_max.assign(t_grid.size(), 0.0);
    for (const GridFunction& u0 : family) {
        const double denom = lp_norm(u0, p);
        std::vector<double> curve;
        for (size_t k = 0; k < t_grid.size(); ++k) {
            const GridFunction ut = evolve(sym, u0, t_grid[k]);
            const double ratio = lp_norm(ut, q) / denom;
            curve.push_back(ratio);
            est.family_max[k] = std::max(est.family_max[k], ratio);
        }
        est.ratios.push_back(std::move(curve));
    }
    const PowerLawFit fit = fit_power_law(est.t_grid, est.family_max);
    est.fitted_exponent = fit.slope;
    est.residual_rms = fit.residual_rms;
    est.pass = std::abs(est.fitted_exponent - est.predicted_exponent) <= tol;
    return est;
}

} // namespace

NormEstimate lpq_exponent_fit(const Symbol& sym, double p, double q,
                              std::span<const double> t_grid, bool small_t,
                              const FitOpts& opts) {
    const IndexPair pair = admissible(p, q, sym.order());
    if (pair.classification == "outside")
        throw std::invalid_argument("lpq_exponent_fit: (p,q) outside the admissible set");
    if (pair.classification == "endpoint_B" || pair.classification == "endpoint_D")
        throw std::invalid_argument(
            "lpq_exponent_fit: endpoint pair refused (needs H1/BMO norms, out of scope)");
    if (pair.classification == "apex_A_excluded" && !(p == 2.0 && q == 2.0))
        throw std::invalid_argument("lpq_exponent_fit: apex pair excluded");

    const int n = sym.dim(), m = sym.order();
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double predicted = small_t
                                 ? double(n) / m * (iq - ip)
                                 : n * std::abs(iq - (1.0 - ip)) - 1.0 / m;

    std::vector<GridFunction> family;
    for (double w : opts.widths)
        family.push_back(gaussian_data(opts.points_per_axis, opts.extent, w));
    return ratio_fit(sym, p, q, t_grid, predicted, opts.exponent_tol, family);
}

NormEstimate highfreq_check(const Symbol& sym, double p, double q, double a_cut,
                            double center_freq, std::span<const double> t_grid,
                            const FitOpts& opts) {
    const int n = sym.dim(), m = sym.order();
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double predicted = double(n) / m * (iq - ip);

    std::vector<GridFunction> family;
    const double k0[2] = {center_freq, 0.0};
    for (double w : opts.widths) {
        GridFunction u0 = gaussian_data(opts.points_per_axis, opts.extent, w, k0);
        family.push_back(spectral_highpass(u0, a_cut));
    }
    return ratio_fit(sym, p, q, t_grid, predicted, opts.exponent_tol, family);
}

} // namespace hsd
