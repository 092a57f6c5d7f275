#include "hsd/decay.hpp"

#include <cmath>
#include <stdexcept>

namespace hsd {

double decay_mu(int m, int n) { return n * (m - 2) / (2.0 * (m - 1)); }
double decay_nu(int m, int n) { return n / (2.0 * (m - 1)); }

double decay_mu_shifted(int m, int n, int b) {
    if (b < 0 || 2 * b > m * n - 2 * n)
        throw std::invalid_argument("decay_mu_shifted: b out of range [0, (mn-2n)/2]");
    return (m * n - 2 * n - 2 * b) / (2.0 * (m - 1));
}

namespace {

double envelope_mu(Regime regime, int m, int n, double mu, double t, double r) {
    const double at = std::abs(t);
    if (regime == Regime::small_t) {
        if (at > 1.0)
            throw std::invalid_argument("envelope: small_t regime needs |t| <= 1");
        return std::pow(at, -double(n) / m) *
               std::pow(1.0 + std::pow(at, -1.0 / m) * r, -mu);
    }
    if (at < 1.0) throw std::invalid_argument("envelope: large_t regime needs |t| >= 1");
    return std::pow(at, -1.0 / m) * std::pow(1.0 + r / at, -mu);
}

} // namespace

double envelope(Regime regime, int m, int n, double t, double r) {
    if (t == 0.0) throw std::invalid_argument("envelope: t must be nonzero");
    return envelope_mu(regime, m, n, decay_mu(m, n), t, r);
}

namespace {

struct SweepResult {
    double max_ratio = 0.0;
    std::vector<std::array<double, 5>> rows;
    std::vector<double> t_abs, center_abs; // |I(t,0)| per t, for the exponent fit
};

SweepResult envelope_sweep(const Symbol& sym, Regime regime,
                           std::span<const double> t_values,
                           std::span<const double> scaled_radii, long N,
                           const DecayOpts& opts) {
    const int m = sym.order();
    const int n = sym.dim();
    const double mu = opts.mu_override >= 0.0 ? opts.mu_override : decay_mu(m, n);
    const bool weighted = !opts.weight.k.empty();

    SweepResult out;
    for (double t : t_values) {
        const double scale =
            regime == Regime::small_t ? std::pow(t, 1.0 / m) : t;
        double x_max = 0.0;
        for (double s : scaled_radii) x_max = std::max(x_max, s * scale);
        const FftGrid grid =
            plan_fft_grid(sym, t, std::max(1.1 * x_max, 1.0), N, opts.kernel);
        const GridKernel gk = kernel_fft(sym, t, grid, opts.kernel.eps_levels,
                                         weighted ? &opts.weight : nullptr);
        const GridFunction& v = gk.values;
        const long mid = N / 2; // x = 0
        out.t_abs.push_back(t);
        out.center_abs.push_back(std::abs(v.at(mid, mid)));
        for (double s : scaled_radii) {
            const long i =
                mid + static_cast<long>(std::llround(s * scale / v.dx()));
            if (i < 0 || i >= N) continue;
            const double r = std::abs(v.coord(i));
            const double env = envelope_mu(regime, m, n, mu, t, r);
            const double mag = std::abs(v.at(i, mid));
            const double ratio = mag / env;
            out.max_ratio = std::max(out.max_ratio, ratio);
            out.rows.push_back({t, r, mag, env, ratio});
        }
    }
    return out;
}

} // namespace

EnvelopeFit envelope_check(const Symbol& sym, Regime regime,
                           std::span<const double> t_values,
                           std::span<const double> scaled_radii,
                           const DecayOpts& opts) {
    const SweepResult base =
        envelope_sweep(sym, regime, t_values, scaled_radii, opts.points_per_axis, opts);
    const SweepResult fine = envelope_sweep(sym, regime, t_values, scaled_radii,
                                            2 * opts.points_per_axis, opts);
    EnvelopeFit fit;
    fit.max_ratio = fine.max_ratio;
    fit.stability = base.max_ratio > 0.0 ? fine.max_ratio / base.max_ratio : 0.0;
    fit.samples = fine.rows;
    if (fine.t_abs.size() >= 2) {
        bool positive = true;
        for (double v : fine.center_abs) positive = positive && v > 0.0;
        if (positive)
            fit.fitted_exponent = fit_power_law(fine.t_abs, fine.center_abs).slope;
    }
    fit.pass = std::isfinite(fit.max_ratio) && fit.max_ratio > 0.0 &&
               fit.stability >= 0.5 && fit.stability <= 2.0;
    return fit;
}

SharpnessReport sharpness_check(int m, int n, double x_lo, double x_hi,
                                double slope_tol, double band_tol,
                                const DecayOpts& opts) {
    if (n != 2) throw std::invalid_argument("sharpness_check: only n=2 is implemented");
    if (m % 2 != 0 || m < 2) throw std::invalid_argument("sharpness_check: m even >= 2");
    const Symbol sym(Polynomial::radial_power(n, m / 2));
    const double mu = decay_mu(m, n);

    const FftGrid grid =
        plan_fft_grid(sym, 1.0, 1.1 * x_hi, opts.points_per_axis, opts.kernel);
    const GridKernel gk = kernel_fft(sym, 1.0, grid, opts.kernel.eps_levels);
    const GridFunction& v = gk.values;
    const long mid = opts.points_per_axis / 2;

    SharpnessReport rep;
    rep.mu = mu;
    std::vector<double> radii, mags;
    rep.q_min = std::numeric_limits<double>::infinity();
    const long i_lo = mid + static_cast<long>(std::ceil(x_lo / v.dx()));
    const long i_hi = mid + static_cast<long>(std::floor(x_hi / v.dx()));
    const long stride = std::max<long>(1, (i_hi - i_lo) / 256);
    for (long i = i_lo; i <= i_hi; i += stride) {
        const double r = v.coord(i);
        const double mag = std::abs(v.at(i, mid));
        const double q = mag * std::pow(1.0 + r, mu);
        radii.push_back(r);
        mags.push_back(mag);
        rep.q_min = std::min(rep.q_min, q);
        rep.q_max = std::max(rep.q_max, q);
        rep.samples.push_back({r, mag, q});
    }
    rep.slope = fit_power_law(radii, mags).slope;
    rep.pass = rep.q_min > 0.0 && std::abs(rep.slope + mu) <= slope_tol &&
               rep.q_max / rep.q_min < band_tol;
    return rep;
}

EnvelopeFit derivative_kernel_check(const Symbol& sym, const MultiIndex& alpha,
                                    Regime regime, std::span<const double> t_values,
                                    std::span<const double> scaled_radii,
                                    DecayOpts opts) {
    const int b = alpha.order();
    opts.mu_override = decay_mu_shifted(sym.order(), sym.dim(), b);
    opts.weight = alpha;
    return envelope_check(sym, regime, t_values, scaled_radii, opts);
}

} // namespace hsd
