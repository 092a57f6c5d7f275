#include "hsd/levelset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsd {

namespace {

// Largest radius beyond which the profile derivative cannot vanish
// (Cauchy root bound on p').
double derivative_root_bound(std::span<const double> prof) {
    const int deg = static_cast<int>(prof.size()) - 1;
    if (deg < 2) return 1.0;
    const double top = std::abs(prof[deg] * deg);
    double mx = 0.0;
    for (int d = 1; d < deg; ++d) mx = std::max(mx, std::abs(prof[d] * d));
    return 1.0 + mx / top;
}

// Supremum of the profile over the region where it is non-increasing:
// max over interior critical points plus the value at rho=0. Any level
// strictly above this is crossed exactly once, with positive slope.
double monotone_threshold(std::span<const double> prof) {
    double mx = prof.empty() ? 0.0 : prof[0]; // p(0)
    const double rmax = derivative_root_bound(prof);
    const int samples = 64 * static_cast<int>(prof.size());
    double prev_r = 0.0;
    double prev_d = poly_eval_derivative(prof, 0.0);
    for (int i = 1; i <= samples; ++i) {
        const double r = rmax * i / samples;
        const double d = poly_eval_derivative(prof, r);
        if ((prev_d <= 0.0 && d > 0.0) || (prev_d >= 0.0 && d < 0.0) || d == 0.0) {
            double lo = prev_r, hi = r;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((poly_eval_derivative(prof, lo) <= 0.0) ==
                    (poly_eval_derivative(prof, mid) <= 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            mx = std::max(mx, poly_eval(prof, 0.5 * (lo + hi)));
        }
        prev_r = r;
        prev_d = d;
    }
    return mx;
}

} // namespace

Threshold find_threshold(const Symbol& sym, int sphere_density, double s_scan_max) {
    const SphereGrid grid = make_sphere_grid(sym.dim(), sphere_density);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& w : grid.points)
        worst = std::max(worst, monotone_threshold(sym.poly().radial_profile(w)));

    for (double s = 1.0; s <= s_scan_max; s *= 2.0) {
        if (s > worst) return Threshold{s, sphere_density, s_scan_max};
    }
    throw std::runtime_error("find_threshold: no valid threshold up to s_scan_max");
}

RadialRoot solve_rho_profile(std::span<const double> profile, double s, int m,
                             double principal_on_ray, double tol_rel, double warm_start) {
    if (principal_on_ray <= 0.0)
        throw std::invalid_argument("solve_rho: principal part not positive on ray");
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::invalid_argument("solve_rho: level must be positive and finite");
    const double tol = tol_rel * std::max(std::abs(s), 1.0);
    double guess = warm_start > 0.0 ? warm_start
                                    : std::pow(s / principal_on_ray, 1.0 / m);

    // Bracket: unique crossing from below means p < s left of the root.
    double lo = guess, hi = guess;
    double flo = poly_eval(profile, lo) - s;
    double fhi = flo;
    for (int it = 0; it < 200 && flo > 0.0; ++it) {
        lo *= 0.5;
        flo = poly_eval(profile, lo) - s;
    }
    for (int it = 0; it < 200 && fhi < 0.0; ++it) {
        hi *= 1.5;
        fhi = poly_eval(profile, hi) - s;
    }
    if (flo > 0.0 || fhi < 0.0)
        throw std::runtime_error("solve_rho: failed to bracket the level-set root");

    double x = std::clamp(guess, lo, hi);
    double f = poly_eval(profile, x) - s;
    double df = poly_eval_derivative(profile, x);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(f) <= tol && df > 0.0) {
            converged = true;
            break;
        }
        // Shrink the bracket with the current sign first, then step.
        if (f > 0.0) hi = x; else lo = x;
        double next = (df > 0.0) ? x - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) { converged = std::abs(f) <= tol; break; }
        x = next;
        f = poly_eval(profile, x) - s;
        df = poly_eval_derivative(profile, x);
    }
    if (!converged && !(std::abs(f) <= tol))
        throw std::runtime_error("solve_rho: Newton/bisection did not converge, bracket [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");

    RadialRoot root;
    root.s = s;
    root.rho = x;
    root.residual = std::abs(f);
    root.radial_derivative = df;
    return root;
}

RadialRoot solve_rho(const Symbol& sym, double s, std::span<const double> omega,
                     double tol_rel) {
    const auto prof = sym.poly().radial_profile(omega);
    const double pm = sym.principal()(omega);
    RadialRoot root = solve_rho_profile(prof, s, sym.order(), pm, tol_rel);
    root.omega.assign(omega.begin(), omega.end());
    return root;
}

double sigma(const Symbol& sym, double s, std::span<const double> omega) {
    const double pm = sym.principal()(omega);
    const double rho = solve_rho(sym, s, omega).rho;
    return rho - std::pow(s, 1.0 / sym.order()) * std::pow(pm, -1.0 / sym.order());
}

namespace {

// Central finite differences of sigma in s, orders 0..3.
double sigma_fd(const Symbol& sym, std::span<const double> omega, double s, int k,
                double h) {
    auto f = [&](double x) { return sigma(sym, x, omega); };
    switch (k) {
        case 0: return f(s);
        case 1: return (f(s + h) - f(s - h)) / (2.0 * h);
        case 2: return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        case 3: return (f(s + 2 * h) - 2.0 * f(s + h) + 2.0 * f(s - h) - f(s - 2 * h)) /
                       (2.0 * h * h * h);
        default: throw std::invalid_argument("sigma_audit: k_max must be <= 3");
    }
}

} // namespace

SigmaAudit sigma_audit(const Symbol& sym, int k_max, double s_lo, double s_hi,
                       int s_count, int sphere_density) {
    if (k_max > 3) throw std::invalid_argument("sigma_audit: k_max must be <= 3");
    const SphereGrid grid = make_sphere_grid(sym.dim(), sphere_density);
    const double eps = std::numeric_limits<double>::epsilon();

    SigmaAudit audit;
    audit.constants.assign(k_max + 1, 0.0);
    audit.constants_refined.assign(k_max + 1, 0.0);
    for (int k = 0; k <= k_max; ++k) {
        const double step_exp = 1.0 / (k + 2);
        for (int i = 0; i < s_count; ++i) {
            const double s = s_lo * std::pow(s_hi / s_lo, s_count == 1 ? 0.0 : double(i) / (s_count - 1));
            const double h = s * std::pow(eps, step_exp);
            double worst = 0.0, worst_half = 0.0;
            for (const auto& w : grid.points) {
                const double d = std::abs(sigma_fd(sym, w, s, k, h));
                worst = std::max(worst, d);
                const double dh = std::abs(sigma_fd(sym, w, s, k, h / 2.0));
                worst_half = std::max(worst_half, dh);
                if (k > 0) {
                    // Derivative estimate vs the root-solver noise floor; only
                    // meaningful when the weighted derivative is itself above it.
                    const double rho = solve_rho(sym, s, w).rho;
                    const double noise = 32.0 * eps * rho / std::pow(h / 2.0, k);
                    if (std::pow(1.0 + s, k) * dh > 1e-6 && noise > 0.5 * dh)
                        audit.unstable_flag = true;
                }
            }
            const double wgt = std::pow(1.0 + s, k);
            audit.rows.push_back({k, s, worst, wgt * worst});
            audit.constants[k] = std::max(audit.constants[k], wgt * worst);
            audit.constants_refined[k] = std::max(audit.constants_refined[k], wgt * worst_half);
        }
    }
    audit.stable.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        const double a = audit.constants[k], b = audit.constants_refined[k];
        const double floor = 1e-6; // below the finite-difference noise level
        audit.stable[k] = (a < floor && b < floor) ||
                          (b > 0.0 && a / b < 2.0 && b / a < 2.0);
    }
    return audit;
}

} // namespace hsd
