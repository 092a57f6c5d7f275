#include "hsd/kernel.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsd/levelset.hpp"
#include "hsd/parallel.hpp"
#include "hsd/phase.hpp"
#include "hsd/quad.hpp"

namespace hsd {

namespace {

constexpr double kPi = std::numbers::pi;

void require_2d(const Symbol& sym, const char* who) {
    if (sym.dim() != 2)
        throw std::invalid_argument(std::string(who) + ": only n=2 is implemented");
}

// Max |grad P| over the sphere of radius R, sampled.
double max_gradient(const Symbol& sym, double R, int directions = 128) {
    const Polynomial gx = sym.poly().derivative(0);
    const Polynomial gy = sym.poly().derivative(1);
    double mx = 0.0;
    for (int d = 0; d < directions; ++d) {
        const double th = 2.0 * kPi * d / directions;
        const double xi[2] = {R * std::cos(th), R * std::sin(th)};
        mx = std::max(mx, std::hypot(gx(xi), gy(xi)));
    }
    return mx;
}

double max_on_sphere(const Symbol& sym, double R, int directions = 128) {
    double mx = 0.0;
    for (int d = 0; d < directions; ++d) {
        const double th = 2.0 * kPi * d / directions;
        const double xi[2] = {R * std::cos(th), R * std::sin(th)};
        mx = std::max(mx, sym(xi));
    }
    return mx;
}

// chi(|xi|) over the full frequency grid.
std::vector<double> window_on_grid(const FftGrid& grid) {
    const long N = grid.points_per_axis;
    std::vector<double> axis(N);
    for (long i = 0; i < N; ++i) axis[i] = -grid.extent + i * grid.dxi();
    std::vector<double> chi(N * N);
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j)
            chi[i * N + j] = grid.window(std::hypot(axis[i], axis[j]));
    return chi;
}

// Coefficients c_l with sum_l c_l (2^-l)^p = delta_{p0}, p = 0..L-1: the
// damping-extrapolation weights for levels eps/2^l.
std::vector<double> richardson_weights(int levels) {
    const int L = levels;
    std::vector<std::vector<double>> A(L, std::vector<double>(L + 1, 0.0));
    for (int p = 0; p < L; ++p) {
        for (int l = 0; l < L; ++l) A[p][l] = std::pow(std::ldexp(1.0, -l), p);
        A[p][L] = (p == 0) ? 1.0 : 0.0;
    }
    for (int col = 0; col < L; ++col) {
        int piv = col;
        for (int r = col + 1; r < L; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < L; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int c = col; c <= L; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> w(L);
    for (int l = 0; l < L; ++l) w[l] = A[l][L] / A[l][l];
    return w;
}

// P(xi) over the full frequency grid, term by term with per-axis power tables.
std::vector<double> symbol_on_grid(const Symbol& sym, const FftGrid& grid) {
    const long N = grid.points_per_axis;
    std::vector<double> out(N * N, 0.0);
    std::vector<double> axis(N);
    for (long i = 0; i < N; ++i) axis[i] = -grid.extent + i * grid.dxi();
    std::vector<double> pw1(N), pw2(N);
    for (const auto& [alpha, c] : sym.poly().terms()) {
        for (long i = 0; i < N; ++i) {
            pw1[i] = std::pow(axis[i], alpha.k[0]);
            pw2[i] = std::pow(axis[i], alpha.k[1]);
        }
        for (long i = 0; i < N; ++i) {
            const double ci = c * pw1[i];
            double* row = out.data() + i * N;
            for (long j = 0; j < N; ++j) row[j] += ci * pw2[j];
        }
    }
    return out;
}

} // namespace

double Cutoff::psi(double s) const {
    if (s <= a1) return 0.0;
    if (s >= 2.0 * a1) return 1.0;
    const double y = (s - a1) / a1;
    return y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
}

double FftGrid::x_extent() const { return kPi / dxi(); }

double FftGrid::window(double rho) const {
    if (rho <= plateau) return 1.0;
    if (rho >= extent) return 0.0;
    const double y = (extent - rho) / (extent - plateau);
    const double a = std::exp(-1.0 / y);
    const double b = std::exp(-1.0 / (1.0 - y));
    return a / (a + b);
}

FftGrid plan_fft_grid(const Symbol& sym, double t, double x_max, long points_per_axis,
                      const KernelOpts& opts) {
    require_2d(sym, "plan_fft_grid");
    if (t <= 0.0) throw std::invalid_argument("plan_fft_grid: t must be positive");
    if (points_per_axis < 8 || points_per_axis > opts.max_points_per_axis ||
        (points_per_axis & (points_per_axis - 1)) != 0)
        throw std::invalid_argument("plan_fft_grid: points_per_axis must be a power of "
                                    "two within budget");

    // Largest R with dxi * (t*|grad P|(R) + x_max) <= 2 pi / samples_per_period.
    const long N = points_per_axis;
    auto excess = [&](double R) {
        return (2.0 * R / N) * (t * max_gradient(sym, R) + x_max) -
               2.0 * kPi / opts.samples_per_period;
    };
    double hi = 1.0;
    while (excess(hi) < 0.0) hi *= 2.0;
    double lo = hi > 1.0 ? hi / 2.0 : 1e-9;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }

    FftGrid grid;
    grid.n = 2;
    grid.points_per_axis = N;
    grid.extent = lo;
    grid.plateau = grid.extent / opts.boundary_factor;
    if (grid.x_extent() < x_max)
        throw std::runtime_error("plan_fft_grid: requested |x| range not resolvable at "
                                 "this grid size (unresolved oscillation)");
    // All stationary frequencies for |x| <= x_max (where t |grad P| <= x_max)
    // must sit well inside the window plateau; outside it the truncation
    // transition would distort the stationary-phase contribution.
    if (t * max_gradient(sym, grid.extent) < x_max)
        throw std::runtime_error("plan_fft_grid: stationary frequencies exceed the "
                                 "box at this grid size");
    double st_lo = 0.0, st_hi = grid.extent;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (st_lo + st_hi);
        (t * max_gradient(sym, mid) < x_max ? st_lo : st_hi) = mid;
    }
    if (1.1 * st_hi > grid.plateau)
        throw std::runtime_error("plan_fft_grid: stationary frequencies reach the "
                                 "window transition at this grid size");
    // Mild damping at the plateau edge: the truncation is done by the smooth
    // window, so the base level only has to regularize, and the extrapolation
    // to eps -> 0 stays accurate at the stationary frequencies.
    const double p_pl = max_on_sphere(sym, grid.plateau);
    if (p_pl <= 0.0)
        throw std::runtime_error("plan_fft_grid: symbol not positive on the plateau");
    grid.eps = 0.1 / p_pl;
    return grid;
}

GridKernel kernel_fft(const Symbol& sym, double t, const FftGrid& grid, int eps_levels,
                      const MultiIndex* weight) {
    require_2d(sym, "kernel_fft");
    if (eps_levels < 1) throw std::invalid_argument("kernel_fft: need >= 1 eps level");
    const long N = grid.points_per_axis;
    const std::vector<double> P = symbol_on_grid(sym, grid);
    const std::vector<double> chi = window_on_grid(grid);
    const std::vector<double> wfin = richardson_weights(eps_levels);
    // The previous-order value uses the smallest levels 1..L-1 (no estimate at L=1).
    std::vector<double> wprev(eps_levels, 0.0);
    if (eps_levels > 1) {
        const std::vector<double> tail = richardson_weights(eps_levels - 1);
        for (int l = 1; l < eps_levels; ++l) wprev[l] = tail[l - 1];
    } else {
        wprev[0] = 1.0;
    }

    std::vector<std::complex<double>> buf(N * N);
    std::vector<std::complex<double>> fin(N * N, 0.0), prev(N * N, 0.0);
    fftw_plan plan = fftw_plan_dft_2d(
        static_cast<int>(N), static_cast<int>(N),
        reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD, FFTW_ESTIMATE);

    // Per-axis prefactor: (2 pi)^-1 dxi e^{i pi N / 2}, plus the (-1)^{k+j}
    // shifts that center both grids.
    const std::complex<double> axis_pref =
        std::polar(grid.dxi() / (2.0 * kPi), kPi * N / 2.0);
    const std::complex<double> pref = axis_pref * axis_pref;

    std::vector<double> wgt;
    if (weight) {
        wgt.assign(N * N, 0.0);
        for (long i = 0; i < N; ++i) {
            const double x1 = std::pow(-grid.extent + i * grid.dxi(), weight->k[0]);
            for (long j = 0; j < N; ++j)
                wgt[i * N + j] =
                    x1 * std::pow(-grid.extent + j * grid.dxi(), weight->k[1]);
        }
    }

    for (int l = 0; l < eps_levels; ++l) {
        const double eps_l = std::ldexp(grid.eps, -l);
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) {
                const double p = P[i * N + j];
                double sign = chi[i * N + j] * (((i + j) & 1) ? -1.0 : 1.0);
                if (weight) sign *= wgt[i * N + j];
                buf[i * N + j] = sign * std::exp(-eps_l * p) * std::polar(1.0, t * p);
            }
        fftw_execute(plan);
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) {
                const double sign = ((i + j) & 1) ? -1.0 : 1.0;
                const std::complex<double> v = sign * pref * buf[i * N + j];
                fin[i * N + j] += wfin[l] * v;
                prev[i * N + j] += wprev[l] * v;
            }
    }
    fftw_destroy_plan(plan);

    GridKernel out;
    out.grid = grid;
    out.values.n = 2;
    out.values.points_per_axis = N;
    out.values.extent = grid.x_extent();
    out.values.samples = std::move(fin);
    double err = 0.0;
    for (long k = 0; k < N * N; ++k)
        err = std::max(err, std::abs(out.values.samples[k] - prev[k]));
    out.error_estimate = err;
    return out;
}

std::vector<KernelValue> kernel_points(const Symbol& sym, double t,
                                       std::span<const std::vector<double>> points,
                                       const FftGrid& grid, int eps_levels,
                                       bool parallel) {
    require_2d(sym, "kernel_points");
    const long N = grid.points_per_axis;
    const long P = static_cast<long>(points.size());
    const std::vector<double> Pval = symbol_on_grid(sym, grid);
    const std::vector<double> chi = window_on_grid(grid);
    const std::vector<double> wfin = richardson_weights(eps_levels);
    std::vector<double> wprev(eps_levels, 0.0);
    if (eps_levels > 1) {
        const std::vector<double> tail = richardson_weights(eps_levels - 1);
        for (int l = 1; l < eps_levels; ++l) wprev[l] = tail[l - 1];
    } else {
        wprev[0] = 1.0;
    }

    std::vector<double> axis(N);
    for (long i = 0; i < N; ++i) axis[i] = -grid.extent + i * grid.dxi();
    const double cell = grid.dxi() * grid.dxi() / (4.0 * kPi * kPi);

    std::vector<std::complex<double>> fin(P, 0.0), prev(P, 0.0);
    std::vector<std::complex<double>> g(N * N);
    for (int l = 0; l < eps_levels; ++l) {
        const double eps_l = std::ldexp(grid.eps, -l);
        for (long k = 0; k < N * N; ++k)
            g[k] = chi[k] * std::exp(-eps_l * Pval[k]) * std::polar(1.0, t * Pval[k]);

#pragma omp parallel for schedule(dynamic) if (parallel)
        for (long p = 0; p < P; ++p) {
            const auto& x = points[p];
            std::vector<std::complex<double>> t1(N), t2(N);
            for (long i = 0; i < N; ++i) {
                t1[i] = std::polar(1.0, x[0] * axis[i]);
                t2[i] = std::polar(1.0, x[1] * axis[i]);
            }
            std::complex<double> acc = 0.0;
            for (long i = 0; i < N; ++i) {
                std::complex<double> row = 0.0;
                const std::complex<double>* gi = g.data() + i * N;
                for (long j = 0; j < N; ++j) row += gi[j] * t2[j];
                acc += t1[i] * row;
            }
            acc *= cell;
            fin[p] += wfin[l] * acc;
            prev[p] += wprev[l] * acc;
        }
    }

    std::vector<KernelValue> out(P);
    for (long p = 0; p < P; ++p) {
        out[p].t = t;
        out[p].x = points[p];
        out[p].value = fin[p];
        out[p].method = "fft";
        out[p].error_estimate = std::abs(fin[p] - prev[p]);
    }
    return out;
}

namespace {

std::complex<double> compact_sum(const Symbol& sym, double t, std::span<const double> x,
                                 const Cutoff& cutoff, double box, double ppp) {
    QuadRule rules[2];
    for (int d = 0; d < 2; ++d) {
        // Coefficient-norm bound on |d_d P| over the box.
        double grad_bound = 0.0;
        for (const auto& [alpha, c] : sym.poly().terms())
            grad_bound += std::abs(c) * alpha.k[d] *
                          std::pow(std::max(box, 1.0), alpha.order() - 1);
        double f = (std::abs(x[d]) + t * grad_bound) / (2.0 * kPi);
        f = std::max(f, 2.0 * ppp / box); // at least ~4 panels per axis
        rules[d] = flatten(make_panels(-box, box, [&](double) { return f; }, ppp));
    }
    const double lim = 2.0 * cutoff.a1;
    std::complex<double> acc = 0.0;
    for (size_t i = 0; i < rules[0].nodes.size(); ++i)
        for (size_t j = 0; j < rules[1].nodes.size(); ++j) {
            const double xi[2] = {rules[0].nodes[i], rules[1].nodes[j]};
            const double p = sym(xi);
            if (p >= lim) continue;
            const double w = (1.0 - cutoff.psi(p)) * rules[0].weights[i] *
                             rules[1].weights[j];
            acc += w * std::polar(1.0, x[0] * xi[0] + x[1] * xi[1] + t * p);
        }
    return acc / (4.0 * kPi * kPi);
}

} // namespace

KernelValue kernel_compact(const Symbol& sym, double t, std::span<const double> x,
                           const Cutoff& cutoff, double periods_per_panel,
                           bool estimate_error) {
    require_2d(sym, "kernel_compact");
    // Bounding box of {P <= 2 a1} from the level-set radius over directions.
    double rho_max = 0.0;
    for (int d = 0; d < 64; ++d) {
        const double th = 2.0 * kPi * d / 64;
        const double w[2] = {std::cos(th), std::sin(th)};
        rho_max = std::max(rho_max, solve_rho(sym, 2.0 * cutoff.a1, w).rho);
    }
    const double box = 1.05 * rho_max;

    const std::complex<double> fine = compact_sum(sym, t, x, cutoff, box,
                                                  periods_per_panel / 2.0);
    KernelValue out;
    out.t = t;
    out.x.assign(x.begin(), x.end());
    out.value = fine;
    out.method = "compact";
    if (estimate_error) {
        const std::complex<double> coarse =
            compact_sum(sym, t, x, cutoff, box, periods_per_panel);
        out.error_estimate = std::abs(fine - coarse);
    }
    return out;
}

namespace {

struct RadialSums {
    std::complex<double> full;  // damping eps
    std::complex<double> half;  // damping eps/2
};

RadialSums radial_sum(const Symbol& sym, double t, double r,
                      std::span<const double> u, double eps, const Cutoff& cutoff,
                      double s_max, const RadialOpts& opts) {
    const double inv_m = 1.0 / sym.order();
    const double npow = 2.0 * inv_m - 1.0; // s^{n/m - 1}, n = 2

    // Local oscillation rate: t from e^{its} plus r * d_s rho for the internal
    // r s^{1/m} phase; rho' probed along u with a warm start.
    const auto prof = sym.poly().radial_profile(u);
    const double pm = sym.principal()(u);
    double warm = -1.0;
    auto freq = [&](double s) {
        const RadialRoot root = solve_rho_profile(prof, s, sym.order(), pm, 1e-11, warm);
        warm = root.rho;
        return 1.2 * (t + r / root.radial_derivative) / (2.0 * kPi);
    };
    const Panels panels = make_panels(cutoff.a1, s_max, freq, opts.periods_per_panel);
    const QuadRule rule = flatten(panels);
    const long M = static_cast<long>(rule.nodes.size());

    SphereQuadOpts sq;
    sq.nodes_per_period = opts.sphere_nodes_per_period;
    sq.estimate_error = false;

    double fr = 0.0, fi = 0.0, hr = 0.0, hi = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : fr, fi, hr, hi) \
    if (opts.parallel)
    for (long k = 0; k < M; ++k) {
        const double s = rule.nodes[k];
        const double psi = cutoff.psi(s);
        if (psi == 0.0) continue;
        const double lambda = r * std::pow(s, inv_m);
        const std::complex<double> Phi = sphere_integral(sym, u, lambda, s, sq);
        const std::complex<double> base = rule.weights[k] * psi *
                                          std::pow(s, npow) *
                                          std::polar(1.0, t * s) * Phi;
        const std::complex<double> vf = base * std::exp(-eps * s);
        const std::complex<double> vh = base * std::exp(-0.5 * eps * s);
        fr += vf.real();
        fi += vf.imag();
        hr += vh.real();
        hi += vh.imag();
    }
    return {std::complex<double>(fr, fi), std::complex<double>(hr, hi)};
}

} // namespace

KernelValue kernel_radial(const Symbol& sym, double t, std::span<const double> x,
                          double eps, const Cutoff& cutoff, const RadialOpts& opts) {
    require_2d(sym, "kernel_radial");
    if (t <= 0.0 || eps <= 0.0)
        throw std::invalid_argument("kernel_radial: t and eps must be positive");
    const double r = std::hypot(x[0], x[1]);
    if (r <= 0.0) throw std::invalid_argument("kernel_radial: need |x| > 0");
    const double u[2] = {x[0] / r, x[1] / r};

    const double s_max = cutoff.a1 + std::log(1.0 / opts.tail_tol) / (0.5 * eps);
    const double inv4pi2 = 1.0 / (4.0 * kPi * kPi);

    const RadialSums fine = radial_sum(sym, t, r, u, eps, cutoff, s_max, opts);
    const std::complex<double> value = inv4pi2 * (2.0 * fine.half - fine.full);
    double err = inv4pi2 * std::abs(fine.half - fine.full);
    if (opts.estimate_error) {
        RadialOpts coarse_opts = opts;
        coarse_opts.periods_per_panel = opts.periods_per_panel * 2.0;
        coarse_opts.estimate_error = false;
        const RadialSums coarse =
            radial_sum(sym, t, r, u, eps, cutoff, s_max, coarse_opts);
        const std::complex<double> cval = inv4pi2 * (2.0 * coarse.half - coarse.full);
        err += std::abs(value - cval);
    }

    KernelValue out;
    out.t = t;
    out.x.assign(x.begin(), x.end());
    out.value = value;
    out.method = "radial";
    out.error_estimate = err;
    return out;
}

KernelValue kernel_eval(const Symbol& sym, double t, std::span<const double> x,
                        KernelStrategy strategy, const KernelOpts& opts) {
    require_2d(sym, "kernel_eval");
    if (t == 0.0) throw std::invalid_argument("kernel_eval: t = 0 is the delta limit");
    if (t < 0.0) {
        KernelValue v = kernel_eval(sym, -t, x, strategy, opts);
        v.t = t;
        v.value = std::conj(v.value);
        return v;
    }
    const double r = std::hypot(x[0], x[1]);
    bool use_fft = false;
    if (strategy == KernelStrategy::fft) {
        use_fft = true;
    } else if (strategy == KernelStrategy::automatic) {
        use_fft = (t <= 4.0 && r <= 32.0);
    }
    if (use_fft) {
        const FftGrid grid = plan_fft_grid(sym, t, std::max(r, 1.0) * 1.2, 1024, opts);
        std::vector<std::vector<double>> pts{{x[0], x[1]}};
        return kernel_points(sym, t, pts, grid, opts.eps_levels)[0];
    }

    const Threshold a = find_threshold(sym);
    const Cutoff cutoff{a1_threshold(sym, a.a)};
    const double eps = 0.02 * std::max(1.0, t);
    KernelValue radial = kernel_radial(sym, t, x, eps, cutoff);
    KernelValue compact = kernel_compact(sym, t, x, cutoff);
    KernelValue out;
    out.t = t;
    out.x.assign(x.begin(), x.end());
    out.value = radial.value + compact.value;
    out.method = "sum";
    out.error_estimate = radial.error_estimate + compact.error_estimate;
    return out;
}

std::complex<double> closed_form_gaussian(double t, std::span<const double> x) {
    if (t == 0.0) throw std::invalid_argument("closed_form_gaussian: t must be nonzero");
    const int n = static_cast<int>(x.size());
    double r2 = 0.0;
    for (double xd : x) r2 += xd * xd;
    const double sgn = t > 0.0 ? 1.0 : -1.0;
    const double mod = std::pow(4.0 * kPi * std::abs(t), -0.5 * n);
    return std::polar(mod, sgn * n * kPi / 4.0 - r2 / (4.0 * t));
}

} // namespace hsd
