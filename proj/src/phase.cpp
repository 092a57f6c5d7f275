#include "hsd/phase.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hsd/fit.hpp"

namespace hsd {

namespace {

constexpr double kPi = std::numbers::pi;

double circle_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// Angle-parametrized level-set evaluator on the unit circle (n=2).
// Newton solves for rho are warm-started node to node.
class CircleEval {
  public:
    CircleEval(const Symbol& sym, double s)
        : sym_(sym), s_(s), gx_(sym.poly().derivative(0)), gy_(sym.poly().derivative(1)),
          inv_m_(1.0 / sym.order()) {
        if (sym.dim() != 2)
            throw std::invalid_argument("phase: angle machinery requires n=2");
    }

    struct Point {
        double theta;
        double rho;
        double drho_ds;     // 1 / d_rho P at the root
        double dp_drho;
        double grad[2];     // grad P at rho*omega
    };

    Point eval(double theta, double warm = -1.0) const {
        const double c = std::cos(theta), sn = std::sin(theta);
        const double omega[2] = {c, sn};
        const auto prof = sym_.poly().radial_profile(omega);
        const double pm = sym_.principal()(omega);
        const RadialRoot root = solve_rho_profile(prof, s_, sym_.order(), pm, 1e-13, warm);
        Point pt;
        pt.theta = theta;
        pt.rho = root.rho;
        pt.dp_drho = root.radial_derivative;
        pt.drho_ds = 1.0 / root.radial_derivative;
        const double xi[2] = {root.rho * c, root.rho * sn};
        pt.grad[0] = gx_(xi);
        pt.grad[1] = gy_(xi);
        return pt;
    }

    double phi(const Point& pt, double theta_u) const {
        return std::pow(s_, -inv_m_) * pt.rho * std::cos(pt.theta - theta_u);
    }

    // d phi / d theta via implicit differentiation of the level set.
    double dphi(const Point& pt, double theta_u) const {
        const double c = std::cos(pt.theta), sn = std::sin(pt.theta);
        const double dp_dtheta = pt.rho * (-sn * pt.grad[0] + c * pt.grad[1]);
        const double rho_theta = -dp_dtheta / pt.dp_drho;
        return std::pow(s_, -inv_m_) *
               (rho_theta * std::cos(pt.theta - theta_u) -
                pt.rho * std::sin(pt.theta - theta_u));
    }

    // b(s, omega) = s^{1 - n/m} rho^{n-1} d_s rho, n = 2.
    double amplitude(const Point& pt) const {
        return std::pow(s_, 1.0 - 2.0 * inv_m_) * pt.rho * pt.drho_ds;
    }

    double s() const { return s_; }

  private:
    const Symbol& sym_;
    double s_;
    Polynomial gx_, gy_;
    double inv_m_;
};

double direction_angle(std::span<const double> u) {
    if (u.size() != 2) throw std::invalid_argument("phase: direction must be 2d here");
    return std::atan2(u[1], u[0]);
}

// Newton on d phi / d theta, derivative by central difference, step capped.
double newton_angle(const CircleEval& ev, double theta_u, double seed,
                    const CriticalOpts& opts, double* grad_out) {
    double th = seed;
    double warm = -1.0;
    const double h = 1e-6;
    for (int it = 0; it < opts.max_iter; ++it) {
        auto pt = ev.eval(th, warm);
        warm = pt.rho;
        const double g = ev.dphi(pt, theta_u);
        if (std::abs(g) <= opts.tol) {
            if (grad_out) *grad_out = std::abs(g);
            return th;
        }
        const double gp = ev.dphi(ev.eval(th + h, warm), theta_u);
        const double gm = ev.dphi(ev.eval(th - h, warm), theta_u);
        const double dg = (gp - gm) / (2.0 * h);
        double step = (dg != 0.0) ? g / dg : (g > 0 ? -0.1 : 0.1);
        step = std::clamp(step, -0.5, 0.5);
        th -= step;
    }
    throw std::runtime_error("find_critical_points: Newton did not converge");
}

CriticalPoint make_cp(const CircleEval& ev, double theta_u, double th, int branch,
                      double grad_norm, double s) {
    CriticalPoint cp;
    cp.s = s;
    cp.branch = branch;
    cp.omega = {std::cos(th), std::sin(th)};
    cp.phase_value = ev.phi(ev.eval(th), theta_u);
    cp.tangential_gradient_norm = grad_norm;
    return cp;
}

} // namespace

double phase_value(const Symbol& sym, std::span<const double> u, double s,
                   std::span<const double> omega) {
    const RadialRoot root = solve_rho(sym, s, omega);
    double dot = 0.0;
    for (size_t i = 0; i < u.size(); ++i) dot += u[i] * omega[i];
    return std::pow(s, -1.0 / sym.order()) * root.rho * dot;
}

CriticalPair find_critical_points(const Symbol& sym, std::span<const double> u,
                                  double s, const CriticalOpts& opts) {
    if (sym.dim() != 2)
        throw std::invalid_argument("find_critical_points: only n=2 is implemented");
    const CircleEval ev(sym, s);
    const double theta_u = direction_angle(u);

    // Coarse scan for argmax/argmin seeds and duplicate detection.
    double best_max = -std::numeric_limits<double>::infinity();
    double best_min = std::numeric_limits<double>::infinity();
    double th_max = theta_u, th_min = theta_u + kPi;
    double warm = -1.0;
    for (int j = 0; j < opts.scan_density; ++j) {
        const double th = 2.0 * kPi * j / opts.scan_density;
        auto pt = ev.eval(th, warm);
        warm = pt.rho;
        const double v = ev.phi(pt, theta_u);
        if (v > best_max) { best_max = v; th_max = th; }
        if (v < best_min) { best_min = v; th_min = th; }
    }

    double g_plus = 0.0, g_minus = 0.0;
    const double thp = newton_angle(ev, theta_u, th_max, opts, &g_plus);
    const double thm = newton_angle(ev, theta_u, th_min, opts, &g_minus);

    CriticalPair pair;
    pair.plus = make_cp(ev, theta_u, thp, +1, g_plus, s);
    pair.minus = make_cp(ev, theta_u, thm, -1, g_minus, s);

    // Independent seeds at +-u; distinct converged points contradict the
    // uniqueness assumption and are surfaced.
    double gu = 0.0;
    const double thp_u = newton_angle(ev, theta_u, theta_u, opts, &gu);
    const double thm_u = newton_angle(ev, theta_u, theta_u + kPi, opts, &gu);
    if (circle_dist(thp_u, thp) > 1e-5 || circle_dist(thm_u, thm) > 1e-5)
        pair.duplicate_warning = true;
    return pair;
}

PhasePath critical_path(const Symbol& sym, std::span<const double> u, double s_lo,
                        double s_hi, int count) {
    if (count < 3) throw std::invalid_argument("critical_path: need >= 3 grid points");
    PhasePath path;
    path.u.assign(u.begin(), u.end());
    const double theta_u = direction_angle(u);

    std::vector<double> th_plus, th_minus;
    for (int i = 0; i < count; ++i) {
        const double s = s_lo * std::pow(s_hi / s_lo, double(i) / (count - 1));
        path.s_grid.push_back(s);
        const CircleEval ev(sym, s);
        CriticalOpts opts;
        double gp = 0.0, gm = 0.0;
        const double seed_p = th_plus.empty() ? theta_u : th_plus.back();
        const double seed_m = th_minus.empty() ? theta_u + kPi : th_minus.back();
        double thp, thm;
        if (th_plus.empty()) {
            auto pair = find_critical_points(sym, u, s, opts);
            thp = std::atan2(pair.plus.omega[1], pair.plus.omega[0]);
            thm = std::atan2(pair.minus.omega[1], pair.minus.omega[0]);
            gp = pair.plus.tangential_gradient_norm;
            gm = pair.minus.tangential_gradient_norm;
        } else {
            thp = newton_angle(ev, theta_u, seed_p, opts, &gp);
            thm = newton_angle(ev, theta_u, seed_m, opts, &gm);
            if (circle_dist(thp, seed_p) > 0.5 || circle_dist(thm, seed_m) > 0.5)
                throw std::runtime_error("critical_path: branch jump detected");
        }
        th_plus.push_back(thp);
        th_minus.push_back(thm);
        path.plus.push_back(make_cp(ev, theta_u, thp, +1, gp, s));
        path.minus.push_back(make_cp(ev, theta_u, thm, -1, gm, s));
    }

    auto fit_branch = [&](const std::vector<double>& th, double& c1, double& expnt,
                          bool& constant) {
        std::vector<double> absc, speed;
        double worst = 0.0;
        const double decay_pow = 1.0 + 1.0 / sym.order();
        for (size_t i = 1; i + 1 < th.size(); ++i) {
            const double ds = path.s_grid[i + 1] - path.s_grid[i - 1];
            double dth = circle_dist(th[i + 1], th[i - 1]);
            const double v = dth / ds;
            const double sm = path.s_grid[i];
            worst = std::max(worst, v * std::pow(1.0 + sm, decay_pow));
            if (v > 1e-12) {
                absc.push_back(1.0 + sm);
                speed.push_back(v);
            }
        }
        if (absc.size() < th.size() / 2 || worst < 1e-10) {
            constant = true;
            c1 = 0.0;
            expnt = 0.0;
            return;
        }
        constant = false;
        c1 = worst;
        expnt = fit_power_law(absc, speed).slope;
    };
    fit_branch(th_plus, path.c1_plus, path.exponent_plus, path.constant_plus);
    fit_branch(th_minus, path.c1_minus, path.exponent_minus, path.constant_minus);
    return path;
}

double radial_phase(const Symbol& sym, std::span<const double> u, double t, double r,
                    double s, int branch) {
    if (t <= 0.0 || r <= 0.0)
        throw std::invalid_argument("radial_phase: t and r must be positive");
    auto pair = find_critical_points(sym, u, s);
    const CriticalPoint& cp = branch > 0 ? pair.plus : pair.minus;
    return s * t + r * std::pow(s, 1.0 / sym.order()) * cp.phase_value;
}

namespace {

// Derivatives of h_b(s) = rho(s, omega_b(s)) <u, omega_b(s)>; the first is
// analytic via the envelope identity, higher ones are finite differences of it.
struct BranchDerivs {
    double phi;       // phi(s, omega_b) = s^{-1/m} h_b
    double h1, h2, h3;
};

class BranchTracker {
  public:
    BranchTracker(const Symbol& sym, double theta_u, double seed)
        : sym_(sym), theta_u_(theta_u), theta_(seed) {}

    // h(s) and h'(s) at the re-converged critical angle near the current seed.
    std::pair<double, double> h_and_h1(double s) {
        const CircleEval ev(sym_, s);
        CriticalOpts opts;
        double g = 0.0;
        const double th = newton_angle(ev, theta_u_, theta_, opts, &g);
        auto pt = ev.eval(th);
        const double dot = std::cos(th - theta_u_);
        return {pt.rho * dot, pt.drho_ds * dot};
    }

    BranchDerivs derivs(double s, int m) {
        const double eps = std::numeric_limits<double>::epsilon();
        const auto [h, h1] = h_and_h1(s);
        const double d2 = s * std::pow(eps, 1.0 / 3.0) * 40.0;
        const double h1p = h_and_h1(s + d2).second;
        const double h1m = h_and_h1(s - d2).second;
        const double d3 = s * std::pow(eps, 0.25) * 10.0;
        const double e1p = h_and_h1(s + d3).second;
        const double e1m = h_and_h1(s - d3).second;
        const double e10 = h1;
        BranchDerivs out;
        out.phi = std::pow(s, -1.0 / m) * h;
        out.h1 = h1;
        out.h2 = (h1p - h1m) / (2.0 * d2);
        out.h3 = (e1p - 2.0 * e10 + e1m) / (d3 * d3);
        // Track the branch along s.
        theta_ = track_theta(s);
        return out;
    }

  private:
    double track_theta(double s) {
        const CircleEval ev(sym_, s);
        CriticalOpts opts;
        double g = 0.0;
        return newton_angle(ev, theta_u_, theta_, opts, &g);
    }

    const Symbol& sym_;
    double theta_u_;
    double theta_;
};

struct AuditConstants {
    double c25_lo, c25_hi;
    double c26_lo, c26_hi;
    double c27_lo, c27_hi;
    double c28_lo, c28_hi;
    double c29_hi;
};

AuditConstants audit_constants(const Symbol& sym, std::span<const double> u,
                               double s_lo, double s_hi, int count,
                               std::vector<std::array<double, 5>>* sweep, double t,
                               double r) {
    const double theta_u = direction_angle(u);
    const int m = sym.order();
    const double inv_m = 1.0 / m;
    BranchTracker plus(sym, theta_u, theta_u);
    BranchTracker minus(sym, theta_u, theta_u + kPi);

    AuditConstants c;
    c.c25_lo = c.c26_lo = c.c27_lo = c.c28_lo = std::numeric_limits<double>::infinity();
    c.c25_hi = c.c26_hi = c.c27_hi = c.c28_hi = c.c29_hi = 0.0;

    for (int i = 0; i < count; ++i) {
        const double s = s_lo * std::pow(s_hi / s_lo, double(i) / (count - 1));
        const BranchDerivs dp = plus.derivs(s, m);
        const BranchDerivs dm = minus.derivs(s, m);

        c.c25_lo = std::min({c.c25_lo, dp.phi, -dm.phi});
        c.c25_hi = std::max({c.c25_hi, dp.phi, -dm.phi});

        const double w1 = std::pow(s, inv_m - 1.0);
        c.c26_lo = std::min(c.c26_lo, dp.h1 / w1);
        c.c26_hi = std::max(c.c26_hi, dp.h1 / w1);
        c.c27_lo = std::min(c.c27_lo, -dm.h1 / w1);
        c.c27_hi = std::max(c.c27_hi, -dm.h1 / w1);

        const double w2 = std::pow(s, inv_m - 2.0);
        c.c28_lo = std::min(c.c28_lo, std::abs(dm.h2) / w2);
        c.c28_hi = std::max(c.c28_hi, std::abs(dm.h2) / w2);

        const double w3 = std::pow(s, inv_m - 3.0);
        c.c29_hi = std::max({c.c29_hi, std::abs(dp.h2) / w2, std::abs(dm.h2) / w2,
                             std::abs(dp.h3) / w3, std::abs(dm.h3) / w3});

        if (sweep)
            sweep->push_back({s, dp.phi, dm.phi, t + r * dp.h1, t + r * dm.h1});
    }
    return c;
}

} // namespace

PhaseAudit phase_inequality_audit(const Symbol& sym, std::span<const double> u,
                                  double t, double r, double s_lo, double s_hi,
                                  int count) {
    if (count < 8) throw std::invalid_argument("phase_inequality_audit: count too small");
    PhaseAudit audit;
    audit.t = t;
    audit.r = r;
    const int m = sym.order();
    audit.s0 = std::pow(r / t, double(m) / (m - 1));

    const AuditConstants c =
        audit_constants(sym, u, s_lo, s_hi, count, &audit.sweep, t, r);
    const AuditConstants ch =
        audit_constants(sym, u, s_lo, s_hi, 2 * count, nullptr, t, r);

    auto fill = [](BoundFit& f, double lo, double hi, bool need_lo) {
        f.c1 = lo;
        f.c2 = hi;
        f.pass = std::isfinite(hi) && hi > 0.0 && lo <= hi && (!need_lo || lo > 0.0);
    };
    fill(audit.sign_bounds, c.c25_lo, c.c25_hi, true);
    fill(audit.slope_plus, c.c26_lo, c.c26_hi, true);
    fill(audit.slope_minus, c.c27_lo, c.c27_hi, true);
    fill(audit.curvature_minus, c.c28_lo, c.c28_hi, true);
    fill(audit.high_order, 0.0, c.c29_hi, false);

    const double exp_seg = double(m) / (m - 1);
    audit.seg_lo = std::pow(c.c25_lo / 2.0, exp_seg) * audit.s0;
    audit.seg_hi = std::pow(2.0 * c.c25_hi, exp_seg) * audit.s0;

    double worst_ratio = 1.0;
    auto track = [&](double a, double b) {
        if (a > 0.0 && b > 0.0) worst_ratio = std::max(worst_ratio, std::max(a / b, b / a));
    };
    track(c.c25_lo, ch.c25_lo);
    track(c.c25_hi, ch.c25_hi);
    track(c.c26_lo, ch.c26_lo);
    track(c.c27_lo, ch.c27_lo);
    track(c.c27_hi, ch.c27_hi);
    track(c.c28_lo, ch.c28_lo);
    track(c.c28_hi, ch.c28_hi);
    track(c.c29_hi, ch.c29_hi);
    audit.stability = worst_ratio;

    audit.pass = audit.sign_bounds.pass && audit.slope_plus.pass &&
                 audit.slope_minus.pass && audit.curvature_minus.pass &&
                 audit.high_order.pass && worst_ratio < 2.0;
    return audit;
}

double a1_threshold(const Symbol& sym, double a, int directions, double safety) {
    for (double s = a; s <= a * double(1 << 30); s *= 2.0) {
        bool good = true;
        for (int d = 0; d < directions && good; ++d) {
            const double th = 2.0 * kPi * d / directions;
            const double u[2] = {std::cos(th), std::sin(th)};
            try {
                auto pair = find_critical_points(sym, u, s);
                if (pair.duplicate_warning || pair.plus.phase_value <= 0.0 ||
                    pair.minus.phase_value >= 0.0)
                    good = false;
            } catch (const std::runtime_error&) {
                good = false;
            }
        }
        if (good) return safety * s;
    }
    throw std::runtime_error("a1_threshold: scan exhausted");
}

namespace {

std::complex<double> circle_quadrature(const Symbol& sym, double theta_u, double lambda,
                                       double s, long nodes,
                                       const PartitionOfUnity* pou,
                                       std::complex<double>* parts /* Phi+, Phi-, Psi0 */) {
    const CircleEval ev(sym, s);
    std::complex<double> full = 0.0, wp = 0.0, wm = 0.0, w0 = 0.0;
    double warm = -1.0;
    const double dth = 2.0 * kPi / nodes;
    for (long j = 0; j < nodes; ++j) {
        const double th = j * dth;
        auto pt = ev.eval(th, warm);
        warm = pt.rho;
        const double ph = ev.phi(pt, theta_u);
        const double b = ev.amplitude(pt);
        const std::complex<double> val = std::polar(b, lambda * ph);
        full += val;
        if (pou) {
            const double omega[2] = {std::cos(th), std::sin(th)};
            const double a = pou->weight_plus(omega);
            const double bm = pou->weight_minus(omega);
            wp += a * val;
            wm += bm * val;
            w0 += (1.0 - a - bm) * val;
        }
    }
    full *= dth;
    if (parts) {
        parts[0] = wp * dth;
        parts[1] = wm * dth;
        parts[2] = w0 * dth;
    }
    return full;
}

long circle_node_count(const Symbol& sym, std::span<const double> u, double lambda,
                       double s, const SphereQuadOpts& opts) {
    // Coarse bound on max |d phi / d theta| to size the grid.
    const CircleEval ev(sym, s);
    const double theta_u = direction_angle(u);
    double k = 0.0;
    double warm = -1.0;
    for (int j = 0; j < 64; ++j) {
        const double th = 2.0 * kPi * j / 64;
        auto pt = ev.eval(th, warm);
        warm = pt.rho;
        k = std::max(k, std::abs(ev.dphi(pt, theta_u)));
    }
    k *= 1.5;
    const long n =
        std::max<long>(opts.min_nodes,
                       static_cast<long>(std::ceil(opts.nodes_per_period * lambda * k)));
    if (n > opts.max_nodes)
        throw std::runtime_error("sphere_integral: node budget exceeded");
    return n;
}

} // namespace

std::complex<double> sphere_integral(const Symbol& sym, std::span<const double> u,
                                     double lambda, double s,
                                     const SphereQuadOpts& opts, double* err_out) {
    if (sym.dim() != 2)
        throw std::invalid_argument("sphere_integral: only n=2 is implemented");
    if (lambda < 0.0) throw std::invalid_argument("sphere_integral: lambda must be >= 0");
    const double theta_u = direction_angle(u);
    const long n = circle_node_count(sym, u, lambda, s, opts);
    const std::complex<double> coarse =
        circle_quadrature(sym, theta_u, lambda, s, n, nullptr, nullptr);
    if (!opts.estimate_error) {
        if (err_out) *err_out = std::numeric_limits<double>::quiet_NaN();
        return coarse;
    }
    const std::complex<double> fine =
        circle_quadrature(sym, theta_u, lambda, s, 2 * n, nullptr, nullptr);
    if (err_out) *err_out = std::abs(fine - coarse);
    return fine;
}

namespace {

// C-infinity smoothstep: 0 for y <= 0, 1 for y >= 1.
double smoothstep_inf(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / y);
    const double b = std::exp(-1.0 / (1.0 - y));
    return a / (a + b);
}

double geodesic_dist(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0;
    for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

} // namespace

double PartitionOfUnity::weight_plus(std::span<const double> omega) const {
    const double d = geodesic_dist(omega, center_plus);
    return smoothstep_inf((cap_radius - d) / (cap_radius - plateau_radius));
}

double PartitionOfUnity::weight_minus(std::span<const double> omega) const {
    const double d = geodesic_dist(omega, center_minus);
    return smoothstep_inf((cap_radius - d) / (cap_radius - plateau_radius));
}

double PartitionOfUnity::weight_zero(std::span<const double> omega) const {
    return 1.0 - weight_plus(omega) - weight_minus(omega);
}

PartitionOfUnity make_partition(const Symbol& sym, std::span<const double> u,
                                double s_ref, double cap_radius) {
    auto pair = find_critical_points(sym, u, s_ref);
    const double sep = geodesic_dist(pair.plus.omega, pair.minus.omega);
    if (2.0 * cap_radius >= sep)
        throw std::invalid_argument("make_partition: caps overlap; reduce cap_radius");
    PartitionOfUnity pou;
    pou.center_plus = pair.plus.omega;
    pou.center_minus = pair.minus.omega;
    pou.cap_radius = cap_radius;
    pou.plateau_radius = cap_radius / 4.0;
    return pou;
}

SphereDecomposition stationary_decomposition(const Symbol& sym,
                                             std::span<const double> u, double lambda,
                                             double s, const PartitionOfUnity& pou,
                                             const SphereQuadOpts& opts) {
    if (sym.dim() != 2)
        throw std::invalid_argument("stationary_decomposition: only n=2 is implemented");
    if (lambda <= 0.0)
        throw std::invalid_argument("stationary_decomposition: lambda must be > 0");
    auto pair = find_critical_points(sym, u, s);
    if (geodesic_dist(pair.plus.omega, pou.center_plus) > pou.plateau_radius ||
        geodesic_dist(pair.minus.omega, pou.center_minus) > pou.plateau_radius)
        throw std::runtime_error(
            "stationary_decomposition: critical point outside its partition cap");

    const double theta_u = direction_angle(u);
    const long n = circle_node_count(sym, u, lambda, s, opts);
    std::complex<double> parts[3];
    SphereDecomposition out;
    out.lambda = lambda;
    out.s = s;
    out.Phi = circle_quadrature(sym, theta_u, lambda, s, 2 * n, &pou, parts);
    if (opts.estimate_error) {
        std::complex<double> coarse_parts[3];
        const std::complex<double> coarse =
            circle_quadrature(sym, theta_u, lambda, s, n, &pou, coarse_parts);
        out.quad_error = std::abs(out.Phi - coarse);
        for (int i = 0; i < 3; ++i)
            out.quad_error = std::max(out.quad_error, std::abs(parts[i] - coarse_parts[i]));
    }
    out.Phi_plus = parts[0];
    out.Phi_minus = parts[1];
    out.Psi0 = parts[2];

    const double pref = std::pow(lambda, 0.5); // (n-1)/2 with n=2
    out.Psi_plus = pref * std::polar(1.0, -lambda * pair.plus.phase_value) * out.Phi_plus;
    out.Psi_minus =
        pref * std::polar(1.0, -lambda * pair.minus.phase_value) * out.Phi_minus;
    return out;
}

} // namespace hsd
