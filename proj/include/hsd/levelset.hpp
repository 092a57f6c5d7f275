#pragma once

#include <vector>

#include "hsd/symbol.hpp"

namespace hsd {

struct Threshold {
    double a = 0.0;
    int sphere_density = 0;
    double s_scan_max = 0.0;
};

struct RadialRoot {
    double s = 0.0;
    std::vector<double> omega;
    double rho = 0.0;
    double residual = 0.0;
    double radial_derivative = 0.0;
};

/// Smallest scanned level a such that P(rho*omega)=s has a unique positive
/// root with positive radial slope for every grid direction and every
/// scanned s in [a, s_scan_max]. Geometric scan with ratio 2 from 1.
Threshold find_threshold(const Symbol& sym, int sphere_density = 256,
                         double s_scan_max = 1048576.0);

/// Safeguarded Newton solve of P(rho*omega) = s, bracketed by bisection.
/// Requires s at or above the threshold for well-posedness.
RadialRoot solve_rho(const Symbol& sym, double s, std::span<const double> omega,
                     double tol_rel = 1e-12);

/// Same, from a precomputed radial profile (hot path for sphere sweeps).
/// warm_start < 0 means "use the homogeneous initial guess".
RadialRoot solve_rho_profile(std::span<const double> profile, double s, int m,
                             double principal_on_ray, double tol_rel = 1e-12,
                             double warm_start = -1.0);

/// sigma(s, omega) = rho(s, omega) - s^{1/m} P_m(omega)^{-1/m}.
double sigma(const Symbol& sym, double s, std::span<const double> omega);

struct SigmaAudit {
    struct Row {
        int k;
        double s;
        double deriv_abs;   // |d^k/ds^k sigma|
        double weighted;    // (1+s)^k * |d^k/ds^k sigma|
    };
    std::vector<Row> rows;
    std::vector<double> constants;         // fitted C_k = max weighted, k = 0..k_max
    std::vector<double> constants_refined; // same at halved finite-difference step
    std::vector<bool> stable;              // < 2x variation under halving
    bool unstable_flag = false;            // some derivative hit the noise floor
};

/// Audits |d^k_s sigma| <= C_k (1+s)^{-k} on a geometric s-grid, plus the
/// first tangential derivative at k=0.
SigmaAudit sigma_audit(const Symbol& sym, int k_max, double s_lo, double s_hi,
                       int s_count, int sphere_density = 64);

} // namespace hsd
