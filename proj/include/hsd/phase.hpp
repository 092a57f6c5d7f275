#pragma once

#include <array>
#include <complex>
#include <vector>

#include "hsd/levelset.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

/// phi(s, omega) = s^{-1/m} rho(s, omega) <u, omega>.
double phase_value(const Symbol& sym, std::span<const double> u, double s,
                   std::span<const double> omega);

struct CriticalPoint {
    double s = 0.0;
    int branch = +1; // +1 maximizer, -1 minimizer
    std::vector<double> omega;
    double phase_value = 0.0;
    double tangential_gradient_norm = 0.0;
};

struct CriticalOpts {
    double tol = 1e-11;
    int max_iter = 80;
    int scan_density = 512; // brute seed scan, also duplicate detection
};

struct CriticalPair {
    CriticalPoint plus;
    CriticalPoint minus;
    bool duplicate_warning = false; // independent seeds found distinct critical points
};

CriticalPair find_critical_points(const Symbol& sym, std::span<const double> u,
                                  double s, const CriticalOpts& opts = {});

struct PhasePath {
    std::vector<double> u;
    std::vector<double> s_grid;
    std::vector<CriticalPoint> plus;
    std::vector<CriticalPoint> minus;
    // |omega'(s)| <= c1 (1+s)^{-1-1/m}; fitted over the path (0 if constant).
    double c1_plus = 0.0;
    double c1_minus = 0.0;
    double exponent_plus = 0.0; // log-log slope of |omega'| vs (1+s)
    double exponent_minus = 0.0;
    bool constant_plus = false;
    bool constant_minus = false;
};

/// Continuation of the critical points along a geometric s-grid (n=2).
PhasePath critical_path(const Symbol& sym, std::span<const double> u, double s_lo,
                        double s_hi, int count);

/// phi_pm(t, r, s) = s t + r s^{1/m} phi(s, omega_pm(s)).
double radial_phase(const Symbol& sym, std::span<const double> u, double t, double r,
                    double s, int branch);

struct BoundFit {
    double c1 = 0.0;   // fitted lower constant
    double c2 = 0.0;   // fitted upper constant
    bool pass = false;
};

struct PhaseAudit {
    double t = 0.0, r = 0.0;
    double s0 = 0.0;      // (r/t)^{m/(m-1)}
    double seg_lo = 0.0;  // c1' * s0
    double seg_hi = 0.0;  // c2' * s0
    BoundFit sign_bounds;       // c1 <= +-phi(s, omega_pm) <= c2
    BoundFit slope_plus;        // (d_s phi_+ - t) / (r s^{1/m-1}) >= c1
    BoundFit slope_minus;       // (t - d_s phi_-) / (r s^{1/m-1}) in [c1, c2]
    BoundFit curvature_minus;   // |d2_s phi_-| / (r s^{1/m-2}) in [c1, c2]
    BoundFit high_order;        // |d^k_s phi_pm| / (r s^{1/m-k}) <= c2, k = 2, 3
    bool pass = false;
    double stability = 1.0;     // worst constant ratio under s-grid halving
    // sweep rows for reporting: s, phi_plus, phi_minus, d_s phi_plus, d_s phi_minus
    std::vector<std::array<double, 5>> sweep;
};

PhaseAudit phase_inequality_audit(const Symbol& sym, std::span<const double> u,
                                  double t, double r, double s_lo, double s_hi,
                                  int count);

/// Smallest geometric-grid level >= a at which the critical-point solves
/// converge with the correct phase signs over a fan of directions, times a
/// safety factor of 2.
double a1_threshold(const Symbol& sym, double a, int directions = 16,
                    double safety = 2.0);

struct SphereQuadOpts {
    double nodes_per_period = 10.0;
    int min_nodes = 64;
    long max_nodes = 1 << 22;
    bool estimate_error = true; // doubles nodes once for an error estimate
};

/// Phi(lambda, s) = int_{S^{n-1}} e^{i lambda phi(s, omega)} b(s, omega) domega,
/// b = s^{1-n/m} rho^{n-1} d_s rho.
std::complex<double> sphere_integral(const Symbol& sym, std::span<const double> u,
                                     double lambda, double s,
                                     const SphereQuadOpts& opts = {},
                                     double* err_out = nullptr);

/// Smooth plateau bumps around the two critical directions; identically 1
/// within the plateau radius, 0 outside the cap. phi0 = 1 - phi+ - phi-.
/// A wide, gentle transition keeps the non-stationary remainder decaying
/// superpolynomially from moderate lambda on.
struct PartitionOfUnity {
    std::vector<double> center_plus;
    std::vector<double> center_minus;
    double cap_radius = 1.2;
    double plateau_radius = 0.3;

    double weight_plus(std::span<const double> omega) const;
    double weight_minus(std::span<const double> omega) const;
    double weight_zero(std::span<const double> omega) const;
};

PartitionOfUnity make_partition(const Symbol& sym, std::span<const double> u,
                                double s_ref, double cap_radius = 1.2);

struct SphereDecomposition {
    double lambda = 0.0, s = 0.0;
    std::complex<double> Phi, Phi_plus, Phi_minus, Psi0;
    std::complex<double> Psi_plus, Psi_minus; // amplitudes with the oscillatory
                                              // prefactor divided out
    double quad_error = 0.0;
};

SphereDecomposition stationary_decomposition(const Symbol& sym,
                                             std::span<const double> u, double lambda,
                                             double s, const PartitionOfUnity& pou,
                                             const SphereQuadOpts& opts = {});

} // namespace hsd
