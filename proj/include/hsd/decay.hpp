#pragma once

#include <array>
#include <span>
#include <vector>

#include "hsd/fit.hpp"
#include "hsd/kernel.hpp"
#include "hsd/multiindex.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

enum class Regime { small_t, large_t };

/// mu = n(m-2)/(2(m-1)) and nu = n/(2(m-1)).
double decay_mu(int m, int n);
double decay_nu(int m, int n);
/// Derivative-kernel variant: mu_b = (mn - 2n - 2b)/(2(m-1)), 0 <= b <= (mn-2n)/2.
double decay_mu_shifted(int m, int n, int b);

/// C=1 envelope: small_t -> t^{-n/m}(1 + t^{-1/m} r)^{-mu},
/// large_t -> t^{-1/m}(1 + r/t)^{-mu}. Rejects regime/t mismatches
/// (small_t needs |t| <= 1, large_t needs |t| >= 1).
double envelope(Regime regime, int m, int n, double t, double r);

struct EnvelopeFit {
    double max_ratio = 0.0;      // sup over samples of |I| / envelope
    double stability = 1.0;      // max_ratio change under doubled resolution
    double fitted_exponent = 0.0; // log-log slope of |I(t,0)| vs t, for reporting
    bool pass = false;
    // rows: t, |x|, |I|, envelope, ratio
    std::vector<std::array<double, 5>> samples;
};

struct DecayOpts {
    long points_per_axis = 1024;
    KernelOpts kernel;
    double mu_override = -1.0; // >= 0 replaces the Theorem-μ (derivative kernels)
    MultiIndex weight;         // frequency-side monomial weight xi^alpha (may be empty)
};

/// Ratio statistics of |I(t,x)| against the regime envelope over a lattice of
/// t values and scaled radii (small_t: |x| t^{-1/m}; large_t: |x|/t), sampled
/// along the first axis from FFT kernels at two resolutions.
EnvelopeFit envelope_check(const Symbol& sym, Regime regime,
                           std::span<const double> t_values,
                           std::span<const double> scaled_radii,
                           const DecayOpts& opts = {});

struct SharpnessReport {
    double mu = 0.0;
    double slope = 0.0;          // fitted log-log slope of |I(1,x)| vs |x|
    double q_min = 0.0, q_max = 0.0; // extremes of (1+|x|)^mu |I(1,x)|
    bool pass = false;
    std::vector<std::array<double, 3>> samples; // |x|, |I|, q
};

/// For P = |xi|^m at t=1: the spatial decay rate is exactly mu, checked over
/// the window [x_lo, x_hi].
SharpnessReport sharpness_check(int m, int n, double x_lo, double x_hi,
                                double slope_tol = 0.1, double band_tol = 10.0,
                                const DecayOpts& opts = {});

/// Envelope check for d^alpha I = F^{-1}(xi^alpha e^{itP}) with the b-shifted mu.
EnvelopeFit derivative_kernel_check(const Symbol& sym, const MultiIndex& alpha,
                                    Regime regime, std::span<const double> t_values,
                                    std::span<const double> scaled_radii,
                                    DecayOpts opts = {});

} // namespace hsd
