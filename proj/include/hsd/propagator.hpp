#pragma once

#include <span>
#include <string>
#include <vector>

#include "hsd/gridfn.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

/// Zero-initialized grid on [-extent, extent)^2.
GridFunction make_grid(long points_per_axis, double extent);

/// e^{-|x - x0|^2 / (2 w^2)} modulated by e^{i <k0, x>}.
GridFunction gaussian_data(long points_per_axis, double extent, double width,
                           std::span<const double> center_freq = {},
                           std::span<const double> center = {});

/// Pseudospectral e^{itP(D)}: FFT, multiply by e^{itP(xi)}, inverse FFT.
/// Rejects data with significant energy at the Nyquist shell.
GridFunction evolve(const Symbol& sym, const GridFunction& u0, double t,
                    double nyquist_tol = 1e-8);

/// Zero all Fourier modes with |xi| <= a_cut (high-frequency data construction).
GridFunction spectral_highpass(const GridFunction& u0, double a_cut);

/// Riemann-sum L^p norm; p = infinity is max |samples|.
double lp_norm(const GridFunction& f, double p);

struct IndexPair {
    double p = 0.0, q = 0.0;
    std::string classification; // interior, edge, endpoint_B, endpoint_D,
                                // apex_A_excluded, outside
};

/// Classify (1/p, 1/q) against the admissible quadrilateral with vertices
/// A=(1/2,1/2), B=(1,1/tau), C=(1,0), D=(1/tau',0), tau = 2(m-1)/(m-2)
/// (m=2 degenerates to the segment A-C).
IndexPair admissible(double p, double q, int m);

struct NormEstimate {
    IndexPair pair;
    std::vector<double> t_grid;
    std::vector<std::vector<double>> ratios; // per datum, per t
    std::vector<double> family_max;          // max over data, per t
    double fitted_exponent = 0.0;
    double predicted_exponent = 0.0;
    double residual_rms = 0.0;
    bool pass = false;
};

struct FitOpts {
    long points_per_axis = 2048;
    double extent = 102.4;
    double exponent_tol = 0.05;
    std::vector<double> widths = {0.15, 0.2, 0.3};
};

/// Fit the time exponent of sup_family ||e^{itP(D)} u0||_q / ||u0||_p over
/// t_grid against the regime prediction: small_t -> (n/m)(1/q - 1/p),
/// large_t -> n|1/q - 1/p'| - 1/m.
NormEstimate lpq_exponent_fit(const Symbol& sym, double p, double q,
                              std::span<const double> t_grid, bool small_t,
                              const FitOpts& opts = {});

/// Same fit for data spectrally supported in {|xi| > a_cut}, against the
/// small-t exponent across all of t_grid.
NormEstimate highfreq_check(const Symbol& sym, double p, double q, double a_cut,
                            double center_freq, std::span<const double> t_grid,
                            const FitOpts& opts = {});

} // namespace hsd
