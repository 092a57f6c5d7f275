// Command-line front end: wires the library modules into reproducible runs
// that emit a JSON summary (always) and CSV sweeps (where applicable).
//
// Exit codes: 0 all requested audits pass, 1 audit failure, 2 config error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsd/decay.hpp"
#include "hsd/kernel.hpp"
#include "hsd/levelset.hpp"
#include "hsd/parallel.hpp"
#include "hsd/phase.hpp"
#include "hsd/propagator.hpp"
#include "hsd/symbol.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string symbol_path;
    std::string output_dir;
    int threads = 0;
    unsigned seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_symbol = true) {
    if (needs_symbol)
        cmd->add_option("--symbol", c.symbol_path, "symbol file")->required();
    cmd->add_option("-o,--output-dir", c.output_dir, "output directory")->required();
    cmd->add_option("--threads", c.threads, "worker thread cap (0 = all cores)");
    cmd->add_option("--seed", c.seed, "seed for randomized sampling");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty list: " + text);
    return out;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    for (int k = 0; k < count; ++k)
        g.push_back(lo * std::pow(hi / lo, count > 1 ? double(k) / (count - 1) : 0.0));
    return g;
}

json base_report(const Common& c, const std::string& command) {
    json j;
    j["command"] = command;
    if (!c.symbol_path.empty()) j["symbol"] = c.symbol_path;
    j["threads"] = c.threads;
    j["seed"] = c.seed;
    return j;
}

void write_json(const Common& c, const std::string& name, const json& j) {
    fs::create_directories(c.output_dir);
    std::ofstream out(fs::path(c.output_dir) / name);
    out << j.dump(2) << "\n";
}

std::ofstream open_csv(const Common& c, const std::string& name,
                       const std::string& header) {
    fs::create_directories(c.output_dir);
    std::ofstream out(fs::path(c.output_dir) / name);
    out << header << "\n";
    out.precision(17);
    return out;
}

// ---------------------------------------------------------------- certify

int cmd_certify(const Common& c) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    const auto cert = hsd::certify(sym);
    json j = base_report(c, "certify");
    j["order"] = sym.order();
    j["dim"] = sym.dim();
    j["elliptic"] = cert.elliptic;
    j["nondegenerate"] = cert.nondegenerate;
    j["conclusive"] = cert.conclusive;
    j["min_principal_on_sphere"] = cert.min_principal_on_sphere;
    j["min_abs_hessdet_on_sphere"] = cert.min_abs_hessdet_on_sphere;
    const bool pass = cert.elliptic && cert.nondegenerate && cert.conclusive;
    j["pass"] = pass;
    write_json(c, "certify.json", j);
    return pass ? 0 : 1;
}

// --------------------------------------------------------------- rho-audit

int cmd_rho_audit(const Common& c, int k_max, double s_hi, int s_count,
                  int density) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    const hsd::Threshold th = hsd::find_threshold(sym);
    const auto audit = hsd::sigma_audit(sym, k_max, th.a, s_hi, s_count, density);
    json j = base_report(c, "rho-audit");
    j["threshold"] = th.a;
    j["s_range"] = {th.a, s_hi};
    j["k_max"] = k_max;
    j["constants"] = audit.constants;
    j["constants_refined"] = audit.constants_refined;
    j["stable"] = audit.stable;
    bool pass = !audit.unstable_flag;
    for (bool s : audit.stable) pass = pass && s;
    j["pass"] = pass;
    write_json(c, "rho_audit.json", j);
    auto csv = open_csv(c, "rho_audit.csv", "k,s,deriv_abs,weighted");
    for (const auto& row : audit.rows)
        csv << row.k << "," << row.s << "," << row.deriv_abs << "," << row.weighted
            << "\n";
    return pass ? 0 : 1;
}

// ------------------------------------------------------------- phase-audit

int cmd_phase_audit(const Common& c, const std::vector<double>& ts,
                    const std::vector<double>& rs, double s_hi, int count) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    const double a1 = hsd::a1_threshold(sym, hsd::find_threshold(sym).a);
    const double u[2] = {1.0, 0.0};
    json j = base_report(c, "phase-audit");
    j["a1"] = a1;
    j["s_range"] = {a1, s_hi};
    bool pass = true;
    json runs = json::array();
    auto csv = open_csv(c, "phase_audit.csv",
                        "t,r,s,phi_plus,phi_minus,dphi_plus,dphi_minus");
    for (double t : ts)
        for (double r : rs) {
            const auto audit =
                hsd::phase_inequality_audit(sym, u, t, r, a1, s_hi, count);
            json run;
            run["t"] = t;
            run["r"] = r;
            run["sign_bounds"] = {audit.sign_bounds.c1, audit.sign_bounds.c2};
            run["slope_plus"] = {audit.slope_plus.c1, audit.slope_plus.c2};
            run["slope_minus"] = {audit.slope_minus.c1, audit.slope_minus.c2};
            run["curvature_minus"] = {audit.curvature_minus.c1,
                                      audit.curvature_minus.c2};
            run["high_order"] = {audit.high_order.c1, audit.high_order.c2};
            run["stability"] = audit.stability;
            run["pass"] = audit.pass;
            runs.push_back(run);
            pass = pass && audit.pass;
            for (const auto& row : audit.sweep)
                csv << t << "," << r << "," << row[0] << "," << row[1] << ","
                    << row[2] << "," << row[3] << "," << row[4] << "\n";
        }
    j["runs"] = runs;
    j["pass"] = pass;
    write_json(c, "phase_audit.json", j);
    return pass ? 0 : 1;
}

// ----------------------------------------------------------- sphere-decomp

int cmd_sphere_decomp(const Common& c, double s, double lambda_lo, double lambda_hi,
                      int count) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    const double u[2] = {1.0, 0.0};
    const auto pou = hsd::make_partition(sym, u, std::max(s, 1.0));
    json j = base_report(c, "sphere-decomp");
    j["s"] = s;
    j["lambda_range"] = {lambda_lo, lambda_hi};
    auto csv = open_csv(c, "sphere_decomp.csv",
                        "lambda,Phi_re,Phi_im,abs_Psi_plus,abs_Psi_minus,abs_Psi0");
    double psi_min = 1e300, psi_max = 0.0;
    bool weighted_decreasing = true;
    double prev_weighted = 1e300;
    for (double lam : log_grid(lambda_lo, lambda_hi, count)) {
        const auto dec = hsd::stationary_decomposition(sym, u, lam, s, pou);
        csv << lam << "," << dec.Phi.real() << "," << dec.Phi.imag() << ","
            << std::abs(dec.Psi_plus) << "," << std::abs(dec.Psi_minus) << ","
            << std::abs(dec.Psi0) << "\n";
        if (lam >= 10.0) {
            psi_min = std::min(psi_min, std::abs(dec.Psi_plus));
            psi_max = std::max(psi_max, std::abs(dec.Psi_plus));
            const double w = lam * lam * std::abs(dec.Psi0);
            if (w > prev_weighted + 1e-9) weighted_decreasing = false;
            prev_weighted = w;
        }
    }
    const bool pass = psi_max > 0.0 && psi_max / psi_min < 2.0 && weighted_decreasing;
    j["abs_Psi_plus_band"] = {psi_min, psi_max};
    j["weighted_Psi0_decreasing"] = weighted_decreasing;
    j["pass"] = pass;
    write_json(c, "sphere_decomp.json", j);
    return pass ? 0 : 1;
}

// ----------------------------------------------------------------- kernel

int cmd_kernel(const Common& c, double t, const std::vector<double>& radii,
               int points, const std::string& strategy) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    hsd::KernelStrategy strat = hsd::KernelStrategy::automatic;
    if (strategy == "fft") strat = hsd::KernelStrategy::fft;
    else if (strategy == "split") strat = hsd::KernelStrategy::split;
    else if (strategy != "auto")
        throw CLI::ValidationError("--strategy must be auto, fft or split");
    const double lo = radii.front(), hi = radii.back();
    json j = base_report(c, "kernel");
    j["t"] = t;
    j["radii"] = {lo, hi};
    j["strategy"] = strategy;
    json values = json::array();
    auto csv = open_csv(c, "kernel.csv", "r,re,im,abs,error_estimate,method");
    for (int k = 0; k < points; ++k) {
        const double r = points > 1 ? lo + (hi - lo) * k / (points - 1) : lo;
        const double x[2] = {r, 0.0};
        const auto v = hsd::kernel_eval(sym, t, x, strat);
        json row;
        row["r"] = r;
        row["re"] = v.value.real();
        row["im"] = v.value.imag();
        row["abs"] = std::abs(v.value);
        row["method"] = v.method;
        row["error_estimate"] = v.error_estimate;
        values.push_back(row);
        csv << r << "," << v.value.real() << "," << v.value.imag() << ","
            << std::abs(v.value) << "," << v.error_estimate << "," << v.method
            << "\n";
    }
    j["values"] = values;
    j["pass"] = true;
    write_json(c, "kernel.json", j);
    return 0;
}

// ------------------------------------------------------------------ decay

int cmd_decay(const Common& c, const std::string& regime_name,
              std::vector<double> ts, double radius_hi, int radius_count, long n) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    hsd::Regime regime;
    if (regime_name == "small-t") regime = hsd::Regime::small_t;
    else if (regime_name == "large-t") regime = hsd::Regime::large_t;
    else throw CLI::ValidationError("--regime must be small-t or large-t");
    if (ts.empty())
        ts = regime == hsd::Regime::small_t ? std::vector<double>{0.02, 0.05, 0.1}
                                            : std::vector<double>{1.0, 4.0, 16.0};
    std::vector<double> radii;
    for (int k = 0; k < radius_count; ++k)
        radii.push_back(radius_hi * k / std::max(1, radius_count - 1));
    hsd::DecayOpts opts;
    opts.points_per_axis = n;
    const auto fit = hsd::envelope_check(sym, regime, ts, radii, opts);
    json j = base_report(c, "decay");
    j["regime"] = regime_name;
    j["t_values"] = ts;
    j["scaled_radius_max"] = radius_hi;
    j["points_per_axis"] = n;
    j["max_ratio"] = fit.max_ratio;
    j["stability"] = fit.stability;
    j["fitted_exponent"] = fit.fitted_exponent;
    j["pass"] = fit.pass;
    write_json(c, "decay.json", j);
    auto csv = open_csv(c, "decay.csv", "t,r,abs_I,envelope,ratio");
    for (const auto& row : fit.samples)
        csv << row[0] << "," << row[1] << "," << row[2] << "," << row[3] << ","
            << row[4] << "\n";
    return fit.pass ? 0 : 1;
}

// -------------------------------------------------------------- sharpness

int cmd_sharpness(const Common& c, int m, double x_lo, double x_hi, long n) {
    hsd::DecayOpts opts;
    opts.points_per_axis = n;
    const auto rep = hsd::sharpness_check(m, 2, x_lo, x_hi, 0.1, 10.0, opts);
    json j = base_report(c, "sharpness");
    j["m"] = m;
    j["x_range"] = {x_lo, x_hi};
    j["mu"] = rep.mu;
    j["slope"] = rep.slope;
    j["q_band"] = {rep.q_min, rep.q_max};
    j["pass"] = rep.pass;
    write_json(c, "sharpness.json", j);
    auto csv = open_csv(c, "sharpness.csv", "x,abs_I,q");
    for (const auto& row : rep.samples)
        csv << row[0] << "," << row[1] << "," << row[2] << "\n";
    return rep.pass ? 0 : 1;
}

// ------------------------------------------------------------------- lpq

void write_norm_report(const Common& c, const std::string& stem,
                       const hsd::NormEstimate& est) {
    json j = base_report(c, stem);
    j["p"] = std::isinf(est.pair.p) ? json("inf") : json(est.pair.p);
    j["q"] = std::isinf(est.pair.q) ? json("inf") : json(est.pair.q);
    j["classification"] = est.pair.classification;
    j["fitted_exponent"] = est.fitted_exponent;
    j["predicted_exponent"] = est.predicted_exponent;
    j["residual_rms"] = est.residual_rms;
    j["pass"] = est.pass;
    write_json(c, stem + ".json", j);
    auto csv = open_csv(c, stem + ".csv", "t,ratio_max,predicted");
    for (size_t k = 0; k < est.t_grid.size(); ++k) {
        // predicted curve anchored at the first sample
        const double pred = est.family_max.front() *
                            std::pow(est.t_grid[k] / est.t_grid.front(),
                                     est.predicted_exponent);
        csv << est.t_grid[k] << "," << est.family_max[k] << "," << pred << "\n";
    }
}

double parse_exponent(const std::string& text) {
    if (text == "inf") return INFINITY;
    return std::stod(text);
}

int cmd_lpq(const Common& c, const std::string& pair_text, bool large_t,
            double t_lo, double t_hi, int t_count, long n, double extent) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    std::stringstream ss(pair_text);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
        throw CLI::ValidationError("--pair expects p,q");
    const double p = parse_exponent(a), q = parse_exponent(b);
    hsd::FitOpts opts;
    opts.points_per_axis = n;
    opts.extent = extent;
    const auto ts = log_grid(t_lo, t_hi, t_count);
    const auto est = hsd::lpq_exponent_fit(sym, p, q, ts, !large_t, opts);
    write_norm_report(c, "lpq", est);
    return est.pass ? 0 : 1;
}

int cmd_highfreq(const Common& c, const std::string& pair_text, double a_cut,
                 double center_freq, double t_lo, double t_hi, int t_count, long n,
                 double extent) {
    const hsd::Symbol sym = hsd::load_symbol(c.symbol_path);
    std::stringstream ss(pair_text);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
        throw CLI::ValidationError("--pair expects p,q");
    const double p = parse_exponent(a), q = parse_exponent(b);
    hsd::FitOpts opts;
    opts.points_per_axis = n;
    opts.extent = extent;
    opts.exponent_tol = 0.1;
    const auto ts = log_grid(t_lo, t_hi, t_count);
    const auto est = hsd::highfreq_check(sym, p, q, a_cut, center_freq, ts, opts);
    write_norm_report(c, "highfreq", est);
    return est.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical evaluation of higher-order dispersive kernels"};
    app.require_subcommand(1);

    Common c;
    int k_max = 3, s_count = 12, density = 64;
    double s_hi = 1000.0;
    auto* rho = app.add_subcommand("rho-audit", "level-set radius audit");
    add_common(rho, c);
    rho->add_option("--kmax", k_max);
    rho->add_option("--s-hi", s_hi);
    rho->add_option("--count", s_count);
    rho->add_option("--density", density);

    auto* cert = app.add_subcommand("certify", "symbol class certification");
    add_common(cert, c);

    std::string t_list = "1,10", r_list = "1,10";
    int phase_count = 48;
    auto* phase = app.add_subcommand("phase-audit", "radial phase inequalities");
    add_common(phase, c);
    phase->add_option("--t", t_list, "comma list of t values");
    phase->add_option("--r", r_list, "comma list of r values");
    phase->add_option("--s-hi", s_hi);
    phase->add_option("--count", phase_count);

    double s_level = 1.0, lambda_lo = 1.0, lambda_hi = 1000.0;
    int lambda_count = 40;
    auto* decomp = app.add_subcommand("sphere-decomp", "stationary decomposition sweep");
    add_common(decomp, c);
    decomp->add_option("--s", s_level);
    decomp->add_option("--lambda-lo", lambda_lo);
    decomp->add_option("--lambda-hi", lambda_hi);
    decomp->add_option("--count", lambda_count);

    double t = 1.0;
    std::string radii_text = "1,10", strategy = "auto";
    int points = 10;
    auto* kern = app.add_subcommand("kernel", "pointwise kernel values");
    add_common(kern, c);
    kern->add_option("-t,--time", t)->required();
    kern->add_option("--radii", radii_text, "lo,hi radius range");
    kern->add_option("--points", points);
    kern->add_option("--strategy", strategy, "auto | fft | split");

    std::string regime = "large-t", decay_t_list;
    double radius_hi = 8.0;
    int radius_count = 33;
    long grid_n = 1024;
    auto* dec = app.add_subcommand("decay", "two-regime envelope check");
    add_common(dec, c);
    dec->add_option("--regime", regime, "small-t | large-t")->required();
    dec->add_option("--t", decay_t_list, "comma list of t values");
    dec->add_option("--radius-hi", radius_hi, "max scaled radius");
    dec->add_option("--radius-count", radius_count);
    dec->add_option("-n,--points-per-axis", grid_n);

    int sharp_m = 4;
    double x_lo = 8.0, x_hi = 64.0;
    auto* sharp = app.add_subcommand("sharpness", "spatial decay exponent");
    add_common(sharp, c, false);
    sharp->add_option("-m,--order", sharp_m);
    sharp->add_option("--x-lo", x_lo);
    sharp->add_option("--x-hi", x_hi);
    sharp->add_option("-n,--points-per-axis", grid_n);

    std::string pair_text = "2,2";
    bool large_t_flag = false;
    double t_lo = 0.05, t_hi = 0.5, extent = 102.4, a_cut = 0.5, center_freq = 0.0;
    int t_count = 9;
    long fit_n = 2048;
    auto* lpq = app.add_subcommand("lpq", "norm-ratio exponent fit");
    add_common(lpq, c);
    lpq->add_option("--pair", pair_text, "p,q (use inf for infinity)")->required();
    lpq->add_flag("--large-t", large_t_flag);
    lpq->add_option("--t-lo", t_lo);
    lpq->add_option("--t-hi", t_hi);
    lpq->add_option("--t-count", t_count);
    lpq->add_option("-n,--points-per-axis", fit_n);
    lpq->add_option("--extent", extent);

    auto* hf = app.add_subcommand("highfreq", "high-frequency exponent fit");
    add_common(hf, c);
    hf->add_option("--pair", pair_text, "p,q (use inf for infinity)")->required();
    hf->add_option("--a-cut", a_cut);
    hf->add_option("--center-freq", center_freq);
    hf->add_option("--t-lo", t_lo);
    hf->add_option("--t-hi", t_hi);
    hf->add_option("--t-count", t_count);
    hf->add_option("-n,--points-per-axis", fit_n);
    hf->add_option("--extent", extent);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        hsd::set_threads(c.threads);
        if (cert->parsed()) return cmd_certify(c);
        if (rho->parsed()) return cmd_rho_audit(c, k_max, s_hi, s_count, density);
        if (phase->parsed())
            return cmd_phase_audit(c, parse_list(t_list), parse_list(r_list), s_hi,
                                   phase_count);
        if (decomp->parsed())
            return cmd_sphere_decomp(c, s_level, lambda_lo, lambda_hi, lambda_count);
        if (kern->parsed())
            return cmd_kernel(c, t, parse_list(radii_text), points, strategy);
        if (dec->parsed())
            return cmd_decay(c, regime,
                             decay_t_list.empty() ? std::vector<double>{}
                                                  : parse_list(decay_t_list),
                             radius_hi, radius_count, grid_n);
        if (sharp->parsed()) return cmd_sharpness(c, sharp_m, x_lo, x_hi, grid_n);
        if (lpq->parsed())
            return cmd_lpq(c, pair_text, large_t_flag, t_lo, t_hi, t_count, fit_n,
                           extent);
        if (hf->parsed())
            return cmd_highfreq(c, pair_text, a_cut, center_freq, t_lo, t_hi, t_count,
                                fit_n, extent);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
