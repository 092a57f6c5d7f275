#include "hsd/symbol.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hsd {

Symbol::Symbol(Polynomial p) : p_(std::move(p)), principal_(p_.dim()), m_(p_.degree()) {
    if (p_.dim() < 2) throw std::invalid_argument("Symbol: dimension must be >= 2");
    if (m_ < 2) throw std::invalid_argument("Symbol: order must be >= 2");
    if (m_ % 2 != 0) throw std::invalid_argument("Symbol: order must be even");
    principal_ = p_.principal_part();
}

SphereGrid make_sphere_grid(int n, int density) {
    if (density < 4) throw std::invalid_argument("make_sphere_grid: density too small");
    SphereGrid g;
    g.points.reserve(density);
    if (n == 2) {
        const double dth = 2.0 * std::numbers::pi / density;
        for (int j = 0; j < density; ++j)
            g.points.push_back({std::cos(j * dth), std::sin(j * dth)});
        g.covering_radius = dth / 2.0;
    } else if (n == 3) {
        // Fibonacci lattice; covering radius bound ~ 3/sqrt(N) is conservative.
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < density; ++j) {
            double z = 1.0 - (2.0 * j + 1.0) / density;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * j;
            g.points.push_back({r * std::cos(th), r * std::sin(th), z});
        }
        g.covering_radius = 3.0 / std::sqrt(static_cast<double>(density));
    } else {
        throw std::invalid_argument("make_sphere_grid: only n=2 and n=3 are supported");
    }
    return g;
}

Polynomial hessian_determinant(const Polynomial& p) {
    const int n = p.dim();
    std::vector<std::vector<Polynomial>> h(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            h[i][j] = p.derivative(i).derivative(j);
            if (j != i) h[j][i] = h[i][j];
        }
    // Laplace expansion; fine for the supported n in {2,3}.
    if (n == 2) return h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (n == 3)
        return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
               h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
               h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    throw std::invalid_argument("hessian_determinant: unsupported dimension");
}

SymbolCertificate certify(const Symbol& sym, int sphere_density) {
    const Polynomial& pm = sym.principal();
    const Polynomial det = hessian_determinant(pm);
    const SphereGrid grid = make_sphere_grid(sym.dim(), sphere_density);

    double min_pm = std::numeric_limits<double>::infinity();
    double min_det = std::numeric_limits<double>::infinity();
    for (const auto& w : grid.points) {
        min_pm = std::min(min_pm, pm(w));
        min_det = std::min(min_det, std::abs(det(w)));
    }

    SymbolCertificate cert;
    cert.sphere_sample_count = static_cast<int>(grid.points.size());
    cert.min_principal_on_sphere = min_pm;
    cert.min_abs_hessdet_on_sphere = min_det;
    cert.lipschitz_margin_principal = pm.gradient_bound_on_sphere() * grid.covering_radius;
    cert.lipschitz_margin_hessdet = det.gradient_bound_on_sphere() * grid.covering_radius;
    cert.elliptic = min_pm - cert.lipschitz_margin_principal > 0.0;
    cert.nondegenerate = min_det - cert.lipschitz_margin_hessdet > 0.0;
    // A failed flag is conclusive only if the sampled minimum itself is
    // at or below zero margin worth of slack; otherwise refinement may flip it.
    if (!cert.elliptic && min_pm > 0.0) cert.conclusive = false;
    if (!cert.nondegenerate && min_det > 0.0) cert.conclusive = false;
    return cert;
}

namespace {

double parse_coefficient(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
        double num = std::stod(tok.substr(0, slash));
        double den = std::stod(tok.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("symbol file: zero denominator");
        return num / den;
    }
    return std::stod(tok);
}

} // namespace

Symbol parse_symbol(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, m = -1;
    std::vector<std::pair<MultiIndex, double>> terms;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "n") {
            if (!(ls >> n)) throw std::invalid_argument("symbol file: bad n line");
        } else if (first == "m") {
            if (!(ls >> m)) throw std::invalid_argument("symbol file: bad m line");
        } else {
            if (n < 0) throw std::invalid_argument("symbol file: term before n declaration");
            std::vector<int> exps(n);
            exps[0] = std::stoi(first);
            for (int i = 1; i < n; ++i)
                if (!(ls >> exps[i])) throw std::invalid_argument("symbol file: short term line");
            std::string ctok;
            if (!(ls >> ctok)) throw std::invalid_argument("symbol file: missing coefficient");
            terms.emplace_back(MultiIndex(exps), parse_coefficient(ctok));
        }
    }
    if (n < 0) throw std::invalid_argument("symbol file: missing dimension");
    Polynomial p(n);
    for (auto& [alpha, c] : terms) p.add_term(alpha, c);
    Symbol sym{std::move(p)};
    if (m >= 0 && m != sym.order())
        throw std::invalid_argument("symbol file: declared order does not match terms");
    return sym;
}

Symbol load_symbol(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_symbol: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_symbol(ss.str());
}

void save_symbol(const Symbol& sym, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_symbol: cannot open " + path);
    f << "n " << sym.dim() << "\n" << "m " << sym.order() << "\n";
    f.precision(17);
    for (const auto& [alpha, c] : sym.poly().terms()) {
        for (int e : alpha.k) f << e << " ";
        f << c << "\n";
    }
}

} // namespace hsd
