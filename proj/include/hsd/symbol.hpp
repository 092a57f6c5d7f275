#pragma once

#include <string>
#include <vector>

#include "hsd/polynomial.hpp"

namespace hsd {

/// Validated elliptic-candidate symbol: n >= 2, even order m >= 2, nonzero
/// principal part. Ellipticity itself is checked by certify().
class Symbol {
  public:
    explicit Symbol(Polynomial p);

    int dim() const { return p_.dim(); }
    int order() const { return m_; }
    const Polynomial& poly() const { return p_; }
    const Polynomial& principal() const { return principal_; }

    double operator()(std::span<const double> xi) const { return p_(xi); }

  private:
    Polynomial p_;
    Polynomial principal_;
    int m_;
};

/// Quasi-uniform unit-sphere grid: angular lattice for n=2, Fibonacci
/// lattice for n=3. covering_radius bounds the geodesic distance from any
/// sphere point to the nearest grid point.
struct SphereGrid {
    std::vector<std::vector<double>> points;
    double covering_radius = 0.0;
};

SphereGrid make_sphere_grid(int n, int density);

struct SymbolCertificate {
    bool elliptic = false;
    double min_principal_on_sphere = 0.0;
    bool nondegenerate = false;
    double min_abs_hessdet_on_sphere = 0.0;
    int sphere_sample_count = 0;
    double lipschitz_margin_principal = 0.0;
    double lipschitz_margin_hessdet = 0.0;
    /// False when a Lipschitz margin exceeds the observed minimum, so the
    /// corresponding negative flag may just mean "grid too coarse".
    bool conclusive = true;
};

/// Symbolic Hessian determinant of the principal part.
Polynomial hessian_determinant(const Polynomial& p);

SymbolCertificate certify(const Symbol& sym, int sphere_density = 4096);

/// Text symbol file: `n <dim>`, `m <order>`, then one `<k_1> ... <k_n> <coeff>`
/// line per term. Coefficients may be decimals or rationals like 1/3.
Symbol load_symbol(const std::string& path);
Symbol parse_symbol(const std::string& text);
void save_symbol(const Symbol& sym, const std::string& path);

} // namespace hsd
