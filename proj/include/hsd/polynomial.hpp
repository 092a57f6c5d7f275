#pragma once

#include <map>
#include <span>
#include <vector>

#include "hsd/multiindex.hpp"

namespace hsd {

/// Real polynomial on R^n, stored as multi-index -> coefficient.
/// Zero coefficients are dropped on insertion, so degree() reflects the
/// actual support.
class Polynomial {
  public:
    explicit Polynomial(int n);
    Polynomial(int n, std::initializer_list<std::pair<MultiIndex, double>> terms);

    int dim() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const; // -1 for the zero polynomial

    void add_term(const MultiIndex& alpha, double c);
    const std::map<MultiIndex, double>& terms() const { return coeffs_; }

    double operator()(std::span<const double> xi) const;

    Polynomial derivative(int axis) const;
    Polynomial principal_part() const;
    std::vector<double> gradient(std::span<const double> xi) const;

    /// Coefficients a_d of the univariate radial profile P(rho*omega) = sum a_d rho^d.
    std::vector<double> radial_profile(std::span<const double> omega) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial scaled(double c) const;

    /// sum |c_alpha| * alpha_i, a coefficient-norm bound on |d_i P| over the unit ball.
    double gradient_bound_on_sphere() const;

    /// |xi|^2k on R^n.
    static Polynomial radial_power(int n, int half_degree);

    bool operator==(const Polynomial& other) const {
        return n_ == other.n_ && coeffs_ == other.coeffs_;
    }

  private:
    int n_;
    std::map<MultiIndex, double> coeffs_;
};

/// Horner evaluation of sum a_d x^d.
double poly_eval(std::span<const double> coeffs, double x);
/// Derivative of the same, sum d*a_d x^(d-1).
double poly_eval_derivative(std::span<const double> coeffs, double x);

} // namespace hsd
