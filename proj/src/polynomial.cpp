#include "hsd/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsd {

Polynomial::Polynomial(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial::Polynomial(int n, std::initializer_list<std::pair<MultiIndex, double>> terms)
    : Polynomial(n) {
    for (const auto& [alpha, c] : terms) add_term(alpha, c);
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
    if (alpha.dim() != n_)
        throw std::invalid_argument("Polynomial: multi-index dimension mismatch");
    if (!std::isfinite(c))
        throw std::invalid_argument("Polynomial: non-finite coefficient");
    auto it = coeffs_.find(alpha);
    if (it == coeffs_.end()) {
        if (c != 0.0) coeffs_.emplace(alpha, c);
    } else {
        it->second += c;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [alpha, c] : coeffs_) d = std::max(d, alpha.order());
    return d;
}

double Polynomial::operator()(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != n_)
        throw std::invalid_argument("Polynomial: evaluation point dimension mismatch");
    double acc = 0.0;
    for (const auto& [alpha, c] : coeffs_) {
        double t = c;
        for (int i = 0; i < n_; ++i)
            for (int e = 0; e < alpha.k[i]; ++e) t *= xi[i];
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::derivative(int axis) const {
    if (axis < 0 || axis >= n_)
        throw std::out_of_range("Polynomial: derivative axis out of range");
    Polynomial out(n_);
    for (const auto& [alpha, c] : coeffs_) {
        if (alpha.k[axis] == 0) continue;
        MultiIndex beta = alpha;
        beta.k[axis] -= 1;
        out.add_term(beta, c * alpha.k[axis]);
    }
    return out;
}

Polynomial Polynomial::principal_part() const {
    const int m = degree();
    Polynomial out(n_);
    for (const auto& [alpha, c] : coeffs_)
        if (alpha.order() == m) out.add_term(alpha, c);
    return out;
}

std::vector<double> Polynomial::gradient(std::span<const double> xi) const {
    std::vector<double> g(n_);
    for (int i = 0; i < n_; ++i) g[i] = derivative(i)(xi);
    return g;
}

std::vector<double> Polynomial::radial_profile(std::span<const double> omega) const {
    std::vector<double> prof(static_cast<size_t>(std::max(degree(), 0)) + 1, 0.0);
    for (const auto& [alpha, c] : coeffs_) {
        double t = c;
        for (int i = 0; i < n_; ++i)
            for (int e = 0; e < alpha.k[i]; ++e) t *= omega[i];
        prof[alpha.order()] += t;
    }
    return prof;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out = *this;
    for (const auto& [alpha, c] : other.coeffs_) out.add_term(alpha, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    Polynomial out = *this;
    for (const auto& [alpha, c] : other.coeffs_) out.add_term(alpha, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (n_ != other.n_)
        throw std::invalid_argument("Polynomial: product dimension mismatch");
    Polynomial out(n_);
    for (const auto& [a, ca] : coeffs_)
        for (const auto& [b, cb] : other.coeffs_) {
            MultiIndex s = a;
            for (int i = 0; i < n_; ++i) s.k[i] += b.k[i];
            out.add_term(s, ca * cb);
        }
    return out;
}

Polynomial Polynomial::scaled(double c) const {
    Polynomial out(n_);
    for (const auto& [alpha, ca] : coeffs_) out.add_term(alpha, c * ca);
    return out;
}

double Polynomial::gradient_bound_on_sphere() const {
    double sq = 0.0;
    for (int i = 0; i < n_; ++i) {
        double bi = 0.0;
        for (const auto& [alpha, c] : coeffs_) bi += std::abs(c) * alpha.k[i];
        sq += bi * bi;
    }
    return std::sqrt(sq);
}

Polynomial Polynomial::radial_power(int n, int half_degree) {
    Polynomial r2(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 2;
        r2.add_term(MultiIndex(e), 1.0);
    }
    Polynomial out(n);
    out.add_term(MultiIndex(std::vector<int>(n, 0)), 1.0);
    for (int k = 0; k < half_degree; ++k) out = out * r2;
    return out;
}

double poly_eval(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

double poly_eval_derivative(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<double>(i);
    return acc;
}

} // namespace hsd
