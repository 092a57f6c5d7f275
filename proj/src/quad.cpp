#include "hsd/quad.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hsd {

namespace {

// Abscissae/weights from Abramowitz & Stegun table 25.4 (16-point rule).
constexpr std::array<double, 16> kNodes = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};

constexpr std::array<double, 16> kWeights = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

} // namespace

std::span<const double> gl16_nodes() { return kNodes; }
std::span<const double> gl16_weights() { return kWeights; }

Panels make_panels(double a, double b, const std::function<double(double)>& freq,
                   double periods_per_panel, int max_panels) {
    if (!(b > a)) throw std::invalid_argument("make_panels: need b > a");
    Panels p;
    p.edges.push_back(a);
    const double min_width = (b - a) / max_panels;
    double x = a;
    while (x < b) {
        const double f = std::max(freq(x), 1e-12);
        double w = std::max(periods_per_panel / f, min_width);
        // Re-check frequency at the tentative right edge; shrink if it grew.
        const double f2 = std::max(freq(std::min(x + w, b)), 1e-12);
        if (f2 > f) w = std::max(periods_per_panel / f2, min_width);
        x = std::min(x + w, b);
        p.edges.push_back(x);
        if (static_cast<int>(p.edges.size()) > max_panels + 1)
            throw std::runtime_error("make_panels: panel budget exceeded");
    }
    p.edges.back() = b;
    return p;
}

double integrate(const Panels& panels, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (size_t k = 0; k + 1 < panels.edges.size(); ++k) {
        const double lo = panels.edges[k], hi = panels.edges[k + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (int j = 0; j < 16; ++j) acc += kWeights[j] * f(mid + half * kNodes[j]);
        sum += half * acc;
    }
    return sum;
}

QuadRule flatten(const Panels& panels) {
    QuadRule rule;
    for (size_t k = 0; k + 1 < panels.edges.size(); ++k) {
        const double lo = panels.edges[k], hi = panels.edges[k + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < 16; ++j) {
            rule.nodes.push_back(mid + half * kNodes[j]);
            rule.weights.push_back(half * kWeights[j]);
        }
    }
    return rule;
}

} // namespace hsd
