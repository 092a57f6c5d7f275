#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hsd {

/// 16-point Gauss-Legendre nodes/weights on [-1, 1].
std::span<const double> gl16_nodes();
std::span<const double> gl16_weights();

struct Panels {
    std::vector<double> edges; // size = panel count + 1
};

/// Split [a, b] into panels sized so each spans at most `periods_per_panel`
/// periods of a local frequency f(s) (cycles per unit length). Panel widths
/// follow a greedy sweep with a floor of (b-a)/max_panels.
Panels make_panels(double a, double b, const std::function<double(double)>& freq,
                   double periods_per_panel = 2.0, int max_panels = 1 << 16);

/// Composite GL16 over explicit panel edges.
double integrate(const Panels& panels, const std::function<double(double)>& f);

/// Flattened node/weight list for callers that share evaluations.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadRule flatten(const Panels& panels);

} // namespace hsd
