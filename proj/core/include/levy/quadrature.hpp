#pragma once

#include <functional>
#include <vector>

namespace levy {

/// Composite Gauss-Legendre (8 nodes per panel) over explicit panel
/// boundaries b_0 < b_1 < ... < b_m.
double integrate_panels(const std::vector<double>& boundaries, const std::function<double(double)>& f);

/// Log-spaced panel boundaries covering [a, b] (0 < a < b) with
/// `per_decade` panels per decade; extra breakpoints are spliced in.
std::vector<double> log_panels(double a, double b, int per_decade, const std::vector<double>& breakpoints = {});

/// Uniform panels of width <= `width` covering [a, b], with breakpoints.
std::vector<double> linear_panels(double a, double b, double width, const std::vector<double>& breakpoints = {});

/// Gauss-Legendre nodes/weights on [-1, 1], 8-point rule.
struct GaussRule {
    static const int n = 8;
    static const double nodes[8];
    static const double weights[8];
};

}  // namespace levy
