#include "levy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levy {

const double GaussRule::nodes[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975362};
const double GaussRule::weights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double integrate_panels(const std::vector<double>& boundaries, const std::function<double(double)>& f) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < boundaries.size(); ++p) {
        const double a = boundaries[p], b = boundaries[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < GaussRule::n; ++i) acc += GaussRule::weights[i] * f(mid + half * GaussRule::nodes[i]);
        total += half * acc;
    }
    return total;
}

namespace {

std::vector<double> splice(std::vector<double> bounds, double a, double b, const std::vector<double>& breakpoints) {
    for (double bp : breakpoints)
        if (bp > a && bp < b) bounds.push_back(bp);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(std::abs(x), std::abs(y)); }),
                 bounds.end());
    return bounds;
}

}  // namespace

std::vector<double> log_panels(double a, double b, int per_decade, const std::vector<double>& breakpoints) {
    if (!(a > 0.0) || !(b > a)) return {};
    const double la = std::log10(a), lb = std::log10(b);
    const int m = std::max(1, static_cast<int>(std::ceil((lb - la) * per_decade)));
    std::vector<double> bounds(m + 1);
    for (int i = 0; i <= m; ++i) bounds[i] = std::pow(10.0, la + (lb - la) * i / m);
    bounds.front() = a;
    bounds.back() = b;
    return splice(std::move(bounds), a, b, breakpoints);
}

std::vector<double> linear_panels(double a, double b, double width, const std::vector<double>& breakpoints) {
    if (!(b > a)) return {};
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    std::vector<double> bounds(m + 1);
    for (int i = 0; i <= m; ++i) bounds[i] = a + (b - a) * i / m;
    return splice(std::move(bounds), a, b, breakpoints);
}

}  // namespace levy
