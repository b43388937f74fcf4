#include "sigmanet/functions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sigmanet {

namespace {

TargetFunction tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("table: cannot open " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, y;
        if (row >> x >> y)
            pts.emplace_back(x, y);
    }
    if (pts.size() < 2)
        throw std::invalid_argument("table: need at least two samples");
    std::sort(pts.begin(), pts.end());
    return {"table", 1, [pts](std::span<const double> x) {
                const double v = x[0];
                if (v <= pts.front().first)
                    return pts.front().second;
                if (v >= pts.back().first)
                    return pts.back().second;
                auto hi = std::upper_bound(pts.begin(), pts.end(),
                                           std::make_pair(v, std::numeric_limits<double>::max()));
                auto lo = hi - 1;
                const double w = (v - lo->first) / (hi->first - lo->first);
                return lo->second * (1 - w) + hi->second * w;
            }};
}

}  // namespace

TargetFunction resolve_function(const std::string& selector) {
    const double pi = 3.141592653589793238462643383279502884;
    if (selector == "identity")
        return {"identity", 1, [](std::span<const double> x) { return x[0]; }};
    if (selector == "abs-shift")
        return {"abs-shift", 1, [](std::span<const double> x) { return std::abs(x[0] - 0.5); }};
    if (selector == "sin-pi")
        return {"sin-pi", 1, [pi](std::span<const double> x) { return std::sin(pi * x[0]); }};
    if (selector == "mean2")
        return {"mean2", 2, [](std::span<const double> x) { return (x[0] + x[1]) / 2.0; }};
    if (selector == "product2")
        return {"product2", 2, [](std::span<const double> x) { return x[0] * x[1]; }};
    if (selector.rfind("const:", 0) == 0) {
        const double c = std::strtod(selector.c_str() + 6, nullptr);
        return {selector, 1, [c](std::span<const double>) { return c; }};
    }
    if (selector.rfind("table:", 0) == 0)
        return tabulated_from_csv(selector.substr(6));
    throw std::invalid_argument("unknown function selector: " + selector);
}

}  // namespace sigmanet
