#include "qei/geometry.hpp"

#include "qei/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qei {

double StaticGeometry::min_sqrt_g00() const {
    double mn = g00.empty() ? 1.0 : *std::min_element(g00.begin(), g00.end());
    return std::sqrt(mn);
}

void StaticGeometry::validate() const {
    if (!(L > 0.0)) throw ConfigError("geometry: L must be > 0");
    if (!(m > 0.0))
        throw ConfigError("geometry: m must be > 0 (the massless zero mode is unsupported)");
    if (g00.empty() || g00.size() != h.size())
        throw ConfigError("geometry: g00 and h sample counts must match and be nonempty");
    for (double v : g00)
        if (!(v > 0.0)) throw ConfigError("geometry: g00 samples must be > 0");
    for (double v : h)
        if (!(v > 0.0)) throw ConfigError("geometry: h samples must be > 0");
}

StaticGeometry StaticGeometry::make_ultrastatic(double L, double m, int grid) {
    StaticGeometry geom;
    geom.L = L;
    geom.m = m;
    geom.g00.assign(static_cast<std::size_t>(grid), 1.0);
    geom.h.assign(static_cast<std::size_t>(grid), 1.0);
    geom.ultrastatic = true;
    geom.validate();
    return geom;
}

StaticGeometry StaticGeometry::make(double L, double m, std::vector<double> g00,
                                    std::vector<double> h) {
    StaticGeometry geom;
    geom.L = L;
    geom.m = m;
    geom.g00 = std::move(g00);
    geom.h = std::move(h);
    geom.ultrastatic =
        std::all_of(geom.g00.begin(), geom.g00.end(), [](double v) { return v == 1.0; }) &&
        std::all_of(geom.h.begin(), geom.h.end(), [](double v) { return v == 1.0; });
    geom.validate();
    return geom;
}

} // namespace qei
