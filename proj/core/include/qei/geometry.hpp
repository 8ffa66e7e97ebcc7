#pragma once

#include <vector>

namespace qei {

/// Static 1+1 geometry on the spatial circle: line element
/// g00(x) dt^2 - h(x) dx^2 with x periodic of circumference L, sampled on a
/// uniform grid of G points. The ultrastatic cylinder (g00 = h = 1) is
/// flagged explicitly because it admits closed-form modes.
struct StaticGeometry {
    double L = 0.0;               ///< circumference, > 0
    double m = 0.0;               ///< field mass, > 0
    std::vector<double> g00;      ///< lapse samples, > 0, size G
    std::vector<double> h;        ///< spatial metric samples, > 0, size G
    bool ultrastatic = false;

    int grid_size() const { return static_cast<int>(g00.size()); }
    double dx() const { return L / grid_size(); }
    double grid_point(int i) const { return i * dx(); }

    double min_sqrt_g00() const;

    /// Throws ConfigError on any invariant violation.
    void validate() const;

    static StaticGeometry make_ultrastatic(double L, double m, int grid);
    static StaticGeometry make(double L, double m, std::vector<double> g00,
                               std::vector<double> h);
};

} // namespace qei
