#pragma once

#include "qei/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace qei {

enum class CatalogBackend { AnalyticCylinder, NumericSL };

/// One spatial Klein-Gordon mode: frequency omega_j and samples of the mode
/// function u_j on the geometry grid, normalized to <u_j,u_j>_w = 1 with
/// weight w = sqrt(h/g00). Cylinder modes additionally carry their integer
/// wavenumber n (u_n = e^{i 2 pi n x / L} / sqrt(L)), which makes them
/// evaluable at arbitrary points.
struct Mode {
    double omega = 0.0;
    int wavenumber = 0;
    bool has_wavenumber = false;
    Eigen::VectorXcd samples;
    Eigen::VectorXcd deriv_samples;
};

/// Spectral data {omega_j, u_j} of the spatial operator
///   K u = -g00 (g00 h)^{-1/2} d/dx ( (g00/h)^{1/2} du/dx ) + m^2 g00 u
/// on the circle, ascending in (omega, |n|, -sign n). Immutable after
/// construction; all evaluation methods are pure.
class ModeCatalog {
public:
    ModeCatalog(StaticGeometry geom, std::vector<Mode> modes, CatalogBackend backend);

    int size() const { return static_cast<int>(modes_.size()); }
    double mass() const { return geom_.m; }
    double circumference() const { return geom_.L; }
    CatalogBackend backend() const { return backend_; }
    std::string provenance() const;
    const StaticGeometry& geometry() const { return geom_; }
    const Mode& mode(int j) const { return modes_[static_cast<std::size_t>(j)]; }
    double omega(int j) const { return modes_[static_cast<std::size_t>(j)].omega; }
    double omega_max() const { return modes_.back().omega; }

    /// Mode function at arbitrary x: closed form on the cylinder, grid value
    /// (nearest sample) for the numeric backend.
    std::complex<double> mode_value(int j, double x) const;
    /// Spatial derivative du_j/dx at x (closed form / precomputed stencil).
    std::complex<double> mode_deriv(int j, double x) const;

    /// Metric factors at x (grid lookup; constant 1 on the cylinder).
    double g00_at(double x) const;
    double h_at(double x) const;

    /// Sturm-Liouville weight samples w_i = sqrt(h_i/g00_i).
    const Eigen::VectorXd& weight() const { return weight_; }
    /// Measure samples sqrt(h_i) for d(mu).
    const Eigen::VectorXd& sqrt_h() const { return sqrt_h_; }
    double dx() const { return geom_.dx(); }

    /// Max_{j,k} |<u_j,u_k>_w - delta_jk| over the catalog.
    double orthonormality_residual() const;
    /// Max_j ||K u_j - omega_j^2 u_j|| / omega_j^2 under the discrete operator.
    double eigen_residual() const;
    /// Spectral-gap invariant omega_1 >= m min sqrt(g00).
    bool spectral_gap_ok() const;

    /// Tail estimate  sum_{j>J} omega_j e^{-tau omega_j}  for a decay scale
    /// tau (window width or inverse temperature), via the continuum mode
    /// density of the circle. Quantifies the hard-cutoff truncation error
    /// carried by downstream mode sums.
    double tail_bound(double tau) const;

private:
    StaticGeometry geom_;
    std::vector<Mode> modes_;
    CatalogBackend backend_;
    Eigen::VectorXd weight_, sqrt_h_;
    int grid_index(double x) const;
};

/// Analytic cylinder catalog: u_n = e^{i 2 pi n x/L}/sqrt(L),
/// omega_n = sqrt(m^2 + (2 pi n/L)^2), enumerating n = 0, +1, -1, ... until J
/// frequencies are emitted (stable order: omega, then |n|, then +n before -n).
ModeCatalog build_cylinder_catalog(double L, double m, int J, int grid = 256);

/// Second-order periodic finite-difference Sturm-Liouville catalog: the J
/// lowest eigenpairs of the generalized symmetric problem with weight
/// w = sqrt(h/g00). Requires G >= 8 J (sampling adequacy). Phase fixed so the
/// largest-magnitude sample is real positive.
ModeCatalog build_sl_catalog(const StaticGeometry& geom, int J, double residual_tol = 1e-8);

/// Max deviation of 2 sigma(Re phi_j, Im phi_j) from -1 across modes, where
/// phi_j = (2 omega_j)^{-1/2} e^{-i omega_j t} u_j and sigma is the discrete
/// symplectic form on the t = 0 slice. Checks the CCR normalization.
double symplectic_check(const ModeCatalog& cat);

} // namespace qei
