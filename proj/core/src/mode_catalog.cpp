#include "qei/mode_catalog.hpp"

#include "qei/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qei {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

ModeCatalog::ModeCatalog(StaticGeometry geom, std::vector<Mode> modes, CatalogBackend backend)
    : geom_(std::move(geom)), modes_(std::move(modes)), backend_(backend) {
    const int G = geom_.grid_size();
    weight_.resize(G);
    sqrt_h_.resize(G);
    for (int i = 0; i < G; ++i) {
        const auto k = static_cast<std::size_t>(i);
        weight_[i] = std::sqrt(geom_.h[k] / geom_.g00[k]);
        sqrt_h_[i] = std::sqrt(geom_.h[k]);
    }
}

std::string ModeCatalog::provenance() const {
    return backend_ == CatalogBackend::AnalyticCylinder ? "analytic-cylinder" : "numeric-SL";
}

int ModeCatalog::grid_index(double x) const {
    const int G = geom_.grid_size();
    double xm = std::fmod(x, geom_.L);
    if (xm < 0.0) xm += geom_.L;
    const int i = static_cast<int>(std::lround(xm / geom_.dx())) % G;
    if (std::abs(xm - i * geom_.dx()) > 1e-9 * geom_.L &&
        std::abs(xm - geom_.L - i * geom_.dx()) > 1e-9 * geom_.L)
        throw ConfigError("numeric-SL catalog: evaluation point is not on the spatial grid");
    return i;
}

std::complex<double> ModeCatalog::mode_value(int j, double x) const {
    const Mode& md = modes_[static_cast<std::size_t>(j)];
    if (md.has_wavenumber) {
        const double k = kTwoPi * md.wavenumber / geom_.L;
        return std::exp(std::complex<double>(0.0, k * x)) / std::sqrt(geom_.L);
    }
    return md.samples[grid_index(x)];
}

std::complex<double> ModeCatalog::mode_deriv(int j, double x) const {
    const Mode& md = modes_[static_cast<std::size_t>(j)];
    if (md.has_wavenumber) {
        const double k = kTwoPi * md.wavenumber / geom_.L;
        return std::complex<double>(0.0, k) * mode_value(j, x);
    }
    return md.deriv_samples[grid_index(x)];
}

double ModeCatalog::g00_at(double x) const {
    if (geom_.ultrastatic) return 1.0;
    return geom_.g00[static_cast<std::size_t>(grid_index(x))];
}

double ModeCatalog::h_at(double x) const {
    if (geom_.ultrastatic) return 1.0;
    return geom_.h[static_cast<std::size_t>(grid_index(x))];
}

double ModeCatalog::orthonormality_residual() const {
    const int J = size();
    const int G = geom_.grid_size();
    Eigen::MatrixXcd U(G, J);
    for (int j = 0; j < J; ++j) U.col(j) = modes_[static_cast<std::size_t>(j)].samples;
    Eigen::MatrixXcd gram = U.adjoint() * weight_.asDiagonal() * U * geom_.dx();
    gram -= Eigen::MatrixXcd::Identity(J, J);
    return gram.cwiseAbs().maxCoeff();
}

double ModeCatalog::eigen_residual() const {
    if (backend_ == CatalogBackend::AnalyticCylinder) return 0.0;
    const int G = geom_.grid_size();
    const double dx = geom_.dx();
    // Coefficients c_{i+1/2} = (g00/h)^{1/2} at panel midpoints (sample average).
    Eigen::VectorXd c(G);
    for (int i = 0; i < G; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto kn = static_cast<std::size_t>((i + 1) % G);
        const double ci = std::sqrt(geom_.g00[k] / geom_.h[k]);
        const double cn = std::sqrt(geom_.g00[kn] / geom_.h[kn]);
        c[i] = 0.5 * (ci + cn);
    }
    double worst = 0.0;
    for (const Mode& md : modes_) {
        Eigen::VectorXcd r(G);
        for (int i = 0; i < G; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const int ip = (i + 1) % G;
            const int im = (i + G - 1) % G;
            const std::complex<double> flux =
                (-c[i] * (md.samples[ip] - md.samples[i]) +
                 c[im] * (md.samples[i] - md.samples[im])) /
                (dx * dx);
            const double mass_term = geom_.m * geom_.m * std::sqrt(geom_.g00[k] * geom_.h[k]);
            // K u = W^{-1} (A u) with W = diag(w)
            r[i] = (flux + mass_term * md.samples[i]) / weight_[i] -
                   md.omega * md.omega * md.samples[i];
        }
        worst = std::max(worst, r.norm() / (md.omega * md.omega * md.samples.norm()));
    }
    return worst;
}

bool ModeCatalog::spectral_gap_ok() const {
    const double gap = geom_.m * geom_.min_sqrt_g00();
    const double slack = backend_ == CatalogBackend::AnalyticCylinder ? 1.0 - 1e-12 : 0.95;
    return modes_.front().omega >= slack * gap;
}

double ModeCatalog::tail_bound(double tau) const {
    // Continuum density of circle modes ~ L/pi beyond the cutoff.
    const double wJ = omega_max();
    if (!(tau > 0.0)) return std::numeric_limits<double>::infinity();
    return (geom_.L / M_PI) * std::exp(-tau * wJ) * (wJ / tau + 1.0 / (tau * tau));
}

ModeCatalog build_cylinder_catalog(double L, double m, int J, int grid) {
    if (!(L > 0.0)) throw ConfigError("build_cylinder_catalog: L must be > 0");
    if (!(m > 0.0))
        throw ConfigError("build_cylinder_catalog: m must be > 0 (massless zero mode unsupported)");
    if (J < 1) throw ConfigError("build_cylinder_catalog: J must be >= 1");
    StaticGeometry geom = StaticGeometry::make_ultrastatic(L, m, grid);

    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(J));
    // Enumeration 0, +1, -1, +2, -2, ... is already sorted by (omega, |n|, +n first).
    for (int step = 0; static_cast<int>(modes.size()) < J; ++step) {
        const int n = (step % 2 == 1) ? (step + 1) / 2 : -step / 2;
        const double k = kTwoPi * n / L;
        Mode md;
        md.omega = std::sqrt(m * m + k * k);
        md.wavenumber = n;
        md.has_wavenumber = true;
        md.samples.resize(grid);
        md.deriv_samples.resize(grid);
        for (int i = 0; i < grid; ++i) {
            const double x = geom.grid_point(i);
            md.samples[i] = std::exp(std::complex<double>(0.0, k * x)) / std::sqrt(L);
            md.deriv_samples[i] = std::complex<double>(0.0, k) * md.samples[i];
        }
        modes.push_back(std::move(md));
    }
    return ModeCatalog(std::move(geom), std::move(modes), CatalogBackend::AnalyticCylinder);
}

ModeCatalog build_sl_catalog(const StaticGeometry& geom, int J, double residual_tol) {
    geom.validate();
    if (J < 1) throw ConfigError("build_sl_catalog: J must be >= 1");
    const int G = geom.grid_size();
    if (G < 8 * J)
        throw ConfigError("build_sl_catalog: sampling adequacy requires grid >= 8 J (grid = " +
                          std::to_string(G) + ", J = " + std::to_string(J) + ")");
    const double dx = geom.dx();

    Eigen::VectorXd w(G), mass(G), c(G);
    for (int i = 0; i < G; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto kn = static_cast<std::size_t>((i + 1) % G);
        w[i] = std::sqrt(geom.h[k] / geom.g00[k]);
        mass[i] = geom.m * geom.m * std::sqrt(geom.g00[k] * geom.h[k]);
        c[i] = 0.5 * (std::sqrt(geom.g00[k] / geom.h[k]) + std::sqrt(geom.g00[kn] / geom.h[kn]));
    }

    // Symmetric reduction B = W^{-1/2} A W^{-1/2} of A u = omega^2 W u.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(G, G);
    for (int i = 0; i < G; ++i) {
        const int ip = (i + 1) % G;
        const int im = (i + G - 1) % G;
        const double diag = (c[i] + c[im]) / (dx * dx) + mass[i];
        B(i, i) += diag / w[i];
        B(i, ip) += -c[i] / (dx * dx) / std::sqrt(w[i] * w[ip]);
        B(i, im) += -c[im] / (dx * dx) / std::sqrt(w[i] * w[im]);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
    if (solver.info() != Eigen::Success)
        throw CertificationError("build_sl_catalog: eigensolver failed to converge");

    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        const double lambda = solver.eigenvalues()[j];
        if (!(lambda > 0.0))
            throw CertificationError("build_sl_catalog: nonpositive eigenvalue encountered");
        Mode md;
        md.omega = std::sqrt(lambda);
        Eigen::VectorXd u = solver.eigenvectors().col(j);
        for (int i = 0; i < G; ++i) u[i] /= std::sqrt(w[i]);
        // <u,u>_w = sum |u|^2 w dx = 1
        double norm = 0.0;
        for (int i = 0; i < G; ++i) norm += u[i] * u[i] * w[i] * dx;
        u /= std::sqrt(norm);
        // Phase fix: largest-magnitude sample real positive.
        int imax = 0;
        for (int i = 1; i < G; ++i)
            if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
        if (u[imax] < 0.0) u = -u;
        md.samples = u.cast<std::complex<double>>();
        // 4th-order periodic central differences for the energy-density frame
        // derivative (kept below the quadrature error of downstream integrals).
        md.deriv_samples.resize(G);
        for (int i = 0; i < G; ++i) {
            const int ip1 = (i + 1) % G, ip2 = (i + 2) % G;
            const int im1 = (i + G - 1) % G, im2 = (i + G - 2) % G;
            md.deriv_samples[i] =
                (-md.samples[ip2] + 8.0 * md.samples[ip1] - 8.0 * md.samples[im1] +
                 md.samples[im2]) /
                (12.0 * dx);
        }
        modes.push_back(std::move(md));
    }

    ModeCatalog cat(geom, std::move(modes), CatalogBackend::NumericSL);
    const double res = cat.eigen_residual();
    if (res > residual_tol)
        throw CertificationError("build_sl_catalog: eigen-residual invariant violated, worst = " +
                                 std::to_string(res));
    return cat;
}

double symplectic_check(const ModeCatalog& cat) {
    const auto& geom = cat.geometry();
    const int G = geom.grid_size();
    const double dx = geom.dx();
    double worst = 0.0;
    for (int j = 0; j < cat.size(); ++j) {
        const Mode& md = cat.mode(j);
        const double pref = 1.0 / std::sqrt(2.0 * md.omega);
        // phi_j = (2 omega)^{-1/2} e^{-i omega t} u_j at t = 0:
        //   Re phi = pref Re u,   d_t Re phi = pref omega Im u
        //   Im phi = pref Im u,   d_t Im phi = -pref omega Re u
        double sigma = 0.0;
        for (int i = 0; i < G; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double inv_sqrt_g00 = 1.0 / std::sqrt(geom.g00[k]);
            const double re_u = md.samples[i].real();
            const double im_u = md.samples[i].imag();
            const double a = pref * re_u;
            const double adot = pref * md.omega * im_u;
            const double b = pref * im_u;
            const double bdot = -pref * md.omega * re_u;
            sigma += cat.sqrt_h()[i] * inv_sqrt_g00 * (a * bdot - b * adot) * dx;
        }
        worst = std::max(worst, std::abs(2.0 * sigma + 1.0));
    }
    return worst;
}

} // namespace qei
