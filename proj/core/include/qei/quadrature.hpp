#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qei {

/// A number together with the numerical certificate attached to it.
/// Campaign reports never quote bare values.
struct CertifiedValue {
    double value = 0.0;
    double error = 0.0; ///< quadrature / step-halving disagreement estimate
};

struct CertifiedComplex {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Cached per order.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int order);

/// Fixed composite Gauss-Legendre quadrature of f over [a, b].
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order = 16);
std::complex<double> integrate_panels_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, int panels, int order = 16);

/// Panel-doubling quadrature: doubles the panel count until two successive
/// results agree to rel_tol (relative) or abs_tol (absolute). Throws
/// CertificationError if the budget is exhausted before agreement.
CertifiedValue integrate_certified(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol = 1e-10, double abs_tol = 1e-14,
                                   int initial_panels = 4, int max_panels = 1 << 16);
CertifiedComplex integrate_certified_c(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double rel_tol = 1e-10,
                                       double abs_tol = 1e-14, int initial_panels = 4,
                                       int max_panels = 1 << 16);

/// Certified oscillatory transform  \int_a^b f(t) e^{i k t} dt.
/// The initial panel count is scaled with |k|(b-a) so each panel resolves
/// the oscillation; the node-doubling certificate still applies on top.
/// abs_tol is the roundoff floor: transforms decaying below it are accepted
/// with the floor as their certificate (a pure relative test cannot
/// terminate once the true value sinks under summation noise).
CertifiedComplex oscillatory_transform(const std::function<double(double)>& f, double a, double b,
                                       double k, double rel_tol = 1e-12,
                                       double abs_tol = 1e-16);

/// In-place radix-2 complex FFT (forward: phase e^{+2pi i jk/N}, matching the
/// f^(k) = \int f e^{ikt} dt sign convention used throughout). Used by the
/// tapered-FFT spectral oracle and the smearing cross-checks.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

} // namespace qei
