#pragma once

#include "qei/quadrature.hpp"

#include <complex>
#include <vector>

namespace qei {

/// Smooth compactly supported bump  g(t) = A exp(1 - 1/(1-s^2)),  s = (t-c)/w,
/// vanishing identically for |t-c| >= w. The standard window family for time
/// smearing, QWEI averaging and cyclic-process envelopes.
class BumpWindow {
public:
    BumpWindow(double center, double half_width, double amplitude = 1.0);

    double center() const { return center_; }
    double half_width() const { return width_; }
    double amplitude() const { return amplitude_; }
    double support_lo() const { return center_ - width_; }
    double support_hi() const { return center_ + width_; }

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;
    double fourth_derivative(double t) const;

    /// ||g^2||_{L^1} = \int g^2 dt (g real), with certificate.
    CertifiedValue l1_norm_of_square() const;
    /// \int |g''| dt; Fourier tail bound |g^(u)| <= this / u^2.
    double second_derivative_l1() const;
    /// \int |g''''| dt; the sharper tail bound |g^(u)| <= this / u^4 used by
    /// the QWEI cutoff certificates.
    double fourth_derivative_l1() const;

    /// Fourier transform g^(u) = \int g(t) e^{iut} dt (paper sign convention).
    CertifiedComplex fourier(double u) const;
    /// The centered transform \int g0(s) e^{ius} ds (real and even for this
    /// even window); |g^(u)|^2 equals its square.
    CertifiedValue fourier_centered(double u) const;

    /// g_lambda(t) = g(lambda t): support and center shrink by 1/lambda.
    BumpWindow scaled(double lambda) const;

private:
    double center_, width_, amplitude_;
};

/// Tabulated real-valued Fourier transform of a window on a uniform grid with
/// 4-point Lagrange interpolation. Used where a transform is evaluated at
/// thousands of arguments (the microlocal probes); certified direct
/// evaluation remains the path for QWEI bounds.
class FourierTable {
public:
    FourierTable(const BumpWindow& w, double k_max, int samples_per_unit = 24);
    /// Interpolated centered transform; exact zero returned beyond k_max.
    double centered(double k) const;
    double k_max() const { return k_max_; }

private:
    double k_max_, dk_;
    std::vector<double> values_;
};

} // namespace qei
