#include "qei/window.hpp"

#include "qei/errors.hpp"

#include <cmath>

namespace qei {

BumpWindow::BumpWindow(double center, double half_width, double amplitude)
    : center_(center), width_(half_width), amplitude_(amplitude) {
    if (!(half_width > 0.0)) throw ConfigError("BumpWindow: half_width must be > 0");
}

double BumpWindow::value(double t) const {
    const double s = (t - center_) / width_;
    if (std::abs(s) >= 1.0) return 0.0;
    return amplitude_ * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double BumpWindow::derivative(double t) const {
    const double s = (t - center_) / width_;
    if (std::abs(s) >= 1.0) return 0.0;
    const double om = 1.0 - s * s;
    return value(t) * (-2.0 * s / (om * om)) / width_;
}

namespace {

/// Derivatives of q(s) = 1 - (1-s^2)^{-1} (the bump's log-envelope) via the
/// derivatives of r = (1-s^2)^{-1}.
struct LogJet {
    double q1, q2, q3, q4;
};

LogJet bump_log_jet(double s, double w) {
    const double om = 1.0 - s * s;
    const double r = 1.0 / om;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
    const double s2 = s * s;
    LogJet jet;
    jet.q1 = -(2.0 * s * r2) / w;
    jet.q2 = -(2.0 * r2 + 8.0 * s2 * r3) / (w * w);
    jet.q3 = -(24.0 * s * r3 + 48.0 * s2 * s * r4) / (w * w * w);
    jet.q4 = -(24.0 * r3 + 288.0 * s2 * r4 + 384.0 * s2 * s2 * r5) / (w * w * w * w);
    return jet;
}

} // namespace

double BumpWindow::second_derivative(double t) const {
    const double s = (t - center_) / width_;
    if (std::abs(s) >= 1.0) return 0.0;
    const LogJet q = bump_log_jet(s, width_);
    return value(t) * (q.q1 * q.q1 + q.q2);
}

double BumpWindow::fourth_derivative(double t) const {
    const double s = (t - center_) / width_;
    if (std::abs(s) >= 1.0) return 0.0;
    const LogJet q = bump_log_jet(s, width_);
    // Faa di Bruno for (e^q)'''' in terms of q', .., q''''.
    const double q1 = q.q1, q2 = q.q2, q3 = q.q3, q4 = q.q4;
    return value(t) *
           (q1 * q1 * q1 * q1 + 6.0 * q1 * q1 * q2 + 3.0 * q2 * q2 + 4.0 * q1 * q3 + q4);
}

CertifiedValue BumpWindow::l1_norm_of_square() const {
    return integrate_certified([this](double t) { return value(t) * value(t); }, support_lo(),
                               support_hi(), 1e-12, 1e-300, 8);
}

double BumpWindow::second_derivative_l1() const {
    return integrate_certified([this](double t) { return std::abs(second_derivative(t)); },
                               support_lo(), support_hi(), 1e-8, 1e-300, 16)
        .value;
}

double BumpWindow::fourth_derivative_l1() const {
    return integrate_certified([this](double t) { return std::abs(fourth_derivative(t)); },
                               support_lo(), support_hi(), 1e-8, 1e-300, 32)
        .value;
}

CertifiedValue BumpWindow::fourier_centered(double u) const {
    // Roundoff floor scaled to the window mass: values below it cannot be
    // certified relatively and are accepted with the floor as error.
    const double floor = 1e-16 * amplitude_ * width_;
    auto r = oscillatory_transform([this](double s) { return value(center_ + s); }, -width_,
                                   width_, u, 1e-12, floor);
    return {r.value.real(), r.error};
}

CertifiedComplex BumpWindow::fourier(double u) const {
    auto c = fourier_centered(u);
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, u * center_));
    return {phase * c.value, c.error};
}

BumpWindow BumpWindow::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw ConfigError("BumpWindow::scaled: lambda must be > 0");
    return BumpWindow(center_ / lambda, width_ / lambda, amplitude_);
}

FourierTable::FourierTable(const BumpWindow& w, double k_max, int samples_per_unit)
    : k_max_(k_max) {
    const int n = std::max(64, static_cast<int>(std::ceil(k_max * samples_per_unit))) + 4;
    dk_ = k_max / (n - 4);
    values_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        values_[static_cast<std::size_t>(i)] = w.fourier_centered(i * dk_).value;
}

double FourierTable::centered(double k) const {
    const double a = std::abs(k); // even transform
    if (a >= k_max_) return 0.0;
    const double x = a / dk_;
    long i = static_cast<long>(x);
    if (i < 1) i = 1;
    if (i > static_cast<long>(values_.size()) - 3) i = static_cast<long>(values_.size()) - 3;
    const double f = x - static_cast<double>(i);
    // 4-point Lagrange on nodes i-1..i+2
    const double ym1 = values_[static_cast<std::size_t>(i - 1)];
    const double y0 = values_[static_cast<std::size_t>(i)];
    const double y1 = values_[static_cast<std::size_t>(i + 1)];
    const double y2 = values_[static_cast<std::size_t>(i + 2)];
    const double c_m1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double c_0 = (f * f - 1.0) * (f - 2.0) / 2.0;
    const double c_1 = -f * (f + 1.0) * (f - 2.0) / 2.0;
    const double c_2 = f * (f * f - 1.0) / 6.0;
    return ym1 * c_m1 + y0 * c_0 + y1 * c_1 + y2 * c_2;
}

} // namespace qei
