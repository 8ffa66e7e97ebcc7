#pragma once

#include "qei/energy_density.hpp"
#include "qei/rng.hpp"
#include "qei/states.hpp"
#include "qei/window.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qei {

/// Stationary reference state for the pulled-back point-split energy density.
/// Ground gives atoms on [omega_1, inf); KMS adds negative-frequency atoms
/// at -omega_j with thermal weights, exercising the Gamma_Sigma > 0 regime.
struct ReferenceSpec {
    enum class Kind { Ground, Kms };
    Kind kind = Kind::Ground;
    double beta = 0.0;
    static ReferenceSpec ground() { return {}; }
    static ReferenceSpec kms(double beta) { return {Kind::Kms, beta}; }
    std::string id() const;
};

struct SpectralAtom {
    double zeta = 0.0;   ///< frequency
    double weight = 0.0; ///< nonnegative mass
};

/// Atomic positive measure: the Fourier transform of the pulled-back
/// point-split energy density. Exact (closed-form atoms) on compact Sigma;
/// the FFT provenance marks the tapered-FFT cross-validation estimate.
struct SpectralMeasure {
    enum class Provenance { Analytic, FftEstimated };
    std::vector<SpectralAtom> atoms; ///< ascending zeta, merged degeneracies
    Provenance provenance = Provenance::Analytic;

    double support_infimum() const;
    /// Total mass of (-inf, u] (closed interval).
    double mass_up_to(double u) const;
};

/// Atoms of [Gamma_x^* T_0]^: for the given reference: zeta = +-omega_j with
/// weights 2 pi (n_j + 1) W_j(x) and 2 pi n_j W_j(x), where
/// W_j(x) = [m^2 |u_j|^2 + omega_j^2 |u_j|^2/g00 + |u_j'|^2/h] / (4 omega_j).
SpectralMeasure pullback_energy_spectrum(const ModeCatalog& cat, double x,
                                         const ReferenceSpec& ref = ReferenceSpec::ground());

/// Spatially integrated atoms: weights \int W_j(x) dmu(x). Q_of applied to
/// this measure is the integrated bound QQ(u).
SpectralMeasure integrated_pullback_spectrum(const ModeCatalog& cat,
                                             const ReferenceSpec& ref = ReferenceSpec::ground());

/// Tapered-FFT estimate of the same measure: samples the pulled-back
/// correlation function, applies a Gaussian taper of width tau and returns
/// the binned transform as an FftEstimated measure. Cross-validation oracle
/// for the analytic atoms.
SpectralMeasure pullback_energy_spectrum_fft(const ModeCatalog& cat, double x,
                                             const ReferenceSpec& ref = ReferenceSpec::ground(),
                                             double tau = 40.0);

/// Q(u, x) = (1/2 pi^2) sum_{zeta_p < u} w_p. The strict inequality (open
/// interval) makes Q left-continuous in u.
double Q_of(const SpectralMeasure& spec, double u);

/// Certified window tail integrals T(zeta) = \int_{u > zeta} |g^(u)|^2 du,
/// computed in one downward sweep over the sorted thresholds. tail_bound is
/// the rigorous remainder bound from |g^(u)| <= ||g''||_1 / u^2.
struct TailCertificate {
    double value = 0.0;
    double quad_error = 0.0;
    double tail_bound = 0.0;
};
std::vector<TailCertificate> window_tail_integrals(const BumpWindow& g,
                                                   std::vector<double> thresholds);

/// q(g; x) = \int du |g^(u)|^2 Q(u, x), exact over the atomic measure up to
/// the window-transform quadrature plus the mode-cutoff tail.
struct QBoundResult {
    double value = 0.0;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    double tol() const { return quad_error + tail_bound; }
};
QBoundResult q_bound(const SpectralMeasure& spec, const BumpWindow& g,
                     std::optional<double> cutoff_omega = std::nullopt);

/// QQ(u) = \int_Sigma Q(u, .) dmu via the integrated measure.
double integrated_Q(const ModeCatalog& cat, double u,
                    const ReferenceSpec& ref = ReferenceSpec::ground());

/// Limiting-QWEI trace: values of \int dmu q(g_lambda; x) / ||g_lambda^2||
/// along a decreasing lambda sequence, together with the analytic bound
/// QQ(0+). Quiescence of the gapped ground reference shows as a trace
/// vanishing once lambda pushes the window mass below the gap.
struct GammaSigmaTrace {
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<double> tols;
    double final_value = 0.0;
    double q_zero_plus = 0.0; ///< QQ(0+), the paper's bound for Gamma_Sigma
};
GammaSigmaTrace gamma_sigma_estimate(const ModeCatalog& cat, const BumpWindow& g,
                                     const std::vector<double>& lambdas,
                                     const ReferenceSpec& ref = ReferenceSpec::ground());
std::vector<double> default_lambda_sequence(); ///< 2^{-k}, k = 0..10

/// One static-QWEI margin:  margin = \int g^2 (rho_phi - rho_ref) dt + q(g;x),
/// which must be >= -tol_num. With the ground reference the subtracted term
/// vanishes identically.
struct QweiMargin {
    std::string state_id;
    double lhs = 0.0;     ///< smeared normal-ordered energy
    double q = 0.0;       ///< q(g; x)
    double margin = 0.0;  ///< lhs + q
    double tol_num = 0.0; ///< certified numerical tolerance (never a free knob)
    bool pass = false;
};
QweiMargin verify_static_qwei(const StateSpec& state, const ModeCatalog& cat, const BumpWindow& g,
                              double x);

/// Positivity / growth / continuity checks on a spectral measure
/// (Bochner-Schwartz package): atom nonnegativity, positive-type samples
/// through the atomic representation, cumulative-mass polynomial growth fit,
/// left-continuity at atoms.
struct BochnerReport {
    bool atoms_nonnegative = false;
    int positive_type_total = 0;
    int positive_type_nonnegative = 0;
    double min_positive_type_sample = 0.0;
    double growth_fit_exponent = 0.0;
    bool growth_fit_valid = false;
    bool left_continuity_ok = false;
    bool monotone_ok = false;
};
BochnerReport bochner_checks(const SpectralMeasure& spec, Rng& rng, int samples = 50);

} // namespace qei
