#pragma once

#include "qei/mode_catalog.hpp"

#include <complex>
#include <string>
#include <vector>

namespace qei {

struct SpacetimePoint {
    double t = 0.0;
    double x = 0.0;
};

/// Declarative state description over a mode catalog. Mode indices are
/// 0-based positions in the catalog ordering (on the cylinder: j = 0 is the
/// n = 0 mode, j = 1 is n = +1, j = 2 is n = -1, ...).
struct StateSpec {
    enum class Kind { Ground, Kms, Coherent, Squeezed, SingleParticle, SuperposedPair, Mixture };

    Kind kind = Kind::Ground;
    double beta = 0.0;                                          // Kms
    std::vector<std::pair<int, std::complex<double>>> alphas;   // Coherent: (mode, alpha)
    std::vector<std::tuple<int, double, double>> squeezes;      // Squeezed: (mode, r, phi)
    int mode = 0;                                               // SingleParticle / SuperposedPair
    std::complex<double> epsilon{0.0, 0.0};                     // SuperposedPair
    std::vector<double> weights;                                // Mixture
    std::vector<StateSpec> components;                          // Mixture

    static StateSpec ground();
    static StateSpec kms(double beta);
    static StateSpec coherent(std::vector<std::pair<int, std::complex<double>>> alphas);
    static StateSpec squeezed(std::vector<std::tuple<int, double, double>> squeezes);
    static StateSpec particle(int mode);
    static StateSpec pair(int mode, std::complex<double> epsilon);
    static StateSpec mixture(std::vector<double> weights, std::vector<StateSpec> components);

    /// Human-readable id used in campaign reports.
    std::string id() const;
    /// Largest mode index referenced (-1 if none). Must stay < J.
    int max_mode() const;
    void validate(int J) const;
};

/// Mode-space one- and two-point data of a state: per mode the centered
/// occupation n_j = <b† b>, pair amplitude s_j = <b b> (b = a - <a>), and
/// displacement d_j = <a>. KMS: n_j = 1/(e^{beta omega_j}-1), s = d = 0.
/// Ground: all zero. Everything quadratic in the field is a function of
/// these, so non-Gaussian states (SingleParticle, SuperposedPair) are carried
/// by their exact second moments.
struct TwoPointData {
    Eigen::VectorXd n;
    Eigen::VectorXcd s;
    Eigen::VectorXcd d;
    bool is_reference = false;

    /// Smallest eigenvalue offset of the per-mode covariance blocks
    /// [[n, conj(s)], [s, n+1]]; positivity requires >= 0 (up to roundoff).
    double covariance_min_eigenvalue() const;
    /// Indices with any nonzero moment (mode sums skip the rest).
    std::vector<int> active_modes() const;
};

/// Second moments of a non-mixture spec. Throws on Mixture (use
/// gaussian_components, which realizes mixtures by evaluation-level
/// linearity, not by mixing moments).
TwoPointData mode_moments(const StateSpec& spec, const ModeCatalog& cat);

/// Flattens (nested) mixtures into weighted moment components.
std::vector<std::pair<double, TwoPointData>> gaussian_components(const StateSpec& spec,
                                                                 const ModeCatalog& cat);

/// Two-point function W(p,q) = <Phi(p) Phi(q)> via the mode sum
///   sum_j [ (n_j+1) e_j(p) conj(e_j(q)) + n_j conj(e_j(p)) e_j(q)
///           + s_j e_j(p) e_j(q) + conj(s_j e_j(p) e_j(q)) ] / (2 omega_j)
/// + Phi1(p) Phi1(q), with e_j(p) = e^{-i omega_j t} u_j(x).
std::complex<double> two_point(const StateSpec& spec, const ModeCatalog& cat, SpacetimePoint p,
                               SpacetimePoint q);

/// Normal-ordered two-point function relative to the catalog ground state:
/// the vacuum piece cancels mode-by-mode, so it is finite and cutoff-stable
/// at coincident points.
std::complex<double> normal_ordered_two_point(const StateSpec& spec, const ModeCatalog& cat,
                                              SpacetimePoint p, SpacetimePoint q);

/// One-point function Phi1(p) (the classical solution carried by the
/// displacements).
std::complex<double> one_point(const TwoPointData& data, const ModeCatalog& cat, SpacetimePoint p);

/// Classical real solution with mode amplitudes alpha: value and frame
/// derivatives (e_0 = g00^{-1/2} d_t, e_1 = h^{-1/2} d_x). Independent
/// evaluation path used by the coherent-state energy identities.
struct ClassicalSolution {
    double value = 0.0;
    double e0_deriv = 0.0;
    double e1_deriv = 0.0;
};
ClassicalSolution classical_solution(const ModeCatalog& cat,
                                     const std::vector<std::pair<int, std::complex<double>>>& alphas,
                                     SpacetimePoint p);

} // namespace qei
