#pragma once

#include "qei/fock.hpp"
#include "qei/states.hpp"
#include "qei/window.hpp"

namespace qei {

/// Point-split normal-ordered energy density
///   :T:[ell](p,q) = 1/2 (m^2 + e_0 grad (x) e_0 grad + e_1 grad (x) e_1 grad)
///                   :Phi(x)Phi:[ell](p,q),
/// with derivatives taken analytically in mode space. Normal ordering is
/// relative to the catalog ground state, so the result is finite and
/// cutoff-stable at coincident points.
std::complex<double> point_split_T(const StateSpec& spec, const ModeCatalog& cat,
                                   SpacetimePoint p, SpacetimePoint q);

/// rho[ell](t,x) = sqrt(g00(x)) :T:[ell]((t,x),(t,x)); real for states.
double energy_density(const StateSpec& spec, const ModeCatalog& cat, double t, double x);

/// Truncated-Fock realizations for vector functionals ell = <psi|.|phi>.
std::complex<double> point_split_T(const FockTruncation& tr, const ModeCatalog& cat,
                                   const MatrixFunctional& ell, SpacetimePoint p,
                                   SpacetimePoint q);
double energy_density(const FockTruncation& tr, const ModeCatalog& cat,
                      const MatrixFunctional& ell, double t, double x);

/// Smeared energy  \int g(t)^2 rho[ell](t,x) dt  with step-halving
/// certification; .error carries the quadrature certificate.
CertifiedValue smeared_energy(const StateSpec& spec, const ModeCatalog& cat, const BumpWindow& g,
                              double x, double rel_tol = 1e-10);

/// Integrated energy density  \int_Sigma rho[ell](t,.) dmu  by periodic
/// trapezoid (exact for the cylinder's trigonometric integrands at the
/// resolution used). Conserved in t.
double integrated_energy(const StateSpec& spec, const ModeCatalog& cat, double t);

/// Classical point-split energy density of a real solution with mode
/// amplitudes alpha (coherent-state oracle; evaluates the solution and its
/// frame derivatives directly, not through the quantum two-point function).
double classical_energy_density(const ModeCatalog& cat,
                                const std::vector<std::pair<int, std::complex<double>>>& alphas,
                                double t, double x);
/// Classical conserved energy  1/2 sigma(xi^a grad_a u, u)  evaluated through
/// the discrete symplectic form on the t = 0 slice.
double classical_symplectic_energy(const ModeCatalog& cat,
                                   const std::vector<std::pair<int, std::complex<double>>>& alphas);

/// Truncation tail estimate for the state's own mode sums beyond the cutoff
/// (zero for states exciting finitely many catalog modes; thermal estimate
/// for KMS components).
double state_tail_bound(const StateSpec& spec, const ModeCatalog& cat);

/// Relative residual of the dynamics-generator identity
///   ell([H_N, alpha_t(A)]) = (1/i) d/ds ell(alpha_s alpha_t(A))|_{s=0}
/// with the left side exact (H_N = sum omega_j a_j† a_j is the spatial
/// integral of rho over the included modes) and the right side by
/// Richardson-extrapolated central differences.
double generator_identity_residual(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                   const MatrixFunctional& ell, double t);

} // namespace qei
