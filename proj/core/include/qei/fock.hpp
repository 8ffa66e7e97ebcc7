#pragma once

#include "qei/states.hpp"
#include "qei/window.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qei {

/// Finite-dimensional Fock space over a subset of catalog modes with a hard
/// occupancy cap: the desk-scale stand-in for the GNS space. Basis states are
/// occupation tuples (n_1..n_N), n_i <= n_max, flattened in little-endian
/// order (first included mode varies fastest). The ladder algebra is exact on
/// the subspace with all occupations <= n_max - 1.
class FockTruncation {
public:
    /// Truncation over the first N catalog modes.
    FockTruncation(const ModeCatalog& cat, int N, int n_max, long dim_cap = 4096);
    /// Truncation over an explicit list of catalog mode indices.
    FockTruncation(const ModeCatalog& cat, std::vector<int> modes, int n_max,
                   long dim_cap = 4096);

    int mode_count() const { return static_cast<int>(modes_.size()); }
    int occupancy_cap() const { return n_max_; }
    long dim() const { return dim_; }
    const std::vector<int>& included_modes() const { return modes_; }
    /// Catalog frequency of included mode position k.
    double omega(int k) const { return omegas_[static_cast<std::size_t>(k)]; }

    const Eigen::MatrixXd& lowering(int k) const { return a_[static_cast<std::size_t>(k)]; }
    Eigen::MatrixXd raising(int k) const { return a_[static_cast<std::size_t>(k)].transpose(); }
    /// Diagonal of H = sum_j omega_j a_j† a_j.
    const Eigen::VectorXd& energies() const { return energies_; }
    Eigen::MatrixXcd hamiltonian() const;

    std::vector<int> occupations_of(long index) const;
    long index_of(const std::vector<int>& occ) const;

    Eigen::VectorXcd vacuum() const;
    Eigen::VectorXcd number_state(const std::vector<int>& occ) const;
    /// Product coherent vector with amplitude alpha_k on included mode k
    /// (normalized before truncation; the lost tail is the truncation proxy).
    Eigen::VectorXcd coherent_vector(const Eigen::VectorXcd& alphas) const;

    /// Heisenberg evolution  e^{iHt} A e^{-iHt}  (elementwise phases; H is
    /// diagonal in the Fock basis).
    Eigen::MatrixXcd heisenberg(const Eigen::MatrixXcd& A, double t) const;

    /// Norm of the component at the top occupancy level (any included mode at
    /// n_max): the truncation-error proxy attached to every Fock expectation.
    double truncation_proxy(const Eigen::VectorXcd& psi) const;
    double truncation_proxy(const Eigen::MatrixXcd& rho) const;

private:
    std::vector<int> modes_;
    std::vector<double> omegas_;
    int n_max_;
    long dim_;
    std::vector<Eigen::MatrixXd> a_;
    Eigen::VectorXd energies_;
    void build(const ModeCatalog& cat, long dim_cap);
};

/// Linear functional ell(B) = <left | B | right> on a truncation; the
/// finite-dimensional realization of the paper-style vector functionals.
/// Hermitian (state-like) iff left == right.
struct MatrixFunctional {
    Eigen::VectorXcd left;
    Eigen::VectorXcd right;

    std::complex<double> operator()(const Eigen::MatrixXcd& B) const {
        return left.dot(B * right); // Eigen dot conjugates the left argument
    }
    std::complex<double> unit() const { return left.dot(right); }
};

/// exp(i A) for hermitian A via spectral decomposition (unitary to roundoff).
Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& hermitian);

/// Field operator Phi(t,x) = sum_k (2 w_k)^{-1/2} (a_k e^{-i w_k t} u_k(x) + h.c.)
/// over the included modes.
Eigen::MatrixXcd field_operator(const FockTruncation& tr, const ModeCatalog& cat, double t,
                                double x);
/// d/dt of the field operator (for CCR checks).
Eigen::MatrixXcd field_velocity_operator(const FockTruncation& tr, const ModeCatalog& cat,
                                         double t, double x);

/// Hermitian displacement generator  G(z) = sum_k (z_k a_k† + conj(z_k) a_k);
/// z are the mode amplitudes of a real Klein-Gordon solution.
Eigen::MatrixXcd displacement_generator(const FockTruncation& tr, const Eigen::VectorXcd& z);

/// Weyl operator W(z) = exp(i G(z)). Satisfies the Weyl relations
/// W(z) W(w) = e^{-i sigma(z,w)/2} W(z+w) with sigma(z,w) = 2 Im sum conj(z_k) w_k
/// up to truncation leakage.
Eigen::MatrixXcd weyl_operator(const FockTruncation& tr, const Eigen::VectorXcd& z);
double symplectic_form(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

/// Time smearing  alpha_f A = \int f(t) e^{iHt} A e^{-iHt} dt  by certified
/// Gauss-Legendre quadrature over the window support.
Eigen::MatrixXcd smear_operator(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                const BumpWindow& f, double rel_tol = 1e-10);
/// Closed form for diagonal H: (alpha_f A)_{kl} = A_{kl} f^(E_k - E_l).
/// Used as the fast path for campaign word generation; equality with the
/// quadrature path is enforced by tests.
Eigen::MatrixXcd smear_operator_spectral(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                         const BumpWindow& f);

/// <psi| Phi(p) Phi(q) |phi> on the truncation (matrix oracle for mode-space
/// two-point functions).
std::complex<double> fock_two_point(const FockTruncation& tr, const ModeCatalog& cat,
                                    const MatrixFunctional& ell, SpacetimePoint p,
                                    SpacetimePoint q);

/// Normal-ordered variant: subtracts ell(1) times the ground two-point
/// function restricted to the included modes (the excluded modes' vacuum
/// contribution cancels exactly).
std::complex<double> fock_normal_ordered_two_point(const FockTruncation& tr,
                                                   const ModeCatalog& cat,
                                                   const MatrixFunctional& ell, SpacetimePoint p,
                                                   SpacetimePoint q);

} // namespace qei
