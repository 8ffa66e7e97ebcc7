#pragma once

#include "qei/fock.hpp"
#include "qei/rng.hpp"

#include <vector>

namespace qei {

/// Cyclic external process: H_t = f(t) C with a bump envelope f supported in
/// [0, T] and a hermitian coupling C, optionally rotating at a mode frequency
/// (H_t = f(t)(a_j e^{i w_j t} + a_j† e^{-i w_j t}) for Coupling::Rotating,
/// which is the resonant drive used for pulse-area tuning). H_t vanishes
/// identically outside [0, T].
struct CyclicProcess {
    double T = 0.0;
    BumpWindow envelope{0.5, 0.5};
    enum class Coupling { Position, Number, Rotating, Displacement };
    Coupling coupling = Coupling::Position;
    int mode = 0;                 ///< included-mode position for Position/Rotating
    Eigen::VectorXcd amplitudes;  ///< Displacement coupling amplitudes

    void validate() const;
    Eigen::MatrixXcd generator(const FockTruncation& tr, double t) const;
    Eigen::MatrixXcd generator_time_derivative(const FockTruncation& tr, double t) const;
    /// Largest ||H_t|| over the support (for the integrator step rule).
    double coupling_norm(const FockTruncation& tr) const;
};

/// delta(A) = i [H, A]: the exact generator of Ad e^{iHt} on the truncation
/// (globally defined in finite dimensions).
Eigen::MatrixXcd delta_of(const FockTruncation& tr, const Eigen::MatrixXcd& A);

/// (1/i) omega(U† delta(U)) = Tr[rho U† H U] - Tr[rho H]: the work extracted
/// by the cyclic process ending at U, nonnegative for passive states.
/// Throws CertificationError if the imaginary residue exceeds 1e-9.
double passivity_functional(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                            const Eigen::MatrixXcd& U);
double passivity_functional(const Eigen::VectorXcd& psi, const FockTruncation& tr,
                            const Eigen::MatrixXcd& U);

/// Gibbs state e^{-beta H}/Z on the truncation. Throws CertificationError if
/// the top-occupancy probability (truncation proxy) exceeds proxy_tol.
Eigen::MatrixXcd kms_state(const FockTruncation& tr, double beta, double proxy_tol = 1e-4);

/// RK4 integration of dU/dt = -i alpha_t(H_t) U, U_0 = 1, with step-halving
/// acceptance and a single polar re-unitarization at acceptance time.
struct EvolveResult {
    Eigen::MatrixXcd U_T;
    double step = 0.0;
    double halving_difference = 0.0;   ///< ||U^(h) - U^(h/2)||_max
    double projection_distance = 0.0;  ///< ||U - polar(U)||_max before projection
    double unitarity_drift = 0.0;      ///< ||U†U - 1||_max before projection
};
EvolveResult evolve_cyclic(const FockTruncation& tr, const CyclicProcess& proc,
                           double tol = 1e-8);

/// Work done on the system: the time integral
///   L = \int_0^T omega(alpha_t^H(dH_t/dt)) dt
/// and the algebraic form (1/i) omega(U_T† delta(U_T)), plus their
/// discrepancy. The pair realizes both sides of the work identity.
struct WorkResult {
    double integral_form = 0.0;
    double algebraic_form = 0.0;
    double discrepancy = 0.0;
    EvolveResult evolution;
};
WorkResult work_done(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                     const CyclicProcess& proc, double tol = 1e-8);

/// Product of exponentials of hermitian generators U = e^{iA_1} ... e^{iA_N}.
struct UnitaryWord {
    std::vector<Eigen::MatrixXcd> generators;
    Eigen::MatrixXcd unitary() const;
    double unitarity_residual() const;
};

/// Random word drawn from the finite-dimensional proxy of U^inf: smeared
/// field (displacement) generators with amplitude <= amp_cap, number
/// operators, and their bump-time smearings.
UnitaryWord random_unitary_word(const FockTruncation& tr, Rng& rng, int max_factors = 3,
                                double amp_cap = 0.7);

/// Derivative-free minimization (cyclic coordinate search) of
/// U(theta) -> passivity functional over a parameterized word family.
/// Families: displacement words (2 params per mode) plus, when
/// include_exchanges is set, two-level exchange generators |p><q| + |q><p|
/// between eigenstates; in finite dimensions every unitary is connected to 1,
/// so these remain inside the proxy of U_0(delta).
struct PassiveSearchResult {
    double c_omega = 0.0;              ///< infimum estimate of the functional
    std::vector<double> trace;         ///< best value after each sweep
    Eigen::MatrixXcd best_unitary;
    Eigen::MatrixXcd transformed_state;
    bool reported_passive = false;
};
PassiveSearchResult passive_search(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                                   int iterations, bool include_exchanges = true,
                                   double tol = 1e-9);

} // namespace qei
