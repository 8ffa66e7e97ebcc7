#include "qei/energy_density.hpp"

#include "qei/errors.hpp"

#include <cmath>

namespace qei {

namespace {

const std::complex<double> kI{0.0, 1.0};

/// Value and frame derivatives of e_j(p) = e^{-i omega_j t} u_j(x).
struct ModeJet {
    std::complex<double> val, e0, e1;
    ModeJet conj() const { return {std::conj(val), std::conj(e0), std::conj(e1)}; }
};

ModeJet mode_jet(const ModeCatalog& cat, int j, SpacetimePoint p) {
    const double w = cat.omega(j);
    const std::complex<double> phase = std::exp(-kI * w * p.t);
    const std::complex<double> u = cat.mode_value(j, p.x);
    ModeJet jet;
    jet.val = phase * u;
    jet.e0 = -kI * w * jet.val / std::sqrt(cat.g00_at(p.x));
    jet.e1 = phase * cat.mode_deriv(j, p.x) / std::sqrt(cat.h_at(p.x));
    return jet;
}

std::complex<double> bilinear(double m, const ModeJet& a, const ModeJet& b) {
    return 0.5 * (m * m * a.val * b.val + a.e0 * b.e0 + a.e1 * b.e1);
}

/// Jet of the one-point function Phi1 carried by the displacements.
ModeJet one_point_jet(const TwoPointData& td, const ModeCatalog& cat, SpacetimePoint p) {
    ModeJet sum{0.0, 0.0, 0.0};
    for (int j = 0; j < td.d.size(); ++j) {
        if (td.d[j] == std::complex<double>(0.0, 0.0)) continue;
        const ModeJet jet = mode_jet(cat, j, p);
        const double pref = 1.0 / std::sqrt(2.0 * cat.omega(j));
        sum.val += pref * 2.0 * (td.d[j] * jet.val).real();
        sum.e0 += pref * 2.0 * (td.d[j] * jet.e0).real();
        sum.e1 += pref * 2.0 * (td.d[j] * jet.e1).real();
    }
    return sum;
}

std::complex<double> point_split_component(const TwoPointData& td, const ModeCatalog& cat,
                                           SpacetimePoint p, SpacetimePoint q) {
    const double m = cat.mass();
    std::complex<double> sum{0.0, 0.0};
    for (int j : td.active_modes()) {
        const ModeJet jp = mode_jet(cat, j, p);
        const ModeJet jq = mode_jet(cat, j, q);
        const double inv2w = 1.0 / (2.0 * cat.omega(j));
        std::complex<double> term{0.0, 0.0};
        if (td.n[j] != 0.0)
            term += td.n[j] * (bilinear(m, jp, jq.conj()) + bilinear(m, jp.conj(), jq));
        if (td.s[j] != std::complex<double>(0.0, 0.0)) {
            const std::complex<double> sterm = td.s[j] * bilinear(m, jp, jq);
            term += sterm + std::conj(td.s[j] * bilinear(m, jq, jp));
        }
        sum += term * inv2w;
    }
    bool displaced = false;
    for (int j = 0; j < td.d.size(); ++j)
        if (td.d[j] != std::complex<double>(0.0, 0.0)) displaced = true;
    if (displaced)
        sum += bilinear(m, one_point_jet(td, cat, p), one_point_jet(td, cat, q));
    return sum;
}

} // namespace

std::complex<double> point_split_T(const StateSpec& spec, const ModeCatalog& cat,
                                   SpacetimePoint p, SpacetimePoint q) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [w, td] : gaussian_components(spec, cat))
        sum += w * point_split_component(td, cat, p, q);
    return sum;
}

double energy_density(const StateSpec& spec, const ModeCatalog& cat, double t, double x) {
    const SpacetimePoint p{t, x};
    return std::sqrt(cat.g00_at(x)) * point_split_T(spec, cat, p, p).real();
}

std::complex<double> point_split_T(const FockTruncation& tr, const ModeCatalog& cat,
                                   const MatrixFunctional& ell, SpacetimePoint p,
                                   SpacetimePoint q) {
    const double m = cat.mass();
    const long D = tr.dim();
    // Field jets as operators: Phi, e_0 grad Phi, e_1 grad Phi at p and q.
    Eigen::MatrixXcd val_p = Eigen::MatrixXcd::Zero(D, D), e0_p = val_p, e1_p = val_p;
    Eigen::MatrixXcd val_q = val_p, e0_q = val_p, e1_q = val_p;
    std::complex<double> vac{0.0, 0.0};
    for (int k = 0; k < tr.mode_count(); ++k) {
        const int j = tr.included_modes()[static_cast<std::size_t>(k)];
        const ModeJet jp = mode_jet(cat, j, p);
        const ModeJet jq = mode_jet(cat, j, q);
        const double pref = 1.0 / std::sqrt(2.0 * cat.omega(j));
        const Eigen::MatrixXd& a = tr.lowering(k);
        val_p += pref * (jp.val * a + std::conj(jp.val) * a.transpose());
        e0_p += pref * (jp.e0 * a + std::conj(jp.e0) * a.transpose());
        e1_p += pref * (jp.e1 * a + std::conj(jp.e1) * a.transpose());
        val_q += pref * (jq.val * a + std::conj(jq.val) * a.transpose());
        e0_q += pref * (jq.e0 * a + std::conj(jq.e0) * a.transpose());
        e1_q += pref * (jq.e1 * a + std::conj(jq.e1) * a.transpose());
        vac += bilinear(m, jp, jq.conj()) / (2.0 * cat.omega(j));
    }
    const std::complex<double> raw =
        0.5 * (m * m * ell(val_p * val_q) + ell(e0_p * e0_q) + ell(e1_p * e1_q));
    return raw - ell.unit() * vac;
}

double energy_density(const FockTruncation& tr, const ModeCatalog& cat,
                      const MatrixFunctional& ell, double t, double x) {
    const SpacetimePoint p{t, x};
    return std::sqrt(cat.g00_at(x)) * point_split_T(tr, cat, ell, p, p).real();
}

CertifiedValue smeared_energy(const StateSpec& spec, const ModeCatalog& cat, const BumpWindow& g,
                              double x, double rel_tol) {
    // Panels sized to the fastest oscillation 2 omega_J over the support.
    const double span = g.support_hi() - g.support_lo();
    const int initial =
        std::max(4, static_cast<int>(std::ceil(2.0 * cat.omega_max() * span / (2.0 * M_PI))));
    return integrate_certified(
        [&](double t) {
            const double gv = g.value(t);
            return gv * gv * energy_density(spec, cat, t, x);
        },
        g.support_lo(), g.support_hi(), rel_tol, 1e-14, initial, 1 << 20);
}

double integrated_energy(const StateSpec& spec, const ModeCatalog& cat, double t) {
    const auto& geom = cat.geometry();
    if (cat.backend() == CatalogBackend::AnalyticCylinder) {
        // Trapezoid on M > 2 J points is exact for the trig-polynomial
        // integrand of degree <= 2 k_max.
        const int M = 2 * cat.size() + 2;
        const double dx = geom.L / M;
        double sum = 0.0;
        for (int i = 0; i < M; ++i) sum += energy_density(spec, cat, t, i * dx) * dx;
        return sum;
    }
    const int G = geom.grid_size();
    double sum = 0.0;
    for (int i = 0; i < G; ++i)
        sum += energy_density(spec, cat, t, geom.grid_point(i)) * cat.sqrt_h()[i] * geom.dx();
    return sum;
}

double classical_energy_density(const ModeCatalog& cat,
                                const std::vector<std::pair<int, std::complex<double>>>& alphas,
                                double t, double x) {
    const ClassicalSolution u = classical_solution(cat, alphas, {t, x});
    const double m = cat.mass();
    return std::sqrt(cat.g00_at(x)) * 0.5 *
           (m * m * u.value * u.value + u.e0_deriv * u.e0_deriv + u.e1_deriv * u.e1_deriv);
}

double classical_symplectic_energy(
    const ModeCatalog& cat, const std::vector<std::pair<int, std::complex<double>>>& alphas) {
    // sigma(xi^a grad_a u, u)/2 on the t = 0 slice, via the discrete form
    // sum sqrt(h) (v e_0 du - u e_0 dv) dx with v = du/dt.
    const auto& geom = cat.geometry();
    const int M = (cat.backend() == CatalogBackend::AnalyticCylinder) ? 2 * cat.size() + 2
                                                                      : geom.grid_size();
    const double dx = geom.L / M;
    double sigma = 0.0;
    for (int i = 0; i < M; ++i) {
        const double x = (cat.backend() == CatalogBackend::AnalyticCylinder)
                             ? i * dx
                             : geom.grid_point(i);
        // Values and t-derivatives of u and of v = du/dt at (0, x).
        double u = 0.0, udot = 0.0, vdot = 0.0;
        for (const auto& [j, a] : alphas) {
            const double w = cat.omega(j);
            const std::complex<double> mode =
                cat.mode_value(j, x) / std::sqrt(2.0 * w);
            u += 2.0 * (a * mode).real();
            udot += 2.0 * (a * (-kI * w) * mode).real();
            vdot += 2.0 * (a * (-kI * w) * (-kI * w) * mode).real();
        }
        const double sqrt_h = std::sqrt(cat.h_at(x));
        const double inv_sqrt_g00 = 1.0 / std::sqrt(cat.g00_at(x));
        sigma += sqrt_h * inv_sqrt_g00 * (udot * udot - u * vdot) * dx;
    }
    return 0.5 * sigma;
}

double state_tail_bound(const StateSpec& spec, const ModeCatalog& cat) {
    switch (spec.kind) {
    case StateSpec::Kind::Kms: return cat.tail_bound(spec.beta);
    case StateSpec::Kind::Mixture: {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.components.size(); ++i)
            sum += spec.weights[i] * state_tail_bound(spec.components[i], cat);
        return sum;
    }
    default: return 0.0; // finitely many excited modes, all inside the cutoff
    }
}

double generator_identity_residual(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                   const MatrixFunctional& ell, double t) {
    const Eigen::MatrixXcd At = tr.heisenberg(A, t);
    // LHS: exact commutator with the diagonal truncated Hamiltonian.
    Eigen::MatrixXcd comm(tr.dim(), tr.dim());
    for (long r = 0; r < tr.dim(); ++r)
        for (long c = 0; c < tr.dim(); ++c)
            comm(r, c) = (tr.energies()[r] - tr.energies()[c]) * At(r, c);
    const std::complex<double> lhs = ell(comm);

    // RHS: Richardson-extrapolated central difference of s -> ell(alpha_s At).
    const double espan = tr.energies().maxCoeff() - tr.energies().minCoeff();
    double step = 0.02 / (1.0 + espan);
    if (step < 1e-8)
        throw CertificationError("generator_identity_residual: finite-difference step underflow");
    auto h = [&](double s) { return ell(tr.heisenberg(At, s)); };
    auto central = [&](double d) { return (h(d) - h(-d)) / (2.0 * d); };
    const std::complex<double> d1 = central(step);
    const std::complex<double> d2 = central(0.5 * step);
    const std::complex<double> rhs = (4.0 * d2 - d1) / 3.0 / kI;

    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

} // namespace qei
