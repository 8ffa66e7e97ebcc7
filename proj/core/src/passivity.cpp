#include "qei/passivity.hpp"

#include "qei/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qei {

namespace {
const std::complex<double> kI{0.0, 1.0};

double max_abs(const Eigen::MatrixXcd& A) { return A.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace

void CyclicProcess::validate() const {
    if (!(T > 0.0)) throw ConfigError("CyclicProcess: T must be > 0");
    if (envelope.support_lo() < 0.0 || envelope.support_hi() > T)
        throw ConfigError("CyclicProcess: envelope support must lie inside [0, T]");
}

Eigen::MatrixXcd CyclicProcess::generator(const FockTruncation& tr, double t) const {
    const double f = envelope.value(t);
    const long D = tr.dim();
    if (f == 0.0) return Eigen::MatrixXcd::Zero(D, D);
    switch (coupling) {
    case Coupling::Position:
        return f * (tr.lowering(mode) + tr.raising(mode)).cast<std::complex<double>>();
    case Coupling::Number:
        return f * (tr.raising(mode) * tr.lowering(mode)).cast<std::complex<double>>();
    case Coupling::Rotating: {
        const double w = tr.omega(mode);
        const std::complex<double> ph = std::exp(kI * w * t);
        return f * (ph * tr.lowering(mode).cast<std::complex<double>>() +
                    std::conj(ph) * tr.raising(mode).cast<std::complex<double>>());
    }
    case Coupling::Displacement: return f * displacement_generator(tr, amplitudes);
    }
    return Eigen::MatrixXcd::Zero(D, D);
}

Eigen::MatrixXcd CyclicProcess::generator_time_derivative(const FockTruncation& tr,
                                                          double t) const {
    const double df = envelope.derivative(t);
    const long D = tr.dim();
    switch (coupling) {
    case Coupling::Position:
        return df * (tr.lowering(mode) + tr.raising(mode)).cast<std::complex<double>>();
    case Coupling::Number:
        return df * (tr.raising(mode) * tr.lowering(mode)).cast<std::complex<double>>();
    case Coupling::Rotating: {
        const double f = envelope.value(t);
        const double w = tr.omega(mode);
        const std::complex<double> ph = std::exp(kI * w * t);
        const Eigen::MatrixXcd a = tr.lowering(mode).cast<std::complex<double>>();
        const Eigen::MatrixXcd ad = tr.raising(mode).cast<std::complex<double>>();
        return df * (ph * a + std::conj(ph) * ad) +
               f * (kI * w * ph * a - kI * w * std::conj(ph) * ad);
    }
    case Coupling::Displacement: return df * displacement_generator(tr, amplitudes);
    }
    return Eigen::MatrixXcd::Zero(D, D);
}

double CyclicProcess::coupling_norm(const FockTruncation& tr) const {
    // Hermitian coupling at peak envelope; spectral norm via eigenvalues.
    const double tpk = envelope.center();
    Eigen::MatrixXcd C = generator(tr, tpk);
    if (max_abs(C) == 0.0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

Eigen::MatrixXcd delta_of(const FockTruncation& tr, const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd out(tr.dim(), tr.dim());
    for (long r = 0; r < tr.dim(); ++r)
        for (long c = 0; c < tr.dim(); ++c)
            out(r, c) = kI * (tr.energies()[r] - tr.energies()[c]) * A(r, c);
    return out;
}

namespace {

double functional_impl(const std::complex<double>& raw) {
    if (std::abs(raw.imag()) > 1e-9 * (1.0 + std::abs(raw.real())))
        throw CertificationError("passivity_functional: non-real value (bug signal), imag = " +
                                 std::to_string(raw.imag()));
    return raw.real();
}

} // namespace

double passivity_functional(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                            const Eigen::MatrixXcd& U) {
    const Eigen::VectorXd& E = tr.energies();
    const Eigen::MatrixXcd UHU = U.adjoint() * E.cast<std::complex<double>>().asDiagonal() * U;
    std::complex<double> raw = (rho * UHU).trace();
    for (long i = 0; i < tr.dim(); ++i) raw -= rho(i, i) * E[i];
    return functional_impl(raw);
}

double passivity_functional(const Eigen::VectorXcd& psi, const FockTruncation& tr,
                            const Eigen::MatrixXcd& U) {
    const Eigen::VectorXd& E = tr.energies();
    const Eigen::VectorXcd Upsi = U * psi;
    std::complex<double> raw{0.0, 0.0};
    for (long i = 0; i < tr.dim(); ++i)
        raw += E[i] * (std::norm(Upsi[i]) - std::norm(psi[i]));
    return functional_impl(raw);
}

Eigen::MatrixXcd kms_state(const FockTruncation& tr, double beta, double proxy_tol) {
    if (!(beta > 0.0)) throw ConfigError("kms_state: beta must be > 0");
    Eigen::VectorXd boltz(tr.dim());
    for (long i = 0; i < tr.dim(); ++i) boltz[i] = std::exp(-beta * tr.energies()[i]);
    boltz /= boltz.sum();
    Eigen::MatrixXcd rho = boltz.cast<std::complex<double>>().asDiagonal();
    const double proxy = tr.truncation_proxy(rho);
    if (proxy > proxy_tol) {
        std::ostringstream os;
        os << "kms_state: truncation proxy " << proxy << " exceeds " << proxy_tol
           << " (beta too small for this cap)";
        throw CertificationError(os.str());
    }
    return rho;
}

namespace {

/// One RK4 pass over [0, T] for the pair (U, L). The work accumulator L uses
/// rho and the analytic dH/dt; pass rho = nullptr to skip it.
struct Rk4Out {
    Eigen::MatrixXcd U;
    double L = 0.0;
};

Rk4Out rk4_pass(const FockTruncation& tr, const CyclicProcess& proc,
                const Eigen::MatrixXcd* rho, int steps) {
    const long D = tr.dim();
    const double h = proc.T / steps;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(D, D);
    double L = 0.0;
    auto rhsU = [&](double t, const Eigen::MatrixXcd& Ucur) -> Eigen::MatrixXcd {
        return -kI * tr.heisenberg(proc.generator(tr, t), t) * Ucur;
    };
    auto rhsL = [&](double t, const Eigen::MatrixXcd& Ucur) -> double {
        const Eigen::MatrixXcd dH = tr.heisenberg(proc.generator_time_derivative(tr, t), t);
        return ((*rho) * (Ucur.adjoint() * dH * Ucur)).trace().real();
    };
    for (int s = 0; s < steps; ++s) {
        const double t = s * h;
        const Eigen::MatrixXcd k1 = rhsU(t, U);
        const Eigen::MatrixXcd k2 = rhsU(t + 0.5 * h, U + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = rhsU(t + 0.5 * h, U + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = rhsU(t + h, U + h * k3);
        if (rho) {
            const double l1 = rhsL(t, U);
            const double l2 = rhsL(t + 0.5 * h, U + 0.5 * h * k1);
            const double l3 = rhsL(t + 0.5 * h, U + 0.5 * h * k2);
            const double l4 = rhsL(t + h, U + h * k3);
            L += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        }
        U += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return {std::move(U), L};
}

struct EvolveInternal {
    EvolveResult res;
    double L = 0.0;
};

EvolveInternal evolve_impl(const FockTruncation& tr, const CyclicProcess& proc,
                           const Eigen::MatrixXcd* rho, double tol) {
    proc.validate();
    const double hnorm = std::max({1.0, proc.coupling_norm(tr),
                                   tr.energies().maxCoeff() - tr.energies().minCoeff()});
    int steps = std::max(8, static_cast<int>(std::ceil(proc.T * hnorm / 0.05)));
    Rk4Out coarse = rk4_pass(tr, proc, rho, steps);
    for (int iter = 0;; ++iter) {
        if (iter >= 8)
            throw CertificationError("evolve_cyclic: step-halving failed to reach tolerance");
        Rk4Out fine = rk4_pass(tr, proc, rho, steps * 2);
        const double diff = max_abs(coarse.U - fine.U);
        if (diff <= tol) {
            EvolveInternal out;
            out.res.step = proc.T / (2.0 * steps);
            out.res.halving_difference = diff;
            const long D = tr.dim();
            out.res.unitarity_drift = max_abs(fine.U.adjoint() * fine.U -
                                              Eigen::MatrixXcd::Identity(D, D));
            Eigen::MatrixXcd proj = polar_unitary(fine.U);
            out.res.projection_distance = max_abs(fine.U - proj);
            if (out.res.projection_distance > 1e-6)
                throw CertificationError("evolve_cyclic: polar projection distance > 1e-6");
            out.res.U_T = std::move(proj);
            out.L = fine.L;
            return out;
        }
        coarse = std::move(fine);
        steps *= 2;
    }
}

} // namespace

EvolveResult evolve_cyclic(const FockTruncation& tr, const CyclicProcess& proc, double tol) {
    return evolve_impl(tr, proc, nullptr, tol).res;
}

WorkResult work_done(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                     const CyclicProcess& proc, double tol) {
    EvolveInternal ev = evolve_impl(tr, proc, &rho, tol);
    WorkResult out;
    out.evolution = ev.res;
    out.integral_form = ev.L;
    // (1/i) omega(U_T† delta(U_T)) collapses to the energy difference.
    out.algebraic_form = passivity_functional(rho, tr, ev.res.U_T);
    out.discrepancy = std::abs(out.integral_form - out.algebraic_form);
    if (out.discrepancy > 1e-6 * (1.0 + std::abs(out.algebraic_form)) * 10.0) {
        std::ostringstream os;
        os << "work_done: integral/algebraic discrepancy " << out.discrepancy
           << " (step " << ev.res.step << ", halving " << ev.res.halving_difference << ")";
        throw CertificationError(os.str());
    }
    return out;
}

Eigen::MatrixXcd UnitaryWord::unitary() const {
    if (generators.empty()) throw ConfigError("UnitaryWord: empty factor list");
    Eigen::MatrixXcd U = unitary_exp(generators.front());
    for (std::size_t k = 1; k < generators.size(); ++k) U *= unitary_exp(generators[k]);
    return U;
}

double UnitaryWord::unitarity_residual() const {
    const Eigen::MatrixXcd U = unitary();
    return max_abs(U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols()));
}

UnitaryWord random_unitary_word(const FockTruncation& tr, Rng& rng, int max_factors,
                                double amp_cap) {
    UnitaryWord word;
    const int n = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_factors)));
    for (int k = 0; k < n; ++k) {
        const int kind = static_cast<int>(rng.uniform_index(3));
        if (kind == 0) {
            Eigen::VectorXcd z(tr.mode_count());
            for (int j = 0; j < tr.mode_count(); ++j) z[j] = rng.complex_in_disk(amp_cap);
            word.generators.push_back(displacement_generator(tr, z));
        } else if (kind == 1) {
            Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
            for (int j = 0; j < tr.mode_count(); ++j)
                g += rng.uniform() *
                     (tr.raising(j) * tr.lowering(j)).cast<std::complex<double>>();
            word.generators.push_back(std::move(g));
        } else {
            Eigen::VectorXcd z(tr.mode_count());
            for (int j = 0; j < tr.mode_count(); ++j) z[j] = rng.complex_in_disk(amp_cap);
            const BumpWindow f(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0),
                               rng.uniform(0.2, 1.0));
            Eigen::MatrixXcd g = smear_operator_spectral(tr, displacement_generator(tr, z), f);
            g = 0.5 * (g + g.adjoint().eval()); // kill roundoff asymmetry
            word.generators.push_back(std::move(g));
        }
    }
    return word;
}

PassiveSearchResult passive_search(const Eigen::MatrixXcd& rho, const FockTruncation& tr,
                                   int iterations, bool include_exchanges, double tol) {
    const long D = tr.dim();
    // Parameter vector: (Re z_k, Im z_k) per included mode, then exchange
    // angles for level pairs (p, 0), p = 1..min(D-1, 6), in energy order.
    std::vector<long> exchange_levels;
    if (include_exchanges) {
        std::vector<long> order(static_cast<std::size_t>(D));
        for (long i = 0; i < D; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](long a, long b) { return tr.energies()[a] < tr.energies()[b]; });
        for (long p = 1; p < std::min<long>(D, 7); ++p)
            exchange_levels.push_back(order[static_cast<std::size_t>(p)]);
    }
    const std::size_t nparam = 2 * static_cast<std::size_t>(tr.mode_count()) +
                               exchange_levels.size();
    std::vector<double> theta(nparam, 0.0);

    auto build = [&](const std::vector<double>& th) -> Eigen::MatrixXcd {
        Eigen::VectorXcd z(tr.mode_count());
        for (int j = 0; j < tr.mode_count(); ++j)
            z[j] = std::complex<double>(th[2 * static_cast<std::size_t>(j)],
                                        th[2 * static_cast<std::size_t>(j) + 1]);
        Eigen::MatrixXcd U = weyl_operator(tr, z);
        for (std::size_t e = 0; e < exchange_levels.size(); ++e) {
            const double ang = th[2 * static_cast<std::size_t>(tr.mode_count()) + e];
            if (ang == 0.0) continue;
            Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(D, D);
            X(0, exchange_levels[e]) = ang;
            X(exchange_levels[e], 0) = ang;
            U = unitary_exp(X) * U;
        }
        return U;
    };
    auto value = [&](const std::vector<double>& th) {
        return passivity_functional(rho, tr, build(th));
    };

    PassiveSearchResult res;
    double best = value(theta);
    res.trace.push_back(best);
    double step = 0.5;
    for (int sweep = 0; sweep < iterations; ++sweep) {
        bool improved = false;
        for (std::size_t p = 0; p < nparam; ++p) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> trial = theta;
                trial[p] += dir * step;
                const double v = value(trial);
                if (v < best - 1e-14) {
                    best = v;
                    theta = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
        res.trace.push_back(best);
        if (step < 1e-6) break;
    }
    res.c_omega = best;
    res.best_unitary = build(theta);
    res.transformed_state = res.best_unitary * rho * res.best_unitary.adjoint();
    res.reported_passive = best >= -tol;
    return res;
}

} // namespace qei
