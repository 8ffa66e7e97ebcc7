#include "qei/fock.hpp"

#include "qei/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qei {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

FockTruncation::FockTruncation(const ModeCatalog& cat, int N, int n_max, long dim_cap)
    : n_max_(n_max) {
    if (N < 1 || N > cat.size())
        throw ConfigError("FockTruncation: need 1 <= N <= J");
    for (int j = 0; j < N; ++j) modes_.push_back(j);
    build(cat, dim_cap);
}

FockTruncation::FockTruncation(const ModeCatalog& cat, std::vector<int> modes, int n_max,
                               long dim_cap)
    : modes_(std::move(modes)), n_max_(n_max) {
    for (int j : modes_)
        if (j < 0 || j >= cat.size()) throw ConfigError("FockTruncation: mode index out of range");
    build(cat, dim_cap);
}

void FockTruncation::build(const ModeCatalog& cat, long dim_cap) {
    if (n_max_ < 1) throw ConfigError("FockTruncation: n_max must be >= 1");
    const int N = mode_count();
    const long base = n_max_ + 1;
    double dims = 1.0;
    for (int k = 0; k < N; ++k) dims *= static_cast<double>(base);
    if (dims > static_cast<double>(dim_cap))
        throw ConfigError("FockTruncation: dimension (n_max+1)^N exceeds the configured cap");
    dim_ = 1;
    for (int k = 0; k < N; ++k) dim_ *= base;

    for (int j : modes_) omegas_.push_back(cat.omega(j));

    long stride = 1;
    a_.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim_, dim_);
        for (long idx = 0; idx < dim_; ++idx) {
            const int occ = static_cast<int>((idx / stride) % base);
            if (occ >= 1) a(idx - stride, idx) = std::sqrt(static_cast<double>(occ));
        }
        a_[static_cast<std::size_t>(k)] = std::move(a);
        stride *= base;
    }

    energies_.resize(dim_);
    for (long idx = 0; idx < dim_; ++idx) {
        double e = 0.0;
        long rest = idx;
        for (int k = 0; k < N; ++k) {
            e += omegas_[static_cast<std::size_t>(k)] * static_cast<double>(rest % base);
            rest /= base;
        }
        energies_[idx] = e;
    }
}

Eigen::MatrixXcd FockTruncation::hamiltonian() const {
    return energies_.cast<std::complex<double>>().asDiagonal();
}

std::vector<int> FockTruncation::occupations_of(long index) const {
    std::vector<int> occ(static_cast<std::size_t>(mode_count()));
    const long base = n_max_ + 1;
    for (int k = 0; k < mode_count(); ++k) {
        occ[static_cast<std::size_t>(k)] = static_cast<int>(index % base);
        index /= base;
    }
    return occ;
}

long FockTruncation::index_of(const std::vector<int>& occ) const {
    if (static_cast<int>(occ.size()) != mode_count())
        throw ConfigError("FockTruncation: occupation tuple length mismatch");
    long idx = 0;
    const long base = n_max_ + 1;
    for (int k = mode_count() - 1; k >= 0; --k) {
        const int n = occ[static_cast<std::size_t>(k)];
        if (n < 0 || n > n_max_) throw ConfigError("FockTruncation: occupation out of range");
        idx = idx * base + n;
    }
    return idx;
}

Eigen::VectorXcd FockTruncation::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v[0] = 1.0;
    return v;
}

Eigen::VectorXcd FockTruncation::number_state(const std::vector<int>& occ) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v[index_of(occ)] = 1.0;
    return v;
}

Eigen::VectorXcd FockTruncation::coherent_vector(const Eigen::VectorXcd& alphas) const {
    if (alphas.size() != mode_count())
        throw ConfigError("FockTruncation: coherent amplitude count mismatch");
    Eigen::VectorXcd v(dim_);
    const long base = n_max_ + 1;
    for (long idx = 0; idx < dim_; ++idx) {
        std::complex<double> amp{1.0, 0.0};
        long rest = idx;
        for (int k = 0; k < mode_count(); ++k) {
            const int n = static_cast<int>(rest % base);
            rest /= base;
            std::complex<double> c =
                std::exp(-0.5 * std::norm(alphas[k])) * std::pow(alphas[k], n);
            double fact = 1.0;
            for (int q = 2; q <= n; ++q) fact *= q;
            amp *= c / std::sqrt(fact);
        }
        v[idx] = amp;
    }
    return v;
}

Eigen::MatrixXcd FockTruncation::heisenberg(const Eigen::MatrixXcd& A, double t) const {
    Eigen::VectorXcd phase(dim_);
    for (long i = 0; i < dim_; ++i) phase[i] = std::exp(kI * energies_[i] * t);
    return phase.asDiagonal() * A * phase.conjugate().asDiagonal();
}

double FockTruncation::truncation_proxy(const Eigen::VectorXcd& psi) const {
    double norm2 = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        const auto occ = occupations_of(idx);
        bool top = false;
        for (int n : occ)
            if (n == n_max_) top = true;
        if (top) norm2 += std::norm(psi[idx]);
    }
    return std::sqrt(norm2);
}

double FockTruncation::truncation_proxy(const Eigen::MatrixXcd& rho) const {
    double mass = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        const auto occ = occupations_of(idx);
        bool top = false;
        for (int n : occ)
            if (n == n_max_) top = true;
        if (top) mass += rho(idx, idx).real();
    }
    return mass;
}

Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
    if (es.info() != Eigen::Success)
        throw CertificationError("unitary_exp: eigendecomposition failed");
    Eigen::VectorXcd phases(hermitian.rows());
    for (long i = 0; i < hermitian.rows(); ++i)
        phases[i] = std::exp(kI * es.eigenvalues()[i]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd field_operator(const FockTruncation& tr, const ModeCatalog& cat, double t,
                                double x) {
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    for (int k = 0; k < tr.mode_count(); ++k) {
        const int j = tr.included_modes()[static_cast<std::size_t>(k)];
        const double w = cat.omega(j);
        const std::complex<double> coeff =
            std::exp(-kI * w * t) * cat.mode_value(j, x) / std::sqrt(2.0 * w);
        phi += coeff * tr.lowering(k) + std::conj(coeff) * tr.raising(k);
    }
    return phi;
}

Eigen::MatrixXcd field_velocity_operator(const FockTruncation& tr, const ModeCatalog& cat,
                                         double t, double x) {
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    for (int k = 0; k < tr.mode_count(); ++k) {
        const int j = tr.included_modes()[static_cast<std::size_t>(k)];
        const double w = cat.omega(j);
        const std::complex<double> coeff =
            (-kI * w) * std::exp(-kI * w * t) * cat.mode_value(j, x) / std::sqrt(2.0 * w);
        phi += coeff * tr.lowering(k) + std::conj(coeff) * tr.raising(k);
    }
    return phi;
}

Eigen::MatrixXcd displacement_generator(const FockTruncation& tr, const Eigen::VectorXcd& z) {
    if (z.size() != tr.mode_count())
        throw ConfigError("displacement_generator: amplitude count mismatch");
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    for (int k = 0; k < tr.mode_count(); ++k)
        g += z[k] * tr.raising(k) + std::conj(z[k]) * tr.lowering(k);
    return g;
}

Eigen::MatrixXcd weyl_operator(const FockTruncation& tr, const Eigen::VectorXcd& z) {
    return unitary_exp(displacement_generator(tr, z));
}

double symplectic_form(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
    return 2.0 * z.dot(w).imag();
}

Eigen::MatrixXcd smear_operator(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                const BumpWindow& f, double rel_tol) {
    // Matrix-valued certified quadrature: panel-doubling until the max-norm
    // of the difference passes rel_tol (relative to the current result).
    auto eval = [&](int panels) {
        const auto& rule = gauss_legendre(16);
        const double a = f.support_lo(), b = f.support_hi();
        const double h = (b - a) / panels;
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = mid + 0.5 * h * rule.nodes[i];
                sum += (rule.weights[i] * f.value(t)) * tr.heisenberg(A, t);
            }
        }
        return Eigen::MatrixXcd(0.5 * h * sum);
    };
    // Resolve the fastest Bohr frequency over the window support.
    const double emax = tr.energies().maxCoeff() - tr.energies().minCoeff();
    const double span = f.support_hi() - f.support_lo();
    int panels = std::max(4, static_cast<int>(std::ceil(emax * span / (2.0 * M_PI) / 1.5)));
    Eigen::MatrixXcd prev = eval(panels);
    for (int iter = 0; iter < 12; ++iter) {
        panels *= 2;
        Eigen::MatrixXcd cur = eval(panels);
        const double diff = (cur - prev).cwiseAbs().maxCoeff();
        const double scale = std::max(1e-300, cur.cwiseAbs().maxCoeff());
        if (diff <= rel_tol * scale || diff <= 1e-15) return cur;
        prev = std::move(cur);
    }
    throw CertificationError("smear_operator: quadrature step-halving did not converge");
}

Eigen::MatrixXcd smear_operator_spectral(const FockTruncation& tr, const Eigen::MatrixXcd& A,
                                         const BumpWindow& f) {
    Eigen::MatrixXcd out(tr.dim(), tr.dim());
    for (long r = 0; r < tr.dim(); ++r)
        for (long c = 0; c < tr.dim(); ++c) {
            const double bohr = tr.energies()[r] - tr.energies()[c];
            out(r, c) = A(r, c) * f.fourier(bohr).value;
        }
    return out;
}

std::complex<double> fock_two_point(const FockTruncation& tr, const ModeCatalog& cat,
                                    const MatrixFunctional& ell, SpacetimePoint p,
                                    SpacetimePoint q) {
    const Eigen::MatrixXcd phi_p = field_operator(tr, cat, p.t, p.x);
    const Eigen::MatrixXcd phi_q = field_operator(tr, cat, q.t, q.x);
    return ell(phi_p * phi_q);
}

std::complex<double> fock_normal_ordered_two_point(const FockTruncation& tr,
                                                   const ModeCatalog& cat,
                                                   const MatrixFunctional& ell, SpacetimePoint p,
                                                   SpacetimePoint q) {
    std::complex<double> vac{0.0, 0.0};
    for (int k = 0; k < tr.mode_count(); ++k) {
        const int j = tr.included_modes()[static_cast<std::size_t>(k)];
        const double w = cat.omega(j);
        const std::complex<double> ep = std::exp(-kI * w * p.t) * cat.mode_value(j, p.x);
        const std::complex<double> eq = std::exp(-kI * w * q.t) * cat.mode_value(j, q.x);
        vac += ep * std::conj(eq) / (2.0 * w);
    }
    return fock_two_point(tr, cat, ell, p, q) - ell.unit() * vac;
}

} // namespace qei
