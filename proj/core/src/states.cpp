#include "qei/states.hpp"

#include "qei/errors.hpp"

#include <cmath>
#include <sstream>

namespace qei {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

StateSpec StateSpec::ground() { return StateSpec{}; }

StateSpec StateSpec::kms(double beta) {
    StateSpec s;
    s.kind = Kind::Kms;
    s.beta = beta;
    return s;
}

StateSpec StateSpec::coherent(std::vector<std::pair<int, std::complex<double>>> alphas) {
    StateSpec s;
    s.kind = Kind::Coherent;
    s.alphas = std::move(alphas);
    return s;
}

StateSpec StateSpec::squeezed(std::vector<std::tuple<int, double, double>> squeezes) {
    StateSpec s;
    s.kind = Kind::Squeezed;
    s.squeezes = std::move(squeezes);
    return s;
}

StateSpec StateSpec::particle(int mode) {
    StateSpec s;
    s.kind = Kind::SingleParticle;
    s.mode = mode;
    return s;
}

StateSpec StateSpec::pair(int mode, std::complex<double> epsilon) {
    StateSpec s;
    s.kind = Kind::SuperposedPair;
    s.mode = mode;
    s.epsilon = epsilon;
    return s;
}

StateSpec StateSpec::mixture(std::vector<double> weights, std::vector<StateSpec> components) {
    StateSpec s;
    s.kind = Kind::Mixture;
    s.weights = std::move(weights);
    s.components = std::move(components);
    return s;
}

std::string StateSpec::id() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Ground: os << "ground"; break;
    case Kind::Kms: os << "kms(beta=" << beta << ")"; break;
    case Kind::Coherent:
        os << "coherent(";
        for (const auto& [j, a] : alphas) os << j << ":" << a.real() << (a.imag() < 0 ? "-" : "+")
                                             << std::abs(a.imag()) << "i ";
        os << ")";
        break;
    case Kind::Squeezed:
        os << "squeezed(";
        for (const auto& [j, r, phi] : squeezes) os << j << ":r=" << r << ",phi=" << phi << " ";
        os << ")";
        break;
    case Kind::SingleParticle: os << "particle(" << mode << ")"; break;
    case Kind::SuperposedPair:
        os << "pair(" << mode << ",eps=" << epsilon.real() << (epsilon.imag() < 0 ? "-" : "+")
           << std::abs(epsilon.imag()) << "i)";
        break;
    case Kind::Mixture:
        os << "mixture(";
        for (std::size_t i = 0; i < components.size(); ++i)
            os << weights[i] << "*" << components[i].id() << (i + 1 < components.size() ? " " : "");
        os << ")";
        break;
    }
    return os.str();
}

int StateSpec::max_mode() const {
    int mm = -1;
    switch (kind) {
    case Kind::Ground:
    case Kind::Kms: break;
    case Kind::Coherent:
        for (const auto& [j, a] : alphas) mm = std::max(mm, j);
        break;
    case Kind::Squeezed:
        for (const auto& [j, r, phi] : squeezes) mm = std::max(mm, j);
        break;
    case Kind::SingleParticle:
    case Kind::SuperposedPair: mm = mode; break;
    case Kind::Mixture:
        for (const auto& c : components) mm = std::max(mm, c.max_mode());
        break;
    }
    return mm;
}

void StateSpec::validate(int J) const {
    if (kind == Kind::Kms && !(beta > 0.0)) throw ConfigError("StateSpec: KMS needs beta > 0");
    if (kind == Kind::Mixture) {
        if (weights.size() != components.size() || components.empty())
            throw ConfigError("StateSpec: mixture weights/components mismatch");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w > 0.0)) throw ConfigError("StateSpec: mixture weights must be > 0");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ConfigError("StateSpec: mixture weights must sum to 1");
        for (const auto& c : components) c.validate(J);
    }
    if (max_mode() >= J)
        throw ConfigError("StateSpec: referenced mode index " + std::to_string(max_mode()) +
                          " exceeds catalog cutoff J = " + std::to_string(J));
}

double TwoPointData::covariance_min_eigenvalue() const {
    double mn = 0.0;
    for (int j = 0; j < n.size(); ++j) {
        // Eigenvalues of [[n, conj(s)], [s, n+1]]: n + 1/2 -+ sqrt(1/4 + |s|^2).
        const double mid = n[j] + 0.5;
        const double rad = std::sqrt(0.25 + std::norm(s[j]));
        mn = std::min(mn, mid - rad);
    }
    return mn;
}

std::vector<int> TwoPointData::active_modes() const {
    std::vector<int> act;
    for (int j = 0; j < n.size(); ++j)
        if (n[j] != 0.0 || s[j] != std::complex<double>(0.0, 0.0) ||
            d[j] != std::complex<double>(0.0, 0.0))
            act.push_back(j);
    return act;
}

TwoPointData mode_moments(const StateSpec& spec, const ModeCatalog& cat) {
    const int J = cat.size();
    TwoPointData td;
    td.n = Eigen::VectorXd::Zero(J);
    td.s = Eigen::VectorXcd::Zero(J);
    td.d = Eigen::VectorXcd::Zero(J);
    switch (spec.kind) {
    case StateSpec::Kind::Ground: td.is_reference = true; break;
    case StateSpec::Kind::Kms:
        for (int j = 0; j < J; ++j) td.n[j] = 1.0 / std::expm1(spec.beta * cat.omega(j));
        break;
    case StateSpec::Kind::Coherent:
        for (const auto& [j, a] : spec.alphas) td.d[j] += a;
        break;
    case StateSpec::Kind::Squeezed:
        // Vacuum squeezed per mode: n = sinh^2 r, s = e^{i phi} sinh r cosh r
        // (phase convention: phi is the phase of <b b>).
        for (const auto& [j, r, phi] : spec.squeezes) {
            td.n[j] = std::sinh(r) * std::sinh(r);
            td.s[j] = std::exp(kI * phi) * std::sinh(r) * std::cosh(r);
        }
        break;
    case StateSpec::Kind::SingleParticle: td.n[spec.mode] = 1.0; break;
    case StateSpec::Kind::SuperposedPair: {
        // (|0> + eps |2_j>)/sqrt(1+|eps|^2): <a†a> = 2|eps|^2/(1+|eps|^2),
        // <a a> = sqrt(2) eps/(1+|eps|^2), <a> = 0.
        const double norm = 1.0 + std::norm(spec.epsilon);
        td.n[spec.mode] = 2.0 * std::norm(spec.epsilon) / norm;
        td.s[spec.mode] = std::sqrt(2.0) * spec.epsilon / norm;
        break;
    }
    case StateSpec::Kind::Mixture:
        throw ConfigError("mode_moments: mixtures must be expanded via gaussian_components");
    }
    return td;
}

std::vector<std::pair<double, TwoPointData>> gaussian_components(const StateSpec& spec,
                                                                 const ModeCatalog& cat) {
    std::vector<std::pair<double, TwoPointData>> out;
    if (spec.kind == StateSpec::Kind::Mixture) {
        for (std::size_t i = 0; i < spec.components.size(); ++i)
            for (auto& [w, td] : gaussian_components(spec.components[i], cat))
                out.emplace_back(spec.weights[i] * w, std::move(td));
    } else {
        out.emplace_back(1.0, mode_moments(spec, cat));
    }
    return out;
}

std::complex<double> one_point(const TwoPointData& data, const ModeCatalog& cat,
                               SpacetimePoint p) {
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < data.d.size(); ++j) {
        if (data.d[j] == std::complex<double>(0.0, 0.0)) continue;
        const double w = cat.omega(j);
        const std::complex<double> e =
            std::exp(-kI * w * p.t) * cat.mode_value(j, p.x) / std::sqrt(2.0 * w);
        sum += data.d[j] * e + std::conj(data.d[j] * e);
    }
    return sum;
}

namespace {

std::complex<double> two_point_component(const TwoPointData& td, const ModeCatalog& cat,
                                         SpacetimePoint p, SpacetimePoint q, bool normal_ordered) {
    std::complex<double> sum{0.0, 0.0};
    if (!normal_ordered) {
        for (int j = 0; j < cat.size(); ++j) {
            const double w = cat.omega(j);
            const std::complex<double> ep =
                std::exp(-kI * w * p.t) * cat.mode_value(j, p.x);
            const std::complex<double> eq =
                std::exp(-kI * w * q.t) * cat.mode_value(j, q.x);
            sum += ep * std::conj(eq) / (2.0 * w);
        }
    }
    for (int j : td.active_modes()) {
        const double w = cat.omega(j);
        const std::complex<double> ep = std::exp(-kI * w * p.t) * cat.mode_value(j, p.x);
        const std::complex<double> eq = std::exp(-kI * w * q.t) * cat.mode_value(j, q.x);
        sum += (td.n[j] * (ep * std::conj(eq) + std::conj(ep) * eq) + td.s[j] * ep * eq +
                std::conj(td.s[j] * ep * eq)) /
               (2.0 * w);
    }
    if (td.d.size() > 0) sum += one_point(td, cat, p) * one_point(td, cat, q);
    return sum;
}

} // namespace

std::complex<double> two_point(const StateSpec& spec, const ModeCatalog& cat, SpacetimePoint p,
                               SpacetimePoint q) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [w, td] : gaussian_components(spec, cat))
        sum += w * two_point_component(td, cat, p, q, false);
    return sum;
}

std::complex<double> normal_ordered_two_point(const StateSpec& spec, const ModeCatalog& cat,
                                              SpacetimePoint p, SpacetimePoint q) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [w, td] : gaussian_components(spec, cat))
        sum += w * two_point_component(td, cat, p, q, true);
    return sum;
}

ClassicalSolution classical_solution(
    const ModeCatalog& cat, const std::vector<std::pair<int, std::complex<double>>>& alphas,
    SpacetimePoint p) {
    ClassicalSolution out;
    const double inv_sqrt_g00 = 1.0 / std::sqrt(cat.g00_at(p.x));
    const double inv_sqrt_h = 1.0 / std::sqrt(cat.h_at(p.x));
    for (const auto& [j, a] : alphas) {
        const double w = cat.omega(j);
        const std::complex<double> phase = std::exp(-kI * w * p.t) / std::sqrt(2.0 * w);
        const std::complex<double> u = cat.mode_value(j, p.x);
        const std::complex<double> du = cat.mode_deriv(j, p.x);
        out.value += 2.0 * (a * phase * u).real();
        out.e0_deriv += 2.0 * (a * (-kI * w) * phase * u).real() * inv_sqrt_g00;
        out.e1_deriv += 2.0 * (a * phase * du).real() * inv_sqrt_h;
    }
    return out;
}

} // namespace qei
