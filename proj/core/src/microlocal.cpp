#include "qei/microlocal.hpp"

#include "qei/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qei {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

std::string to_string(ProbeClass c) {
    switch (c) {
    case ProbeClass::Regular: return "regular";
    case ProbeClass::Singular: return "singular";
    default: return "inconclusive";
    }
}

double CovectorPair::norm() const {
    return std::sqrt(zeta * zeta + xi * xi + zetap * zetap + xip * xip);
}

CovectorPair CovectorPair::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw ConfigError("CovectorPair: zero direction");
    return {zeta / n, xi / n, zetap / n, xip / n};
}

std::vector<double> DirectionProbe::default_lambda_grid(double lo, double hi) {
    std::vector<double> grid;
    for (double l = lo; l <= hi * (1.0 + 1e-12); l *= std::sqrt(2.0)) grid.push_back(l);
    return grid;
}

namespace {

struct FitOutcome {
    double nu = 0.0;
    double residual = 0.0;
    ProbeClass cls = ProbeClass::Inconclusive;
    bool below_floor = false;
};

FitOutcome fit_decay(const std::vector<double>& lambdas, const std::vector<double>& mags,
                     double nu_regular, double nu_singular) {
    FitOutcome out;
    const std::size_t n = lambdas.size();
    const std::size_t start = n / 2; // upper half of the grid
    double peak = 0.0;
    for (double m : mags) peak = std::max(peak, m);
    const double floor = std::max(1e-300, 1e-13 * peak);

    std::vector<double> lx, ly;
    bool all_floor = true;
    for (std::size_t i = start; i < n; ++i) {
        if (mags[i] > floor) {
            all_floor = false;
            lx.push_back(std::log(lambdas[i]));
            ly.push_back(std::log(mags[i]));
        }
    }
    if (all_floor) {
        // Rapid decay past machine resolution: certified regular.
        out.nu = 99.0;
        out.cls = ProbeClass::Regular;
        out.below_floor = true;
        return out;
    }
    if (lx.size() < 3) {
        // Mixed floor/finite values with too few points for a meaningful fit:
        // favor regular only if the tail sits on the floor.
        out.nu = 99.0;
        out.below_floor = mags.back() <= floor;
        out.cls = out.below_floor ? ProbeClass::Regular : ProbeClass::Inconclusive;
        return out;
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double inter = (sy - slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (slope * lx[i] + inter);
        rss += r * r;
    }
    out.nu = -slope;
    out.residual = std::sqrt(rss / m);
    if (out.nu >= nu_regular)
        out.cls = ProbeClass::Regular;
    else if (out.nu <= nu_singular)
        out.cls = ProbeClass::Singular;
    else
        out.cls = ProbeClass::Inconclusive;
    return out;
}

std::vector<CovectorPair> jitter_set(const CovectorPair& ell, double jitter) {
    std::vector<CovectorPair> set{ell};
    if (jitter > 0.0) {
        for (double s : {1.0 + jitter, 1.0 - jitter}) {
            CovectorPair a = ell;
            a.zeta *= s;
            set.push_back(a);
            CovectorPair b = ell;
            b.zetap *= s;
            set.push_back(b);
        }
    }
    return set;
}

} // namespace

DecayResult windowed_decay(const ModeCatalog& cat, const Eigen::VectorXd& occupations,
                           const DirectionProbe& probe) {
    if (cat.backend() != CatalogBackend::AnalyticCylinder)
        throw ConfigError("windowed_decay: two-point probes require the analytic cylinder");
    if (2.0 * probe.window_x >= cat.circumference())
        throw ConfigError("windowed_decay: x window exceeds the chart patch");
    const CovectorPair ell = probe.ell.normalized();
    const double L = cat.circumference();

    DecayResult res;
    // Cutoff rule: resonances must stay well inside the catalog.
    const double width_scale = std::max(probe.window_t, probe.window_x);
    const double lambda_cap = static_cast<double>(cat.size()) / (4.0 * width_scale);
    for (double l : probe.lambdas) {
        if (l <= lambda_cap)
            res.lambdas.push_back(l);
        else
            res.lambda_range_truncated = true;
    }
    if (res.lambdas.size() < 4)
        throw ConfigError("windowed_decay: lambda grid too short after the cutoff rule");

    const double lmax = res.lambdas.back();
    const double cmax = std::max({std::abs(ell.zeta), std::abs(ell.xi), std::abs(ell.zetap),
                                  std::abs(ell.xip)}) *
                        (1.0 + probe.jitter);
    const double k_span = lmax * cmax + cat.omega_max() + 8.0 / std::min(probe.window_t, probe.window_x);
    const BumpWindow bt(0.0, probe.window_t);
    const BumpWindow bx(0.0, probe.window_x);
    const FourierTable Tt(bt, k_span);
    const FourierTable Tx(bx, k_span);

    const auto dirs = jitter_set(ell, probe.jitter);
    for (double lambda : res.lambdas) {
        double best = 0.0;
        for (const auto& d : dirs) {
            std::complex<double> I{0.0, 0.0};
            for (int j = 0; j < cat.size(); ++j) {
                const double w = cat.omega(j);
                const double k = 2.0 * M_PI * cat.mode(j).wavenumber / L;
                const double npj = occupations.size() > j ? occupations[j] : 0.0;
                // (n+1)-term: e_j(p) conj(e_j(q))
                const double f1 = Tt.centered(lambda * d.zeta - w) *
                                  Tx.centered(lambda * d.xi + k) *
                                  Tt.centered(lambda * d.zetap + w) *
                                  Tx.centered(lambda * d.xip - k);
                if (f1 != 0.0) {
                    const std::complex<double> phase = std::exp(
                        kI * (-w * (probe.p0.t - probe.q0.t) + k * (probe.p0.x - probe.q0.x)));
                    I += (npj + 1.0) * f1 * phase / (2.0 * w * L);
                }
                if (npj > 0.0) {
                    // n-term: conj(e_j(p)) e_j(q)
                    const double f2 = Tt.centered(lambda * d.zeta + w) *
                                      Tx.centered(lambda * d.xi - k) *
                                      Tt.centered(lambda * d.zetap - w) *
                                      Tx.centered(lambda * d.xip + k);
                    if (f2 != 0.0) {
                        const std::complex<double> phase = std::exp(
                            kI * (w * (probe.p0.t - probe.q0.t) - k * (probe.p0.x - probe.q0.x)));
                        I += npj * f2 * phase / (2.0 * w * L);
                    }
                }
            }
            best = std::max(best, std::abs(I));
        }
        res.magnitudes.push_back(best);
    }

    const FitOutcome fit =
        fit_decay(res.lambdas, res.magnitudes, probe.nu_regular, probe.nu_singular);
    res.nu_fit = fit.nu;
    res.fit_residual = fit.residual;
    res.classification = fit.cls;
    res.below_floor = fit.below_floor;
    return res;
}

DecayResult windowed_decay_blob(const DirectionProbe& probe, double sigma) {
    const CovectorPair ell = probe.ell.normalized();
    DecayResult res;
    res.lambdas = probe.lambdas;
    const BumpWindow bt(0.0, probe.window_t);
    const BumpWindow bx(0.0, probe.window_x);
    auto factor = [&](const BumpWindow& b, double arg) {
        auto r = integrate_certified_c(
            [&](double s) {
                return b.value(s) * std::exp(-s * s / (2.0 * sigma * sigma)) *
                       std::exp(kI * arg * s);
            },
            -b.half_width(), b.half_width(), 1e-12, 1e-18 * b.half_width(),
            std::max(4, static_cast<int>(std::abs(arg) * b.half_width() / 3.0)));
        return r.value;
    };
    const auto dirs = jitter_set(ell, probe.jitter);
    for (double lambda : res.lambdas) {
        double best = 0.0;
        for (const auto& d : dirs) {
            const std::complex<double> I = factor(bt, lambda * d.zeta) *
                                           factor(bx, lambda * d.xi) *
                                           factor(bt, lambda * d.zetap) *
                                           factor(bx, lambda * d.xip);
            best = std::max(best, std::abs(I));
        }
        res.magnitudes.push_back(best);
    }
    const FitOutcome fit =
        fit_decay(res.lambdas, res.magnitudes, probe.nu_regular, probe.nu_singular);
    res.nu_fit = fit.nu;
    res.fit_residual = fit.residual;
    res.classification = fit.cls;
    res.below_floor = fit.below_floor;
    return res;
}

ProbeClass cone_classify(const ModeCatalog& cat, SpacetimePoint p0, SpacetimePoint q0,
                         const CovectorPair& ell_in, double tol) {
    const CovectorPair ell = ell_in.normalized();
    // First covector k = (zeta, xi): future-pointing null.
    if (!(ell.zeta > 0.0)) return ProbeClass::Regular;
    if (std::abs(std::abs(ell.zeta) - std::abs(ell.xi)) > tol) return ProbeClass::Regular;
    // Second slot must carry -k' with k' = k (trivial parallel transport).
    if (std::abs(ell.zetap + ell.zeta) > tol || std::abs(ell.xip + ell.xi) > tol)
        return ProbeClass::Regular;
    // Null relation: (dt, dx) = s (zeta, -xi) modulo the circumference.
    const double L = cat.circumference();
    const double dt = q0.t - p0.t;
    const double dx = q0.x - p0.x;
    const double s = dt / ell.zeta;
    double gap = std::fmod(dx + s * ell.xi, L);
    if (gap > L / 2.0) gap -= L;
    if (gap < -L / 2.0) gap += L;
    return std::abs(gap) <= 1e-9 * (1.0 + std::abs(s)) ? ProbeClass::Singular
                                                       : ProbeClass::Regular;
}

namespace {

bool in_conormal(PullbackMap map, const std::array<double, 4>& c, double tol) {
    switch (map) {
    case PullbackMap::WorldlinePair: // {(0, xi; zeta', xi')}
        return std::abs(c[0]) <= tol;
    case PullbackMap::TwoTime: // {(0, xi; 0, xi')}
        return std::abs(c[0]) <= tol && std::abs(c[2]) <= tol;
    case PullbackMap::EqualTimeDiagonal: // {(alpha, xi; beta, -xi)}
        return std::abs(c[1] + c[3]) <= tol;
    }
    return false;
}

} // namespace

TransversalityResult conormal_transversality(PullbackMap map, const ConeSpec& cone) {
    TransversalityResult out;
    const double tol = 1e-12;
    switch (cone.kind) {
    case ConeSpec::Kind::HadamardState:
        // Elements (k; -k') with k nonzero future null: k = (zeta, xi),
        // zeta = |xi| > 0. Conormal membership would force the indicated
        // components to vanish, which contradicts nullness.
        switch (map) {
        case PullbackMap::WorldlinePair:
            // zeta = 0 and null implies k = 0: excluded.
            out.disjoint = true;
            break;
        case PullbackMap::TwoTime: out.disjoint = true; break;
        case PullbackMap::EqualTimeDiagonal:
            // (k; -k) needs xi + (-xi) = 0: overlap would require the
            // conormal's pattern (xi, -xi), which the Hadamard element
            // (zeta, xi; -zeta, -xi) meets only via xi - xi = 0... the
            // bundle condition c[1] + c[3] = 0 gives xi + (-xi) = 0: always.
            // The equal-time diagonal therefore requires the V-cone bound,
            // not the state cone; report the overlap witness honestly.
            out.disjoint = false;
            out.witness = std::array<double, 4>{1.0, 1.0, -1.0, -1.0};
            break;
        }
        break;
    case ConeSpec::Kind::ProductCone:
        switch (map) {
        case PullbackMap::TwoTime:
            // (0, xi) in N+ u Z forces xi = 0; then (0, xi') in N- u Z forces
            // xi' = 0; Z x Z is excluded.
            out.disjoint = true;
            break;
        case PullbackMap::WorldlinePair:
            // (0,0; k') with k' past null lies in the bundle: overlap.
            out.disjoint = false;
            out.witness = std::array<double, 4>{0.0, 0.0, -1.0, 1.0};
            break;
        case PullbackMap::EqualTimeDiagonal:
            out.disjoint = false;
            out.witness = std::array<double, 4>{1.0, 1.0, 0.0, -1.0};
            break;
        }
        break;
    case ConeSpec::Kind::VCone:
        switch (map) {
        case PullbackMap::EqualTimeDiagonal:
            // (k; 0): second slot zero forces xi = 0, so k = (alpha, 0) can
            // never be null; symmetric for (0; k').
            out.disjoint = true;
            break;
        case PullbackMap::TwoTime: out.disjoint = true; break;
        case PullbackMap::WorldlinePair:
            out.disjoint = false;
            out.witness = std::array<double, 4>{0.0, 0.0, -1.0, -1.0};
            break;
        }
        break;
    case ConeSpec::Kind::Custom:
        out.disjoint = true;
        for (const auto& c : cone.samples) {
            if (in_conormal(map, c, tol)) {
                out.disjoint = false;
                out.witness = c;
                break;
            }
        }
        break;
    }
    return out;
}

double spectrum_support_probe(const ModeCatalog& cat, double x, const ReferenceSpec& ref) {
    return pullback_energy_spectrum(cat, x, ref).support_infimum();
}

} // namespace qei
