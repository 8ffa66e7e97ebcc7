#include "qei/qwei.hpp"

#include "qei/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qei {

namespace {

constexpr double kTwoPiSq = 2.0 * M_PI * M_PI;
const std::complex<double> kI{0.0, 1.0};

/// W_j(x) = [m^2 |u|^2 + omega^2 |u|^2 / g00 + |u'|^2 / h] / (4 omega).
double pullback_weight(const ModeCatalog& cat, int j, double x) {
    const double m = cat.mass();
    const double w = cat.omega(j);
    const double u2 = std::norm(cat.mode_value(j, x));
    const double du2 = std::norm(cat.mode_deriv(j, x));
    return (m * m * u2 + w * w * u2 / cat.g00_at(x) + du2 / cat.h_at(x)) / (4.0 * w);
}

double integrated_pullback_weight(const ModeCatalog& cat, int j) {
    const auto& geom = cat.geometry();
    if (cat.backend() == CatalogBackend::AnalyticCylinder) {
        // |u|^2 and |u'|^2 are constant for plane waves; trapezoid is exact.
        return pullback_weight(cat, j, 0.0) * geom.L;
    }
    double sum = 0.0;
    for (int i = 0; i < geom.grid_size(); ++i)
        sum += pullback_weight(cat, j, geom.grid_point(i)) * cat.sqrt_h()[i] * geom.dx();
    return sum;
}

void merge_and_sort(std::vector<SpectralAtom>& atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const SpectralAtom& a, const SpectralAtom& b) { return a.zeta < b.zeta; });
    std::vector<SpectralAtom> merged;
    for (const auto& a : atoms) {
        if (!merged.empty() && std::abs(a.zeta - merged.back().zeta) <=
                                   1e-9 * (1.0 + std::abs(a.zeta)))
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    atoms = std::move(merged);
}

Eigen::VectorXd kms_occupations(const ModeCatalog& cat, double beta) {
    Eigen::VectorXd n(cat.size());
    for (int j = 0; j < cat.size(); ++j) n[j] = 1.0 / std::expm1(beta * cat.omega(j));
    return n;
}

SpectralMeasure build_spectrum(const ModeCatalog& cat, const ReferenceSpec& ref,
                               const std::function<double(int)>& weight_of) {
    SpectralMeasure spec;
    const bool thermal = ref.kind == ReferenceSpec::Kind::Kms;
    Eigen::VectorXd n;
    if (thermal) {
        if (!(ref.beta > 0.0)) throw ConfigError("ReferenceSpec: KMS needs beta > 0");
        n = kms_occupations(cat, ref.beta);
    }
    for (int j = 0; j < cat.size(); ++j) {
        const double W = weight_of(j);
        const double occ = thermal ? n[j] : 0.0;
        spec.atoms.push_back({cat.omega(j), 2.0 * M_PI * (occ + 1.0) * W});
        if (thermal && occ > 0.0) spec.atoms.push_back({-cat.omega(j), 2.0 * M_PI * occ * W});
    }
    merge_and_sort(spec.atoms);
    return spec;
}

} // namespace

std::string ReferenceSpec::id() const {
    if (kind == Kind::Ground) return "ground";
    std::ostringstream os;
    os << "kms(beta=" << beta << ")";
    return os.str();
}

double SpectralMeasure::support_infimum() const {
    return atoms.empty() ? 0.0 : atoms.front().zeta;
}

double SpectralMeasure::mass_up_to(double u) const {
    double sum = 0.0;
    for (const auto& a : atoms)
        if (a.zeta <= u) sum += a.weight;
    return sum;
}

SpectralMeasure pullback_energy_spectrum(const ModeCatalog& cat, double x,
                                         const ReferenceSpec& ref) {
    return build_spectrum(cat, ref, [&](int j) { return pullback_weight(cat, j, x); });
}

SpectralMeasure integrated_pullback_spectrum(const ModeCatalog& cat, const ReferenceSpec& ref) {
    return build_spectrum(cat, ref, [&](int j) { return integrated_pullback_weight(cat, j); });
}

SpectralMeasure pullback_energy_spectrum_fft(const ModeCatalog& cat, double x,
                                             const ReferenceSpec& ref, double tau) {
    // Sample F(t) = sum_j [(n_j+1) W_j e^{-i w_j t} + n_j W_j e^{+i w_j t}],
    // taper with a Gaussian of width tau, transform, and bin.
    const double omega_max = cat.omega_max();
    const double dt = M_PI / (1.05 * omega_max);
    const double span = 16.0 * tau;
    std::size_t N = 1;
    while (static_cast<double>(N) * dt < span) N <<= 1;

    const bool thermal = ref.kind == ReferenceSpec::Kind::Kms;
    Eigen::VectorXd n;
    if (thermal) n = kms_occupations(cat, ref.beta);

    std::vector<double> W(static_cast<std::size_t>(cat.size()));
    for (int j = 0; j < cat.size(); ++j)
        W[static_cast<std::size_t>(j)] = pullback_weight(cat, j, x);

    std::vector<std::complex<double>> samples(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(N) / 2.0) * dt;
        std::complex<double> F{0.0, 0.0};
        for (int j = 0; j < cat.size(); ++j) {
            const double w = cat.omega(j);
            const double Wj = W[static_cast<std::size_t>(j)];
            const double occ = thermal ? n[j] : 0.0;
            F += (occ + 1.0) * Wj * std::exp(-kI * w * t) + occ * Wj * std::exp(kI * w * t);
        }
        samples[k] = F * std::exp(-t * t / (2.0 * tau * tau));
    }

    // DFT with the f^(zeta) = \int f e^{i zeta t} dt convention. Index k of
    // the forward FFT corresponds to zeta_k = 2 pi k / (N dt); the centered
    // time grid contributes the phase e^{i zeta_k t_0}.
    fft_radix2(samples, false);
    SpectralMeasure spec;
    spec.provenance = SpectralMeasure::Provenance::FftEstimated;
    const double dzeta = 2.0 * M_PI / (static_cast<double>(N) * dt);
    const double t0 = -static_cast<double>(N) / 2.0 * dt;
    for (std::size_t k = 0; k < N; ++k) {
        const long ks = (k < N / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(N);
        const double zeta = dzeta * static_cast<double>(ks);
        const std::complex<double> density =
            samples[k] * dt * std::exp(kI * zeta * t0);
        const double mass = density.real() * dzeta;
        if (std::abs(mass) > 1e-14) spec.atoms.push_back({zeta, mass});
    }
    merge_and_sort(spec.atoms);
    return spec;
}

double Q_of(const SpectralMeasure& spec, double u) {
    double sum = 0.0;
    for (const auto& a : spec.atoms) {
        if (a.zeta >= u) break; // strict: atoms at zeta = u are excluded
        sum += a.weight;
    }
    return sum / kTwoPiSq;
}

std::vector<TailCertificate> window_tail_integrals(const BumpWindow& g,
                                                   std::vector<double> thresholds) {
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double K4 = g.fourth_derivative_l1();
    const double scale = 2.0 * M_PI * g.l1_norm_of_square().value; // Plancherel total
    auto g_sq = [&](double u) {
        const double v = g.fourier_centered(u).value;
        return v * v;
    };

    // Decay point: |g^|^2 negligible relative to the total mass.
    const double step = 4.0 / g.half_width();
    double U = std::max(3.0 / g.half_width(), 1.0);
    int calm = 0;
    while (calm < 2) {
        if (g_sq(U) < 1e-30 * scale) ++calm;
        else calm = 0;
        if (calm < 2) U += step;
        if (U > 1e6) throw CertificationError("window_tail_integrals: transform does not decay");
    }
    // |g^(u)| <= K4/u^4 (four integrations by parts), so the remainder beyond
    // U is at most K4^2/(7 U^7).
    const double tb_top = K4 * K4 / (7.0 * std::pow(U, 7));

    // Knots: -U, thresholds inside (-U, U), U.
    std::vector<double> knots{-U};
    for (double z : thresholds)
        if (z > -U && z < U) knots.push_back(z);
    knots.push_back(U);

    const std::size_t nseg = knots.size() - 1;
    std::vector<double> seg_val(nseg), seg_err(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
        auto r = integrate_certified(g_sq, knots[i], knots[i + 1], 1e-10,
                                     1e-16 * (1.0 + scale), 4);
        seg_val[i] = r.value;
        seg_err[i] = r.error;
    }
    // Suffix sums from the top.
    std::vector<double> suf_val(nseg + 1, 0.0), suf_err(nseg + 1, 0.0);
    for (std::size_t i = nseg; i-- > 0;) {
        suf_val[i] = suf_val[i + 1] + seg_val[i];
        suf_err[i] = suf_err[i + 1] + seg_err[i];
    }

    std::vector<TailCertificate> out;
    out.reserve(thresholds.size());
    for (double z : thresholds) {
        TailCertificate tc;
        if (z >= U) {
            tc.value = 0.0;
            tc.tail_bound = K4 * K4 / (7.0 * std::pow(z, 7));
        } else if (z <= -U) {
            tc.value = suf_val[0];
            tc.quad_error = suf_err[0];
            tc.tail_bound = tb_top + K4 * K4 / (7.0 * std::pow(std::abs(z), 7));
        } else {
            const auto it = std::lower_bound(knots.begin(), knots.end(), z);
            const std::size_t idx = static_cast<std::size_t>(it - knots.begin());
            tc.value = suf_val[idx];
            tc.quad_error = suf_err[idx];
            tc.tail_bound = tb_top;
        }
        out.push_back(tc);
    }
    return out;
}

QBoundResult q_bound(const SpectralMeasure& spec, const BumpWindow& g,
                     std::optional<double> cutoff_omega) {
    std::vector<double> thresholds;
    thresholds.reserve(spec.atoms.size());
    for (const auto& a : spec.atoms) thresholds.push_back(a.zeta);
    const auto tails = window_tail_integrals(g, thresholds);

    // window_tail_integrals de-duplicates; map atom -> its threshold slot.
    std::vector<double> uniq = thresholds;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    QBoundResult out;
    for (const auto& a : spec.atoms) {
        const std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(uniq.begin(), uniq.end(), a.zeta) - uniq.begin());
        out.value += a.weight * tails[idx].value / kTwoPiSq;
        out.quad_error += a.weight * tails[idx].quad_error / kTwoPiSq;
        out.tail_bound += a.weight * tails[idx].tail_bound / kTwoPiSq;
    }
    // Mode-cutoff tail: beyond omega_J the circle's mode density (L/pi) and
    // per-x weights (~ pi u / L) combine to an atom flux ~ u du, and the
    // window mass above u is at most K4^2/(7 u^7).
    if (cutoff_omega) {
        const double K4 = g.fourth_derivative_l1();
        out.tail_bound += K4 * K4 / (70.0 * M_PI * M_PI * std::pow(*cutoff_omega, 5));
    }
    return out;
}

double integrated_Q(const ModeCatalog& cat, double u, const ReferenceSpec& ref) {
    return Q_of(integrated_pullback_spectrum(cat, ref), u);
}

std::vector<double> default_lambda_sequence() {
    std::vector<double> l;
    for (int k = 0; k <= 10; ++k) l.push_back(std::pow(2.0, -k));
    return l;
}

GammaSigmaTrace gamma_sigma_estimate(const ModeCatalog& cat, const BumpWindow& g,
                                     const std::vector<double>& lambdas,
                                     const ReferenceSpec& ref) {
    const SpectralMeasure spec = integrated_pullback_spectrum(cat, ref);
    const double norm_g2 = g.l1_norm_of_square().value;

    GammaSigmaTrace trace;
    trace.lambdas = lambdas;
    const double K4 = g.fourth_derivative_l1();
    const double L = cat.circumference();
    // Scaling identity: q(g_lambda)/||g_lambda^2|| depends on lambda only
    // through the rescaled thresholds zeta_p / lambda.
    for (double lambda : lambdas) {
        std::vector<double> thresholds;
        for (const auto& a : spec.atoms) thresholds.push_back(a.zeta / lambda);
        const auto tails = window_tail_integrals(g, thresholds);
        std::vector<double> uniq = thresholds;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        double val = 0.0, tol = 0.0;
        for (const auto& a : spec.atoms) {
            const std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(uniq.begin(), uniq.end(), a.zeta / lambda) - uniq.begin());
            val += a.weight * tails[idx].value;
            tol += a.weight * (tails[idx].quad_error + tails[idx].tail_bound);
        }
        // Mode-cutoff tail for the integrated measure (atom flux ~ L u du),
        // shrinking like lambda^7 under the rescaled thresholds.
        const double cutoff = L * K4 * K4 * std::pow(lambda, 7) /
                              (70.0 * M_PI * M_PI * std::pow(cat.omega_max(), 5));
        trace.values.push_back(val / (kTwoPiSq * norm_g2));
        trace.tols.push_back(tol / (kTwoPiSq * norm_g2) + cutoff / norm_g2);
    }
    trace.final_value = trace.values.empty() ? 0.0 : trace.values.back();
    trace.q_zero_plus = spec.mass_up_to(0.0) / kTwoPiSq;
    return trace;
}

QweiMargin verify_static_qwei(const StateSpec& state, const ModeCatalog& cat, const BumpWindow& g,
                              double x) {
    QweiMargin m;
    m.state_id = state.id();
    const CertifiedValue lhs = smeared_energy(state, cat, g, x);
    const SpectralMeasure spec = pullback_energy_spectrum(cat, x);
    const QBoundResult q = q_bound(spec, g, cat.omega_max());
    m.lhs = lhs.value;
    m.q = q.value;
    m.margin = lhs.value + q.value;
    const double state_tail = state_tail_bound(state, cat) * g.l1_norm_of_square().value;
    m.tol_num = lhs.error + q.quad_error + q.tail_bound + state_tail;
    m.pass = m.margin >= -m.tol_num;
    return m;
}

BochnerReport bochner_checks(const SpectralMeasure& spec, Rng& rng, int samples) {
    BochnerReport rep;
    rep.atoms_nonnegative = true;
    for (const auto& a : spec.atoms)
        if (a.weight < 0.0) rep.atoms_nonnegative = false;
    if (!rep.atoms_nonnegative)
        throw CertificationError("bochner_checks: negative atom (implementation bug)");

    // Positive-type samples Gamma* T0(conj(f) * f~) = sum_p w_p |f^(zeta_p)|^2 / 2pi
    // for modulated bump packets f = bump * cos(nu t + phase); the modulation
    // theorem reduces f^ to two centered-bump transforms.
    const double zeta_hi = spec.atoms.empty() ? 1.0 : std::abs(spec.atoms.back().zeta);
    const double nu_max = 0.5 * zeta_hi;
    rep.min_positive_type_sample = std::numeric_limits<double>::infinity();
    rep.positive_type_total = samples;
    if (!spec.atoms.empty()) {
        const BumpWindow packet(0.0, rng.uniform(0.5, 2.0));
        const FourierTable table(packet, zeta_hi + nu_max + 8.0 / packet.half_width());
        for (int s = 0; s < samples; ++s) {
            const double nu = rng.uniform(0.0, nu_max);
            double val = 0.0;
            for (const auto& a : spec.atoms) {
                const double fp = 0.5 * (table.centered(a.zeta + nu) + table.centered(a.zeta - nu));
                val += a.weight * fp * fp;
            }
            val /= 2.0 * M_PI;
            rep.min_positive_type_sample = std::min(rep.min_positive_type_sample, val);
            if (val >= 0.0) ++rep.positive_type_nonnegative;
        }
    } else {
        rep.positive_type_nonnegative = samples; // empty measure: vacuously positive
        rep.min_positive_type_sample = 0.0;
    }

    // Cumulative-mass growth fit over u in [10, 100] (log-log least squares).
    const double u_lo = 10.0, u_hi = 100.0;
    if (!spec.atoms.empty() && spec.atoms.back().zeta >= u_hi) {
        rep.growth_fit_valid = true;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int npts = 24;
        for (int i = 0; i < npts; ++i) {
            const double u = u_lo * std::pow(u_hi / u_lo, i / double(npts - 1));
            const double mass = spec.mass_up_to(u);
            const double lx = std::log(u), ly = std::log(std::max(mass, 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.growth_fit_exponent = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    }

    // Left-continuity and monotonicity of Q at every atom (+- 1e-9 probes).
    rep.left_continuity_ok = true;
    rep.monotone_ok = true;
    const double eps = 1e-9;
    double prevQ = -1.0;
    for (const auto& a : spec.atoms) {
        const double at = Q_of(spec, a.zeta);
        const double below = Q_of(spec, a.zeta - eps);
        const double above = Q_of(spec, a.zeta + eps);
        if (std::abs(at - below) > 1e-15 * (1.0 + std::abs(at))) rep.left_continuity_ok = false;
        if (above < at || at < below) rep.monotone_ok = false;
        if (at < prevQ) rep.monotone_ok = false;
        prevQ = at;
    }
    return rep;
}

} // namespace qei
