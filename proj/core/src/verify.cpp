#include "qei/verify.hpp"

#include "qei/energy_density.hpp"
#include "qei/errors.hpp"
#include "qei/fock.hpp"
#include "qei/microlocal.hpp"
#include "qei/mode_catalog.hpp"
#include "qei/passivity.hpp"
#include "qei/qwei.hpp"
#include "qei/rng.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace qei {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1
CriterionResult criterion_mode_ccr(const AcceptanceOptions&) {
    Timer timer;
    CriterionResult res{1, "mode/CCR foundation", false, "", 0.0};
    std::ostringstream det;
    bool ok = true;

    const ModeCatalog cyl = build_cylinder_catalog(kTwoPi, 1.0, 64);
    const double ortho_a = cyl.orthonormality_residual();
    const double symp_a = symplectic_check(cyl);
    ok &= ortho_a <= 1e-10 && symp_a <= 1e-12;
    det << "analytic: ortho " << fmt(ortho_a) << " (<=1e-10), symplectic " << fmt(symp_a)
        << " (<=1e-12)";

    const StaticGeometry geom = StaticGeometry::make_ultrastatic(kTwoPi, 1.0, 512);
    const ModeCatalog sl = build_sl_catalog(geom, 5);
    const double ortho_n = sl.orthonormality_residual();
    const double symp_n = symplectic_check(sl);
    double freq_err = 0.0;
    for (int j = 0; j < sl.size(); ++j)
        freq_err = std::max(freq_err, std::abs(sl.omega(j) - cyl.omega(j)) / cyl.omega(j));
    ok &= ortho_n <= 1e-6 && symp_n <= 1e-6 && freq_err <= 1e-4;
    det << "; numeric(G=512,J=5): ortho " << fmt(ortho_n) << ", symplectic " << fmt(symp_n)
        << " (<=1e-6), freq agreement " << fmt(freq_err) << " (<=1e-4)";

    // Weyl relations on a single-mode truncation with n_max = 16.
    const FockTruncation tr(cyl, 1, 16);
    Eigen::VectorXcd z(1), w(1);
    z[0] = std::complex<double>(0.25, 0.10);
    w[0] = std::complex<double>(-0.15, 0.20);
    const Eigen::MatrixXcd lhs = weyl_operator(tr, z) * weyl_operator(tr, w);
    const Eigen::MatrixXcd rhs =
        std::exp(std::complex<double>(0.0, -0.5 * symplectic_form(z, w))) *
        weyl_operator(tr, Eigen::VectorXcd(z + w));
    const double weyl_res = (lhs - rhs).cwiseAbs().maxCoeff();
    ok &= weyl_res <= 1e-6;
    det << "; Weyl relation (n_max=16) " << fmt(weyl_res) << " (<=1e-6)";

    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult criterion_q_step(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{2, "Q step function exact", false, "", 0.0};
    std::ostringstream det;
    bool ok = true;

    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    const SpectralMeasure spec = pullback_energy_spectrum(cat, 0.7);
    const double pi2 = M_PI * M_PI;
    const double q05 = Q_of(spec, 0.5);
    const double q15 = Q_of(spec, 1.5);
    const double q25 = Q_of(spec, 2.5);
    const double qq15 = integrated_Q(cat, 1.5);
    const double e15 = (1.0 + 2.0 * std::sqrt(2.0)) / (4.0 * pi2);
    const double e25 = (1.0 + 2.0 * std::sqrt(2.0) + 2.0 * std::sqrt(5.0)) / (4.0 * pi2);
    const double eq15 = (1.0 + 2.0 * std::sqrt(2.0)) / kTwoPi;
    ok &= std::abs(q05) <= 1e-12 && std::abs(q15 - e15) <= 1e-12 &&
          std::abs(q25 - e25) <= 1e-12 && std::abs(qq15 - eq15) <= 1e-12;
    det << "Q(0.5)=" << fmt(q05) << ", |Q(1.5)-cf|=" << fmt(std::abs(q15 - e15))
        << ", |Q(2.5)-cf|=" << fmt(std::abs(q25 - e25)) << ", |QQ(1.5)-cf|="
        << fmt(std::abs(qq15 - eq15)) << " (<=1e-12)";

    const SpectralMeasure fft = pullback_energy_spectrum_fft(cat, 0.7);
    double fft_err = 0.0;
    for (double u : {0.5, 1.5, 2.5}) fft_err = std::max(fft_err, std::abs(Q_of(fft, u) - Q_of(spec, u)));
    ok &= fft_err <= 1e-3;
    det << "; tapered-FFT oracle max err " << fmt(fft_err) << " (<=1e-3)";

    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 3
CriterionResult criterion_qwei_campaign(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{3, "static QWEI campaign", false, "", 0.0};
    std::ostringstream det;

    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);

    std::vector<StateSpec> states;
    for (double eps : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5}) states.push_back(StateSpec::pair(1, eps));
    for (double eps : {0.05, 0.15}) states.push_back(StateSpec::pair(3, eps));
    for (double r : {0.2, 0.5, 1.0}) states.push_back(StateSpec::squeezed({{1, r, 0.0}}));
    states.push_back(StateSpec::squeezed({{2, 0.4, 1.0}}));
    states.push_back(StateSpec::coherent({{0, {2.0, 0.0}}}));
    states.push_back(StateSpec::coherent({{1, {0.5, 0.5}}}));
    states.push_back(StateSpec::mixture(
        {0.5, 0.5}, {StateSpec::pair(1, 0.1), StateSpec::squeezed({{1, 0.5, 0.0}})}));
    states.push_back(StateSpec::mixture(
        {0.3, 0.7}, {StateSpec::coherent({{0, {1.0, 0.0}}}), StateSpec::pair(2, 0.2)}));

    const std::vector<BumpWindow> windows{BumpWindow(0.0, 0.7), BumpWindow(0.6, 0.7),
                                          BumpWindow(0.0, 1.2), BumpWindow(0.0, 2.5)};
    const std::vector<double> xs{0.0, 1.3, 2.9};

    int triples = 0, negatives = 0, failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_tol = 0.0;
    // Atoms' positions are shared across states and x; precompute per-window
    // tails once and assemble margins from the per-x weights.
    const SpectralMeasure probe_spec = pullback_energy_spectrum(cat, 0.0);
    std::vector<double> thresholds;
    for (const auto& a : probe_spec.atoms) thresholds.push_back(a.zeta);
    for (const auto& g : windows) {
        const auto tails = window_tail_integrals(g, thresholds);
        const double k4 = g.fourth_derivative_l1();
        const double cutoff_tail =
            k4 * k4 / (70.0 * M_PI * M_PI * std::pow(cat.omega_max(), 5));
        for (double x : xs) {
            const SpectralMeasure spec = pullback_energy_spectrum(cat, x);
            double qv = 0.0, qerr = 0.0, qtail = cutoff_tail;
            for (std::size_t p = 0; p < spec.atoms.size(); ++p) {
                qv += spec.atoms[p].weight * tails[p].value;
                qerr += spec.atoms[p].weight * tails[p].quad_error;
                qtail += spec.atoms[p].weight * tails[p].tail_bound;
            }
            const double pi2 = M_PI * M_PI;
            qv /= 2.0 * pi2;
            qerr /= 2.0 * pi2;
            qtail /= 2.0 * pi2;
            for (const auto& state : states) {
                const CertifiedValue lhs = smeared_energy(state, cat, g, x);
                const double margin = lhs.value + qv;
                const double tol = lhs.error + qerr + qtail;
                ++triples;
                if (lhs.value < 0.0) ++negatives;
                if (margin < -tol) ++failures;
                worst_margin = std::min(worst_margin, margin);
                worst_tol = std::max(worst_tol, tol);
            }
        }
    }

    const bool ok = triples >= opt.qwei_triples_min && failures == 0 &&
                    negatives >= opt.qwei_negative_min && worst_tol <= 1e-6;
    det << triples << " triples (>=" << opt.qwei_triples_min << "), " << negatives
        << " strictly negative (>=" << opt.qwei_negative_min << "), failures " << failures
        << ", worst margin " << fmt(worst_margin) << ", worst tol_num " << fmt(worst_tol)
        << " (<=1e-6)";
    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 4
CriterionResult criterion_quiescence(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{4, "quiescence of gapped ground reference", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    const BumpWindow g(0.0, 2.0);
    const GammaSigmaTrace trace = gamma_sigma_estimate(cat, g, default_lambda_sequence());
    const double support = spectrum_support_probe(cat, 0.4);
    const bool ok = trace.final_value <= 1e-8 && std::abs(support - cat.mass()) <= 1e-12 &&
                    trace.q_zero_plus == 0.0;
    std::ostringstream det;
    det << "gamma-sigma trace final " << fmt(trace.final_value) << " (<=1e-8), QQ(0+) "
        << fmt(trace.q_zero_plus) << ", support infimum " << fmt(support) << " (= m = "
        << fmt(cat.mass()) << ")";
    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 5
CriterionResult criterion_bochner(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{5, "Bochner / integrability", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    Rng rng(opt.seed + 5);
    const SpectralMeasure spec = pullback_energy_spectrum(cat, 1.1);
    const BochnerReport pointwise = bochner_checks(spec, rng);
    const SpectralMeasure integrated = integrated_pullback_spectrum(cat);
    Rng rng2(opt.seed + 6);
    const BochnerReport global = bochner_checks(integrated, rng2);

    const bool ok = pointwise.atoms_nonnegative && global.atoms_nonnegative &&
                    pointwise.positive_type_nonnegative == pointwise.positive_type_total &&
                    global.positive_type_nonnegative == global.positive_type_total &&
                    pointwise.left_continuity_ok && global.left_continuity_ok &&
                    pointwise.monotone_ok && global.monotone_ok && global.growth_fit_valid &&
                    std::abs(global.growth_fit_exponent - 2.0) <= 0.2;
    std::ostringstream det;
    det << "positive-type " << global.positive_type_nonnegative << "/"
        << global.positive_type_total << ", growth exponent "
        << fmt(global.growth_fit_exponent) << " (2.0 +- 0.2), left-continuity "
        << (global.left_continuity_ok ? "ok" : "FAIL") << ", monotone "
        << (global.monotone_ok ? "ok" : "FAIL");
    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 6
CriterionResult criterion_generator_identity(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{6, "generator identity", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    const FockTruncation tr(cat, 2, 8);
    Rng rng(opt.seed + 7);

    const int trials = opt.quick ? 10 : opt.generator_trials;
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(trial));
        // A: products of Weyl operators and a smeared displacement generator.
        Eigen::VectorXcd z1(2), z2(2);
        for (int k = 0; k < 2; ++k) {
            z1[k] = sub.complex_in_disk(0.6);
            z2[k] = sub.complex_in_disk(0.6);
        }
        Eigen::MatrixXcd A = weyl_operator(tr, z1);
        if (sub.uniform() < 0.5) A *= weyl_operator(tr, z2);
        if (sub.uniform() < 0.5) {
            const BumpWindow f(sub.uniform(-0.5, 0.5), sub.uniform(0.5, 1.5));
            A *= smear_operator_spectral(tr, displacement_generator(tr, z2), f);
        }
        // ell: vectors supported strictly below the top occupancy level.
        Eigen::VectorXcd left = Eigen::VectorXcd::Zero(tr.dim());
        Eigen::VectorXcd right = Eigen::VectorXcd::Zero(tr.dim());
        for (long i = 0; i < tr.dim(); ++i) {
            const auto occ = tr.occupations_of(i);
            bool low = true;
            for (int n : occ)
                if (n > tr.occupancy_cap() - 2) low = false;
            if (low) {
                left[i] = sub.complex_in_disk(1.0);
                right[i] = sub.complex_in_disk(1.0);
            }
        }
        left.normalize();
        right.normalize();
        const MatrixFunctional ell{left, right};
        const double t = sub.uniform(0.0, 1.0);
        worst = std::max(worst, generator_identity_residual(tr, A, ell, t));
    }
    res.pass = worst <= 1e-6;
    std::ostringstream det;
    det << trials << " randomized trials on (N=2, n_max=8), worst residual " << fmt(worst)
        << " (<=1e-6)";
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 7
CriterionResult criterion_passivity(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{7, "passivity of ground/KMS/mixtures", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    std::ostringstream det;
    bool ok = true;

    // Single-mode truncation deep enough for beta = 0.5 to satisfy the
    // truncation proxy.
    const FockTruncation tr(cat, 1, 28, 1 << 13);
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> rhos;
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    vac(0, 0) = 1.0;
    rhos.emplace_back("vacuum", vac);
    for (double beta : {0.5, 1.0, 2.0, 5.0})
        rhos.emplace_back("kms(" + fmt(beta) + ")", kms_state(tr, beta));
    Rng mixer(opt.seed + 11);
    for (int k = 0; k < 20; ++k) {
        const auto p = mixer.probability_vector(5);
        Eigen::MatrixXcd rho = p[0] * vac;
        int idx = 1;
        for (double beta : {0.5, 1.0, 2.0, 5.0}) rho += p[static_cast<std::size_t>(idx++)] * kms_state(tr, beta);
        rhos.emplace_back("mixture" + std::to_string(k), rho);
    }

    const int words = opt.quick ? 50 : opt.passivity_words;
    double worst = std::numeric_limits<double>::infinity();
    Rng rng(opt.seed + 12);
    int violations = 0;
    for (std::size_t s = 0; s < rhos.size(); ++s) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(s));
        for (int wtrial = 0; wtrial < words; ++wtrial) {
            Rng wrng = sub.substream(static_cast<std::uint64_t>(wtrial));
            const UnitaryWord word = random_unitary_word(tr, wrng);
            const double f = passivity_functional(rhos[s].second, tr, word.unitary());
            worst = std::min(worst, f);
            if (f < -1e-9) ++violations;
        }
    }
    ok &= violations == 0;
    det << rhos.size() << " states x " << words << " words, min functional " << fmt(worst)
        << " (>=-1e-9), violations " << violations;

    // Multi-mode spot check on the reference truncation.
    const FockTruncation tr2(cat, 2, 8);
    Eigen::MatrixXcd vac2 = Eigen::MatrixXcd::Zero(tr2.dim(), tr2.dim());
    vac2(0, 0) = 1.0;
    double worst2 = std::numeric_limits<double>::infinity();
    Rng rng2(opt.seed + 13);
    const int words2 = opt.quick ? 20 : 200;
    for (const auto& rho : {vac2, kms_state(tr2, 2.0), kms_state(tr2, 5.0)}) {
        for (int wtrial = 0; wtrial < words2; ++wtrial) {
            Rng wrng = rng2.substream(static_cast<std::uint64_t>(wtrial));
            const UnitaryWord word = random_unitary_word(tr2, wrng);
            worst2 = std::min(worst2, passivity_functional(rho, tr2, word.unitary()));
        }
    }
    ok &= worst2 >= -1e-9;
    det << "; multimode min " << fmt(worst2);

    // Displacement benchmark |alpha| = 0.5 on the omega = 1 mode -> 0.25.
    Eigen::VectorXcd z(1);
    z[0] = std::complex<double>(0.0, 0.5); // e^{iG(z)} displaces by alpha = i z
    const double bench = passivity_functional(vac, tr, weyl_operator(tr, z));
    ok &= std::abs(bench - 0.25) <= 1e-8;
    det << "; displacement benchmark " << fmt(bench) << " (0.25 +- 1e-8)";

    // Excited eigenstate witness: search must extract at least omega_1/2.
    Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    excited(1, 1) = 1.0;
    const PassiveSearchResult search = passive_search(excited, tr, 40);
    ok &= search.c_omega <= -0.5 * tr.omega(0);
    det << "; excited witness c_omega " << fmt(search.c_omega) << " (<= "
        << fmt(-0.5 * tr.omega(0)) << ")";

    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 8
CriterionResult criterion_work_identity(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{8, "work identity", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    const FockTruncation tr(cat, 2, 4);
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    vac(0, 0) = 1.0;
    const Eigen::MatrixXcd thermal = kms_state(tr, 2.0);
    Rng rng(opt.seed + 17);

    bool ok = true;
    std::ostringstream det;

    // H_t = 0 gives exactly zero both ways.
    {
        CyclicProcess idle;
        idle.T = 1.0;
        idle.envelope = BumpWindow(0.5, 0.4, 0.0);
        const WorkResult wr = work_done(vac, tr, idle);
        ok &= wr.integral_form == 0.0 && wr.algebraic_form == 0.0;
        det << "idle L = " << fmt(wr.integral_form);
    }

    const int processes = opt.quick ? 8 : opt.work_processes;
    double worst_disc = 0.0, worst_ground = 0.0;
    for (int k = 0; k < processes; ++k) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(k));
        CyclicProcess proc;
        proc.T = 3.0;
        const double width = sub.uniform(0.3, 1.0);
        const double center = sub.uniform(width, proc.T - width);
        proc.envelope = BumpWindow(center, width, sub.uniform(0.1, 0.7));
        const int kind = static_cast<int>(sub.uniform_index(3));
        if (kind == 0) {
            proc.coupling = CyclicProcess::Coupling::Position;
            proc.mode = static_cast<int>(sub.uniform_index(2));
        } else if (kind == 1) {
            proc.coupling = CyclicProcess::Coupling::Rotating;
            proc.mode = static_cast<int>(sub.uniform_index(2));
        } else {
            proc.coupling = CyclicProcess::Coupling::Displacement;
            Eigen::VectorXcd z(2);
            z[0] = sub.complex_in_disk(0.7);
            z[1] = sub.complex_in_disk(0.7);
            proc.amplitudes = z;
        }
        const Eigen::MatrixXcd& rho = (k % 2 == 0) ? vac : thermal;
        const WorkResult wr = work_done(rho, tr, proc, 1e-9);
        worst_disc = std::max(worst_disc, wr.discrepancy);
        if (k % 2 == 0) worst_ground = std::min(worst_ground, wr.algebraic_form);
    }
    ok &= worst_disc <= 1e-6 && worst_ground >= -1e-9;
    det << "; " << processes << " processes, worst |L_int - L_alg| " << fmt(worst_disc)
        << " (<=1e-6), min ground L " << fmt(worst_ground) << " (>=-1e-9)";

    // Tuned resonant pi-pulse on the two-level truncation extracts energy.
    {
        const FockTruncation two(cat, 1, 1);
        CyclicProcess pulse;
        pulse.T = 2.0;
        // Rotating coupling: alpha_t(H_t) = f(t)(a + a†); pulse area
        // integral f = pi/2 swaps the levels.
        pulse.coupling = CyclicProcess::Coupling::Rotating;
        pulse.mode = 0;
        // Scale the envelope so the pulse area \int f dt = pi/2 (level swap).
        const BumpWindow unit(1.0, 0.8, 1.0);
        const double integral = integrate_certified([&](double t) { return unit.value(t); },
                                                    unit.support_lo(), unit.support_hi(), 1e-12)
                                    .value;
        pulse.envelope = BumpWindow(1.0, 0.8, (M_PI / 2.0) / integral);
        Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(two.dim(), two.dim());
        one(1, 1) = 1.0;
        const WorkResult wr = work_done(one, two, pulse, 1e-9);
        ok &= wr.algebraic_form < -0.9 * two.omega(0);
        det << "; pi-pulse L " << fmt(wr.algebraic_form) << " (< " << fmt(-0.9 * two.omega(0))
            << ")";
    }

    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------- criterion 9
CriterionResult criterion_chain_bound(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{9, "Thm 2.3 proof-chain bound", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    const FockTruncation tr(cat, 2, 8);
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    vac(0, 0) = 1.0;
    const SpectralMeasure integrated = integrated_pullback_spectrum(cat);

    std::vector<double> bounds;
    for (double width : {0.7, 1.0, 1.6, 2.4, 3.5}) {
        const BumpWindow g(0.0, width);
        const QBoundResult q = q_bound(integrated, g, cat.omega_max());
        bounds.push_back(-q.value / g.l1_norm_of_square().value);
    }
    // Guard against a degenerate (empty) right-hand side.
    bool bounds_negative = true;
    for (double b : bounds) bounds_negative &= b < 0.0;

    Rng rng(opt.seed + 23);
    const int words = opt.quick ? 20 : opt.chain_words;
    double min_lhs = std::numeric_limits<double>::infinity();
    double min_slack = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int k = 0; k < words; ++k) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(k));
        const UnitaryWord word = random_unitary_word(tr, sub);
        const double lhs = passivity_functional(vac, tr, word.unitary());
        min_lhs = std::min(min_lhs, lhs);
        for (double b : bounds) {
            if (lhs < b) ++violations;
            min_slack = std::min(min_slack, lhs - b);
        }
    }
    res.pass = violations == 0 && bounds_negative && min_lhs >= -1e-9;
    std::ostringstream det;
    det << words << " words x " << bounds.size() << " windows, min lhs " << fmt(min_lhs)
        << ", min slack " << fmt(min_slack) << ", violations " << violations;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

// --------------------------------------------------------------- criterion 10
CriterionResult criterion_microlocal(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult res{10, "microlocal probe vs cone", false, "", 0.0};
    const ModeCatalog cat = build_cylinder_catalog(kTwoPi, 1.0, opt.J);
    std::ostringstream det;
    bool ok = true;

    // Direction fan: null candidates of both chiralities, reversed, unflipped,
    // timelike, spacelike, mismatched-second-slot, scale-mismatched, oblique.
    const std::vector<CovectorPair> fan{
        {1, 1, -1, -1},      {1, -1, -1, 1},     {-1, -1, 1, 1},     {-1, 1, 1, -1},
        {1, 1, 1, 1},        {1, -1, 1, -1},     {1, 0, -1, 0},      {0, 1, 0, -1},
        {1, 0.5, -1, -0.5},  {1, 1, -1, -0.6},   {0.5, 0.5, -1, -1}, {1, 1, -0.5, -0.5},
        {1, 0.9, -1, -0.9},  {1, 1, -1, 1},      {1, 1, 0.2, 0.2},   {0.3, 1, -0.3, -1},
        {1, -0.5, -1, 0.5},  {-1, 0, 1, 0},      {0, -1, 0, 1},      {1, 0.2, -1, -0.2},
        {2, 2, -1, -1},      {1, -1, -1, -1},    {1, 1, -2, -2},     {0.8, -0.8, -0.8, 0.8}};

    const std::vector<std::pair<SpacetimePoint, SpacetimePoint>> bases{
        {{0.0, 1.0}, {0.0, 1.0}},        // coincident
        {{0.7, 1.0 - 0.7}, {0.0, 1.0}},  // null-related (right-moving family)
        {{0.0, 3.0}, {0.0, 1.0}}};       // spacelike-separated

    int total = 0, matches = 0, contradictions = 0, inconclusive = 0;
    for (const auto& base : bases) {
        int base_match = 0;
        for (const auto& dir : fan) {
            DirectionProbe probe;
            probe.p0 = base.first;
            probe.q0 = base.second;
            probe.ell = dir;
            probe.lambdas = DirectionProbe::default_lambda_grid();
            const ProbeClass predicted = cone_classify(cat, probe.p0, probe.q0, dir);
            const DecayResult measured = windowed_decay(cat, Eigen::VectorXd(), probe);
            ++total;
            if (measured.classification == predicted) {
                ++matches;
                ++base_match;
            } else if (measured.classification == ProbeClass::Inconclusive) {
                ++inconclusive;
            } else {
                ++contradictions;
            }
        }
        ok &= base_match >= 22;
    }
    ok &= contradictions == 0;
    det << matches << "/" << total << " matches (>=22 per base pair), " << inconclusive
        << " inconclusive, " << contradictions << " contradictions (must be 0)";

    // Smooth-blob control: every direction regular with nu >= 6.
    double min_nu = std::numeric_limits<double>::infinity();
    for (const auto& dir : fan) {
        DirectionProbe probe;
        probe.p0 = {0.0, 1.0};
        probe.q0 = {0.0, 1.0};
        probe.ell = dir;
        probe.lambdas = DirectionProbe::default_lambda_grid();
        const DecayResult blob = windowed_decay_blob(probe, 0.5);
        min_nu = std::min(min_nu, blob.nu_fit);
        ok &= blob.classification == ProbeClass::Regular;
    }
    ok &= min_nu >= 6.0;
    det << "; blob control min nu " << fmt(min_nu) << " (>=6)";

    res.pass = ok;
    res.details = det.str();
    res.seconds = timer.seconds();
    return res;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream* progress) {
    std::vector<CriterionResult> results;
    const std::vector<CriterionResult (*)(const AcceptanceOptions&)> criteria{
        criterion_mode_ccr,      criterion_q_step,       criterion_qwei_campaign,
        criterion_quiescence,    criterion_bochner,      criterion_generator_identity,
        criterion_passivity,     criterion_work_identity, criterion_chain_bound,
        criterion_microlocal};
    for (auto* fn : criteria) {
        CriterionResult r = fn(opt);
        if (progress)
            (*progress) << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " ("
                        << r.name << "): " << r.details << " [" << fmt(r.seconds) << " s]\n";
        results.push_back(std::move(r));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace qei
