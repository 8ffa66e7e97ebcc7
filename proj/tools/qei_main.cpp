// qei — command-line driver for the quantum energy inequality laboratory.
//
// Subcommands: modes, twopoint, energy, qwei, passivity, microlocal,
// verify-all. Exit codes: 0 all checks pass, 1 physics-inequality violation
// beyond tolerance, 2 configuration/IO error, 3 numerical certification
// failure.

#include "qei/config.hpp"
#include "qei/energy_density.hpp"
#include "qei/errors.hpp"
#include "qei/fock.hpp"
#include "qei/microlocal.hpp"
#include "qei/passivity.hpp"
#include "qei/qwei.hpp"
#include "qei/report.hpp"
#include "qei/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using namespace qei;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig{} : RunConfig::from_file(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads > 0) cfg.threads = args.threads;
    if (const char* env = std::getenv("QEI_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0 && args.threads == 0) cfg.threads = t;
    }
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration JSON");
    cmd->add_option("--out-dir", args.out_dir, "Output directory (overrides config)");
    auto* seed = cmd->add_option("--seed", args.seed, "PRNG seed (overrides config)");
    cmd->callback([seed, &args]() { args.seed_set = seed->count() > 0; });
    cmd->add_option("--threads", args.threads, "Worker threads (QEI_THREADS also honored)");
}

int run_modes(const RunConfig& cfg) {
    const ModeCatalog cat = cfg.build_catalog();
    Reporter rep(cfg.out_dir);
    const double ortho = cat.orthonormality_residual();
    const double symp = symplectic_check(cat);
    const double eig = cat.eigen_residual();

    rep.root()["catalog"] = {{"provenance", cat.provenance()},
                             {"J", cat.size()},
                             {"L", cat.circumference()},
                             {"m", cat.mass()},
                             {"grid", cat.geometry().grid_size()}};
    rep.root()["residuals"] = {{"orthonormality", Reporter::certified(ortho)},
                               {"symplectic", Reporter::certified(symp)},
                               {"eigen", Reporter::certified(eig)}};
    rep.root()["spectral_gap_ok"] = cat.spectral_gap_ok();
    rep.root()["tail_bound_unit_window"] = Reporter::certified(0.0, 0.0, cat.tail_bound(1.0));

    std::vector<std::vector<double>> rows;
    const int G = cat.geometry().grid_size();
    for (int j = 0; j < cat.size(); ++j) {
        std::vector<double> row{static_cast<double>(j),
                                static_cast<double>(cat.mode(j).wavenumber), cat.omega(j)};
        for (int i = 0; i < G; ++i) row.push_back(cat.mode(j).samples[i].real());
        for (int i = 0; i < G; ++i) row.push_back(cat.mode(j).samples[i].imag());
        rows.push_back(std::move(row));
    }
    std::vector<std::string> header{"j", "n", "omega"};
    for (int i = 0; i < G; ++i) header.push_back("re_u" + std::to_string(i));
    for (int i = 0; i < G; ++i) header.push_back("im_u" + std::to_string(i));
    rep.write_csv("catalog.csv", header, rows);
    rep.write_json("modes_report.json");
    rep.write_metadata("modes_metadata.json");

    const double tol = cat.backend() == CatalogBackend::AnalyticCylinder ? 1e-10 : 1e-6;
    if (ortho > tol || !cat.spectral_gap_ok())
        throw CertificationError("modes: catalog invariants violated");
    return 0;
}

int run_twopoint(const RunConfig& cfg) {
    const ModeCatalog cat = cfg.build_catalog();
    Reporter rep(cfg.out_dir);
    std::vector<StateSpec> states = cfg.states;
    if (states.empty()) states.push_back(StateSpec::ground());

    rep.root()["states"] = nlohmann::json::array();
    for (std::size_t k = 0; k < states.size(); ++k) {
        std::vector<std::vector<double>> rows;
        const SpacetimePoint q{0.0, cfg.probe_x};
        for (int it = 0; it <= 32; ++it) {
            const double t = 2.0 * it / 32.0;
            for (int ix = 0; ix <= 32; ++ix) {
                const double x = cat.circumference() * ix / 33.0;
                const auto w2 = two_point(states[k], cat, {t, x}, q);
                rows.push_back({t, x, q.t, q.x, w2.real(), w2.imag()});
            }
        }
        const std::string csv = "twopoint_" + std::to_string(k) + ".csv";
        rep.write_csv(csv, {"t", "x", "tp", "xp", "re", "im"}, rows);
        // Hermiticity spot check at a fixed probe pair.
        const SpacetimePoint a{0.3, 1.0}, b{0.9, 2.0};
        const double herm =
            std::abs(two_point(states[k], cat, a, b) - std::conj(two_point(states[k], cat, b, a)));
        rep.root()["states"].push_back({{"id", states[k].id()},
                                        {"csv", csv},
                                        {"hermiticity_residual", Reporter::certified(herm)}});
        if (herm > 1e-10) throw CertificationError("twopoint: hermiticity residual > 1e-10");
    }
    rep.write_json("twopoint_report.json");
    rep.write_metadata("twopoint_metadata.json");
    return 0;
}

int run_energy(const RunConfig& cfg) {
    const ModeCatalog cat = cfg.build_catalog();
    Reporter rep(cfg.out_dir);
    std::vector<StateSpec> states = cfg.states;
    if (states.empty()) states.push_back(StateSpec::pair(1, 0.2));
    const auto windows = cfg.build_windows();

    rep.root()["states"] = nlohmann::json::array();
    for (std::size_t k = 0; k < states.size(); ++k) {
        std::vector<std::vector<double>> rows;
        for (int it = 0; it <= 64; ++it) {
            const double t = 4.0 * it / 64.0;
            for (int ix = 0; ix <= 64; ++ix) {
                const double x = cat.circumference() * ix / 65.0;
                rows.push_back({t, x, energy_density(states[k], cat, t, x)});
            }
        }
        const std::string csv = "energy_" + std::to_string(k) + ".csv";
        rep.write_csv(csv, {"t", "x", "rho"}, rows);

        nlohmann::json entry;
        entry["id"] = states[k].id();
        entry["csv"] = csv;
        const double tail = state_tail_bound(states[k], cat);
        entry["integrated_energy"] = nlohmann::json::array();
        double e0 = 0.0;
        for (double t : {0.0, 0.3, 0.7}) {
            const double e = integrated_energy(states[k], cat, t);
            if (t == 0.0) e0 = e;
            entry["integrated_energy"].push_back(Reporter::certified(e, 0.0, tail));
            if (std::abs(e - e0) > 1e-9 * (1.0 + std::abs(e0)))
                throw CertificationError("energy: integrated energy not conserved");
        }
        entry["smeared"] = nlohmann::json::array();
        for (const auto& g : windows) {
            const CertifiedValue sv = smeared_energy(states[k], cat, g, cfg.probe_x);
            entry["smeared"].push_back(
                {{"window", {{"center", g.center()}, {"width", g.half_width()}}},
                 {"x", cfg.probe_x},
                 {"value", Reporter::certified(sv.value, sv.error, tail)}});
        }
        rep.root()["states"].push_back(std::move(entry));
    }
    rep.write_json("energy_report.json");
    rep.write_metadata("energy_metadata.json");
    return 0;
}

int run_qwei(const RunConfig& cfg) {
    const ModeCatalog cat = cfg.build_catalog();
    Reporter rep(cfg.out_dir);
    std::vector<StateSpec> states = cfg.states;
    if (states.empty()) {
        states.push_back(StateSpec::pair(1, 0.2));
        states.push_back(StateSpec::squeezed({{1, 0.5, 0.0}}));
        states.push_back(StateSpec::coherent({{0, {1.0, 0.0}}}));
    }
    std::vector<BumpWindow> windows = cfg.build_windows();
    if (windows.empty()) windows = {BumpWindow(0.0, 0.7), BumpWindow(0.0, 1.5)};

    rep.root()["reference"] = "ground";
    rep.root()["catalog"] = {{"provenance", cat.provenance()}, {"J", cat.size()}};
    rep.root()["seed"] = cfg.seed;
    rep.root()["windows"] = nlohmann::json::array();
    for (const auto& g : windows)
        rep.root()["windows"].push_back({{"center", g.center()}, {"width", g.half_width()}});
    rep.root()["states"] = nlohmann::json::array();
    for (const auto& s : states) rep.root()["states"].push_back(s.id());

    // Q / QQ tabulation.
    {
        const SpectralMeasure spec = pullback_energy_spectrum(cat, cfg.probe_x);
        const SpectralMeasure integ = integrated_pullback_spectrum(cat);
        std::vector<std::vector<double>> rows;
        const double u_hi = std::min(20.0, cat.omega_max());
        for (int i = 0; i <= 400; ++i) {
            const double u = u_hi * i / 400.0;
            rows.push_back({u, Q_of(spec, u), Q_of(integ, u)});
        }
        rep.write_csv("q_of_u.csv", {"u", "Q", "QQ"}, rows);
    }

    // Margin campaign.
    bool violation = false;
    std::vector<std::vector<std::string>> margin_rows;
    rep.root()["margins"] = nlohmann::json::array();
    for (const auto& g : windows) {
        for (const auto& state : states) {
            const QweiMargin m = verify_static_qwei(state, cat, g, cfg.probe_x);
            violation |= !m.pass;
            rep.root()["margins"].push_back(
                {{"state", m.state_id},
                 {"window", {{"center", g.center()}, {"width", g.half_width()}}},
                 {"x", cfg.probe_x},
                 {"lhs", Reporter::certified(m.lhs)},
                 {"q", Reporter::certified(m.q)},
                 {"margin", Reporter::certified(m.margin, m.tol_num)},
                 {"pass", m.pass}});
            margin_rows.push_back({m.state_id, std::to_string(g.half_width()),
                                   std::to_string(cfg.probe_x), std::to_string(m.lhs),
                                   std::to_string(m.q), std::to_string(m.margin)});
        }
    }
    rep.write_csv_text("margins.csv", {"state", "window", "x", "lhs", "q", "margin"},
                       margin_rows);

    // Limiting-QWEI trace.
    const GammaSigmaTrace trace =
        gamma_sigma_estimate(cat, windows.front(), default_lambda_sequence());
    rep.root()["gamma_sigma"] = {{"bound_q_zero_plus", trace.q_zero_plus},
                                 {"final", Reporter::certified(trace.final_value, 0.0,
                                                               trace.tols.back())},
                                 {"trace", nlohmann::json::array()}};
    for (std::size_t i = 0; i < trace.lambdas.size(); ++i)
        rep.root()["gamma_sigma"]["trace"].push_back(
            {{"lambda", trace.lambdas[i]},
             {"value", Reporter::certified(trace.values[i], 0.0, trace.tols[i])}});

    rep.write_json("qwei_report.json");
    rep.write_metadata("qwei_metadata.json");
    return violation ? 1 : 0;
}

CyclicProcess build_process(const RunConfig::ProcessParams& pp) {
    CyclicProcess proc;
    proc.T = pp.T;
    proc.envelope = BumpWindow(pp.center, pp.width, pp.amplitude);
    proc.mode = pp.mode;
    if (pp.coupling == "position") proc.coupling = CyclicProcess::Coupling::Position;
    else if (pp.coupling == "number") proc.coupling = CyclicProcess::Coupling::Number;
    else if (pp.coupling == "rotating") proc.coupling = CyclicProcess::Coupling::Rotating;
    else if (pp.coupling == "displacement") {
        proc.coupling = CyclicProcess::Coupling::Displacement;
        proc.amplitudes.resize(static_cast<long>(pp.amplitudes.size()));
        for (std::size_t i = 0; i < pp.amplitudes.size(); ++i)
            proc.amplitudes[static_cast<long>(i)] = pp.amplitudes[i];
    } else
        throw ConfigError("process: unknown coupling \"" + pp.coupling + "\"");
    return proc;
}

int run_passivity(const RunConfig& cfg) {
    const ModeCatalog cat = cfg.build_catalog();
    const FockTruncation tr(cat, cfg.trunc_modes, cfg.n_max, cfg.dim_cap);
    Reporter rep(cfg.out_dir);
    rep.root()["seed"] = cfg.seed;
    rep.root()["truncation"] = {{"modes", tr.mode_count()},
                                {"n_max", tr.occupancy_cap()},
                                {"dim", tr.dim()}};

    // Passive family: vacuum plus every KMS state named in the config.
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> rhos;
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(tr.dim(), tr.dim());
    vac(0, 0) = 1.0;
    rhos.emplace_back("vacuum", vac);
    for (const auto& s : cfg.states)
        if (s.kind == StateSpec::Kind::Kms)
            rhos.emplace_back(s.id(), kms_state(tr, s.beta));

    Rng rng(cfg.seed);
    bool violation = false;
    rep.root()["campaign"] = nlohmann::json::array();
    for (std::size_t s = 0; s < rhos.size(); ++s) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(s));
        double worst = std::numeric_limits<double>::infinity();
        for (int w = 0; w < cfg.passivity_words; ++w) {
            Rng wrng = sub.substream(static_cast<std::uint64_t>(w));
            const UnitaryWord word = random_unitary_word(tr, wrng);
            worst = std::min(worst, passivity_functional(rhos[s].second, tr, word.unitary()));
        }
        const bool pass = worst >= -cfg.passivity_tol;
        violation |= !pass;
        rep.root()["campaign"].push_back({{"state", rhos[s].first},
                                          {"words", cfg.passivity_words},
                                          {"min_functional", Reporter::certified(worst)},
                                          {"pass", pass}});
    }

    // Work identity on the configured processes.
    rep.root()["processes"] = nlohmann::json::array();
    for (const auto& pp : cfg.processes) {
        const CyclicProcess proc = build_process(pp);
        const WorkResult wr = work_done(vac, tr, proc, 1e-9);
        rep.root()["processes"].push_back(
            {{"T", pp.T},
             {"coupling", pp.coupling},
             {"L_integral", Reporter::certified(wr.integral_form, wr.evolution.halving_difference)},
             {"L_algebraic", Reporter::certified(wr.algebraic_form)},
             {"discrepancy", Reporter::certified(wr.discrepancy)}});
        violation |= wr.algebraic_form < -cfg.passivity_tol;
    }

    rep.write_json("passivity_report.json");
    rep.write_metadata("passivity_metadata.json");
    return violation ? 1 : 0;
}

int run_microlocal(const RunConfig& cfg, const std::string& state_name, int fan_count) {
    const ModeCatalog cat = cfg.build_catalog();
    Reporter rep(cfg.out_dir);

    Eigen::VectorXd occ;
    if (state_name == "kms") {
        occ.resize(cat.size());
        for (int j = 0; j < cat.size(); ++j) occ[j] = 1.0 / std::expm1(cat.omega(j));
    } else if (state_name != "ground") {
        throw ConfigError("microlocal: --state must be ground or kms");
    }

    const SpacetimePoint base{0.0, cfg.probe_x};
    std::vector<std::vector<double>> probe_rows;
    std::vector<std::vector<std::string>> summary_rows;
    for (int i = 0; i < fan_count; ++i) {
        const double theta = M_PI * (i + 0.5) / fan_count;
        CovectorPair ell{std::cos(theta), std::sin(theta), -std::cos(theta), -std::sin(theta)};
        DirectionProbe probe;
        probe.p0 = base;
        probe.q0 = base;
        probe.ell = ell;
        probe.lambdas = DirectionProbe::default_lambda_grid();
        const ProbeClass predicted = cone_classify(cat, base, base, ell);
        const DecayResult r = windowed_decay(cat, occ, probe);
        for (std::size_t k = 0; k < r.lambdas.size(); ++k)
            probe_rows.push_back({cfg.probe_x, ell.zeta, ell.xi, ell.zetap, ell.xip,
                                  r.lambdas[k], r.magnitudes[k]});
        summary_rows.push_back({std::to_string(theta), std::to_string(r.nu_fit),
                                to_string(r.classification), to_string(predicted)});
    }
    rep.write_csv("probes.csv", {"base", "zeta", "xi", "zetap", "xip", "lambda", "magnitude"},
                  probe_rows);
    rep.write_csv_text("probes_summary.csv", {"direction", "nu_fit", "class", "predicted"},
                       summary_rows);
    rep.root()["support_infimum"] = Reporter::certified(
        spectrum_support_probe(cat, cfg.probe_x,
                               state_name == "kms" ? ReferenceSpec::kms(1.0)
                                                   : ReferenceSpec::ground()));
    rep.write_json("microlocal_report.json");
    rep.write_metadata("microlocal_metadata.json");
    return 0;
}

int run_verify_all(const RunConfig& cfg, bool quick) {
    AcceptanceOptions opt;
    opt.seed = cfg.seed;
    opt.J = cfg.J;
    opt.quick = quick;
    const auto results = run_acceptance(opt, &std::cout);
    Reporter rep(cfg.out_dir);
    rep.root()["criteria"] = nlohmann::json::array();
    for (const auto& r : results)
        rep.root()["criteria"].push_back(
            {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    rep.root()["all_passed"] = all_passed(results);
    rep.write_json("verify_report.json");
    rep.write_metadata("verify_metadata.json");
    return all_passed(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qei: free scalar QFT on the cylinder — quantum energy inequalities, "
                 "passivity and microlocal probes"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string microlocal_state = "ground";
    int fan_count = 24;
    bool quick = false;

    auto* cmd_modes = app.add_subcommand("modes", "Build and validate the mode catalog");
    add_common(cmd_modes, args);
    auto* cmd_twopoint = app.add_subcommand("twopoint", "Tabulate two-point functions");
    add_common(cmd_twopoint, args);
    auto* cmd_energy = app.add_subcommand("energy", "Energy densities and smeared energies");
    add_common(cmd_energy, args);
    auto* cmd_qwei = app.add_subcommand("qwei", "Static QWEI campaign and Q tabulations");
    add_common(cmd_qwei, args);
    auto* cmd_passivity = app.add_subcommand("passivity", "Passivity and work-identity campaign");
    add_common(cmd_passivity, args);
    auto* cmd_micro = app.add_subcommand("microlocal", "Wavefront decay probes");
    add_common(cmd_micro, args);
    cmd_micro->add_option("--state", microlocal_state, "Reference state: ground | kms");
    cmd_micro->add_option("--fan", fan_count, "Number of fan directions");
    auto* cmd_verify = app.add_subcommand("verify-all", "Run the acceptance criteria");
    add_common(cmd_verify, args);
    cmd_verify->add_flag("--quick", quick, "Reduced trial counts (smoke run)");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(args);
        if (cmd_modes->parsed()) return run_modes(cfg);
        if (cmd_twopoint->parsed()) return run_twopoint(cfg);
        if (cmd_energy->parsed()) return run_energy(cfg);
        if (cmd_qwei->parsed()) return run_qwei(cfg);
        if (cmd_passivity->parsed()) return run_passivity(cfg);
        if (cmd_micro->parsed()) return run_microlocal(cfg, microlocal_state, fan_count);
        if (cmd_verify->parsed()) return run_verify_all(cfg, quick);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PhysicsViolation& e) {
        std::cerr << "physics violation: " << e.what() << "\n";
        return 1;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
