#include "qei/config.hpp"

#include "qei/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace qei {

namespace {

using nlohmann::json;

std::complex<double> complex_from(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object() && j.contains("re"))
        return {j["re"].get<double>(), j.value("im", 0.0)};
    throw ConfigError(where + ": expected number, [re, im] or {re, im}");
}

StateSpec state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("states[]: each entry needs a \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "ground") return StateSpec::ground();
    if (kind == "kms") {
        if (!j.contains("beta")) throw ConfigError("states[]: kms needs \"beta\"");
        return StateSpec::kms(j["beta"].get<double>());
    }
    if (kind == "coherent") {
        std::vector<std::pair<int, std::complex<double>>> alphas;
        for (const auto& a : j.at("alphas"))
            alphas.emplace_back(a.at("mode").get<int>(),
                                complex_from(a.at("alpha"), "coherent alpha"));
        return StateSpec::coherent(std::move(alphas));
    }
    if (kind == "squeezed") {
        std::vector<std::tuple<int, double, double>> sq;
        for (const auto& s : j.at("squeezes"))
            sq.emplace_back(s.at("mode").get<int>(), s.at("r").get<double>(),
                            s.value("phi", 0.0));
        return StateSpec::squeezed(std::move(sq));
    }
    if (kind == "particle") return StateSpec::particle(j.at("mode").get<int>());
    if (kind == "pair")
        return StateSpec::pair(j.at("mode").get<int>(),
                               complex_from(j.at("epsilon"), "pair epsilon"));
    if (kind == "mixture") {
        std::vector<double> weights = j.at("weights").get<std::vector<double>>();
        std::vector<StateSpec> comps;
        for (const auto& c : j.at("components")) comps.push_back(state_from_json(c));
        return StateSpec::mixture(std::move(weights), std::move(comps));
    }
    throw ConfigError("states[]: unknown kind \"" + kind + "\"");
}

} // namespace

void RunConfig::validate() const {
    if (!(L > 0.0)) throw ConfigError("config.L must be > 0");
    if (!(m > 0.0)) throw ConfigError("config.m must be > 0");
    if (J < 1) throw ConfigError("config.J must be >= 1");
    if (grid < 2) throw ConfigError("config.grid must be >= 2");
    if (backend != "analytic" && backend != "sl")
        throw ConfigError("config.backend must be \"analytic\" or \"sl\"");
    if (backend == "sl" && grid < 8 * J)
        throw ConfigError("config.grid must satisfy grid >= 8 J for the sl backend");
    if (trunc_modes < 1 || trunc_modes > J)
        throw ConfigError("config.truncation.modes must satisfy 1 <= modes <= J");
    if (n_max < 1) throw ConfigError("config.truncation.n_max must be >= 1");
    for (const auto& s : states) s.validate(J);
    for (const auto& w : windows)
        if (!(w.width > 0.0) || !(w.amplitude > 0.0))
            throw ConfigError("config.windows[]: width and amplitude must be > 0");
    for (const auto& p : processes) {
        if (!(p.T > 0.0) || !(p.width > 0.0))
            throw ConfigError("config.processes[]: T and width must be > 0");
        if (p.center - p.width < 0.0 || p.center + p.width > p.T)
            throw ConfigError("config.processes[]: envelope support must lie inside [0, T]");
    }
    if (!(margin_tol > 0.0) || !(passivity_tol > 0.0) || !(work_tol > 0.0))
        throw ConfigError("config.tolerances must all be > 0");
    if (threads < 1) throw ConfigError("config.threads must be >= 1");
    for (const auto& c : campaigns)
        if (c != "modes" && c != "twopoint" && c != "energy" && c != "qwei" &&
            c != "passivity" && c != "microlocal" && c != "verify-all")
            throw ConfigError("config.campaigns[]: unknown campaign \"" + c + "\"");
}

ModeCatalog RunConfig::build_catalog() const {
    if (backend == "analytic") {
        if (!g00.empty() || !h.empty())
            throw ConfigError("config: analytic backend requires ultrastatic geometry");
        return build_cylinder_catalog(L, m, J, grid);
    }
    StaticGeometry geom;
    if (g00.empty() && h.empty()) {
        geom = StaticGeometry::make_ultrastatic(L, m, grid);
    } else {
        std::vector<double> gg = g00.empty() ? std::vector<double>(grid, 1.0) : g00;
        std::vector<double> hh = h.empty() ? std::vector<double>(grid, 1.0) : h;
        if (static_cast<int>(gg.size()) != grid || static_cast<int>(hh.size()) != grid)
            throw ConfigError("config: g00/h sample counts must equal grid");
        geom = StaticGeometry::make(L, m, std::move(gg), std::move(hh));
    }
    return build_sl_catalog(geom, J);
}

std::vector<BumpWindow> RunConfig::build_windows() const {
    std::vector<BumpWindow> out;
    for (const auto& w : windows) out.emplace_back(w.center, w.width, w.amplitude);
    return out;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    RunConfig cfg;
    try {
        if (j.contains("geometry")) {
            const auto& g = j["geometry"];
            cfg.L = g.value("L", cfg.L);
            cfg.m = g.value("m", cfg.m);
            cfg.grid = g.value("grid", cfg.grid);
            if (g.contains("g00") && g["g00"].is_array())
                cfg.g00 = g["g00"].get<std::vector<double>>();
            if (g.contains("h") && g["h"].is_array())
                cfg.h = g["h"].get<std::vector<double>>();
        }
        if (j.contains("catalog")) {
            cfg.J = j["catalog"].value("J", cfg.J);
            cfg.backend = j["catalog"].value("backend", cfg.backend);
        }
        if (j.contains("truncation")) {
            cfg.trunc_modes = j["truncation"].value("modes", cfg.trunc_modes);
            cfg.n_max = j["truncation"].value("n_max", cfg.n_max);
            cfg.dim_cap = j["truncation"].value("dim_cap", cfg.dim_cap);
        }
        if (j.contains("states"))
            for (const auto& s : j["states"]) cfg.states.push_back(state_from_json(s));
        if (j.contains("windows"))
            for (const auto& w : j["windows"]) {
                RunConfig::WindowParams wp;
                wp.center = w.value("center", 0.0);
                wp.width = w.at("width").get<double>();
                wp.amplitude = w.value("amplitude", 1.0);
                cfg.windows.push_back(wp);
            }
        if (j.contains("processes"))
            for (const auto& p : j["processes"]) {
                RunConfig::ProcessParams pp;
                pp.T = p.value("T", pp.T);
                if (p.contains("envelope")) {
                    const auto& e = p["envelope"];
                    pp.center = e.value("center", pp.center);
                    pp.width = e.value("width", pp.width);
                    pp.amplitude = e.value("amplitude", pp.amplitude);
                }
                pp.coupling = p.value("coupling", pp.coupling);
                pp.mode = p.value("mode", pp.mode);
                if (p.contains("amplitudes"))
                    for (const auto& a : p["amplitudes"])
                        pp.amplitudes.push_back(complex_from(a, "process amplitude"));
                cfg.processes.push_back(std::move(pp));
            }
        if (j.contains("campaigns"))
            cfg.campaigns = j["campaigns"].get<std::vector<std::string>>();
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            cfg.margin_tol = t.value("qwei_margin", cfg.margin_tol);
            cfg.passivity_tol = t.value("passivity", cfg.passivity_tol);
            cfg.work_tol = t.value("work_identity", cfg.work_tol);
        }
        cfg.probe_x = j.value("probe_x", cfg.probe_x);
        cfg.fan = j.value("fan", cfg.fan);
        cfg.qwei_triples = j.value("qwei_triples", cfg.qwei_triples);
        cfg.passivity_words = j.value("passivity_words", cfg.passivity_words);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

} // namespace qei
