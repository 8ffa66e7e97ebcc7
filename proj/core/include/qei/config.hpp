#pragma once

#include "qei/mode_catalog.hpp"
#include "qei/states.hpp"
#include "qei/window.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qei {

/// Parsed run configuration (JSON). Field-level validation failures throw
/// ConfigError with the offending path.
struct RunConfig {
    // geometry
    double L = 2.0 * 3.14159265358979323846;
    double m = 1.0;
    int grid = 512;
    std::vector<double> g00, h; ///< empty = ultrastatic
    // catalog
    int J = 256;
    std::string backend = "analytic"; ///< "analytic" | "sl"
    // truncation
    int trunc_modes = 2;
    int n_max = 8;
    long dim_cap = 4096;
    // campaign inputs
    std::vector<StateSpec> states;
    struct WindowParams {
        double center = 0.0, width = 1.0, amplitude = 1.0;
    };
    std::vector<WindowParams> windows;
    struct ProcessParams {
        double T = 2.0;
        double center = 1.0, width = 0.5, amplitude = 0.3;
        std::string coupling = "position"; ///< position|number|rotating|displacement
        int mode = 0;
        std::vector<std::complex<double>> amplitudes; ///< displacement coupling
    };
    std::vector<ProcessParams> processes;
    std::vector<std::string> campaigns;
    double probe_x = 0.0;
    int fan = 24;
    int qwei_triples = 200;
    int passivity_words = 1000;
    // tolerances (all > 0)
    double margin_tol = 1e-6;
    double passivity_tol = 1e-9;
    double work_tol = 1e-6;
    // reproducibility and output
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    void validate() const;
    ModeCatalog build_catalog() const;
    std::vector<BumpWindow> build_windows() const;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

} // namespace qei
