#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qei {

/// One acceptance criterion outcome. `details` carries the measured numbers
/// next to their thresholds so a failing line is self-explanatory.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

/// Knobs for the acceptance campaign. Defaults are the reference
/// configuration (L = 2 pi, m = 1, J = 256, truncation 2 x 8).
struct AcceptanceOptions {
    std::uint64_t seed = 20250811;
    int J = 256;
    int qwei_triples_min = 200;
    int qwei_negative_min = 20;
    int passivity_words = 1000;
    int generator_trials = 100;
    int work_processes = 50;
    int chain_words = 200;
    int chain_windows = 5;
    bool quick = false; ///< reduced trial counts for smoke runs
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream* progress = nullptr);

/// True iff every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

} // namespace qei
