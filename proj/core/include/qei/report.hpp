#pragma once

#include "qei/quadrature.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qei {

/// Deterministic report sink: JSON reports and CSV tables under an output
/// directory. Timestamps go to a separate metadata file so identical
/// config + seed produce byte-identical reports.
class Reporter {
public:
    explicit Reporter(std::string out_dir);

    nlohmann::json& root() { return root_; }

    /// Certified-number JSON object: {"value":, "quad_error":, "tail_bound":,
    /// "truncation_proxy":}. Reports never carry bare numbers.
    static nlohmann::json certified(double value, double quad_error = 0.0,
                                    double tail_bound = 0.0, double truncation_proxy = 0.0);

    void write_json(const std::string& filename) const;
    void write_metadata(const std::string& filename) const;
    void write_csv(const std::string& filename, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) const;
    void write_csv_text(const std::string& filename, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) const;

    std::string path(const std::string& filename) const;

private:
    std::string out_dir_;
    nlohmann::json root_;
};

} // namespace qei
