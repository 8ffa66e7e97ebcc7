#include "qei/report.hpp"

#include "qei/errors.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qei {

Reporter::Reporter(std::string out_dir) : out_dir_(std::move(out_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec) throw ConfigError("reporter: cannot create output directory " + out_dir_);
}

nlohmann::json Reporter::certified(double value, double quad_error, double tail_bound,
                                   double truncation_proxy) {
    nlohmann::json j;
    j["value"] = value;
    j["quad_error"] = quad_error;
    j["tail_bound"] = tail_bound;
    j["truncation_proxy"] = truncation_proxy;
    return j;
}

std::string Reporter::path(const std::string& filename) const {
    return (std::filesystem::path(out_dir_) / filename).string();
}

void Reporter::write_json(const std::string& filename) const {
    std::ofstream out(path(filename));
    if (!out) throw ConfigError("reporter: cannot write " + path(filename));
    out << root_.dump(2) << "\n";
}

void Reporter::write_metadata(const std::string& filename) const {
    std::ofstream out(path(filename));
    if (!out) throw ConfigError("reporter: cannot write " + path(filename));
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    nlohmann::json meta;
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&tt), "%Y-%m-%dT%H:%M:%SZ");
    meta["generated_at"] = ts.str();
    out << meta.dump(2) << "\n";
}

namespace {

void write_rows(std::ofstream& out, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
}

} // namespace

void Reporter::write_csv(const std::string& filename, const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows) const {
    std::ofstream out(path(filename));
    if (!out) throw ConfigError("reporter: cannot write " + path(filename));
    out << std::setprecision(17);
    write_rows(out, header);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
}

void Reporter::write_csv_text(const std::string& filename, const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) const {
    std::ofstream out(path(filename));
    if (!out) throw ConfigError("reporter: cannot write " + path(filename));
    write_rows(out, header);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
}

} // namespace qei
