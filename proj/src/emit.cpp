#include "orbicensus/emit.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace orbicensus {

std::string format_real(double v, int precision) {
    if (precision < 6 || precision > 17) throw ConfigError("format_real: precision in [6, 17]");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write_file: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("atomic_write_file: write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw std::runtime_error("atomic_write_file: rename to " + path + " failed: " +
                                 ec.message());
}

ScopedFileLock::ScopedFileLock(const std::string& path) : lock_path_(path + ".lock") {
    std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
    if (!f)
        throw std::runtime_error("output " + path + " is locked by another run (" + lock_path_ +
                                 " exists)");
    std::fclose(f);
}

ScopedFileLock::~ScopedFileLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

std::string iso8601_utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["digests"] = digests;
    j["finished_at"] = finished_at;
    j["parameters"] = parameters; // std::map keeps keys sorted
    j["schema"] = "orbicensus/1";
    j["sieve_limit"] = sieve_limit;
    j["started_at"] = started_at;
    j["subcommand"] = subcommand;
    j["workers"] = workers;
    return j.dump(2) + "\n";
}

std::string census_records_csv(const std::vector<CensusRecord>& records, int precision) {
    std::ostringstream out;
    out << "disc_or_ideal_norms,num_factors,phi,covolume,cocompact,systole_trace,"
           "systole_length,embeddable_deltas\n";
    for (const auto& r : records) {
        out << r.descriptor << ',' << r.num_factors << ',' << r.phi << ','
            << format_real(r.covolume, precision) << ',' << (r.cocompact ? "true" : "false")
            << ',';
        if (r.systole_trace) out << *r.systole_trace;
        out << ',';
        if (r.systole_length) out << format_real(*r.systole_length, precision);
        out << ',';
        for (std::size_t i = 0; i < r.embeddable_deltas.size(); ++i) {
            if (i) out << ';';
            out << r.embeddable_deltas[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string density_curve_csv(const DensityCurve& curve, int precision) {
    std::ostringstream out;
    out << "x,count,total,ratio,fitted_c,fitted_a\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        double ratio = curve.totals[i] ? static_cast<double>(curve.counts[i]) /
                                             static_cast<double>(curve.totals[i])
                                       : 0.0;
        out << format_real(curve.grid[i], precision) << ',' << curve.counts[i] << ','
            << curve.totals[i] << ',' << format_real(ratio, precision) << ',';
        if (curve.fit) out << format_real(curve.fit->first, precision);
        out << ',';
        if (curve.fit) out << format_real(curve.fit->second, precision);
        out << '\n';
    }
    return out.str();
}

DensityCurve read_density_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    DensityCurve curve;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3) throw std::runtime_error("malformed CSV row in " + path);
        curve.grid.push_back(std::stod(cells[0]));
        curve.counts.push_back(std::stoull(cells[1]));
        curve.totals.push_back(std::stoull(cells[2]));
    }
    return curve;
}

std::string emit_csv_with_manifest(const std::string& csv, const std::string& path,
                                   RunManifest manifest) {
    std::string digest = fnv1a_hex(csv);
    atomic_write_file(path, csv);
    manifest.digests[fs::path(path).filename().string()] = digest;
    manifest.finished_at = iso8601_utc_now();
    atomic_write_file(path + ".manifest.json", manifest.to_json());
    return digest;
}

} // namespace orbicensus
