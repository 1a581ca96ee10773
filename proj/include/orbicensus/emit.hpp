#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orbicensus/asymptotics_lab.hpp"
#include "orbicensus/quaternion_census.hpp"

namespace orbicensus {

// Shortest decimal that round-trips at the configured precision.
std::string format_real(double v, int precision = 15);

std::string fnv1a_hex(const std::string& bytes);

// Writes via temp file + rename in the same directory.
void atomic_write_file(const std::string& path, const std::string& content);

// Advisory lock: one census run per output path at a time.
class ScopedFileLock {
public:
    explicit ScopedFileLock(const std::string& path);
    ~ScopedFileLock();
    ScopedFileLock(const ScopedFileLock&) = delete;
    ScopedFileLock& operator=(const ScopedFileLock&) = delete;

private:
    std::string lock_path_;
};

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    std::uint64_t sieve_limit = 0;
    int workers = 1;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, std::string> digests; // file name -> hex digest

    std::string to_json() const; // schema "orbicensus/1", sorted keys
};

std::string iso8601_utc_now();

std::string census_records_csv(const std::vector<CensusRecord>& records, int precision = 15);
std::string density_curve_csv(const DensityCurve& curve, int precision = 15);
DensityCurve read_density_curve_csv(const std::string& path);

// Emits the CSV atomically, writes the sibling manifest, returns the digest.
std::string emit_csv_with_manifest(const std::string& csv, const std::string& path,
                                   RunManifest manifest);

} // namespace orbicensus
