#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbicensus {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Primes and least-prime-factor data up to a fixed limit. Immutable after
// construction and safe to share across threads.
class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint32_t> primes() const { return primes_; }
    std::size_t prime_count() const { return primes_.size(); }

    // n in [2, limit]
    std::uint32_t least_prime_factor(std::uint64_t n) const {
        if (n < 2 || n > limit_) throw std::out_of_range("PrimeTable: n out of range");
        return lpf_[n];
    }

    bool is_prime(std::uint64_t n) const {
        if (n < 2 || n > limit_) return false;
        return lpf_[n] == n;
    }

    // Binary cache: magic "OCPT", version byte, little-endian 64-bit limit,
    // bit-packed primality bitmap (bit n set iff n prime).
    void save(const std::filesystem::path& path) const;
    static PrimeTable load(const std::filesystem::path& path);

private:
    PrimeTable() = default;
    void sieve();

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> primes_;
    std::vector<std::uint32_t> lpf_;
};

} // namespace orbicensus
