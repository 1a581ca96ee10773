#include "orbicensus/prime_table.hpp"

#include <cstdio>
#include <cstring>

namespace orbicensus {

namespace {
constexpr std::uint64_t kMaxDirectLimit = (1ull << 31) - 1;
}

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2) throw ConfigError("PrimeTable: limit must be >= 2");
    if (limit > (1ull << 40)) throw ConfigError("PrimeTable: limit exceeds 2^40");
    if (limit > kMaxDirectLimit)
        throw ConfigError("PrimeTable: limits above 2^31 require segmented sieving; "
                          "use scan_factored over ranges instead");
    sieve();
}

void PrimeTable::sieve() {
    lpf_.assign(limit_ + 1, 0);
    for (std::uint64_t i = 2; i <= limit_; ++i) {
        if (lpf_[i] == 0) {
            lpf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= limit_; j += i)
                if (lpf_[j] == 0) lpf_[j] = static_cast<std::uint32_t>(i);
        }
    }
}

void PrimeTable::save(const std::filesystem::path& path) const {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw std::runtime_error("PrimeTable::save: cannot open " + path.string());
    const char magic[4] = {'O', 'C', 'P', 'T'};
    std::fwrite(magic, 1, 4, f);
    const unsigned char version = 1;
    std::fwrite(&version, 1, 1, f);
    unsigned char lim[8];
    for (int i = 0; i < 8; ++i) lim[i] = static_cast<unsigned char>((limit_ >> (8 * i)) & 0xff);
    std::fwrite(lim, 1, 8, f);
    std::vector<unsigned char> bitmap((limit_ + 8) / 8, 0);
    for (std::uint32_t p : primes_) bitmap[p >> 3] |= static_cast<unsigned char>(1u << (p & 7));
    std::fwrite(bitmap.data(), 1, bitmap.size(), f);
    std::fclose(f);
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw std::runtime_error("PrimeTable::load: cannot open " + path.string());
    char magic[4];
    unsigned char version;
    unsigned char lim[8];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "OCPT", 4) != 0 ||
        std::fread(&version, 1, 1, f) != 1 || version != 1 || std::fread(lim, 1, 8, f) != 8) {
        std::fclose(f);
        throw std::runtime_error("PrimeTable::load: bad header in " + path.string());
    }
    std::uint64_t limit = 0;
    for (int i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(lim[i]) << (8 * i);
    std::vector<unsigned char> bitmap((limit + 8) / 8);
    if (std::fread(bitmap.data(), 1, bitmap.size(), f) != bitmap.size()) {
        std::fclose(f);
        throw std::runtime_error("PrimeTable::load: truncated bitmap in " + path.string());
    }
    std::fclose(f);

    PrimeTable t;
    t.limit_ = limit;
    t.lpf_.assign(limit + 1, 0);
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (bitmap[n >> 3] & (1u << (n & 7))) {
            t.lpf_[n] = static_cast<std::uint32_t>(n);
            t.primes_.push_back(static_cast<std::uint32_t>(n));
            for (std::uint64_t j = n * n; j <= limit; j += n)
                if (t.lpf_[j] == 0) t.lpf_[j] = static_cast<std::uint32_t>(n);
        }
    }
    return t;
}

} // namespace orbicensus
