#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "orbicensus/prime_table.hpp"

namespace orbicensus {

struct FactoredInteger {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, int>> factors; // ascending primes, exponents >= 1

    bool squarefree() const {
        for (auto& [p, e] : factors)
            if (e > 1) return false;
        return true;
    }
};

// Nonnegative multiplicative function given by its values at prime powers,
// with a uniform bound at prime powers.
struct MultiplicativeFunctionSpec {
    std::function<double(std::uint64_t p, int nu)> at_prime_power;
    double bound = 1.0;

    double operator()(const FactoredInteger& n) const {
        double v = 1.0;
        for (auto& [p, e] : n.factors) v *= at_prime_power(p, e);
        return v;
    }
};

struct MeanValueReport {
    double lhs = 0;
    double rhs = 0;
    double A = 0;
    double B = 0;
    bool holds = false;
};

struct SieveCountReport {
    std::uint64_t count = 0;
    double bound = 0;
    double ratio = 0; // count / bound
};

struct MertensSplitReport {
    double sum = 0;          // sum of 1/p over split primes p <= y
    double half_loglog = 0;  // (1/2) log log y
    double difference = 0;   // sum - half_loglog
};

PrimeTable sieve_primes(std::uint64_t limit);

// n >= 1 with all prime factors certifiable from the table.
FactoredInteger factorize(std::uint64_t n, const PrimeTable& table);

// Kronecker symbol (delta | n) for delta a fundamental discriminant or 1.
int kronecker(long long delta, std::uint64_t n);

// Unvalidated Kronecker symbol for arbitrary a; used internally and by callers
// that have already checked fundamentality.
int kronecker_symbol(long long a, std::uint64_t n);

bool is_squarefree_small(long long n);
bool is_fundamental_discriminant(long long delta);

// Largest squarefree divisor q of n with n/q a perfect square.
std::uint64_t squarefree_part(std::uint64_t n);

// Visits every squarefree n <= limit in ascending order with its factorization.
void iterate_squarefree(std::uint64_t limit, const PrimeTable& table,
                        const std::function<void(const FactoredInteger&)>& visitor);

MeanValueReport mean_value_bound_check(const MultiplicativeFunctionSpec& f, double x,
                                       const PrimeTable& table);

SieveCountReport sieve_count_bound(const std::function<bool(std::uint64_t)>& in_sieve_set,
                                   double x, const PrimeTable& table);

MertensSplitReport mertens_split_sum(long long delta, double y, const PrimeTable& table);

// Segment-sieve factorization scan over [lo, hi]. Requires the table to cover
// sqrt(hi). The visitor receives n, its distinct prime factors in ascending
// order, and a squarefree flag.
template <class Visitor>
void scan_factored(std::uint64_t lo, std::uint64_t hi, const PrimeTable& table,
                   Visitor&& visit) {
    if (lo < 1) lo = 1;
    if (hi < lo) return;
    if (table.limit() * table.limit() < hi && table.limit() < hi)
        throw ConfigError("scan_factored: table must cover sqrt of range end");

    constexpr std::uint64_t kSeg = 1u << 16;
    constexpr int kMaxFac = 15;
    std::vector<std::uint64_t> rem(kSeg);
    std::vector<std::uint8_t> nfac(kSeg);
    std::vector<std::uint8_t> sqf(kSeg);
    std::vector<std::array<std::uint64_t, kMaxFac>> fac(kSeg);

    auto base = table.primes();
    for (std::uint64_t seg_lo = lo; seg_lo <= hi; seg_lo += kSeg) {
        std::uint64_t seg_hi = std::min(hi, seg_lo + kSeg - 1);
        std::uint64_t len = seg_hi - seg_lo + 1;
        for (std::uint64_t i = 0; i < len; ++i) {
            rem[i] = seg_lo + i;
            nfac[i] = 0;
            sqf[i] = 1;
        }
        for (std::uint32_t p : base) {
            std::uint64_t pp = p;
            if (pp * pp > seg_hi) break;
            std::uint64_t start = ((seg_lo + pp - 1) / pp) * pp;
            for (std::uint64_t m = start; m <= seg_hi; m += pp) {
                std::uint64_t i = m - seg_lo;
                fac[i][nfac[i]++] = pp;
                std::uint64_t r = rem[i] / pp;
                if (r % pp == 0) {
                    sqf[i] = 0;
                    do r /= pp; while (r % pp == 0);
                }
                rem[i] = r;
            }
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            std::uint64_t n = seg_lo + i;
            if (n == 1) {
                visit(std::uint64_t{1}, std::span<const std::uint64_t>{}, true);
                continue;
            }
            if (rem[i] > 1) fac[i][nfac[i]++] = rem[i]; // leftover prime > sqrt(seg_hi)
            visit(n, std::span<const std::uint64_t>(fac[i].data(), nfac[i]), sqf[i] != 0);
        }
    }
}

} // namespace orbicensus
