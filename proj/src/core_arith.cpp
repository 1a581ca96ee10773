#include "orbicensus/core_arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace orbicensus {

PrimeTable sieve_primes(std::uint64_t limit) { return PrimeTable(limit); }

FactoredInteger factorize(std::uint64_t n, const PrimeTable& table) {
    if (n < 1) throw std::domain_error("factorize: n must be >= 1");
    FactoredInteger out;
    out.value = n;
    if (n == 1) return out;
    if (n <= table.limit()) {
        while (n > 1) {
            std::uint64_t p = table.least_prime_factor(n);
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.factors.emplace_back(p, e);
        }
        return out;
    }
    for (std::uint32_t p : table.primes()) {
        std::uint64_t pp = p;
        if (pp * pp > n) break;
        if (n % pp == 0) {
            int e = 0;
            while (n % pp == 0) { n /= pp; ++e; }
            out.factors.emplace_back(pp, e);
        }
    }
    if (n > 1) {
        std::uint64_t lim = table.limit();
        if (n > lim * lim)
            throw std::runtime_error("factorize: remaining cofactor exceeds table certification limit");
        out.factors.emplace_back(n, 1); // n is prime: no factor <= sqrt(n) <= limit divides it
    }
    return out;
}

int kronecker_symbol(long long a, std::uint64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    // pull out the even part of n
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int v = 0;
        while (n % 2 == 0) { n /= 2; ++v; }
        long long am8 = ((a % 8) + 8) % 8;
        if ((v & 1) && (am8 == 3 || am8 == 5)) result = -result;
    }
    // Jacobi symbol (a | n) with n odd
    std::uint64_t u = static_cast<std::uint64_t>(((a % static_cast<long long>(n)) +
                                                  static_cast<long long>(n)) %
                                                 static_cast<long long>(n));
    std::uint64_t m = n;
    while (u != 0) {
        while (u % 2 == 0) {
            u /= 2;
            std::uint64_t m8 = m % 8;
            if (m8 == 3 || m8 == 5) result = -result;
        }
        std::swap(u, m);
        if (u % 4 == 3 && m % 4 == 3) result = -result;
        u %= m;
    }
    return m == 1 ? result : 0;
}

bool is_squarefree_small(long long n) {
    if (n < 0) n = -n;
    if (n == 0) return false;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % (d * d) == 0) return false;
        while (n % d == 0) n /= d;
    }
    return true;
}

bool is_fundamental_discriminant(long long delta) {
    if (delta == 1 || delta == 0) return false;
    long long m4 = ((delta % 4) + 4) % 4;
    if (m4 == 1) return is_squarefree_small(delta);
    if (m4 != 0) return false;
    long long q = delta / 4;
    long long q4 = ((q % 4) + 4) % 4;
    return (q4 == 2 || q4 == 3) && is_squarefree_small(q);
}

int kronecker(long long delta, std::uint64_t n) {
    if (n < 1) throw std::domain_error("kronecker: n must be >= 1");
    if (delta != 1) {
        static std::unordered_map<long long, bool> cache;
        static std::mutex mu;
        bool ok;
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = cache.find(delta);
            if (it == cache.end())
                it = cache.emplace(delta, is_fundamental_discriminant(delta)).first;
            ok = it->second;
        }
        if (!ok) throw std::domain_error("kronecker: delta must be a fundamental discriminant or 1");
    }
    return kronecker_symbol(delta, n);
}

std::uint64_t squarefree_part(std::uint64_t n) {
    if (n == 0) throw std::domain_error("squarefree_part: n must be positive");
    std::uint64_t out = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            if (e & 1) out *= d;
        }
    }
    return out * n;
}

void iterate_squarefree(std::uint64_t limit, const PrimeTable& table,
                        const std::function<void(const FactoredInteger&)>& visitor) {
    if (limit > table.limit()) throw ConfigError("iterate_squarefree: limit exceeds table");
    FactoredInteger fi;
    fi.value = 1;
    visitor(fi);
    for (std::uint64_t n = 2; n <= limit; ++n) {
        std::uint64_t m = n;
        fi.value = n;
        fi.factors.clear();
        bool squarefree = true;
        while (m > 1) {
            std::uint64_t p = table.least_prime_factor(m);
            m /= p;
            if (m % p == 0) { squarefree = false; break; }
            fi.factors.emplace_back(p, 1);
        }
        if (squarefree) visitor(fi);
    }
}

namespace {

// Prime list used for the B-constant double sum. Truncation at 10^7 keeps the
// analytic tail below 10^-6 times the prime-power bound.
const std::vector<std::uint32_t>& b_constant_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        const std::uint32_t lim = 10'000'000;
        std::vector<bool> comp(lim + 1, false);
        std::vector<std::uint32_t> ps;
        for (std::uint32_t i = 2; i <= lim; ++i) {
            if (!comp[i]) {
                ps.push_back(i);
                for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= lim; j += i)
                    comp[j] = true;
            }
        }
        return ps;
    }();
    return primes;
}

} // namespace

MeanValueReport mean_value_bound_check(const MultiplicativeFunctionSpec& f, double x,
                                       const PrimeTable& table) {
    if (!(f.bound >= 0) || !std::isfinite(f.bound))
        throw std::domain_error("mean_value_bound_check: f must carry a finite bound");
    if (x < 2) throw std::domain_error("mean_value_bound_check: x must be >= 2");
    std::uint64_t X = static_cast<std::uint64_t>(x);
    if (X > table.limit()) throw ConfigError("mean_value_bound_check: x exceeds table");

    MeanValueReport rep;
    double lhs = 1.0, s1 = 1.0; // n = 1 term
    for (std::uint64_t n = 2; n <= X; ++n) {
        std::uint64_t m = n;
        double v = 1.0;
        while (m > 1) {
            std::uint64_t p = table.least_prime_factor(m);
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            v *= f.at_prime_power(p, e);
        }
        lhs += v;
        s1 += v / static_cast<double>(n);
    }
    rep.lhs = lhs;

    // A = sup over y <= x of (sum_{p<=y} f(p) log p) / y; the sup is attained
    // at prime values of y.
    double cum = 0.0, A = 0.0;
    for (std::uint32_t p : table.primes()) {
        if (p > X) break;
        double fp = f.at_prime_power(p, 1);
        if (fp > f.bound * (1 + 1e-9) + 1e-300)
            throw std::domain_error("mean_value_bound_check: value at prime exceeds declared bound");
        cum += fp * std::log(static_cast<double>(p));
        A = std::max(A, cum / static_cast<double>(p));
    }
    rep.A = A;

    // B = double sum over (p, nu >= 2) of f(p^nu) log(p^nu) / p^nu, truncated
    // at p <= 10^7 and nu <= 40, plus analytic tail bounds.
    double B = 0.0;
    const auto& bp = b_constant_primes();
    for (std::uint32_t p : bp) {
        double lp = std::log(static_cast<double>(p));
        double pw = static_cast<double>(p);
        for (int nu = 2; nu <= 40; ++nu) {
            pw *= static_cast<double>(p);
            double cap = f.bound * nu * lp / pw;
            if (cap < 1e-18) break;
            B += f.at_prime_power(p, nu) * nu * lp / pw;
        }
    }
    // Prime tail: sum_{p > P} sum_{nu>=2} nu log(p)/p^nu <= 3/P; nu cap tail is
    // below 2^-38 and is absorbed into the same margin.
    B += f.bound * 3.0 / static_cast<double>(bp.back());
    rep.B = B;

    rep.rhs = (A + B + 1.0) * (x / std::log(x)) * s1;
    rep.holds = rep.lhs <= rep.rhs * (1 + 1e-12);
    return rep;
}

SieveCountReport sieve_count_bound(const std::function<bool(std::uint64_t)>& in_sieve_set,
                                   double x, const PrimeTable& table) {
    if (x < 1) throw std::domain_error("sieve_count_bound: x must be >= 1");
    std::uint64_t X = static_cast<std::uint64_t>(x);
    if (X > table.limit()) throw ConfigError("sieve_count_bound: x exceeds table");

    std::vector<char> in_set(table.prime_count(), 0);
    double prod = 1.0;
    std::size_t idx = 0;
    std::vector<std::uint32_t> prime_index(X + 1, 0);
    for (std::uint32_t p : table.primes()) {
        if (p > X) break;
        bool in = in_sieve_set(p);
        in_set[idx] = in ? 1 : 0;
        prime_index[p] = static_cast<std::uint32_t>(idx);
        if (in) prod *= 1.0 - 1.0 / static_cast<double>(p);
        ++idx;
    }

    std::uint64_t count = 1; // n = 1
    for (std::uint64_t n = 2; n <= X; ++n) {
        std::uint64_t m = n;
        bool ok = true;
        while (m > 1) {
            std::uint64_t p = table.least_prime_factor(m);
            m /= p;
            if (m % p == 0 || in_set[prime_index[p]]) { ok = false; break; }
        }
        if (ok) ++count;
    }

    SieveCountReport rep;
    rep.count = count;
    rep.bound = x * prod;
    rep.ratio = rep.bound > 0 ? static_cast<double>(count) / rep.bound : 0.0;
    return rep;
}

MertensSplitReport mertens_split_sum(long long delta, double y, const PrimeTable& table) {
    if (y < 3) throw std::domain_error("mertens_split_sum: y must be >= 3");
    if (!is_fundamental_discriminant(delta))
        throw std::domain_error("mertens_split_sum: delta must be fundamental");
    std::uint64_t Y = static_cast<std::uint64_t>(y);
    if (Y > table.limit()) throw ConfigError("mertens_split_sum: y exceeds table");

    std::uint64_t m = static_cast<std::uint64_t>(delta < 0 ? -delta : delta);
    std::vector<int> chi(m);
    for (std::uint64_t r = 0; r < m; ++r) chi[r] = kronecker_symbol(delta, r == 0 ? m : r);
    chi[0] = 0;

    MertensSplitReport rep;
    for (std::uint32_t p : table.primes()) {
        if (p > Y) break;
        if (chi[p % m] == 1) rep.sum += 1.0 / static_cast<double>(p);
    }
    rep.half_loglog = 0.5 * std::log(std::log(y));
    rep.difference = rep.sum - rep.half_loglog;
    return rep;
}

} // namespace orbicensus
