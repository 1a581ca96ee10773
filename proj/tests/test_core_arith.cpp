#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "orbicensus/core_arith.hpp"

using namespace orbicensus;

// Independent oracle: plain boolean sieve, no shared code with PrimeTable.
static std::vector<bool> oracle_prime_bitmap(std::uint64_t n) {
    std::vector<bool> is_p(n + 1, true);
    is_p[0] = false;
    if (n >= 1) is_p[1] = false;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (is_p[i])
            for (std::uint64_t j = i * i; j <= n; j += i) is_p[j] = false;
    return is_p;
}

// Independent oracle: squarefree by direct divisibility.
static bool oracle_squarefree(std::uint64_t n) {
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return false;
    return true;
}

TEST_CASE("prime table matches the independent bitmap sieve") {
    const std::uint64_t N = 1'000'000;
    PrimeTable table = sieve_primes(N);
    auto oracle = oracle_prime_bitmap(N);
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= N; ++n) {
        CHECK(table.is_prime(n) == oracle[n]);
        if (oracle[n]) ++count;
    }
    CHECK(count == 78498);
    CHECK(table.primes().size() == 78498);
}

TEST_CASE("least prime factor certifies factorizations") {
    PrimeTable table = sieve_primes(10'000);
    for (std::uint64_t n = 2; n <= 10'000; ++n) {
        FactoredInteger f = factorize(n, table);
        std::uint64_t prod = 1;
        for (auto& [p, e] : f.factors) {
            CHECK(table.is_prime(p));
            for (int i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == n);
        CHECK(f.squarefree() == oracle_squarefree(n));
    }
}

TEST_CASE("factorize handles large inputs via trial division") {
    PrimeTable table = sieve_primes(100'000);
    FactoredInteger f = factorize(999'999'937ull, table); // prime < 100000^2
    CHECK(f.factors.size() == 1);
    CHECK(f.factors[0].first == 999'999'937ull);
    FactoredInteger g = factorize(6'000'000'000ull, table);
    std::uint64_t prod = 1;
    for (auto& [p, e] : g.factors)
        for (int i = 0; i < e; ++i) prod *= p;
    CHECK(prod == 6'000'000'000ull);
}

TEST_CASE("kronecker symbol pinned values") {
    CHECK(kronecker_symbol(5, 11) == 1);
    CHECK(kronecker_symbol(-4, 3) == -1);
    CHECK(kronecker_symbol(12, 3) == 0);
    CHECK(kronecker_symbol(5, 2) == -1);
    CHECK(kronecker_symbol(8, 2) == 0);
    CHECK(kronecker_symbol(-3, 7) == 1);
    CHECK(kronecker_symbol(1, 7) == 1);
}

TEST_CASE("kronecker symbol is completely multiplicative in the denominator") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> ds(-500, 500);
    std::uniform_int_distribution<std::uint64_t> ns(1, 1000);
    for (int i = 0; i < 5000; ++i) {
        long long d = ds(rng);
        if (d == 0) continue;
        std::uint64_t m = ns(rng), n = ns(rng);
        CHECK(kronecker_symbol(d, m * n) == kronecker_symbol(d, m) * kronecker_symbol(d, n));
    }
}

TEST_CASE("fundamental discriminant classification") {
    std::vector<long long> fund = {5, 8, 12, 13, -3, -4, -7, -8, -11, 21, 24, -15};
    std::vector<long long> not_fund = {2, 3, 4, 6, 7, 9, 10, -1, -2, -5, -6, -9, 25, 1};
    for (long long d : fund) CHECK(is_fundamental_discriminant(d));
    for (long long d : not_fund) CHECK_FALSE(is_fundamental_discriminant(d));
}

TEST_CASE("squarefree part against direct search") {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        std::uint64_t q = squarefree_part(n);
        CHECK(oracle_squarefree(q));
        CHECK(n % q == 0);
        std::uint64_t ratio = n / q;
        std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(ratio)));
        bool square = (r * r == ratio) || ((r + 1) * (r + 1) == ratio);
        CHECK(square);
    }
    CHECK(squarefree_part(1) == 1);
    CHECK(squarefree_part(12) == 3);
    CHECK(squarefree_part(360) == 10);
}

TEST_CASE("iterate_squarefree visits exactly the squarefree integers in order") {
    PrimeTable table = sieve_primes(3000);
    std::vector<std::uint64_t> seen;
    iterate_squarefree(3000, table, [&](const FactoredInteger& f) {
        seen.push_back(f.value);
        CHECK(f.squarefree());
    });
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 1; n <= 3000; ++n)
        if (oracle_squarefree(n)) expected.push_back(n);
    CHECK(seen == expected);
}

TEST_CASE("scan_factored agrees with factorize across a large offset range") {
    PrimeTable table = sieve_primes(70'000);
    std::uint64_t lo = 4'000'000'000ull, hi = lo + 20'000;
    std::uint64_t visited = 0;
    scan_factored(lo, hi, table, [&](std::uint64_t n, std::span<const std::uint64_t> ps,
                                     bool squarefree) {
        ++visited;
        std::uint64_t m = n;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i) CHECK(ps[i] > ps[i - 1]);
            CHECK(m % ps[i] == 0);
            while (m % ps[i] == 0) m /= ps[i];
        }
        CHECK(m == 1);
        if (n % 4 == 0 || n % 9 == 0 || n % 25 == 0) CHECK_FALSE(squarefree);
    });
    CHECK(visited == hi - lo + 1);
}

TEST_CASE("mean value bound for the constant function 1") {
    PrimeTable table = sieve_primes(100'000);
    MultiplicativeFunctionSpec one;
    one.at_prime_power = [](std::uint64_t, int) { return 1.0; };
    one.bound = 1.0;
    MeanValueReport r = mean_value_bound_check(one, 1e4, table);
    CHECK(r.holds);
    CHECK(r.lhs == doctest::Approx(1e4).epsilon(1e-3));
    CHECK(r.A > 0.5); // prime counting: sum of log p up to y is ~ y
    CHECK(r.A < 1.5);
}

TEST_CASE("mean value bound for the squarefree indicator") {
    PrimeTable table = sieve_primes(100'000);
    MultiplicativeFunctionSpec mu2;
    mu2.at_prime_power = [](std::uint64_t, int nu) { return nu == 1 ? 1.0 : 0.0; };
    mu2.bound = 1.0;
    MeanValueReport r = mean_value_bound_check(mu2, 1e4, table);
    CHECK(r.holds);
    // oracle count of squarefree n <= 10^4
    std::uint64_t oracle = 0;
    for (std::uint64_t n = 1; n <= 10'000; ++n)
        if (oracle_squarefree(n)) ++oracle;
    CHECK(r.lhs == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-9));
}

TEST_CASE("mean value bound rejects nothing for the zero function") {
    PrimeTable table = sieve_primes(10'000);
    MultiplicativeFunctionSpec z;
    z.at_prime_power = [](std::uint64_t, int) { return 0.0; };
    z.bound = 1.0;
    MeanValueReport r = mean_value_bound_check(z, 1e3, table);
    CHECK(r.holds);
    CHECK(r.lhs == doctest::Approx(1.0)); // only n = 1 contributes
}

TEST_CASE("sieve count bound for integers with no small factors") {
    PrimeTable table = sieve_primes(10'000);
    // integers free of primes < 10
    auto pred = [](std::uint64_t p) { return p < 10; };
    SieveCountReport r = sieve_count_bound(pred, 1e4, table);
    CHECK(r.count > 0);
    CHECK(r.ratio <= 1.0 + 1e-9);
}

TEST_CASE("mertens split sum approaches half log log") {
    PrimeTable table = sieve_primes(2'000'000);
    MertensSplitReport r5 = mertens_split_sum(5, 1e6, table);
    // split primes have density 1/2; the difference converges
    CHECK(std::abs(r5.difference) < 1.0);
    MertensSplitReport r4 = mertens_split_sum(-4, 1e6, table);
    // split primes of Q(i) are p ≡ 1 (mod 4): 5, 13, 17, ...
    CHECK(r4.sum > 1.0 / 5 + 1.0 / 13);
    CHECK(std::abs(r4.difference) < 1.0);
    MertensSplitReport small = mertens_split_sum(-4, 20, table);
    CHECK(small.sum == doctest::Approx(1.0 / 5 + 1.0 / 13 + 1.0 / 17).epsilon(1e-12));
}

TEST_CASE("prime table save and load round trip") {
    PrimeTable table = sieve_primes(50'000);
    std::string path = "prime_table_test.bin";
    table.save(path);
    PrimeTable loaded = PrimeTable::load(path);
    CHECK(loaded.limit() == table.limit());
    CHECK(loaded.primes().size() == table.primes().size());
    for (std::uint64_t n : {2ull, 97ull, 99ull, 49999ull})
        CHECK(loaded.least_prime_factor(n) == table.least_prime_factor(n));
    std::remove(path.c_str());
}

TEST_CASE("configuration errors are reported") {
    CHECK_THROWS_AS(sieve_primes(1), ConfigError);
    PrimeTable table = sieve_primes(100);
    CHECK_THROWS(factorize(0, table));
    CHECK_THROWS_AS(scan_factored(1, 1'000'000'000ull, table, [](std::uint64_t,
                                                                 std::span<const std::uint64_t>,
                                                                 bool) {}),
                    ConfigError);
}
