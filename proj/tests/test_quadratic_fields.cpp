#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orbicensus/quadratic_fields.hpp"

using namespace orbicensus;

// Brute-force Pell oracle: smallest b >= 1 with a^2 - delta b^2 = +-4 solvable.
static std::pair<long long, long long> oracle_pell(long long delta) {
    for (long long b = 1; b <= 10'000'000; ++b) {
        for (long long s : {-4LL, 4LL}) {
            long long a2 = delta * b * b + s;
            if (a2 <= 0) continue;
            long long a = static_cast<long long>(std::sqrt(static_cast<double>(a2)));
            for (long long c = std::max(1LL, a - 2); c <= a + 2; ++c)
                if (c * c == a2) return {c, b};
        }
    }
    return {0, 0};
}

TEST_CASE("field construction and discriminants") {
    CHECK(make_field(5).delta == 5);
    CHECK(make_field(2).delta == 8);
    CHECK(make_field(3).delta == 12);
    CHECK(make_field(-1).delta == -4);
    CHECK(make_field(-3).delta == -3);
    CHECK(make_field(-5).delta == -20);
    CHECK(make_field(-1).imaginary);
    CHECK_FALSE(make_field(7).imaginary);
    CHECK_THROWS(make_field(0));
    CHECK_THROWS(make_field(1));
    CHECK_THROWS(make_field(12));
    CHECK(field_from_discriminant(-4).d == -1);
    CHECK(field_from_discriminant(8).d == 2);
    CHECK_THROWS(field_from_discriminant(10));
}

TEST_CASE("splitting types in Q(i)") {
    QuadraticField K = make_field(-1);
    CHECK(splitting_type(K, 2) == Splitting::Ramified);
    CHECK(splitting_type(K, 3) == Splitting::Inert);
    CHECK(splitting_type(K, 5) == Splitting::Split);
    CHECK(splitting_type(K, 13) == Splitting::Split);
    CHECK(splitting_type(K, 7) == Splitting::Inert);
}

TEST_CASE("split primes have density about one half") {
    QuadraticField K = make_field(5);
    PrimeTable table = sieve_primes(100'000);
    std::uint64_t split = 0, total = 0;
    for (std::uint32_t p : table.primes()) {
        if (splitting_type(K, p) == Splitting::Split) ++split;
        ++total;
    }
    double frac = static_cast<double>(split) / static_cast<double>(total);
    CHECK(frac > 0.45);
    CHECK(frac < 0.55);
}

TEST_CASE("fundamental unit pinned small cases") {
    FundamentalUnit u5 = fundamental_unit(make_field(5)); // (1+sqrt 5)/2
    CHECK(u5.a == 1);
    CHECK(u5.b == 1);
    CHECK(u5.norm == -1);
    CHECK(u5.regulator == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));

    FundamentalUnit u8 = fundamental_unit(make_field(2)); // 1+sqrt 2 = (2+sqrt 8)/2
    CHECK(u8.a == 2);
    CHECK(u8.b == 1);
    CHECK(u8.norm == -1);

    FundamentalUnit u12 = fundamental_unit(make_field(3)); // 2+sqrt 3
    CHECK(u12.a == 4);
    CHECK(u12.b == 1);
    CHECK(u12.norm == 1);

    FundamentalUnit u94 = fundamental_unit(make_field(94)); // 2143295 + 221064 sqrt 94
    CHECK(u94.regulator ==
          doctest::Approx(std::log(2143295.0 + 221064.0 * std::sqrt(94.0))).epsilon(1e-10));
    CHECK(u94.norm == 1);
}

TEST_CASE("fundamental unit matches the brute-force Pell oracle") {
    for (long long d = 2; d <= 150; ++d) {
        if (d == 1 || !is_squarefree_small(d)) continue;
        QuadraticField K = make_field(d);
        FundamentalUnit u = fundamental_unit(K);
        auto [a, b] = oracle_pell(K.delta);
        REQUIRE(b != 0);
        CHECK(u.a == a);
        CHECK(u.b == b);
        // exact Pell invariant
        BigInt pell = u.a * u.a - BigInt(K.delta) * u.b * u.b;
        CHECK((pell == 4 || pell == -4));
    }
}

TEST_CASE("norm one unit squares the norm minus one generator") {
    FundamentalUnit v = norm_one_unit(make_field(5)); // ((1+sqrt5)/2)^2 = (3+sqrt5)/2
    CHECK(v.a == 3);
    CHECK(v.b == 1);
    CHECK(v.norm == 1);
    CHECK(v.regulator == doctest::Approx(2 * fundamental_unit(make_field(5)).regulator)
                             .epsilon(1e-12));

    FundamentalUnit w = norm_one_unit(make_field(3)); // already norm +1
    CHECK(w.a == 4);
    CHECK(w.b == 1);
}

TEST_CASE("regulator of a huge unit stays finite and accurate") {
    // d = 9949 has a famously long continued fraction period
    FundamentalUnit u = fundamental_unit(make_field(9949));
    CHECK(u.regulator > 10);
    CHECK(std::isfinite(u.regulator));
    BigInt pell = u.a * u.a - BigInt(make_field(9949).delta) * u.b * u.b;
    CHECK((pell == 4 || pell == -4));
}

TEST_CASE("dirichlet L(2, chi) pinned values") {
    // Catalan's constant G = L(2, chi_{-4})
    CHECK(dirichlet_L2(-4) == doctest::Approx(0.9159655941772190).epsilon(1e-8));
    // L(2, chi_{-3}) = (psi'(1/3) - psi'(2/3)) / 9 = 0.781302412896...
    double pi = 3.14159265358979323846;
    CHECK(dirichlet_L2(-3) == doctest::Approx(0.781302412896).epsilon(1e-8));
    CHECK(dirichlet_L2(1) == doctest::Approx(pi * pi / 6).epsilon(1e-12));
    // positive characters: independent direct partial sum as a sanity floor
    double l5 = dirichlet_L2(5);
    double partial = 0;
    for (int n = 1; n <= 200000; ++n) {
        int c = kronecker_symbol(5, n);
        partial += static_cast<double>(c) / (static_cast<double>(n) * n);
    }
    CHECK(l5 == doctest::Approx(partial).epsilon(1e-6));
}

TEST_CASE("zeta_K(2) for Q(i) equals zeta(2) times Catalan") {
    double z = zeta_k2(make_field(-1));
    double pi = 3.14159265358979323846;
    CHECK(z == doctest::Approx(pi * pi / 6 * 0.9159655941772190).epsilon(1e-8));
}

TEST_CASE("prime ideals of Q(i) by norm") {
    PrimeTable table = sieve_primes(100);
    auto ideals = prime_ideals_up_to(make_field(-1), 10, table);
    REQUIRE(ideals.size() == 4);
    CHECK(ideals[0].norm == 2); // ramified
    CHECK(ideals[0].splitting == Splitting::Ramified);
    CHECK(ideals[1].norm == 5);
    CHECK(ideals[2].norm == 5);
    CHECK(ideals[1].conjugate_index != ideals[2].conjugate_index);
    CHECK(ideals[3].norm == 9); // 3 inert
    CHECK(ideals[3].splitting == Splitting::Inert);
}

TEST_CASE("field count against the brute-force oracle") {
    CHECK(count_quadratic_fields(100) == 61);
    for (double x : {10.0, 50.0, 300.0, 1000.0}) {
        std::uint64_t oracle = 0;
        for (long long a = 3; a <= static_cast<long long>(x); ++a) {
            if (is_fundamental_discriminant(a)) ++oracle;
            if (is_fundamental_discriminant(-a)) ++oracle;
        }
        CHECK(count_quadratic_fields(x) == oracle);
    }
}
