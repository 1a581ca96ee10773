#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "orbicensus/geodesics_heights.hpp"
#include "orbicensus/quaternion_census.hpp"

using namespace orbicensus;

TEST_CASE("mahler measure of quadratics against the quadratic formula") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long long> cs(-50, 50);
    for (int i = 0; i < 2000; ++i) {
        long long a = cs(rng), b = cs(rng), c = cs(rng);
        if (a == 0) continue;
        IntegerPolynomial p = make_polynomial({c, b, a});
        if (p.degree() != 2) continue;
        double disc = static_cast<double>(b) * b - 4.0 * a * c;
        double m;
        if (disc >= 0) {
            double r1 = (-b + std::sqrt(disc)) / (2.0 * a);
            double r2 = (-b - std::sqrt(disc)) / (2.0 * a);
            m = std::abs(static_cast<double>(a)) * std::max(1.0, std::abs(r1)) *
                std::max(1.0, std::abs(r2));
        } else {
            double rho = std::sqrt(static_cast<double>(c) / a); // |conjugate pair|
            m = std::abs(static_cast<double>(a)) * std::max(1.0, rho) * std::max(1.0, rho);
        }
        CHECK(mahler_measure(p) == doctest::Approx(m).epsilon(1e-8));
    }
}

TEST_CASE("mahler measure pinned values") {
    CHECK(mahler_measure(make_polynomial({-1, -1, 1})) ==
          doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12)); // golden ratio
    CHECK(mahler_measure(make_polynomial({1, 1, 1})) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mahler_measure(make_polynomial({2, 0, 1})) == doctest::Approx(2.0).epsilon(1e-10));
    // Lehmer's degree-10 polynomial
    IntegerPolynomial lehmer =
        make_polynomial({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});
    CHECK(mahler_measure(lehmer) == doctest::Approx(1.17628081825992).epsilon(1e-8));
}

TEST_CASE("weil height of the golden ratio") {
    IntegerPolynomial p = make_polynomial({-1, -1, 1});
    CHECK(weil_height(p, true) ==
          doctest::Approx(0.5 * std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-10));
    CHECK(weil_height(p, true) == doctest::Approx(0.2406059125).epsilon(1e-8));
}

TEST_CASE("weil height rejects reducible polynomials when asked") {
    CHECK_THROWS(weil_height(make_polynomial({-1, 0, 1}), true));  // x^2 - 1
    CHECK_THROWS(weil_height(make_polynomial({-6, 1, 1}), true));  // (x+3)(x-2)
    CHECK_THROWS(weil_height(make_polynomial({-8, 0, 0, 1}), true)); // x^3 - 8
    CHECK_NOTHROW(weil_height(make_polynomial({-2, 0, 1}), true));
    CHECK_NOTHROW(weil_height(make_polynomial({-2, 0, 0, 1}), true));
}

TEST_CASE("geodesic length from trace") {
    CHECK(geodesic_length_from_trace(3) == doctest::Approx(2 * std::acosh(1.5)).epsilon(1e-14));
    CHECK(geodesic_length_from_trace(3) == doctest::Approx(1.9248473002).epsilon(1e-9));
    CHECK(geodesic_length_from_trace(-5) == doctest::Approx(2 * std::acosh(2.5)).epsilon(1e-14));
    CHECK_THROWS(geodesic_length_from_trace(2));
    CHECK_THROWS(geodesic_length_from_trace(0));
}

TEST_CASE("class systole pinned cases") {
    PrimeTable table = sieve_primes(1000);
    // trace 3 works whenever Q(sqrt 5) embeds
    SystoleResult s6 = class_systole_Q(make_algebra_Q(6, table));
    CHECK(s6.trace == 3);
    CHECK(s6.field_delta == 5);
    // disc 209 = 11 * 19: 11 splits in Q(sqrt 5) (t=3) and Q(sqrt 3) (t=4);
    // trace 5 gives Q(sqrt 21), inert at 11 and 19
    SystoleResult s209 = class_systole_Q(make_algebra_Q(209, table));
    CHECK(s209.trace == 5);
    CHECK(s209.field_delta == 21);
    CHECK(s209.length == doctest::Approx(3.133598473944822).epsilon(1e-10));
}

TEST_CASE("class systole via the brute-force trace oracle") {
    PrimeTable table = sieve_primes(11'000);
    for (std::uint64_t D : {6ull, 10ull, 22ull, 209ull, 551ull, 1241ull}) {
        QuaternionAlgebraQ B = make_algebra_Q(D, table);
        SystoleResult s = class_systole_Q(B);
        // oracle: first t whose order field passes the raw splitting test
        long long t = 3;
        for (;; ++t) {
            long long disc = t * t - 4;
            long long sf = disc;
            for (long long q = 2; q * q <= sf; ++q)
                while (sf % (q * q) == 0) sf /= q * q;
            QuadraticField K = make_field(sf);
            bool ok = true;
            for (std::uint64_t p : B.ram_primes)
                if (kronecker(K.delta, p) == 1) ok = false;
            if (ok) break;
        }
        CHECK(s.trace == t);
    }
}

TEST_CASE("unit systole bound dominates the class systole") {
    PrimeTable table = sieve_primes(1000);
    QuaternionAlgebraQ B = make_algebra_Q(209, table);
    SystoleResult s = class_systole_Q(B);
    QuadraticField witness = field_from_discriminant(s.field_delta);
    auto bound = unit_systole_upper_bound(B, witness);
    REQUIRE(bound.has_value());
    CHECK(*bound >= s.length - 1e-9);
    // the witness unit is the fundamental Pell solution: equality
    CHECK(*bound == doctest::Approx(s.length).epsilon(1e-9));
    // non-embeddable field gives no bound: 11 splits in Q(sqrt 5)
    CHECK_FALSE(unit_systole_upper_bound(B, make_field(5)).has_value());
}

TEST_CASE("unit height equals half the regulator") {
    for (long long d : {2, 3, 5, 7, 13, 94}) {
        QuadraticField K = make_field(d);
        FundamentalUnit u = fundamental_unit(K);
        // minimal polynomial of the unit: x^2 - a x + norm when a fits
        if (u.a <= BigInt(1'000'000)) {
            long long a = u.a.convert_to<long long>();
            IntegerPolynomial p = make_polynomial({static_cast<long long>(u.norm), -a, 1});
            CHECK(weil_height(p, false) == doctest::Approx(u.regulator / 2).epsilon(1e-9));
        }
    }
}

TEST_CASE("silverman lower bound holds for random quadratic integers") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<long long> ts(-300, 300);
    std::uniform_int_distribution<long long> us(1, 4);
    std::uniform_int_distribution<long long> deltas(2, 2000);
    int checked = 0;
    while (checked < 10'000) {
        long long delta = deltas(rng);
        if (!is_fundamental_discriminant(delta) && !is_fundamental_discriminant(-delta)) continue;
        if (!is_fundamental_discriminant(delta)) delta = -delta;
        long long u = us(rng), t = ts(rng);
        if (((t - u * delta) % 2 + 2) % 2 != 0) ++t;
        long long n = (t * t - u * u * delta) / 4;
        IntegerPolynomial p = make_polynomial({n, -t, 1});
        double h = weil_height(p, true);
        double bound = silverman_lower_bound(static_cast<std::uint64_t>(std::llabs(delta)),
                                             kRationalProfile);
        CHECK(h >= bound - 1e-9);
        ++checked;
    }
}

TEST_CASE("auxiliary bounds") {
    CHECK(short_geodesic_field_bound(2.0, kRationalProfile) ==
          doctest::Approx(std::exp(6.0)).epsilon(1e-12));
    CHECK(brindza_unit_height_bound(2, 1.0) == doctest::Approx(36.0 * 1024.0).epsilon(1e-12));
    CHECK(min_group_systole_relation(3.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(silverman_lower_bound(5, kRationalProfile) ==
          doctest::Approx(-std::log(2.0) / 2 + std::log(5.0) / 4).epsilon(1e-12));
}
