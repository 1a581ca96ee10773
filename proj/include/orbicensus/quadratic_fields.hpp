#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "orbicensus/core_arith.hpp"

namespace orbicensus {

using BigInt = boost::multiprecision::cpp_int;

enum class Splitting { Split, Inert, Ramified };

struct QuadraticField {
    long long d = 0;      // squarefree, != 0, 1
    long long delta = 0;  // fundamental discriminant
    bool imaginary = false;
};

// Fundamental unit (a + b*sqrt(delta)) / 2 of the maximal order, a,b > 0.
struct FundamentalUnit {
    BigInt a;
    BigInt b;
    int norm = 0;           // +1 or -1; a^2 - delta b^2 = 4 * norm
    double regulator = 0;   // log of the unit's real value
};

struct PrimeIdealIQ {
    std::uint64_t p = 0;     // residue characteristic
    std::uint64_t norm = 0;  // p (split/ramified) or p^2 (inert)
    Splitting splitting = Splitting::Inert;
    int conjugate_index = 0; // 0 or 1; split primes contribute two ideals
};

QuadraticField make_field(long long d);

// Field determined by a fundamental discriminant.
QuadraticField field_from_discriminant(long long delta);

Splitting splitting_type(const QuadraticField& K, std::uint64_t p);

FundamentalUnit fundamental_unit(const QuadraticField& K);

// Fundamental unit when it has norm +1, else its square.
FundamentalUnit norm_one_unit(const QuadraticField& K);

// L(2, chi_delta) by direct character series with a partial-summation tail bound.
double dirichlet_L2(long long delta);

// zeta(2) * L(2, chi_delta) for the field's discriminant.
double zeta_k2(const QuadraticField& K);

std::vector<PrimeIdealIQ> prime_ideals_up_to(const QuadraticField& K, std::uint64_t norm_bound,
                                             const PrimeTable& table);

// Number of fundamental discriminants (both signs) with |delta| <= x.
std::uint64_t count_quadratic_fields(double x);

} // namespace orbicensus
