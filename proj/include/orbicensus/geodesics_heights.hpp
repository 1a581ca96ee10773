#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orbicensus/quadratic_fields.hpp"

namespace orbicensus {

struct QuaternionAlgebraQ; // quaternion_census.hpp

// Polynomial with integer coefficients, ascending order, degree <= 16.
struct IntegerPolynomial {
    std::vector<long long> coefficients; // coefficients[i] multiplies x^i

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

IntegerPolynomial make_polynomial(std::vector<long long> ascending_coefficients);

struct FieldProfile {
    int n_k = 1;
    int r1 = 1;
    int r2 = 0;
};

inline constexpr FieldProfile kRationalProfile{1, 1, 0};

struct SystoleResult {
    long long trace = 0;     // >= 3
    long long field_delta = 0; // fundamental discriminant of Q(sqrt(trace^2-4))
    double length = 0;       // 2 arccosh(trace/2)
};

// |lead| * prod max(1, |root|); roots from the companion matrix, Newton
// polished and certified by a residual bound.
double mahler_measure(const IntegerPolynomial& p);

double weil_height(const IntegerPolynomial& p, bool assert_irreducible);

double geodesic_length_from_trace(long long t);

SystoleResult class_systole_Q(const QuaternionAlgebraQ& B);

std::optional<double> unit_systole_upper_bound(const QuaternionAlgebraQ& B,
                                               const QuadraticField& K);

double short_geodesic_field_bound(double x0, const FieldProfile& profile);

double silverman_lower_bound(std::uint64_t delta_rel_norm, const FieldProfile& profile);

double brindza_unit_height_bound(int degree, double regulator);

double min_group_systole_relation(double class_systole);

} // namespace orbicensus
