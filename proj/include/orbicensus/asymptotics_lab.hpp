#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "orbicensus/quaternion_census.hpp"

namespace orbicensus {

struct DensityCurve {
    std::vector<double> grid;          // strictly increasing x values
    std::vector<std::uint64_t> counts; // counts[i] <= totals[i]
    std::vector<std::uint64_t> totals;
    std::optional<std::pair<double, double>> fit; // (c, a) in c * x * (log x)^a
};

struct HFunctionSpec {
    std::optional<double> exponent; // h(x) = (log x)^a, a < 1/2
    std::optional<double> fixed;    // explicit threshold H

    double threshold_at(double x) const;
};

std::vector<double> geometric_grid(double x_min, double x_max, int points);

// Squarefree d with Phi(d) <= x and no prime factor split in K, counted
// exhaustively over d <= 4 x log log(x + 16).
std::uint64_t count_phi_bounded_embeddable(const QuadraticField& K, double x,
                                           const PrimeTable& table);
DensityCurve count_phi_bounded_embeddable_curve(const QuadraticField& K,
                                                const std::vector<double>& grid,
                                                const PrimeTable& table, int threads = 1);

// True iff no quadratic field with |delta| <= H embeds into the indefinite
// algebra of discriminant D.
bool admits_no_small_field(std::uint64_t D, double H);

DensityCurve density_no_small_field(const std::vector<double>& grid, const HFunctionSpec& h,
                                    const PrimeTable& table, int threads = 1);

DensityCurve short_systole_density(double x0, const std::vector<double>& grid,
                                   const PrimeTable& table, int threads = 1);

// Least-squares fit of log(count) = log c + log x + a log log x.
std::pair<double, double> fit_power_log(const DensityCurve& curve);

// Growth exponent: slope of log(count) against log x.
double fit_growth_exponent(const std::vector<double>& grid,
                           const std::vector<std::uint64_t>& counts);

struct SurfaceDensityResult {
    DensityCurve with_surface; // counts: classes induced from B0; totals: all classes
    std::vector<double> volume_grid;
};

SurfaceDensityResult geodesic_surface_density(const QuaternionAlgebraQ& B0, double volume_max,
                                              long long delta_max, const PrimeTable& table);

// Even-factor squarefree D with Phi(D) <= x; D = 1 included when include_split.
std::uint64_t count_all_classes_2d(double x, const PrimeTable& table, bool include_split = true);

// Indefinite algebras admitting an embedding of K, ordered by disc <= x:
// (count, total) over even-factor squarefree discs.
std::pair<std::uint64_t, std::uint64_t> count_embeddable_by_disc(const QuadraticField& K,
                                                                 double x,
                                                                 const PrimeTable& table);

} // namespace orbicensus
