#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbicensus/quadratic_fields.hpp"

namespace orbicensus {

// Quaternion algebra over Q, identified by its finite ramification set. The
// even-parity law over the places of Q fixes the single real place: the
// algebra is definite exactly when disc_f has an odd number of prime factors.
struct QuaternionAlgebraQ {
    std::uint64_t disc_f = 1;
    std::vector<std::uint64_t> ram_primes; // ascending
    bool infinite_ramified = false;

    bool indefinite() const { return !infinite_ramified; }
};

struct QuaternionAlgebraIQ {
    QuadraticField base;
    std::vector<PrimeIdealIQ> ramified; // even cardinality, sorted by (norm, p, index)
};

struct CensusRecord {
    std::string descriptor;           // disc over Q, or semicolon-joined ideal norms
    std::uint64_t disc = 1;           // 2d census only
    std::vector<std::uint64_t> ideal_norms; // 3d census only
    int num_factors = 0;
    std::uint64_t phi = 1;
    double covolume = 0;
    bool cocompact = false;
    std::optional<long long> systole_trace;
    std::optional<double> systole_length;
    std::vector<long long> embeddable_deltas;
};

struct Census2dOptions {
    bool include_split = false;
    bool with_systole = false;
    long long embeddable_delta_max = 0; // 0 = skip the embeddable-field scan
};

QuaternionAlgebraQ make_algebra_Q(std::uint64_t disc_f, const PrimeTable& table);

bool admits_embedding_Q(const QuaternionAlgebraQ& B, const QuadraticField& K);

std::uint64_t phi_squarefree(const FactoredInteger& disc);
std::uint64_t phi_ideals(const std::vector<PrimeIdealIQ>& ideals);

double covolume_2d(const QuaternionAlgebraQ& B);
double covolume_3d(const QuaternionAlgebraIQ& B);

// Base-change of an indefinite division algebra over Q to an imaginary
// quadratic field: ramification survives exactly over the split primes.
QuaternionAlgebraIQ induced_algebra(const QuaternionAlgebraQ& B0, const QuadraticField& L);

void enumerate_classes_2d(std::uint64_t disc_max, const Census2dOptions& options,
                          const PrimeTable& table,
                          const std::function<void(const CensusRecord&)>& visitor);

std::vector<CensusRecord> enumerate_classes_3d(const QuadraticField& K, double volume_max,
                                               const PrimeTable& table);

// Count of commensurability classes over K with covolume <= volume_max,
// without materializing records.
std::uint64_t count_classes_3d(const QuadraticField& K, double volume_max,
                               const PrimeTable& table);

} // namespace orbicensus
