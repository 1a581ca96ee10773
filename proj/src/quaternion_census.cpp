#include "orbicensus/quaternion_census.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <map>
#include <sstream>
#include <stdexcept>

#include "orbicensus/geodesics_heights.hpp"

namespace orbicensus {

namespace {

double cached_zeta_k2(const QuadraticField& K) {
    static std::map<long long, double> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(K.delta);
        if (it != cache.end()) return it->second;
    }
    double v = zeta_k2(K);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(K.delta, v);
    return v;
}

std::vector<long long> fundamental_discs_up_to(long long bound) {
    std::vector<long long> out;
    for (long long a = 3; a <= bound; ++a) {
        if (is_fundamental_discriminant(a)) out.push_back(a);
        if (is_fundamental_discriminant(-a)) out.push_back(-a);
    }
    return out;
}

} // namespace

QuaternionAlgebraQ make_algebra_Q(std::uint64_t disc_f, const PrimeTable& table) {
    if (disc_f < 1) throw std::domain_error("make_algebra_Q: disc_f must be >= 1");
    FactoredInteger fi = factorize(disc_f, table);
    if (!fi.squarefree()) throw std::domain_error("make_algebra_Q: disc_f must be squarefree");
    QuaternionAlgebraQ B;
    B.disc_f = disc_f;
    for (auto& [p, e] : fi.factors) B.ram_primes.push_back(p);
    B.infinite_ramified = (B.ram_primes.size() % 2) == 1;
    return B;
}

bool admits_embedding_Q(const QuaternionAlgebraQ& B, const QuadraticField& K) {
    if (B.infinite_ramified && !K.imaginary) return false;
    for (std::uint64_t p : B.ram_primes)
        if (splitting_type(K, p) == Splitting::Split) return false;
    return true;
}

std::uint64_t phi_squarefree(const FactoredInteger& disc) {
    std::uint64_t out = 1;
    for (auto& [p, e] : disc.factors) {
        if (e != 1) throw std::domain_error("phi_squarefree: argument must be squarefree");
        out *= p - 1;
    }
    return out;
}

std::uint64_t phi_ideals(const std::vector<PrimeIdealIQ>& ideals) {
    std::uint64_t out = 1;
    for (const auto& I : ideals) out *= I.norm - 1;
    return out;
}

double covolume_2d(const QuaternionAlgebraQ& B) {
    if (!B.indefinite()) throw std::domain_error("covolume_2d: algebra must be indefinite");
    std::uint64_t phi = 1;
    for (std::uint64_t p : B.ram_primes) phi *= p - 1;
    return std::numbers::pi / 3.0 * static_cast<double>(phi);
}

double covolume_3d(const QuaternionAlgebraIQ& B) {
    if (!B.base.imaginary) throw std::domain_error("covolume_3d: base field must be imaginary");
    double ad = static_cast<double>(-B.base.delta);
    double phi = static_cast<double>(phi_ideals(B.ramified));
    return std::pow(ad, 1.5) * cached_zeta_k2(B.base) * phi /
           (4.0 * std::numbers::pi * std::numbers::pi);
}

QuaternionAlgebraIQ induced_algebra(const QuaternionAlgebraQ& B0, const QuadraticField& L) {
    if (!B0.indefinite()) throw std::domain_error("induced_algebra: B0 must be indefinite");
    if (B0.disc_f <= 1) throw std::domain_error("induced_algebra: B0 must be a division algebra");
    if (!L.imaginary) throw std::domain_error("induced_algebra: L must be imaginary quadratic");
    QuaternionAlgebraIQ B;
    B.base = L;
    for (std::uint64_t p : B0.ram_primes) {
        if (splitting_type(L, p) == Splitting::Split) {
            B.ramified.push_back({p, p, Splitting::Split, 0});
            B.ramified.push_back({p, p, Splitting::Split, 1});
        }
    }
    std::sort(B.ramified.begin(), B.ramified.end(),
              [](const PrimeIdealIQ& x, const PrimeIdealIQ& y) {
                  return std::tie(x.norm, x.p, x.conjugate_index) <
                         std::tie(y.norm, y.p, y.conjugate_index);
              });
    return B;
}

void enumerate_classes_2d(std::uint64_t disc_max, const Census2dOptions& options,
                          const PrimeTable& table,
                          const std::function<void(const CensusRecord&)>& visitor) {
    if (disc_max < 1) throw std::domain_error("enumerate_classes_2d: disc_max must be >= 1");
    if (disc_max > table.limit()) throw ConfigError("enumerate_classes_2d: disc_max exceeds table");

    std::vector<QuadraticField> small_fields;
    if (options.embeddable_delta_max > 0)
        for (long long delta : fundamental_discs_up_to(options.embeddable_delta_max))
            small_fields.push_back(field_from_discriminant(delta));

    auto emit = [&](std::uint64_t D, const std::vector<std::uint64_t>& primes) {
        CensusRecord rec;
        rec.disc = D;
        rec.descriptor = std::to_string(D);
        rec.num_factors = static_cast<int>(primes.size());
        rec.phi = 1;
        for (std::uint64_t p : primes) rec.phi *= p - 1;
        rec.covolume = std::numbers::pi / 3.0 * static_cast<double>(rec.phi);
        rec.cocompact = D > 1;

        QuaternionAlgebraQ B;
        B.disc_f = D;
        B.ram_primes = primes;
        B.infinite_ramified = false;
        if (options.with_systole) {
            SystoleResult s = class_systole_Q(B);
            rec.systole_trace = s.trace;
            rec.systole_length = s.length;
        }
        for (const auto& K : small_fields)
            if (admits_embedding_Q(B, K)) rec.embeddable_deltas.push_back(K.delta);
        visitor(rec);
    };

    if (options.include_split) emit(1, {});
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 2; n <= disc_max; ++n) {
        std::uint64_t m = n;
        primes.clear();
        bool squarefree = true;
        while (m > 1) {
            std::uint64_t p = table.least_prime_factor(m);
            m /= p;
            if (m % p == 0) { squarefree = false; break; }
            primes.push_back(p);
        }
        if (!squarefree || (primes.size() % 2) != 0) continue;
        emit(n, primes);
    }
}

namespace {

struct SubsetEnumerator {
    const std::vector<PrimeIdealIQ>* ideals = nullptr;
    std::uint64_t budget = 0; // Phi cap
    std::uint64_t count = 0;
    std::function<void(const std::vector<std::size_t>&, std::uint64_t)> emit;
    std::vector<std::size_t> selected;

    void run() {
        selected.clear();
        recurse(0, 1);
    }

    void recurse(std::size_t i, std::uint64_t prod) {
        if ((selected.size() % 2) == 0) {
            ++count;
            if (emit) emit(selected, prod);
        }
        for (std::size_t j = i; j < ideals->size(); ++j) {
            std::uint64_t v = (*ideals)[j].norm - 1;
            unsigned __int128 next = static_cast<unsigned __int128>(prod) * v;
            if (next > budget) break; // norms ascending, so all later j fail too
            selected.push_back(j);
            recurse(j + 1, static_cast<std::uint64_t>(next));
            selected.pop_back();
        }
    }
};

} // namespace

std::vector<CensusRecord> enumerate_classes_3d(const QuadraticField& K, double volume_max,
                                               const PrimeTable& table) {
    std::vector<CensusRecord> out;
    if (!K.imaginary) throw std::domain_error("enumerate_classes_3d: field must be imaginary");
    QuaternionAlgebraIQ empty{K, {}};
    double v0 = covolume_3d(empty);
    if (volume_max < v0) return out;

    std::uint64_t budget = static_cast<std::uint64_t>(volume_max / v0);
    std::uint64_t norm_cap = budget + 1;
    if (norm_cap > table.limit()) throw ConfigError("enumerate_classes_3d: volume cap exceeds table");
    auto ideals = prime_ideals_up_to(K, norm_cap, table);

    SubsetEnumerator en;
    en.ideals = &ideals;
    en.budget = budget;
    en.emit = [&](const std::vector<std::size_t>& sel, std::uint64_t phi) {
        CensusRecord rec;
        rec.phi = phi;
        rec.num_factors = static_cast<int>(sel.size());
        rec.covolume = v0 * static_cast<double>(phi);
        rec.cocompact = !sel.empty();
        std::ostringstream oss;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            rec.ideal_norms.push_back(ideals[sel[i]].norm);
            if (i) oss << ';';
            oss << ideals[sel[i]].norm;
        }
        rec.descriptor = sel.empty() ? std::string("-") : oss.str();
        out.push_back(std::move(rec));
    };
    en.run();

    std::sort(out.begin(), out.end(), [](const CensusRecord& x, const CensusRecord& y) {
        return std::tie(x.phi, x.ideal_norms, x.descriptor) <
               std::tie(y.phi, y.ideal_norms, y.descriptor);
    });
    return out;
}

std::uint64_t count_classes_3d(const QuadraticField& K, double volume_max,
                               const PrimeTable& table) {
    if (!K.imaginary) throw std::domain_error("count_classes_3d: field must be imaginary");
    QuaternionAlgebraIQ empty{K, {}};
    double v0 = covolume_3d(empty);
    if (volume_max < v0) return 0;
    std::uint64_t budget = static_cast<std::uint64_t>(volume_max / v0);
    std::uint64_t norm_cap = budget + 1;
    if (norm_cap > table.limit()) throw ConfigError("count_classes_3d: volume cap exceeds table");
    auto ideals = prime_ideals_up_to(K, norm_cap, table);

    SubsetEnumerator en;
    en.ideals = &ideals;
    en.budget = budget;
    en.run();
    return en.count;
}

} // namespace orbicensus
