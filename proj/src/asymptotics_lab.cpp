#include "orbicensus/asymptotics_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace orbicensus {

namespace {

// Hard enumeration bound for {d : Phi(d) <= x}; see the classical lower bound
// Phi(d) >> d / log log d.
std::uint64_t phi_search_bound(double x) {
    return static_cast<std::uint64_t>(4.0 * x * std::log(std::log(x + 16.0))) + 16;
}

struct CharacterTable {
    long long delta = 0;
    std::uint64_t modulus = 1;
    std::vector<int> chi;

    explicit CharacterTable(long long d) : delta(d) {
        modulus = static_cast<std::uint64_t>(d < 0 ? -d : d);
        chi.resize(modulus);
        chi[0] = 0;
        for (std::uint64_t r = 1; r < modulus; ++r) chi[r] = kronecker_symbol(delta, r);
    }

    bool splits(std::uint64_t p) const { return chi[p % modulus] == 1; }
};

// Runs fn(chunk_lo, chunk_hi, slot) on `threads` contiguous chunks of [lo, hi].
template <class Fn>
void parallel_ranges(std::uint64_t lo, std::uint64_t hi, int threads, Fn&& fn) {
    if (hi < lo) return;
    int T = std::max(1, threads);
    std::uint64_t span = hi - lo + 1;
    if (static_cast<std::uint64_t>(T) > span) T = static_cast<int>(span);
    if (T == 1) {
        fn(lo, hi, 0);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) {
        std::uint64_t a = lo + span * t / T;
        std::uint64_t b = lo + span * (t + 1) / T - 1;
        pool.emplace_back([&fn, a, b, t] { fn(a, b, t); });
    }
    for (auto& th : pool) th.join();
}

std::vector<long long> fundamental_discs(double H) {
    std::vector<long long> out;
    for (long long a = 3; a <= static_cast<long long>(H); ++a) {
        if (is_fundamental_discriminant(a)) out.push_back(a);
        if (is_fundamental_discriminant(-a)) out.push_back(-a);
    }
    return out;
}

} // namespace

double HFunctionSpec::threshold_at(double x) const {
    if (fixed) return *fixed;
    if (exponent) {
        if (!(*exponent < 0.5))
            throw std::domain_error("HFunctionSpec: exponent must be < 1/2");
        return std::pow(std::log(x), *exponent);
    }
    throw std::domain_error("HFunctionSpec: no threshold configured");
}

std::vector<double> geometric_grid(double x_min, double x_max, int points) {
    if (points < 2 || !(x_min > 0) || !(x_max > x_min))
        throw std::domain_error("geometric_grid: need x_max > x_min > 0 and >= 2 points");
    std::vector<double> g(points);
    double ratio = std::pow(x_max / x_min, 1.0 / (points - 1));
    g[0] = x_min;
    for (int i = 1; i < points; ++i) g[i] = g[i - 1] * ratio;
    g.back() = x_max;
    return g;
}

DensityCurve count_phi_bounded_embeddable_curve(const QuadraticField& K,
                                                const std::vector<double>& grid,
                                                const PrimeTable& table, int threads) {
    DensityCurve curve;
    curve.grid = grid;
    curve.counts.assign(grid.size(), 0);
    curve.totals.assign(grid.size(), 0);

    std::vector<std::uint64_t> bounds(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) bounds[i] = phi_search_bound(grid[i]);
    std::uint64_t hi = bounds.back();

    CharacterTable chi(K.delta);
    int T = std::max(1, threads);
    std::vector<std::vector<std::uint64_t>> part_counts(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));
    std::vector<std::vector<std::uint64_t>> part_totals(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));

    parallel_ranges(1, hi, T, [&](std::uint64_t lo, std::uint64_t up, int slot) {
        auto& counts = part_counts[slot];
        auto& totals = part_totals[slot];
        std::size_t first = 0; // first grid index with bounds >= current d
        scan_factored(lo, up, table, [&](std::uint64_t d, std::span<const std::uint64_t> ps,
                                         bool squarefree) {
            if (!squarefree) return;
            while (first < bounds.size() && bounds[first] < d) ++first;
            if (first == bounds.size()) return;
            std::uint64_t phi = 1;
            bool embeddable = true;
            for (std::uint64_t p : ps) {
                phi *= p - 1;
                if (chi.splits(p)) { embeddable = false; break; }
            }
            if (!embeddable) return;
            for (std::size_t i = first; i < grid.size(); ++i) {
                if (static_cast<double>(phi) <= grid[i]) {
                    ++counts[i];
                    ++totals[i];
                }
            }
        });
    });
    for (int t = 0; t < T; ++t)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            curve.counts[i] += part_counts[t][i];
            curve.totals[i] += part_totals[t][i];
        }
    return curve;
}

std::uint64_t count_phi_bounded_embeddable(const QuadraticField& K, double x,
                                           const PrimeTable& table) {
    if (x < 1) return 0;
    return count_phi_bounded_embeddable_curve(K, {x}, table).counts[0];
}

bool admits_no_small_field(std::uint64_t D, double H) {
    if (D < 1) throw std::domain_error("admits_no_small_field: D must be >= 1");
    auto discs = fundamental_discs(H);
    if (discs.empty()) return true;
    std::vector<std::uint64_t> primes;
    std::uint64_t m = D;
    for (std::uint64_t p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            primes.push_back(p);
            while (m % p == 0) m /= p;
        }
    if (m > 1) primes.push_back(m);
    for (long long delta : discs) {
        bool embeds = true;
        for (std::uint64_t p : primes)
            if (kronecker_symbol(delta, p) == 1) { embeds = false; break; }
        if (embeds) return false;
    }
    return true;
}

DensityCurve density_no_small_field(const std::vector<double>& grid, const HFunctionSpec& h,
                                    const PrimeTable& table, int threads) {
    DensityCurve curve;
    curve.grid = grid;
    curve.counts.assign(grid.size(), 0);
    curve.totals.assign(grid.size(), 0);

    // Union of the quadratic fields visible at any grid point; per grid point a
    // bitmask of those with |delta| <= h(x_i).
    double h_max = 0;
    std::vector<double> hs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        hs[i] = h.threshold_at(grid[i]);
        h_max = std::max(h_max, hs[i]);
    }
    auto discs = fundamental_discs(h_max);
    if (discs.size() > 64)
        throw ConfigError("density_no_small_field: more than 64 fields below threshold");
    std::vector<CharacterTable> chis;
    for (long long d : discs) chis.emplace_back(d);
    std::vector<std::uint64_t> grid_masks(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < discs.size(); ++j)
            if (static_cast<double>(std::llabs(discs[j])) <= hs[i])
                grid_masks[i] |= (1ull << j);

    std::uint64_t hi = static_cast<std::uint64_t>(grid.back());
    int T = std::max(1, threads);
    std::vector<std::vector<std::uint64_t>> part_counts(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));
    std::vector<std::vector<std::uint64_t>> part_totals(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));

    parallel_ranges(1, hi, T, [&](std::uint64_t lo, std::uint64_t up, int slot) {
        auto& counts = part_counts[slot];
        auto& totals = part_totals[slot];
        std::size_t first = 0;
        scan_factored(lo, up, table, [&](std::uint64_t D, std::span<const std::uint64_t> ps,
                                         bool squarefree) {
            if (!squarefree || (ps.size() % 2) != 0) return;
            while (first < grid.size() && grid[first] < static_cast<double>(D)) ++first;
            if (first == grid.size()) return;
            std::uint64_t embed_mask = 0;
            for (std::size_t j = 0; j < chis.size(); ++j) {
                bool embeds = true;
                for (std::uint64_t p : ps)
                    if (chis[j].splits(p)) { embeds = false; break; }
                if (embeds) embed_mask |= (1ull << j);
            }
            for (std::size_t i = first; i < grid.size(); ++i) {
                ++totals[i];
                if ((embed_mask & grid_masks[i]) == 0) ++counts[i];
            }
        });
    });
    for (int t = 0; t < T; ++t)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            curve.counts[i] += part_counts[t][i];
            curve.totals[i] += part_totals[t][i];
        }
    return curve;
}

DensityCurve short_systole_density(double x0, const std::vector<double>& grid,
                                   const PrimeTable& table, int threads) {
    DensityCurve curve;
    curve.grid = grid;
    curve.counts.assign(grid.size(), 0);
    curve.totals.assign(grid.size(), 0);

    // Finite witness set: traces t with 2 arccosh(t/2) <= x0.
    std::vector<CharacterTable> witnesses;
    for (long long t = 3; 2.0 * std::acosh(static_cast<double>(t) / 2.0) <= x0; ++t) {
        std::uint64_t sa = squarefree_part(static_cast<std::uint64_t>(t - 2));
        std::uint64_t sb = squarefree_part(static_cast<std::uint64_t>(t + 2));
        std::uint64_t g = std::gcd(sa, sb);
        long long delta = make_field(static_cast<long long>(sa / g * (sb / g))).delta;
        bool seen = false;
        for (const auto& w : witnesses) seen = seen || w.delta == delta;
        if (!seen) witnesses.emplace_back(delta);
    }

    std::vector<std::uint64_t> bounds(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) bounds[i] = phi_search_bound(grid[i]);

    int T = std::max(1, threads);
    std::vector<std::vector<std::uint64_t>> part_counts(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));
    std::vector<std::vector<std::uint64_t>> part_totals(T,
                                                        std::vector<std::uint64_t>(grid.size(), 0));

    parallel_ranges(1, bounds.back(), T, [&](std::uint64_t lo, std::uint64_t up, int slot) {
        auto& counts = part_counts[slot];
        auto& totals = part_totals[slot];
        std::size_t first = 0;
        scan_factored(lo, up, table, [&](std::uint64_t d, std::span<const std::uint64_t> ps,
                                         bool squarefree) {
            if (!squarefree || (ps.size() % 2) != 0) return;
            while (first < bounds.size() && bounds[first] < d) ++first;
            if (first == bounds.size()) return;
            std::uint64_t phi = 1;
            for (std::uint64_t p : ps) phi *= p - 1;
            bool is_short = false;
            for (const auto& w : witnesses) {
                bool embeds = true;
                for (std::uint64_t p : ps)
                    if (w.splits(p)) { embeds = false; break; }
                if (embeds) { is_short = true; break; }
            }
            for (std::size_t i = first; i < grid.size(); ++i) {
                if (static_cast<double>(phi) <= grid[i]) {
                    ++totals[i];
                    if (is_short) ++counts[i];
                }
            }
        });
    });
    for (int t = 0; t < T; ++t)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            curve.counts[i] += part_counts[t][i];
            curve.totals[i] += part_totals[t][i];
        }
    return curve;
}

std::pair<double, double> fit_power_log(const DensityCurve& curve) {
    std::vector<double> u, y;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        if (curve.counts[i] == 0) continue;
        u.push_back(std::log(std::log(curve.grid[i])));
        y.push_back(std::log(static_cast<double>(curve.counts[i])) - std::log(curve.grid[i]));
    }
    if (u.size() < 4) throw std::domain_error("fit_power_log: need >= 4 positive grid points");
    double n = static_cast<double>(u.size());
    double su = 0, sy = 0, suu = 0, suy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
        suu += u[i] * u[i];
        suy += u[i] * y[i];
    }
    double det = n * suu - su * su;
    if (std::abs(det) < 1e-12) throw std::domain_error("fit_power_log: degenerate grid");
    double a = (n * suy - su * sy) / det;
    double logc = (sy - a * su) / n;
    return {std::exp(logc), a};
}

double fit_growth_exponent(const std::vector<double>& grid,
                           const std::vector<std::uint64_t>& counts) {
    std::vector<double> u, y;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (counts[i] == 0) continue;
        u.push_back(std::log(grid[i]));
        y.push_back(std::log(static_cast<double>(counts[i])));
    }
    if (u.size() < 2) throw std::domain_error("fit_growth_exponent: need >= 2 positive points");
    double n = static_cast<double>(u.size());
    double su = 0, sy = 0, suu = 0, suy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
        suu += u[i] * u[i];
        suy += u[i] * y[i];
    }
    return (n * suy - su * sy) / (n * suu - su * su);
}

SurfaceDensityResult geodesic_surface_density(const QuaternionAlgebraQ& B0, double volume_max,
                                              long long delta_max, const PrimeTable& table) {
    if (B0.disc_f <= 1 || !B0.indefinite())
        throw std::domain_error("geodesic_surface_density: B0 must be an indefinite division algebra");

    SurfaceDensityResult result;
    int points = std::max(4, static_cast<int>(std::ceil(4.0 * std::log10(1000.0))) + 1);
    result.volume_grid = geometric_grid(volume_max / 1000.0, volume_max, points);
    auto& curve = result.with_surface;
    curve.grid = result.volume_grid;
    curve.counts.assign(curve.grid.size(), 0);
    curve.totals.assign(curve.grid.size(), 0);

    std::vector<long long> discs;
    for (long long a = 3; a <= delta_max; ++a)
        if (is_fundamental_discriminant(-a)) discs.push_back(-a);

    int T = static_cast<int>(std::min<std::size_t>(std::thread::hardware_concurrency() ?
                                                       std::thread::hardware_concurrency() : 1,
                                                   discs.size()));
    std::vector<std::vector<std::uint64_t>> part_counts(std::max(1, T),
                                                        std::vector<std::uint64_t>(curve.grid.size(), 0));
    std::vector<std::vector<std::uint64_t>> part_totals(std::max(1, T),
                                                        std::vector<std::uint64_t>(curve.grid.size(), 0));

    parallel_ranges(0, discs.size() - 1, std::max(1, T), [&](std::uint64_t lo, std::uint64_t up,
                                                             int slot) {
        auto& counts = part_counts[slot];
        auto& totals = part_totals[slot];
        for (std::uint64_t idx = lo; idx <= up; ++idx) {
            QuadraticField L = field_from_discriminant(discs[idx]);
            QuaternionAlgebraIQ induced = induced_algebra(B0, L);
            double v_ind = covolume_3d(induced);
            for (std::size_t i = 0; i < curve.grid.size(); ++i) {
                if (v_ind <= curve.grid[i]) ++counts[i];
                totals[i] += count_classes_3d(L, curve.grid[i], table);
            }
        }
    });
    for (auto& pc : part_counts)
        for (std::size_t i = 0; i < curve.grid.size(); ++i) curve.counts[i] += pc[i];
    for (auto& pt : part_totals)
        for (std::size_t i = 0; i < curve.grid.size(); ++i) curve.totals[i] += pt[i];
    return result;
}

std::uint64_t count_all_classes_2d(double x, const PrimeTable& table, bool include_split) {
    if (x < 1) return 0;
    std::uint64_t hi = phi_search_bound(x);
    std::uint64_t count = include_split ? 1 : 0; // D = 1, Phi = 1
    scan_factored(2, hi, table, [&](std::uint64_t, std::span<const std::uint64_t> ps,
                                    bool squarefree) {
        if (!squarefree || (ps.size() % 2) != 0) return;
        std::uint64_t phi = 1;
        for (std::uint64_t p : ps) phi *= p - 1;
        if (static_cast<double>(phi) <= x) ++count;
    });
    return count;
}

std::pair<std::uint64_t, std::uint64_t> count_embeddable_by_disc(const QuadraticField& K,
                                                                 double x,
                                                                 const PrimeTable& table) {
    CharacterTable chi(K.delta);
    std::uint64_t count = 1, total = 1; // D = 1 embeds everything
    scan_factored(2, static_cast<std::uint64_t>(x), table,
                  [&](std::uint64_t, std::span<const std::uint64_t> ps, bool squarefree) {
                      if (!squarefree || (ps.size() % 2) != 0) return;
                      ++total;
                      for (std::uint64_t p : ps)
                          if (chi.splits(p)) return;
                      ++count;
                  });
    return {count, total};
}

} // namespace orbicensus
