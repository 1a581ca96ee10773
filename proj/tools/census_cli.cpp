#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "orbicensus/asymptotics_lab.hpp"
#include "orbicensus/emit.hpp"
#include "orbicensus/geodesics_heights.hpp"

using namespace orbicensus;

namespace {

int resolve_threads(int cli_threads) {
    if (const char* env = std::getenv("ORBICENSUS_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    if (cli_threads >= 1) return cli_threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::uint64_t isqrt_ceil(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) ++r;
    return r;
}

RunManifest start_manifest(const std::string& name, int workers, std::uint64_t sieve_limit) {
    RunManifest m;
    m.subcommand = name;
    m.workers = workers;
    m.sieve_limit = sieve_limit;
    m.started_at = iso8601_utc_now();
    return m;
}

void report_emitted(const std::string& path, const std::string& digest) {
    std::cout << path << " digest=" << digest << "\n";
}

void emit_density(const std::string& name, DensityCurve curve, const std::string& out,
                  RunManifest manifest, int precision, bool with_fit) {
    if (with_fit) {
        try {
            curve.fit = fit_power_log(curve);
        } catch (const std::domain_error&) {
            // too few positive points; leave the fit columns empty
        }
    }
    ScopedFileLock lock(out);
    std::string digest = emit_csv_with_manifest(density_curve_csv(curve, precision), out,
                                                std::move(manifest));
    report_emitted(out, digest);
    (void)name;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbicensus: census of arithmetic hyperbolic 2- and 3-orbifold classes"};
    app.require_subcommand(1);

    int cli_threads = 0;
    int precision = 15;
    app.add_option("--threads", cli_threads, "worker count (default: machine parallelism)")
        ->check(CLI::PositiveNumber);
    app.add_option("--precision", precision, "significant digits for reals")
        ->check(CLI::Range(6, 17));

    // census2d
    auto* c2 = app.add_subcommand("census2d", "enumerate indefinite classes over Q by disc");
    std::uint64_t disc_max = 0;
    bool with_systole = false, include_split = false;
    long long embeddable_delta_max = 0;
    std::string c2_out = "census2d.csv";
    c2->add_option("--disc-max", disc_max, "discriminant bound")->required()
        ->check(CLI::PositiveNumber);
    c2->add_flag("--with-systole", with_systole);
    c2->add_flag("--include-split", include_split);
    c2->add_option("--embeddable-delta-max", embeddable_delta_max,
                   "list embeddable fields with |delta| up to this bound");
    c2->add_option("--out", c2_out);

    // census3d
    auto* c3 = app.add_subcommand("census3d", "enumerate classes over an imaginary quadratic field");
    long long field_d = 0;
    double volume_max = 0;
    std::string c3_out = "census3d.csv";
    c3->add_option("--field-d", field_d, "negative squarefree d")->required();
    c3->add_option("--volume-max", volume_max)->required()->check(CLI::PositiveNumber);
    c3->add_option("--out", c3_out);

    // systole
    auto* sy = app.add_subcommand("systole", "class systole over Q");
    std::uint64_t sy_disc = 0;
    sy->add_option("--disc", sy_disc)->required()->check(CLI::PositiveNumber);

    // embeds
    auto* em = app.add_subcommand("embeds", "embedding criterion test");
    std::uint64_t em_disc = 0;
    long long em_delta = 0;
    em->add_option("--disc", em_disc)->required()->check(CLI::PositiveNumber);
    em->add_option("--delta", em_delta)->required();

    // density
    auto* de = app.add_subcommand("density", "density curves");
    de->require_subcommand(1);
    double x_min = 1e4, x_max = 1e7;
    int points = 13;
    std::string de_out;

    auto* de_phi = de->add_subcommand("phi-embeddable");
    long long de_delta = 0;
    de_phi->add_option("--delta", de_delta)->required();

    auto* de_nsf = de->add_subcommand("no-small-field");
    double h_exp = 0, h_fixed = 0;
    auto* opt_exp = de_nsf->add_option("--h-exp", h_exp, "threshold (log x)^a, a < 1/2");
    auto* opt_fix = de_nsf->add_option("--h-fixed", h_fixed, "fixed threshold H");
    opt_exp->excludes(opt_fix);

    auto* de_ss = de->add_subcommand("short-systole");
    double x0 = 0;
    de_ss->add_option("--x0", x0)->required()->check(CLI::PositiveNumber);

    for (auto* sc : {de_phi, de_nsf, de_ss}) {
        sc->add_option("--x-min", x_min)->check(CLI::PositiveNumber);
        sc->add_option("--x-max", x_max)->check(CLI::PositiveNumber);
        sc->add_option("--points", points)->check(CLI::Range(2, 200));
        sc->add_option("--out", de_out);
    }

    // surfaces
    auto* su = app.add_subcommand("surfaces", "classes containing a surface induced from B0");
    std::uint64_t b0_disc = 0;
    double su_volume_max = 0;
    long long su_delta_max = 0;
    std::string su_out = "surfaces.csv";
    su->add_option("--b0", b0_disc)->required()->check(CLI::PositiveNumber);
    su->add_option("--volume-max", su_volume_max)->required()->check(CLI::PositiveNumber);
    su->add_option("--delta-max", su_delta_max)->required()->check(CLI::PositiveNumber);
    su->add_option("--out", su_out);

    // checks
    auto* ck = app.add_subcommand("checks", "bound and constant cross-checks");
    ck->require_subcommand(1);
    auto* ck_ht = ck->add_subcommand("ht-bound", "unit height vs regulator bound");
    long long ht_delta_max = 10000;
    ck_ht->add_option("--delta-max", ht_delta_max)->check(CLI::PositiveNumber);
    auto* ck_si = ck->add_subcommand("silverman", "height lower bound on random integers");
    int si_samples = 10000;
    long long si_delta_max = 10000;
    unsigned si_seed = 12345;
    ck_si->add_option("--samples", si_samples)->check(CLI::PositiveNumber);
    ck_si->add_option("--delta-max", si_delta_max)->check(CLI::PositiveNumber);
    ck_si->add_option("--seed", si_seed);
    auto* ck_me = ck->add_subcommand("mertens", "split-prime reciprocal sum");
    long long me_delta = 0;
    double me_y = 0;
    ck_me->add_option("--delta", me_delta)->required();
    ck_me->add_option("--y", me_y)->required()->check(CLI::PositiveNumber);
    auto* ck_fc = ck->add_subcommand("fields-count", "fundamental discriminants up to x");
    double fc_x = 0;
    ck_fc->add_option("--x", fc_x)->required()->check(CLI::PositiveNumber);

    // fit
    auto* fi = app.add_subcommand("fit", "power-log fit of a density CSV");
    std::string fit_input;
    fi->add_option("--input", fit_input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    int threads = resolve_threads(cli_threads);

    try {
        if (*c2) {
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(disc_max, 16));
            Census2dOptions opts;
            opts.include_split = include_split;
            opts.with_systole = with_systole;
            opts.embeddable_delta_max = embeddable_delta_max;
            std::vector<CensusRecord> records;
            enumerate_classes_2d(disc_max, opts, table,
                                 [&](const CensusRecord& r) { records.push_back(r); });
            RunManifest m = start_manifest("census2d", threads, table.limit());
            m.parameters = {{"disc_max", std::to_string(disc_max)},
                            {"embeddable_delta_max", std::to_string(embeddable_delta_max)},
                            {"include_split", include_split ? "true" : "false"},
                            {"with_systole", with_systole ? "true" : "false"}};
            ScopedFileLock lock(c2_out);
            report_emitted(c2_out, emit_csv_with_manifest(census_records_csv(records, precision),
                                                          c2_out, std::move(m)));
        } else if (*c3) {
            QuadraticField K = make_field(field_d);
            if (!K.imaginary) throw std::domain_error("census3d: --field-d must be negative");
            QuaternionAlgebraIQ empty{K, {}};
            double v0 = covolume_3d(empty);
            std::uint64_t cap = volume_max >= v0
                                    ? static_cast<std::uint64_t>(volume_max / v0) + 2
                                    : 16;
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(cap, 16));
            auto records = enumerate_classes_3d(K, volume_max, table);
            RunManifest m = start_manifest("census3d", threads, table.limit());
            m.parameters = {{"field_d", std::to_string(field_d)},
                            {"volume_max", format_real(volume_max, precision)}};
            ScopedFileLock lock(c3_out);
            report_emitted(c3_out, emit_csv_with_manifest(census_records_csv(records, precision),
                                                          c3_out, std::move(m)));
        } else if (*sy) {
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(sy_disc, 16));
            QuaternionAlgebraQ B = make_algebra_Q(sy_disc, table);
            SystoleResult s = class_systole_Q(B);
            std::cout << "disc=" << sy_disc << " trace=" << s.trace
                      << " field_delta=" << s.field_delta
                      << " length=" << format_real(s.length, precision) << "\n";
        } else if (*em) {
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(em_disc, 16));
            QuaternionAlgebraQ B = make_algebra_Q(em_disc, table);
            QuadraticField K = field_from_discriminant(em_delta);
            std::cout << (admits_embedding_Q(B, K) ? "true" : "false") << "\n";
        } else if (*de_phi) {
            QuadraticField K = field_from_discriminant(de_delta);
            auto grid = geometric_grid(x_min, x_max, points);
            std::uint64_t hi = static_cast<std::uint64_t>(
                                   4.0 * x_max * std::log(std::log(x_max + 16.0))) + 16;
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(isqrt_ceil(hi) + 2, 1024));
            auto curve = count_phi_bounded_embeddable_curve(K, grid, table, threads);
            RunManifest m = start_manifest("density phi-embeddable", threads, table.limit());
            m.parameters = {{"delta", std::to_string(de_delta)},
                            {"points", std::to_string(points)},
                            {"x_max", format_real(x_max, precision)},
                            {"x_min", format_real(x_min, precision)}};
            if (de_out.empty()) de_out = "density_phi_embeddable.csv";
            emit_density("phi-embeddable", std::move(curve), de_out, std::move(m), precision,
                         true);
        } else if (*de_nsf) {
            if (opt_exp->count() == 0 && opt_fix->count() == 0)
                throw CLI::RequiredError("--h-exp or --h-fixed");
            HFunctionSpec h;
            if (opt_exp->count()) h.exponent = h_exp;
            else h.fixed = h_fixed;
            auto grid = geometric_grid(x_min, x_max, points);
            PrimeTable table = sieve_primes(
                std::max<std::uint64_t>(isqrt_ceil(static_cast<std::uint64_t>(x_max)) + 2, 1024));
            auto curve = density_no_small_field(grid, h, table, threads);
            RunManifest m = start_manifest("density no-small-field", threads, table.limit());
            m.parameters = {{"h", opt_exp->count() ? "exp:" + format_real(h_exp, precision)
                                                   : "fixed:" + format_real(h_fixed, precision)},
                            {"points", std::to_string(points)},
                            {"x_max", format_real(x_max, precision)},
                            {"x_min", format_real(x_min, precision)}};
            if (de_out.empty()) de_out = "density_no_small_field.csv";
            emit_density("no-small-field", std::move(curve), de_out, std::move(m), precision,
                         true);
        } else if (*de_ss) {
            auto grid = geometric_grid(x_min, x_max, points);
            std::uint64_t hi = static_cast<std::uint64_t>(
                                   4.0 * x_max * std::log(std::log(x_max + 16.0))) + 16;
            PrimeTable table = sieve_primes(std::max<std::uint64_t>(isqrt_ceil(hi) + 2, 1024));
            auto curve = short_systole_density(x0, grid, table, threads);
            RunManifest m = start_manifest("density short-systole", threads, table.limit());
            m.parameters = {{"points", std::to_string(points)},
                            {"x0", format_real(x0, precision)},
                            {"x_max", format_real(x_max, precision)},
                            {"x_min", format_real(x_min, precision)}};
            if (de_out.empty()) de_out = "density_short_systole.csv";
            emit_density("short-systole", std::move(curve), de_out, std::move(m), precision,
                         true);
        } else if (*su) {
            PrimeTable table = sieve_primes(
                std::max<std::uint64_t>(static_cast<std::uint64_t>(su_volume_max / 0.15) + 16,
                                        1024));
            QuaternionAlgebraQ B0 = make_algebra_Q(b0_disc, table);
            auto result = geodesic_surface_density(B0, su_volume_max, su_delta_max, table);
            RunManifest m = start_manifest("surfaces", threads, table.limit());
            m.parameters = {{"b0", std::to_string(b0_disc)},
                            {"delta_max", std::to_string(su_delta_max)},
                            {"volume_max", format_real(su_volume_max, precision)}};
            ScopedFileLock lock(su_out);
            report_emitted(su_out,
                           emit_csv_with_manifest(density_curve_csv(result.with_surface,
                                                                    precision),
                                                  su_out, std::move(m)));
        } else if (*ck_ht) {
            int checked = 0, violations = 0;
            double worst = 0;
            for (long long a = 5; a <= ht_delta_max; ++a) {
                if (!is_fundamental_discriminant(a)) continue;
                QuadraticField K = field_from_discriminant(a);
                FundamentalUnit u = fundamental_unit(K);
                double height = u.regulator / 2.0;
                double bound = brindza_unit_height_bound(2, u.regulator);
                ++checked;
                worst = std::max(worst, height / bound);
                if (height > bound) ++violations;
            }
            std::cout << "checked=" << checked << " violations=" << violations
                      << " max_ratio=" << format_real(worst, 6) << "\n";
        } else if (*ck_si) {
            std::vector<long long> discs;
            for (long long a = 3; a <= si_delta_max; ++a) {
                if (is_fundamental_discriminant(a)) discs.push_back(a);
                if (is_fundamental_discriminant(-a)) discs.push_back(-a);
            }
            std::mt19937 rng(si_seed);
            std::uniform_int_distribution<std::size_t> pick(0, discs.size() - 1);
            std::uniform_int_distribution<long long> pick_u(1, 5);
            std::uniform_int_distribution<long long> pick_t(-1000, 1000);
            int violations = 0;
            for (int i = 0; i < si_samples; ++i) {
                long long delta = discs[pick(rng)];
                long long u = pick_u(rng);
                long long t = pick_t(rng);
                if (((t - u * delta) % 2 + 2) % 2 != 0) ++t; // parity: t ≡ u·delta (mod 2)
                long long n = (t * t - u * u * delta) / 4;
                auto poly = make_polynomial({n, -t, 1});
                double h = weil_height(poly, true);
                double bound = silverman_lower_bound(static_cast<std::uint64_t>(std::llabs(delta)),
                                                     kRationalProfile);
                if (h < bound) ++violations;
            }
            std::cout << "samples=" << si_samples << " violations=" << violations << "\n";
        } else if (*ck_me) {
            PrimeTable table = sieve_primes(static_cast<std::uint64_t>(me_y) + 16);
            MertensSplitReport r = mertens_split_sum(me_delta, me_y, table);
            std::cout << "sum=" << format_real(r.sum, precision)
                      << " half_loglog=" << format_real(r.half_loglog, precision)
                      << " difference=" << format_real(r.difference, precision) << "\n";
        } else if (*ck_fc) {
            std::cout << count_quadratic_fields(fc_x) << "\n";
        } else if (*fi) {
            DensityCurve curve = read_density_curve_csv(fit_input);
            auto [c, a] = fit_power_log(curve);
            std::cout << "c=" << format_real(c, precision) << " a=" << format_real(a, precision)
                      << "\n";
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
