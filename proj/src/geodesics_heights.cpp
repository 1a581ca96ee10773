#include "orbicensus/geodesics_heights.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "orbicensus/quaternion_census.hpp"

namespace orbicensus {

IntegerPolynomial make_polynomial(std::vector<long long> ascending_coefficients) {
    while (ascending_coefficients.size() > 1 && ascending_coefficients.back() == 0)
        ascending_coefficients.pop_back();
    if (ascending_coefficients.empty() || ascending_coefficients.back() == 0)
        throw std::domain_error("make_polynomial: leading coefficient must be nonzero");
    if (ascending_coefficients.size() > 17)
        throw std::domain_error("make_polynomial: degree cap is 16");
    return IntegerPolynomial{std::move(ascending_coefficients)};
}

namespace {

std::complex<double> eval_poly(const IntegerPolynomial& p, std::complex<double> z) {
    std::complex<double> v = 0;
    for (int i = p.degree(); i >= 0; --i)
        v = v * z + static_cast<double>(p.coefficients[i]);
    return v;
}

std::complex<double> eval_deriv(const IntegerPolynomial& p, std::complex<double> z) {
    std::complex<double> v = 0;
    for (int i = p.degree(); i >= 1; --i)
        v = v * z + static_cast<double>(i) * static_cast<double>(p.coefficients[i]);
    return v;
}

} // namespace

double mahler_measure(const IntegerPolynomial& p) {
    int n = p.degree();
    if (n < 1) throw std::domain_error("mahler_measure: degree must be >= 1");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double lead = static_cast<double>(p.coefficients[n]);
    for (int i = 0; i < n; ++i) {
        companion(i, n - 1) = -static_cast<double>(p.coefficients[i]) / lead;
        if (i + 1 < n) companion(i + 1, i) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);

    double coeff_norm = 0;
    for (long long c : p.coefficients) coeff_norm += std::abs(static_cast<double>(c));

    double measure = std::abs(lead);
    for (int i = 0; i < n; ++i) {
        std::complex<double> r = solver.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            std::complex<double> f = eval_poly(p, r);
            std::complex<double> df = eval_deriv(p, r);
            if (std::abs(df) < 1e-300) break;
            std::complex<double> step = f / df;
            r -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(r))) break;
        }
        double scale = coeff_norm * std::pow(std::max(1.0, std::abs(r)), n);
        if (std::abs(eval_poly(p, r)) > 1e-10 * scale)
            throw std::runtime_error("mahler_measure: root residual certificate failed");
        measure *= std::max(1.0, std::abs(r));
    }
    return measure;
}

namespace {

bool is_perfect_square(long long n) {
    if (n < 0) return false;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c)
        if (c * c == n) return true;
    return false;
}

bool has_rational_root(const IntegerPolynomial& p) {
    long long c0 = p.coefficients.front();
    long long cn = p.coefficients.back();
    if (c0 == 0) return true; // x divides
    auto divisors = [](long long v) {
        v = std::abs(v);
        std::vector<long long> ds;
        for (long long d = 1; d * d <= v; ++d)
            if (v % d == 0) { ds.push_back(d); ds.push_back(v / d); }
        return ds;
    };
    for (long long num : divisors(c0)) {
        for (long long den : divisors(cn)) {
            if (std::gcd(num, den) != 1) continue;
            for (int sign : {1, -1}) {
                // evaluate den^n * p(sign*num/den) exactly
                BigInt acc = 0, pw = 1;
                for (int i = p.degree(); i >= 0; --i) {
                    acc = acc * (sign * num) + BigInt(p.coefficients[i]) * pw;
                    if (i > 0) pw *= den;
                }
                if (acc == 0) return true;
            }
        }
    }
    return false;
}

} // namespace

double weil_height(const IntegerPolynomial& p, bool assert_irreducible) {
    int n = p.degree();
    if (n < 1) throw std::domain_error("weil_height: degree must be >= 1");
    if (assert_irreducible) {
        bool reducible = false;
        if (n == 2) {
            long long a = p.coefficients[2], b = p.coefficients[1], c = p.coefficients[0];
            reducible = is_perfect_square(b * b - 4 * a * c);
        } else if (n == 3 || n == 4) {
            reducible = has_rational_root(p);
        } else if (n > 4) {
            std::cerr << "weil_height: irreducibility not verified for degree " << n << "\n";
        }
        if (reducible) throw std::domain_error("weil_height: polynomial is reducible");
    }
    return std::log(mahler_measure(p)) / n;
}

double geodesic_length_from_trace(long long t) {
    long long a = std::abs(t);
    if (a <= 2) throw std::domain_error("geodesic_length_from_trace: trace is not hyperbolic");
    return 2.0 * std::acosh(static_cast<double>(a) / 2.0);
}

SystoleResult class_systole_Q(const QuaternionAlgebraQ& B) {
    if (!B.indefinite()) throw std::domain_error("class_systole_Q: algebra must be indefinite");
    for (long long t = 3; t <= 1'000'000; ++t) {
        std::uint64_t sa = squarefree_part(static_cast<std::uint64_t>(t - 2));
        std::uint64_t sb = squarefree_part(static_cast<std::uint64_t>(t + 2));
        std::uint64_t g = std::gcd(sa, sb);
        long long sf = static_cast<long long>(sa / g * (sb / g));
        QuadraticField K = make_field(sf);
        if (admits_embedding_Q(B, K))
            return SystoleResult{t, K.delta, geodesic_length_from_trace(t)};
    }
    throw std::runtime_error("class_systole_Q: trace search cap exceeded");
}

std::optional<double> unit_systole_upper_bound(const QuaternionAlgebraQ& B,
                                               const QuadraticField& K) {
    if (K.imaginary) throw std::domain_error("unit_systole_upper_bound: field must be real");
    if (!admits_embedding_Q(B, K)) return std::nullopt;

    static std::map<long long, double> reg_cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = reg_cache.find(K.delta);
        if (it != reg_cache.end()) return 2.0 * it->second;
    }
    double reg = norm_one_unit(K).regulator;
    std::lock_guard<std::mutex> lock(mu);
    reg_cache.emplace(K.delta, reg);
    return 2.0 * reg;
}

double short_geodesic_field_bound(double x0, const FieldProfile& profile) {
    if (!(x0 > 0)) throw std::domain_error("short_geodesic_field_bound: x0 must be positive");
    return std::exp(2.0 * (profile.n_k + x0));
}

double silverman_lower_bound(std::uint64_t delta_rel_norm, const FieldProfile& profile) {
    if (delta_rel_norm < 1) throw std::domain_error("silverman_lower_bound: norm must be >= 1");
    double n = profile.n_k;
    return -(profile.r1 + profile.r2) * std::log(2.0) / (2.0 * n) +
           std::log(static_cast<double>(delta_rel_norm)) / (4.0 * n);
}

double brindza_unit_height_bound(int degree, double regulator) {
    if (degree < 2) throw std::domain_error("brindza_unit_height_bound: degree must be >= 2");
    return std::pow(6.0, degree) * std::pow(static_cast<double>(degree), 5.0 * degree) * regulator;
}

double min_group_systole_relation(double class_systole) {
    if (!(class_systole > 0))
        throw std::domain_error("min_group_systole_relation: systole must be positive");
    return class_systole / 2.0;
}

} // namespace orbicensus
