#include "orbicensus/quadratic_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orbicensus {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

double log_big(const BigInt& x) {
    using boost::multiprecision::msb;
    if (x <= 0) throw std::domain_error("log_big: positive argument required");
    unsigned m = msb(x);
    if (m <= 900) return std::log(x.convert_to<double>());
    BigInt top = x >> (m - 52);
    return std::log(top.convert_to<double>()) + (m - 52) * std::numbers::ln2;
}

// log((a + b*sqrt(delta))/2) for a, b > 0
double log_half_surd(const BigInt& a, const BigInt& b, long long delta) {
    double la = log_big(a);
    double lb = log_big(b) + 0.5 * std::log(static_cast<double>(delta));
    double hi = std::max(la, lb), lo = std::min(la, lb);
    return hi + std::log1p(std::exp(lo - hi)) - std::numbers::ln2;
}

} // namespace

QuadraticField make_field(long long d) {
    if (d == 0 || d == 1) throw std::domain_error("make_field: d must not be 0 or 1");
    if (!is_squarefree_small(d)) throw std::domain_error("make_field: d must be squarefree");
    QuadraticField K;
    K.d = d;
    K.delta = (((d % 4) + 4) % 4 == 1) ? d : 4 * d;
    K.imaginary = d < 0;
    return K;
}

QuadraticField field_from_discriminant(long long delta) {
    if (!is_fundamental_discriminant(delta))
        throw std::domain_error("field_from_discriminant: delta not fundamental");
    long long d = (((delta % 4) + 4) % 4 == 1) ? delta : delta / 4;
    return make_field(d);
}

Splitting splitting_type(const QuadraticField& K, std::uint64_t p) {
    int k = kronecker_symbol(K.delta, p);
    if (k == 1) return Splitting::Split;
    if (k == -1) return Splitting::Inert;
    return Splitting::Ramified;
}

FundamentalUnit fundamental_unit(const QuadraticField& K) {
    if (K.imaginary) throw std::domain_error("fundamental_unit: field must be real");
    const std::uint64_t D = static_cast<std::uint64_t>(K.delta);
    const std::uint64_t s = isqrt_u64(D);
    const std::uint64_t b = D % 2;

    // Continued fraction of (b + sqrt(D))/2; the expansion closes when the
    // denominator returns to 2.
    std::uint64_t P = b, Q = 2;
    std::uint64_t a = (P + s) / Q;
    BigInt pm1 = 1, qm1 = 0;
    BigInt pcur = a, qcur = 1;

    constexpr int kMaxSteps = 1'000'000;
    int steps = 0;
    for (;; ++steps) {
        if (steps >= kMaxSteps)
            throw std::runtime_error("fundamental_unit: period cap exceeded");
        std::uint64_t Pn = a * Q - P;
        std::uint64_t Qn = (D - Pn * Pn) / Q;
        if (Qn == 2) break;
        P = Pn;
        Q = Qn;
        a = (P + s) / Q;
        BigInt pn = a * pcur + pm1;
        BigInt qn = a * qcur + qm1;
        pm1 = pcur; qm1 = qcur;
        pcur = pn; qcur = qn;
    }

    FundamentalUnit u;
    u.a = 2 * pcur - BigInt(b) * qcur;
    u.b = qcur;
    BigInt pell = u.a * u.a - BigInt(K.delta) * u.b * u.b;
    if (pell == 4) u.norm = 1;
    else if (pell == -4) u.norm = -1;
    else throw std::runtime_error("fundamental_unit: Pell invariant violated");
    u.regulator = log_half_surd(u.a, u.b, K.delta);
    return u;
}

FundamentalUnit norm_one_unit(const QuadraticField& K) {
    FundamentalUnit u = fundamental_unit(K);
    if (u.norm == 1) return u;
    FundamentalUnit v;
    v.a = (u.a * u.a + BigInt(K.delta) * u.b * u.b) / 2;
    v.b = u.a * u.b;
    v.norm = 1;
    v.regulator = log_half_surd(v.a, v.b, K.delta);
    return v;
}

double dirichlet_L2(long long delta) {
    if (delta == 1) return std::numbers::pi * std::numbers::pi / 6.0;
    if (!is_fundamental_discriminant(delta))
        throw std::domain_error("dirichlet_L2: delta must be fundamental or 1");
    const std::uint64_t m = static_cast<std::uint64_t>(delta < 0 ? -delta : delta);
    std::vector<int> chi(m);
    chi[0] = 0;
    for (std::uint64_t r = 1; r < m; ++r) chi[r] = kronecker_symbol(delta, r);

    // Abel summation bounds the tail by 2m/N^2; N >= 2*10^4 sqrt(m) keeps it
    // below 10^-8.
    std::uint64_t N = static_cast<std::uint64_t>(2e4 * std::sqrt(static_cast<double>(m))) + m;
    N = (N / m + 1) * m;
    long double sum = 0.0L;
    for (std::uint64_t n = 1; n <= N; ++n) {
        int c = chi[n % m];
        if (c != 0) sum += static_cast<long double>(c) / (static_cast<long double>(n) * n);
    }
    return static_cast<double>(sum);
}

double zeta_k2(const QuadraticField& K) {
    return std::numbers::pi * std::numbers::pi / 6.0 * dirichlet_L2(K.delta);
}

std::vector<PrimeIdealIQ> prime_ideals_up_to(const QuadraticField& K, std::uint64_t norm_bound,
                                             const PrimeTable& table) {
    if (!K.imaginary) throw std::domain_error("prime_ideals_up_to: field must be imaginary");
    if (norm_bound > table.limit()) throw ConfigError("prime_ideals_up_to: norm bound exceeds table");
    std::vector<PrimeIdealIQ> out;
    for (std::uint32_t p : table.primes()) {
        if (p > norm_bound) break;
        Splitting s = splitting_type(K, p);
        if (s == Splitting::Split) {
            out.push_back({p, p, s, 0});
            out.push_back({p, p, s, 1});
        } else if (s == Splitting::Ramified) {
            out.push_back({p, p, s, 0});
        } else {
            std::uint64_t n2 = static_cast<std::uint64_t>(p) * p;
            if (n2 <= norm_bound) out.push_back({p, n2, s, 0});
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdealIQ& x, const PrimeIdealIQ& y) {
        return std::tie(x.norm, x.p, x.conjugate_index) < std::tie(y.norm, y.p, y.conjugate_index);
    });
    return out;
}

std::uint64_t count_quadratic_fields(double x) {
    if (x < 3) throw std::domain_error("count_quadratic_fields: x must be >= 3");
    std::uint64_t X = static_cast<std::uint64_t>(x);
    std::vector<char> sf(X + 1, 1);
    for (std::uint64_t p = 2; p * p <= X; ++p)
        for (std::uint64_t q = p * p; q <= X; q += p * p) sf[q] = 0;

    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= X; ++n) {
        if (!sf[n]) continue;
        if (n % 4 == 1) ++count; // delta = n
        if (n % 4 == 3) ++count; // delta = -n
    }
    for (std::uint64_t m = 1; m <= X / 4; ++m) {
        if (!sf[m]) continue;
        std::uint64_t r = m % 4;
        if (r == 2 || r == 3) ++count; // delta = 4m
        if (r == 1 || r == 2) ++count; // delta = -4m
    }
    return count;
}

} // namespace orbicensus
