#include "qlv/exact.hpp"

#include <vector>

namespace qlv {

namespace {

long long binom2ll(long long m) { return m * (m - 1) / 2; }

// q^e for any integer e (q != 0).
ExactScalar qpow(const ExactScalar& q, long long e) {
    ExactScalar r(1);
    ExactScalar base = e >= 0 ? q : ExactScalar(ExactScalar(1) / q);
    unsigned long long n = e >= 0 ? static_cast<unsigned long long>(e)
                                  : static_cast<unsigned long long>(-e);
    while (n > 0) {
        if (n & 1ull) r *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return r;
}

}  // namespace

ExactScalar rat_pow(const ExactScalar& x, long e) {
    if (x == 0 && e < 0) throw PoleError("rat_pow: 0^negative");
    return qpow(x, e);
}

ExactScalar qpoch_finite_exact(const ExactScalar& a, const ExactScalar& q, long k) {
    if (!(q > 0 && q < 1)) throw Error("qpoch_finite_exact: need 0 < q < 1");
    ExactScalar prod(1);
    if (k >= 0) {
        ExactScalar aq = a;
        for (long j = 0; j < k; ++j) {
            if (j > 0) aq *= q;
            prod *= ExactScalar(1) - aq;
        }
        return prod;
    }
    ExactScalar qs(1);
    for (long j = 1; j <= -k; ++j) {
        qs *= q;
        ExactScalar factor = ExactScalar(1) - a / qs;
        if (factor == 0) {
            throw PoleError("qpoch_finite_exact: zero denominator factor at j=" +
                            std::to_string(j));
        }
        prod *= factor;
    }
    return ExactScalar(1) / prod;
}

ExactScalar vandermonde_exact(std::span<const ExactScalar> x,
                              std::span<const long> k, const ExactScalar& q) {
    const size_t n = x.size();
    ExactScalar r(1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            ExactScalar den = x[i] - x[j];
            if (den == 0) throw DegenerateXError("vandermonde_exact: x_i == x_j");
            r *= (x[i] * qpow(q, k[i]) - x[j] * qpow(q, k[j])) / den;
        }
    }
    return r;
}

ShiftIdentitySides shift_identity_exact(std::span<const ExactScalar> x,
                                        const ExactScalar& q,
                                        std::span<const long> m) {
    const long n = static_cast<long>(x.size());
    long long M = 0;
    for (long mi : m) M += mi;

    ExactScalar lhs(1);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            lhs *= qpoch_finite_exact(x[i] / x[j] * q, q, m[j] - m[i]);
        }
    }

    long long qexp = -binom2ll(M + 1);
    for (long mi : m) qexp += n * binom2ll(mi + 1);
    ExactScalar rhs = qpow(q, qexp);
    if (((n - 1) * M) % 2 != 0) rhs = -rhs;
    for (long i = 0; i < n; ++i) rhs *= rat_pow(x[i], static_cast<long>(M - n * m[i]));
    for (long i = 0; i < n; ++i) {
        for (long j = i + 1; j < n; ++j) {
            rhs *= (x[i] * qpow(q, -m[i]) - x[j] * qpow(q, -m[j])) / (x[i] - x[j]);
        }
    }
    return {lhs, rhs};
}

FiniteLemmaSides finite_lemma_exact(std::span<const ExactScalar> a,
                                    std::span<const ExactScalar> x,
                                    const ExactScalar& q, long N,
                                    std::span<const ExactScalar> f) {
    const long n = static_cast<long>(x.size());
    if (static_cast<long>(f.size()) < N + 1) throw Error("finite_lemma_exact: f too short");

    ExactScalar A(1);
    for (const auto& ai : a) A *= ai;

    ExactScalar lhs(0);
    for (long m = 0; m <= N; ++m) {
        lhs += qpoch_finite_exact(A, q, m) / qpoch_finite_exact(q, q, m) * f[m];
    }

    ExactScalar rhs(0);
    std::vector<long> k(n, 0);
    // Enumerate k >= 0 with |k| <= N.
    for (;;) {
        long sum = 0;
        for (long v : k) sum += v;
        if (sum <= N) {
            ExactScalar t = vandermonde_exact(x, k, q);
            for (long i = 0; i < n; ++i) {
                for (long j = 0; j < n; ++j) {
                    t *= qpoch_finite_exact(x[i] / x[j] * a[j], q, k[i]);
                    ExactScalar den = qpoch_finite_exact(x[i] / x[j] * q, q, k[i]);
                    if (den == 0) throw PoleError("finite_lemma_exact: zero (x_i q / x_j)_k");
                    t /= den;
                }
            }
            rhs += t * f[sum];
        }
        // Odometer over [0,N]^n.
        long pos = 0;
        while (pos < n && ++k[pos] > N) k[pos++] = 0;
        if (pos == n) break;
    }
    return {lhs, rhs};
}

bool verify_finite_identity_exact(const std::string& id, const ExactPoint& point) {
    if (id == "I05") {
        auto sides = shift_identity_exact(point.x, point.q, point.m);
        return sides.lhs == sides.rhs;
    }
    if (id == "I06") {
        auto sides = finite_lemma_exact(point.a, point.x, point.q, point.N, point.f);
        return sides.lhs == sides.rhs;
    }
    throw NotExactCapable("identity " + id + " is not a finite rational identity");
}

PrecComplex to_complex(const ExactScalar& r, mpfr_prec_t prec) {
    PrecComplex z(prec);
    mpfr_set_q(z.re_mut(), r.get_mpq_t(), MPFR_RNDN);
    return z;
}

std::string to_string(const ExactScalar& r) { return r.get_str(); }

}  // namespace qlv
