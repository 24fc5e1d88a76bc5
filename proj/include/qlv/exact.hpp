#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "qlv/errors.hpp"
#include "qlv/prec_complex.hpp"

namespace qlv {

// Exact rational scalar. mpq_class keeps gcd(|num|, den) = 1 and den > 0
// canonical, which is exactly the ExactScalar contract.
using ExactScalar = mpq_class;

// x^e for integer e; PoleError on 0^negative.
ExactScalar rat_pow(const ExactScalar& x, long e);

// (a;q)_k in exact arithmetic; requires 0 < q < 1; PoleError when a
// negative-order denominator factor is exactly zero.
ExactScalar qpoch_finite_exact(const ExactScalar& a, const ExactScalar& q, long k);

// prod_{1<=i<j<=n} (x_i q^{k_i} - x_j q^{k_j}) / (x_i - x_j)
ExactScalar vandermonde_exact(std::span<const ExactScalar> x,
                              std::span<const long> k, const ExactScalar& q);

// The index-shift product identity: both sides evaluated independently.
//   lhs = prod_{i,j} ((x_i/x_j) q ; q)_{m_j - m_i}
//   rhs = (-1)^{(n-1)|m|} q^{-C(|m|+1,2) + n sum C(m_i+1,2)}
//         prod_i x_i^{|m| - n m_i} prod_{i<j} (x_i q^{-m_i} - x_j q^{-m_j})/(x_i - x_j)
struct ShiftIdentitySides {
    ExactScalar lhs, rhs;
};
ShiftIdentitySides shift_identity_exact(std::span<const ExactScalar> x,
                                        const ExactScalar& q,
                                        std::span<const long> m);

// The finite lemma with an arbitrary coefficient table f[0..N]:
//   lhs = sum_{m=0}^N (a_1...a_n;q)_m / (q;q)_m f(m)
//   rhs = sum_{k>=0, |k|<=N} V(x,k) prod_{i,j} ((x_i/x_j)a_j;q)_{k_i} / ((x_i/x_j)q;q)_{k_i} f(|k|)
struct FiniteLemmaSides {
    ExactScalar lhs, rhs;
};
FiniteLemmaSides finite_lemma_exact(std::span<const ExactScalar> a,
                                    std::span<const ExactScalar> x,
                                    const ExactScalar& q, long N,
                                    std::span<const ExactScalar> f);

// Exact parameter bindings for the exact-capable catalog entries.
struct ExactPoint {
    int n = 1;
    ExactScalar q;
    std::vector<ExactScalar> x;
    std::vector<ExactScalar> a;   // I06 only
    std::vector<long> m;          // I05 only
    long N = 0;                   // I06 only
    std::vector<ExactScalar> f;   // I06 only, values f(0..N)
};

// True iff both sides of the designated entry agree as exact rationals.
// NotExactCapable unless id is I05 or I06.
bool verify_finite_identity_exact(const std::string& id, const ExactPoint& point);

// Exact value embedded into a PrecComplex (rounded to prec).
PrecComplex to_complex(const ExactScalar& r, mpfr_prec_t prec);

std::string to_string(const ExactScalar& r);

}  // namespace qlv
