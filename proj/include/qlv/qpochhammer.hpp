#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qlv/prec_complex.hpp"

namespace qlv {

// m(m-1)/2, valid for negative m.
inline long long binom2(long long m) { return m * (m - 1) / 2; }

// The base of every q-shifted factorial; 0 < |q| < 1 is enforced at
// construction.
class QModulus {
public:
    explicit QModulus(PrecComplex q) : value_(std::move(q)) {
        const double a = value_.abs_double();
        if (!(a > 0.0) || !(a < 1.0)) throw Error("QModulus: need 0 < |q| < 1");
    }
    const PrecComplex& value() const { return value_; }
    mpfr_prec_t prec() const { return value_.prec(); }
    double abs() const { return value_.abs_double(); }

private:
    PrecComplex value_;
};

// Denominator-factor proximity threshold at a given working precision:
// 10^-(decimal_digits/2).
double pole_threshold_for(mpfr_prec_t prec);

// (a;q)_k for any integer k.
//   k >= 0 : prod_{j=0}^{k-1} (1 - a q^j)           (zero factors are legal)
//   k <  0 : 1 / prod_{j=1}^{-k} (1 - a q^-j)       (PoleError near a zero factor)
PrecComplex qpoch_finite(const PrecComplex& a, const QModulus& q, long k,
                         double pole_eps = 0.0);

// 1/(a;q)_k with the positional semantics flipped: for k >= 0 a vanishing
// factor is a pole; for k < 0 the value is the plain product
// prod_{j=1}^{-k} (1 - a q^-j), whose zeros legally terminate bilateral
// series.
PrecComplex qpoch_finite_recip(const PrecComplex& a, const QModulus& q, long k,
                               double pole_eps = 0.0);

struct QPochInfResult {
    PrecComplex value;
    double tail_bound = 0.0;  // certified relative bound on the dropped tail
    long factors = 0;         // J, the number of head factors multiplied
};

// (a;q)_inf truncated at the least J whose certified relative tail bound
// drops below tol. The bound is |log prod_{j>=J}(1-aq^j)| <=
// |a||q|^J / ((1-|q|)(1-|a||q|^J)), applied once |a||q|^J < 1/2.
QPochInfResult qpoch_infinite(const PrecComplex& a, const QModulus& q, double tol);

// (a_1,...,a_m;q)_k = (a_1;q)_k ... (a_m;q)_k
PrecComplex qpoch_list(std::span<const PrecComplex> as, const QModulus& q, long k,
                       double pole_eps = 0.0);
QPochInfResult qpoch_list_infinite(std::span<const PrecComplex> as, const QModulus& q,
                                   double tol);

}  // namespace qlv
