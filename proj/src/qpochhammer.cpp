#include "qlv/qpochhammer.hpp"

#include <cmath>

namespace qlv {

double pole_threshold_for(mpfr_prec_t prec) {
    const long digits = static_cast<long>(static_cast<double>(prec) * 0.30103);
    return std::pow(10.0, -static_cast<double>(digits / 2));
}

namespace {

// prod_{j=1}^{s} (1 - a / q^j), the shared core of both negative-order
// branches. q^j is maintained as an exact multiplication chain so that
// a == q gives an exact zero at j = 1.
PrecComplex neg_order_product(const PrecComplex& a, const QModulus& q, long s,
                              double pole_eps, bool zero_is_pole) {
    const mpfr_prec_t p = std::max(a.prec(), q.prec());
    PrecComplex prod(p);
    prod.set_one();
    PrecComplex qs(q.value().at_prec(p));  // q^j
    PrecComplex one(p);
    one.set_one();
    PrecComplex t(p), factor(p);
    for (long j = 1; j <= s; ++j) {
        if (j > 1) PrecComplex::mul(qs, qs, q.value());
        PrecComplex::div(t, a, qs);
        PrecComplex::sub(factor, one, t);
        if (zero_is_pole && factor.abs_double() < pole_eps) {
            throw PoleError("q-shifted factorial pole: |1 - a q^-" + std::to_string(j) +
                            "| below threshold");
        }
        PrecComplex::mul(prod, prod, factor);
    }
    return prod;
}

// prod_{j=0}^{k-1} (1 - a q^j)
PrecComplex pos_order_product(const PrecComplex& a, const QModulus& q, long k,
                              double pole_eps, bool zero_is_pole) {
    const mpfr_prec_t p = std::max(a.prec(), q.prec());
    PrecComplex prod(p);
    prod.set_one();
    PrecComplex aq(a.at_prec(p));  // a q^j
    PrecComplex one(p);
    one.set_one();
    PrecComplex factor(p);
    for (long j = 0; j < k; ++j) {
        if (j > 0) PrecComplex::mul(aq, aq, q.value());
        PrecComplex::sub(factor, one, aq);
        if (zero_is_pole && factor.abs_double() < pole_eps) {
            throw PoleError("q-shifted factorial pole: |1 - a q^" + std::to_string(j) +
                            "| below threshold");
        }
        PrecComplex::mul(prod, prod, factor);
    }
    return prod;
}

}  // namespace

PrecComplex qpoch_finite(const PrecComplex& a, const QModulus& q, long k,
                         double pole_eps) {
    if (pole_eps <= 0.0) pole_eps = pole_threshold_for(std::max(a.prec(), q.prec()));
    if (k >= 0) return pos_order_product(a, q, k, pole_eps, /*zero_is_pole=*/false);
    PrecComplex den = neg_order_product(a, q, -k, pole_eps, /*zero_is_pole=*/true);
    PrecComplex one(den.prec());
    one.set_one();
    PrecComplex r(den.prec());
    PrecComplex::div(r, one, den);
    return r;
}

PrecComplex qpoch_finite_recip(const PrecComplex& a, const QModulus& q, long k,
                               double pole_eps) {
    if (pole_eps <= 0.0) pole_eps = pole_threshold_for(std::max(a.prec(), q.prec()));
    if (k < 0) return neg_order_product(a, q, -k, pole_eps, /*zero_is_pole=*/false);
    PrecComplex den = pos_order_product(a, q, k, pole_eps, /*zero_is_pole=*/true);
    PrecComplex one(den.prec());
    one.set_one();
    PrecComplex r(den.prec());
    PrecComplex::div(r, one, den);
    return r;
}

QPochInfResult qpoch_infinite(const PrecComplex& a, const QModulus& q, double tol) {
    if (!(tol > 0.0)) throw Error("qpoch_infinite: tol must be positive");
    const mpfr_prec_t p = std::max(a.prec(), q.prec());
    QPochInfResult res{PrecComplex(p), 0.0, 0};
    res.value.set_one();

    const double qa = q.abs();
    double r = a.abs_double();  // |a| |q|^J
    PrecComplex aq(a.at_prec(p));
    PrecComplex one(p);
    one.set_one();
    PrecComplex factor(p);
    long j = 0;
    // 2^62 iterations never happen; |q|<1 guarantees termination.
    for (;; ++j) {
        if (r < 0.5) {
            const double logbound = r / ((1.0 - qa) * (1.0 - r));
            const double relbound = logbound * (1.0 + logbound);  // >= e^B - 1 for B <= 1
            if (relbound < tol) {
                res.tail_bound = relbound;
                res.factors = j;
                return res;
            }
        }
        if (j > 0) PrecComplex::mul(aq, aq, q.value());
        PrecComplex::sub(factor, one, aq);
        PrecComplex::mul(res.value, res.value, factor);
        r *= qa;
    }
}

PrecComplex qpoch_list(std::span<const PrecComplex> as, const QModulus& q, long k,
                       double pole_eps) {
    PrecComplex prod(q.prec());
    prod.set_one();
    for (const auto& a : as) prod *= qpoch_finite(a, q, k, pole_eps);
    return prod;
}

QPochInfResult qpoch_list_infinite(std::span<const PrecComplex> as, const QModulus& q,
                                   double tol) {
    QPochInfResult res{PrecComplex(q.prec()), 0.0, 0};
    res.value.set_one();
    for (const auto& a : as) {
        QPochInfResult one = qpoch_infinite(a, q, tol);
        res.value *= one.value;
        res.tail_bound += one.tail_bound;
        res.factors += one.factors;
    }
    return res;
}

}  // namespace qlv
