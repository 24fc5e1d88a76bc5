// Arbitrary-precision complex arithmetic and q-shifted factorials.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qlv/prec_complex.hpp"
#include "qlv/qpochhammer.hpp"
#include "qlv/rng.hpp"

using namespace qlv;

namespace {

PrecComplex cpl(double re, double im = 0.0, mpfr_prec_t prec = 128) {
    return PrecComplex::from_double(re, im, prec);
}

double rel(const PrecComplex& a, const PrecComplex& b) {
    return PrecComplex::rel_diff(a, b);
}

// independent of the library's tail-bound stopping rule
PrecComplex direct_qpoch_inf(const PrecComplex& a, const QModulus& q, int terms) {
    PrecComplex prod(a.prec());
    prod.set_one();
    PrecComplex aq = a;
    PrecComplex one(a.prec());
    one.set_one();
    for (int j = 0; j < terms; ++j) {
        prod *= one - aq;
        aq *= q.value();
    }
    return prod;
}

}  // namespace

TEST_CASE("binom2 handles negative arguments") {
    CHECK(binom2(3) == 3);
    CHECK(binom2(0) == 0);
    CHECK(binom2(-2) == 3);
    CHECK(binom2(1) == 0);
    CHECK(binom2(-1) == 1);
}

TEST_CASE("PrecComplex basics") {
    CHECK_THROWS_AS(PrecComplex(32), Error);

    PrecComplex z = cpl(1.25, -0.5);
    PrecComplex w = z / z;
    CHECK(mpfr_cmp_ui(w.re(), 1) == 0);
    CHECK(mpfr_zero_p(w.im()));

    // precision rule: result carries the max of the operand precisions
    PrecComplex lo = cpl(0.3, 0.1, 64);
    PrecComplex hi = cpl(0.7, -0.2, 192);
    CHECK((lo * hi).prec() == 192);

    // x/x == 1 exactly also for complex values
    PrecComplex c = cpl(0.37, 1.21);
    PrecComplex r = c / c;
    CHECK(mpfr_cmp_ui(r.re(), 1) == 0);
    CHECK(mpfr_zero_p(r.im()));

    CHECK(cpl(2.0).pow_int(10).abs_double() == doctest::Approx(1024.0));
    CHECK(cpl(2.0).pow_int(-2).abs_double() == doctest::Approx(0.25));
}

TEST_CASE("decimal strings round-trip bitwise") {
    RngStream rng(123);
    for (int i = 0; i < 50; ++i) {
        PrecComplex z = cpl(rng.uniform(-3, 3) * std::exp(rng.uniform(-20, 20)),
                            rng.uniform(-3, 3));
        PrecComplex back = PrecComplex::from_decimal(z.re_decimal(), z.im_decimal(), 128);
        CHECK(mpfr_equal_p(z.re(), back.re()));
        CHECK(mpfr_equal_p(z.im(), back.im()));
    }
    CHECK(PrecComplex(128).re_decimal() == "0");
}

TEST_CASE("QModulus rejects |q| outside (0,1)") {
    CHECK_THROWS_AS(QModulus(cpl(1.0)), Error);
    CHECK_THROWS_AS(QModulus(cpl(0.0)), Error);
    CHECK_NOTHROW(QModulus(cpl(0.5)));
    CHECK_NOTHROW(QModulus(cpl(0.3, 0.4)));  // |q| = 0.5
}

TEST_CASE("qpoch_finite examples") {
    QModulus q(cpl(0.5));
    // (1/2; 1/2)_2 = (1 - 1/2)(1 - 1/4) = 3/8
    CHECK(rel(qpoch_finite(cpl(0.5), q, 2), cpl(0.375)) < 1e-35);
    // empty product
    QModulus q03(cpl(0.3));
    PrecComplex a = cpl(0.7, 0.1);
    PrecComplex one(128);
    one.set_one();
    CHECK(rel(qpoch_finite(a, q03, 0), one) == 0.0);
    // (1/4; 1/2)_{-1} = 1/(1 - (1/4)*2) = 2
    CHECK(rel(qpoch_finite(cpl(0.25), q, -1), cpl(2.0)) < 1e-35);
}

TEST_CASE("qpoch_finite pole at negative order") {
    QModulus q(cpl(0.5));
    // a = q: the j=1 denominator factor 1 - a/q vanishes exactly
    CHECK_THROWS_AS(qpoch_finite(q.value(), q, -1), PoleError);
    // reciprocal position allows the zero (bilateral termination)
    PrecComplex r = qpoch_finite_recip(q.value(), q, -1);
    CHECK(r.is_zero());
    // reciprocal position poles on the positive side instead
    CHECK_THROWS_AS(qpoch_finite_recip(cpl(1.0), q, 1), PoleError);
}

TEST_CASE("qpoch_infinite at a = 0 and the Euler product") {
    QModulus q(cpl(0.5));
    QPochInfResult r0 = qpoch_infinite(PrecComplex(128), q, 1e-30);
    PrecComplex one(128);
    one.set_one();
    CHECK(rel(r0.value, one) == 0.0);

    // (1/2; 1/2)_inf
    QPochInfResult e = qpoch_infinite(cpl(0.5), q, 1e-30);
    PrecComplex expected = PrecComplex::from_decimal(
        "0.2887880950866024212788997219292307800889e0", "0", 256);
    CHECK(rel(e.value, expected) < 1e-30);
    CHECK(e.tail_bound < 1e-30);
    CHECK(e.factors > 50);

    // independent direct-accumulation oracle, compared at the tail level
    PrecComplex direct = direct_qpoch_inf(cpl(0.5, 0.0, 256), QModulus(cpl(0.5, 0.0, 256)), 300);
    CHECK(rel(e.value, direct) < 2e-30);
    QPochInfResult sharp = qpoch_infinite(cpl(0.5, 0.0, 256), QModulus(cpl(0.5, 0.0, 256)), 1e-60);
    CHECK(rel(sharp.value, direct) < 1e-59);
}

TEST_CASE("qpoch_infinite telescoping") {
    QModulus q(cpl(0.41));
    PrecComplex a = cpl(0.83, 0.37);
    const double tol = 1e-28;
    QPochInfResult full = qpoch_infinite(a, q, tol);
    PrecComplex shifted = a * q.value().pow_int(3);
    PrecComplex split = qpoch_finite(a, q, 3) * qpoch_infinite(shifted, q, tol).value;
    CHECK(rel(full.value, split) < 2 * tol);
}

TEST_CASE("qpoch_list") {
    QModulus q(cpl(0.5));
    CHECK(rel(qpoch_list({}, q, 5), cpl(1.0)) == 0.0);
    std::vector<PrecComplex> two{cpl(0.5), cpl(0.5)};
    CHECK(rel(qpoch_list(two, q, 2), cpl(9.0 / 64.0)) < 1e-35);
    std::vector<PrecComplex> single{cpl(0.3, 0.2)};
    QPochInfResult lst = qpoch_list_infinite(single, q, 1e-25);
    QPochInfResult direct = qpoch_infinite(single[0], q, 1e-25);
    CHECK(rel(lst.value, direct.value) == 0.0);
}

TEST_CASE("recurrence (a)_{k+1} = (a)_k (1 - a q^k) over k in [-8, 8]") {
    RngStream rng(2024);
    const double bound = std::exp2(-(128.0 - 8.0));
    for (int trial = 0; trial < 20; ++trial) {
        QModulus q(cpl(rng.uniform(0.15, 0.8)));
        PrecComplex a = cpl(rng.uniform(-2, 2), rng.uniform(-2, 2));
        if (a.abs_double() < 0.05) continue;
        for (long k = -8; k <= 8; ++k) {
            PrecComplex lhs(128), rhs(128), one(128);
            one.set_one();
            try {
                lhs = qpoch_finite(a, q, k + 1);
                rhs = qpoch_finite(a, q, k) * (one - a * q.value().pow_int(k));
            } catch (const PoleError&) {
                continue;
            }
            const double scale = std::max(1.0, rhs.abs_double());
            CHECK((lhs - rhs).abs_double() < bound * scale);
        }
    }
}

TEST_CASE("reflection (a)_{-k} = 1/(a q^{-k}; q)_k for k in [1, 8]") {
    RngStream rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        QModulus q(cpl(rng.uniform(0.2, 0.7)));
        PrecComplex a = cpl(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0));
        for (long k = 1; k <= 8; ++k) {
            PrecComplex lhs(128), rhs(128), one(128);
            one.set_one();
            try {
                lhs = qpoch_finite(a, q, -k);
                PrecComplex shifted = a * q.value().pow_int(-k);
                rhs = one / qpoch_finite(shifted, q, k);
            } catch (const PoleError&) {
                continue;
            }
            CHECK((lhs - rhs).abs_double() < 1e-28 * std::max(1.0, lhs.abs_double()));
        }
    }
}

TEST_CASE("splitting (a)_inf = (a)_k (a q^k)_inf for k in [-4, 4]") {
    RngStream rng(99);
    const double tol = 1e-26;
    for (int trial = 0; trial < 8; ++trial) {
        QModulus q(cpl(rng.uniform(0.2, 0.7)));
        PrecComplex a = cpl(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8));
        QPochInfResult full = qpoch_infinite(a, q, tol);
        for (long k = -4; k <= 4; ++k) {
            PrecComplex split(128);
            try {
                PrecComplex shifted = a * q.value().pow_int(k);
                split = qpoch_finite(a, q, k) * qpoch_infinite(shifted, q, tol).value;
            } catch (const PoleError&) {
                continue;
            }
            CHECK(rel(full.value, split) < 8 * tol);
        }
    }
}

TEST_CASE("doubling precision moves the product less than the reported tail") {
    RngStream rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const double qd = rng.uniform(0.2, 0.7);
        const double ar = rng.uniform(-1.5, 1.5), ai = rng.uniform(-1.5, 1.5);
        const double tol = 1e-25;
        QPochInfResult v128 = qpoch_infinite(cpl(ar, ai, 128), QModulus(cpl(qd, 0, 128)), tol);
        QPochInfResult v256 = qpoch_infinite(cpl(ar, ai, 256), QModulus(cpl(qd, 0, 256)), tol);
        const double drift = rel(v128.value, v256.value);
        CHECK(drift <= v128.tail_bound + v256.tail_bound + std::exp2(-120.0));
    }
}
