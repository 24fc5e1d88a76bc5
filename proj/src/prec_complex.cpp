#include "qlv/prec_complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace qlv {

namespace {

mpfr_prec_t out_prec(const PrecComplex& a, const PrecComplex& b) {
    return std::max(a.prec(), b.prec());
}

}  // namespace

void PrecComplex::add(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b) {
    const mpfr_prec_t p = out_prec(a, b);
    PrecComplex r(p);
    mpfr_add(r.re_, a.re_, b.re_, MPFR_RNDN);
    mpfr_add(r.im_, a.im_, b.im_, MPFR_RNDN);
    dst = std::move(r);
}

void PrecComplex::sub(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b) {
    const mpfr_prec_t p = out_prec(a, b);
    PrecComplex r(p);
    mpfr_sub(r.re_, a.re_, b.re_, MPFR_RNDN);
    mpfr_sub(r.im_, a.im_, b.im_, MPFR_RNDN);
    dst = std::move(r);
}

void PrecComplex::mul(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b) {
    const mpfr_prec_t p = out_prec(a, b);
    // Real-axis fast paths keep the hot loops cheap; most sampled points
    // are complex, but q and many table factors are real.
    if (a.is_real() && b.is_real()) {
        PrecComplex r(p);
        mpfr_mul(r.re_, a.re_, b.re_, MPFR_RNDN);
        dst = std::move(r);
        return;
    }
    PrecComplex r(p);
    mpfr_t t1, t2;
    mpfr_init2(t1, p);
    mpfr_init2(t2, p);
    mpfr_mul(t1, a.re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.im_, MPFR_RNDN);
    mpfr_sub(r.re_, t1, t2, MPFR_RNDN);
    mpfr_mul(t1, a.re_, b.im_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.re_, MPFR_RNDN);
    mpfr_add(r.im_, t1, t2, MPFR_RNDN);
    mpfr_clear(t1);
    mpfr_clear(t2);
    dst = std::move(r);
}

void PrecComplex::div(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b) {
    const mpfr_prec_t p = out_prec(a, b);
    if (b.is_real()) {
        PrecComplex r(p);
        mpfr_div(r.re_, a.re_, b.re_, MPFR_RNDN);
        if (a.is_real()) {
            mpfr_set_zero(r.im_, 1);
        } else {
            mpfr_div(r.im_, a.im_, b.re_, MPFR_RNDN);
        }
        dst = std::move(r);
        return;
    }
    PrecComplex r(p);
    mpfr_t den, t1, t2;
    mpfr_init2(den, p);
    mpfr_init2(t1, p);
    mpfr_init2(t2, p);
    mpfr_mul(t1, b.re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, b.im_, b.im_, MPFR_RNDN);
    mpfr_add(den, t1, t2, MPFR_RNDN);
    // (a.re*b.re + a.im*b.im) / den, (a.im*b.re - a.re*b.im) / den
    mpfr_mul(t1, a.re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.im_, MPFR_RNDN);
    mpfr_add(t1, t1, t2, MPFR_RNDN);
    mpfr_div(r.re_, t1, den, MPFR_RNDN);
    mpfr_mul(t1, a.im_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, a.re_, b.im_, MPFR_RNDN);
    mpfr_sub(t1, t1, t2, MPFR_RNDN);
    mpfr_div(r.im_, t1, den, MPFR_RNDN);
    mpfr_clear(den);
    mpfr_clear(t1);
    mpfr_clear(t2);
    dst = std::move(r);
}

PrecComplex PrecComplex::pow_int(long e) const {
    PrecComplex result(prec());
    result.set_one();
    if (e == 0) return result;
    unsigned long n = (e < 0) ? static_cast<unsigned long>(-(e + 1)) + 1ul
                              : static_cast<unsigned long>(e);
    PrecComplex base(*this);
    while (n > 0) {
        if (n & 1ul) mul(result, result, base);
        n >>= 1;
        if (n > 0) mul(base, base, base);
    }
    if (e < 0) {
        PrecComplex one(prec());
        one.set_one();
        div(result, one, result);
    }
    return result;
}

double PrecComplex::abs_double() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_hypot(t, re_, im_, MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    if (std::isinf(d)) d = std::numeric_limits<double>::max();
    mpfr_clear(t);
    return d;
}

double PrecComplex::log2_abs_upper() const {
    const bool rz = mpfr_zero_p(re_);
    const bool iz = mpfr_zero_p(im_);
    if (rz && iz) return -std::numeric_limits<double>::infinity();
    double e = -std::numeric_limits<double>::infinity();
    if (!rz) e = static_cast<double>(mpfr_get_exp(re_));
    if (!iz) e = std::max(e, static_cast<double>(mpfr_get_exp(im_)));
    return e + 1.0;  // |re|+|im| <= 2^(max_exp+1)
}

double PrecComplex::rel_diff(const PrecComplex& a, const PrecComplex& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    mpfr_t d, m, t;
    mpfr_init2(d, p);
    mpfr_init2(m, p);
    mpfr_init2(t, p);
    mpfr_sub(d, a.re_, b.re_, MPFR_RNDN);
    mpfr_sub(t, a.im_, b.im_, MPFR_RNDN);
    mpfr_hypot(d, d, t, MPFR_RNDN);
    mpfr_hypot(m, b.re_, b.im_, MPFR_RNDN);
    if (mpfr_cmp_ui(m, 1) < 0) mpfr_set_ui(m, 1, MPFR_RNDN);
    mpfr_div(d, d, m, MPFR_RNDN);
    double r = mpfr_get_d(d, MPFR_RNDN);
    if (std::isinf(r)) r = std::numeric_limits<double>::max();
    mpfr_clear(d);
    mpfr_clear(m);
    mpfr_clear(t);
    return r;
}

std::string PrecComplex::mpfr_decimal(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return "0";
    if (mpfr_nan_p(x)) return "nan";
    if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
    mpfr_exp_t e = 0;
    // n_digits = 0 requests the minimal digit count that reads back exactly.
    char* s = mpfr_get_str(nullptr, &e, 10, 0, x, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);
    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    // value = 0.<digits> * 10^e
    return sign + "0." + digits + "e" + std::to_string(static_cast<long>(e));
}

void PrecComplex::mpfr_from_decimal(mpfr_ptr out, const std::string& s) {
    if (s == "0") {
        mpfr_set_zero(out, 1);
        return;
    }
    if (mpfr_set_str(out, s.c_str(), 10, MPFR_RNDN) != 0) {
        throw IOError("bad decimal scalar: '" + s + "'");
    }
}

PrecComplex PrecComplex::from_decimal(const std::string& re, const std::string& im,
                                      mpfr_prec_t prec) {
    PrecComplex z(prec);
    mpfr_from_decimal(z.re_, re);
    mpfr_from_decimal(z.im_, im);
    return z;
}

}  // namespace qlv
