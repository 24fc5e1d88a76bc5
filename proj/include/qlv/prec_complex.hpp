#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "qlv/errors.hpp"

namespace qlv {

// Complex scalar at a configurable binary precision, backed by a pair of
// MPFR reals. All arithmetic rounds to nearest; a binary operation runs at
// the larger of the two operand precisions and the result carries it.
//
// Division uses the textbook formula, so z/z == 1 and (w*z)/z-style
// cancellations behave predictably; this is load-bearing for the exact
// series-termination semantics in the q-Pochhammer layer.
class PrecComplex {
public:
    static constexpr mpfr_prec_t kMinPrecision = 64;

    explicit PrecComplex(mpfr_prec_t prec = 128) {
        check_prec(prec);
        mpfr_init2(re_, prec);
        mpfr_init2(im_, prec);
        mpfr_set_zero(re_, 1);
        mpfr_set_zero(im_, 1);
    }

    PrecComplex(const PrecComplex& o) {
        mpfr_init2(re_, o.prec());
        mpfr_init2(im_, o.prec());
        mpfr_set(re_, o.re_, MPFR_RNDN);
        mpfr_set(im_, o.im_, MPFR_RNDN);
    }

    PrecComplex(PrecComplex&& o) noexcept {
        mpfr_init2(re_, kMinPrecision);
        mpfr_init2(im_, kMinPrecision);
        mpfr_swap(re_, o.re_);
        mpfr_swap(im_, o.im_);
    }

    PrecComplex& operator=(const PrecComplex& o) {
        if (this != &o) {
            mpfr_set_prec(re_, o.prec());
            mpfr_set_prec(im_, o.prec());
            mpfr_set(re_, o.re_, MPFR_RNDN);
            mpfr_set(im_, o.im_, MPFR_RNDN);
        }
        return *this;
    }

    PrecComplex& operator=(PrecComplex&& o) noexcept {
        mpfr_swap(re_, o.re_);
        mpfr_swap(im_, o.im_);
        return *this;
    }

    ~PrecComplex() {
        mpfr_clear(re_);
        mpfr_clear(im_);
    }

    static PrecComplex from_double(double re, double im, mpfr_prec_t prec) {
        PrecComplex z(prec);
        mpfr_set_d(z.re_, re, MPFR_RNDN);
        mpfr_set_d(z.im_, im, MPFR_RNDN);
        return z;
    }

    static PrecComplex from_long(long re, mpfr_prec_t prec) {
        PrecComplex z(prec);
        mpfr_set_si(z.re_, re, MPFR_RNDN);
        return z;
    }

    // Parses the decimal-string form produced by to_decimal().
    static PrecComplex from_decimal(const std::string& re, const std::string& im,
                                    mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(re_); }
    mpfr_srcptr re() const { return re_; }
    mpfr_srcptr im() const { return im_; }
    mpfr_ptr re_mut() { return re_; }
    mpfr_ptr im_mut() { return im_; }

    // Returns a copy rounded to a (usually higher) working precision.
    PrecComplex at_prec(mpfr_prec_t prec) const {
        check_prec(prec);
        PrecComplex z(prec);
        mpfr_set(z.re_, re_, MPFR_RNDN);
        mpfr_set(z.im_, im_, MPFR_RNDN);
        return z;
    }

    bool is_zero() const { return mpfr_zero_p(re_) && mpfr_zero_p(im_); }
    bool is_real() const { return mpfr_zero_p(im_); }

    void set_zero() {
        mpfr_set_zero(re_, 1);
        mpfr_set_zero(im_, 1);
    }
    void set_one() {
        mpfr_set_si(re_, 1, MPFR_RNDN);
        mpfr_set_zero(im_, 1);
    }

    // In-place kernels. dst may alias either operand; dst keeps (or is
    // raised to) the max operand precision.
    static void add(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b);
    static void sub(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b);
    static void mul(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b);
    static void div(PrecComplex& dst, const PrecComplex& a, const PrecComplex& b);

    PrecComplex& operator+=(const PrecComplex& o) { add(*this, *this, o); return *this; }
    PrecComplex& operator-=(const PrecComplex& o) { sub(*this, *this, o); return *this; }
    PrecComplex& operator*=(const PrecComplex& o) { mul(*this, *this, o); return *this; }
    PrecComplex& operator/=(const PrecComplex& o) { div(*this, *this, o); return *this; }

    friend PrecComplex operator+(const PrecComplex& a, const PrecComplex& b) {
        PrecComplex r(std::max(a.prec(), b.prec()));
        add(r, a, b);
        return r;
    }
    friend PrecComplex operator-(const PrecComplex& a, const PrecComplex& b) {
        PrecComplex r(std::max(a.prec(), b.prec()));
        sub(r, a, b);
        return r;
    }
    friend PrecComplex operator*(const PrecComplex& a, const PrecComplex& b) {
        PrecComplex r(std::max(a.prec(), b.prec()));
        mul(r, a, b);
        return r;
    }
    friend PrecComplex operator/(const PrecComplex& a, const PrecComplex& b) {
        PrecComplex r(std::max(a.prec(), b.prec()));
        div(r, a, b);
        return r;
    }

    PrecComplex operator-() const {
        PrecComplex r(*this);
        mpfr_neg(r.re_, r.re_, MPFR_RNDN);
        mpfr_neg(r.im_, r.im_, MPFR_RNDN);
        return r;
    }

    PrecComplex conj() const {
        PrecComplex r(*this);
        mpfr_neg(r.im_, r.im_, MPFR_RNDN);
        return r;
    }

    // z^e for integer e by binary powering; e < 0 inverts the positive power.
    PrecComplex pow_int(long e) const;

    // |z| into an MPFR real at this value's precision.
    void abs(mpfr_ptr out) const { mpfr_hypot(out, re_, im_, MPFR_RNDN); }

    // |z| as a double; clamps to the double range instead of overflowing.
    double abs_double() const;

    // Cheap upper bound on log2|z| (exponent arithmetic only); -inf for 0.
    double log2_abs_upper() const;

    // Relative distance |a-b| / max(1, |b|) as a double.
    static double rel_diff(const PrecComplex& a, const PrecComplex& b);

    // Minimal-digit decimal strings that round-trip exactly at this
    // precision through from_decimal().
    std::string re_decimal() const { return mpfr_decimal(re_); }
    std::string im_decimal() const { return mpfr_decimal(im_); }

    static std::string mpfr_decimal(mpfr_srcptr x);
    static void mpfr_from_decimal(mpfr_ptr out, const std::string& s);

private:
    static void check_prec(mpfr_prec_t prec) {
        if (prec < kMinPrecision) throw Error("PrecComplex: precision below 64 bits");
    }

    mpfr_t re_, im_;
};

}  // namespace qlv
