#include "qlv/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace qlv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Table indexed by integers in [lo(), hi()], grown one entry at a time.
struct SideTable {
    std::vector<PrecComplex> pos;  // index t >= 0
    std::vector<PrecComplex> neg;  // index t < 0 at neg[-t-1]
    std::vector<double> pos_lg, neg_lg;

    const PrecComplex& at(long t) const {
        return t >= 0 ? pos[static_cast<size_t>(t)] : neg[static_cast<size_t>(-t - 1)];
    }
    double lg(long t) const {
        return t >= 0 ? pos_lg[static_cast<size_t>(t)] : neg_lg[static_cast<size_t>(-t - 1)];
    }
    long hi() const { return static_cast<long>(pos.size()) - 1; }
    long lo() const { return -static_cast<long>(neg.size()); }
    void push_pos(PrecComplex v) {
        pos_lg.push_back(v.log2_abs_upper());
        pos.push_back(std::move(v));
    }
    void push_neg(PrecComplex v) {
        neg_lg.push_back(v.log2_abs_upper());
        neg.push_back(std::move(v));
    }
};

void check_pole(const PrecComplex& factor, double eps, const char* what) {
    if (factor.abs_double() < eps) {
        throw PoleError(std::string("pole in ") + what + ": factor below threshold");
    }
}

// Incrementally built table of a coefficient c(m). Ratio coefficients step
// by one Pochhammer factor per argument; the positional conventions match
// qpoch_finite / qpoch_finite_recip, so numerator zeros terminate series
// and denominator zeros raise PoleError.
class CoeffTable {
public:
    void init(CoefficientFn coeff, const QModulus& q, mpfr_prec_t prec, double eps) {
        coeff_ = std::move(coeff);
        q_ = std::make_unique<QModulus>(q.value().at_prec(prec));
        prec_ = prec;
        eps_ = eps;
        PrecComplex one(prec_);
        one.set_one();
        qs_.push_back(one);  // exact chain q^s
        if (coeff_->is_ratio()) {
            const RatioCoeff& rc = coeff_->as_ratio();
            zeta_ = rc.zeta.at_prec(prec_);
            if (zeta_->is_zero()) throw Error("ratio coefficient with zeta = 0");
            zeta_inv_ = one / *zeta_;
            for (const auto& a : rc.num) up_num_.push_back(a.at_prec(prec_));
            for (const auto& a : rc.den) up_den_.push_back(a.at_prec(prec_));
            const int p = rc.qfactor_power;
            if (p != 0) {
                qf_up_ = q_->value().pow_int(p);  // q^p, the up-step advance
                qf_run_up_ = one;                 // (-1)^p q^{p m} at the up edge
                if (p % 2 != 0) qf_run_up_ = -*qf_run_up_;
            }
            tab_.push_pos(std::move(one));
        } else {
            tab_.push_pos(eval_pointwise(0));
        }
    }

    void extend(long lo, long hi) {
        if (!coeff_->is_ratio()) {
            while (tab_.hi() < hi) tab_.push_pos(eval_pointwise(tab_.hi() + 1));
            while (tab_.lo() > lo) tab_.push_neg(eval_pointwise(tab_.lo() - 1));
            return;
        }
        const RatioCoeff& rc = coeff_->as_ratio();
        PrecComplex t(prec_), f(prec_), one(prec_);
        one.set_one();
        while (tab_.hi() < hi) {
            // step m -> m+1; running factors sit at exponent m
            PrecComplex v = tab_.at(tab_.hi());
            for (auto& a : up_num_) {
                PrecComplex::sub(f, one, a);  // 1 - N q^m : zero legal
                PrecComplex::mul(v, v, f);
                PrecComplex::mul(a, a, q_->value());
            }
            for (auto& a : up_den_) {
                PrecComplex::sub(f, one, a);
                check_pole(f, eps_, "coefficient denominator");
                PrecComplex::div(v, v, f);
                PrecComplex::mul(a, a, q_->value());
            }
            PrecComplex::mul(v, v, *zeta_);
            if (rc.qfactor_power != 0) {
                PrecComplex::mul(v, v, *qf_run_up_);
                PrecComplex::mul(*qf_run_up_, *qf_run_up_, *qf_up_);
            }
            tab_.push_pos(std::move(v));
        }
        while (tab_.lo() > lo) {
            // step m -> m-1 = -s; factors sit at exponent m-1
            const long m = tab_.lo();
            const long s = 1 - m;
            ensure_qs(s);
            PrecComplex v = tab_.at(m);
            for (const auto& a : rc.den) {
                PrecComplex::div(t, a.at_prec(prec_), qs_[static_cast<size_t>(s)]);
                PrecComplex::sub(f, one, t);  // 1 - D q^{m-1} : zero legal
                PrecComplex::mul(v, v, f);
            }
            for (const auto& a : rc.num) {
                PrecComplex::div(t, a.at_prec(prec_), qs_[static_cast<size_t>(s)]);
                PrecComplex::sub(f, one, t);
                check_pole(f, eps_, "coefficient numerator at negative order");
                PrecComplex::div(v, v, f);
            }
            PrecComplex::mul(v, v, *zeta_inv_);
            if (rc.qfactor_power != 0) {
                // divide by ((-1) q^{m-1})^p, i.e. multiply (-1)^p q^{p s}
                PrecComplex qp = qs_[static_cast<size_t>(s)].pow_int(rc.qfactor_power);
                if (rc.qfactor_power % 2 != 0) qp = -qp;
                PrecComplex::mul(v, v, qp);
            }
            tab_.push_neg(std::move(v));
        }
    }

    const PrecComplex& at(long m) const { return tab_.at(m); }
    double lg(long m) const { return tab_.lg(m); }

private:
    PrecComplex eval_pointwise(long m) {
        if (auto sup = coeff_->support()) {
            if (m < sup->first || m > sup->second) return PrecComplex(prec_);
        }
        return coeff_->eval(m, *q_, eps_).at_prec(prec_);
    }

    void ensure_qs(long s) {
        while (static_cast<long>(qs_.size()) <= s) {
            PrecComplex next(prec_);
            PrecComplex::mul(next, qs_.back(), q_->value());
            qs_.push_back(std::move(next));
        }
    }

    std::optional<CoefficientFn> coeff_;
    std::unique_ptr<QModulus> q_;
    mpfr_prec_t prec_ = 128;
    double eps_ = 0.0;
    SideTable tab_;
    std::optional<PrecComplex> zeta_, zeta_inv_, qf_up_, qf_run_up_;
    std::vector<PrecComplex> up_num_, up_den_;  // running N q^m, D q^m
    std::vector<PrecComplex> qs_;
};

// x_i q^t tables, pairwise 1/(x_i - x_j), and an exact q^s chain.
class VandermondeCache {
public:
    void init(std::span<const PrecComplex> x, const QModulus& q, mpfr_prec_t prec,
              double sep_eps) {
        n_ = static_cast<int>(x.size());
        prec_ = prec;
        q_ = std::make_unique<QModulus>(q.value().at_prec(prec));
        for (const auto& xi : x) x_.push_back(xi.at_prec(prec));
        xq_.resize(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) xq_[static_cast<size_t>(i)].push_pos(x_[static_cast<size_t>(i)]);
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                PrecComplex d = x_[static_cast<size_t>(i)] - x_[static_cast<size_t>(j)];
                if (d.abs_double() < sep_eps) {
                    throw DegenerateXError("x_" + std::to_string(i + 1) + " too close to x_" +
                                           std::to_string(j + 1));
                }
                PrecComplex one(prec_);
                one.set_one();
                invdiff_.push_back(one / d);
                invdiff_lg_.push_back(invdiff_.back().log2_abs_upper());
            }
        }
        PrecComplex one(prec_);
        one.set_one();
        qchain_.push_back(std::move(one));
    }

    void extend(long M) {
        for (int i = 0; i < n_; ++i) {
            auto& tab = xq_[static_cast<size_t>(i)];
            while (tab.hi() < M) {
                PrecComplex v(prec_);
                PrecComplex::mul(v, tab.at(tab.hi()), q_->value());
                tab.push_pos(std::move(v));
            }
            while (tab.lo() > -M) {
                PrecComplex v(prec_);
                PrecComplex::div(v, tab.at(tab.lo()), q_->value());
                tab.push_neg(std::move(v));
            }
        }
        ensure_qchain(M);
    }

    const PrecComplex& qpow_pos(long s) const { return qchain_[static_cast<size_t>(s)]; }
    void ensure_qchain(long s) {
        while (static_cast<long>(qchain_.size()) <= s) {
            PrecComplex next(prec_);
            PrecComplex::mul(next, qchain_.back(), q_->value());
            qchain_.push_back(std::move(next));
        }
    }

    int n() const { return n_; }
    mpfr_prec_t prec() const { return prec_; }
    const QModulus& q() const { return *q_; }
    const PrecComplex& x(int i) const { return x_[static_cast<size_t>(i)]; }
    const PrecComplex& xq(int i, long t) const { return xq_[static_cast<size_t>(i)].at(t); }
    double xq_lg(int i, long t) const { return xq_[static_cast<size_t>(i)].lg(t); }
    const PrecComplex& invdiff(int i, int j) const { return invdiff_[pair_index(i, j)]; }
    double invdiff_lg(int i, int j) const { return invdiff_lg_[pair_index(i, j)]; }

    void mul_vandermonde(const LatticePoint& k, PrecComplex& out, PrecComplex& t) const {
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                PrecComplex::sub(t, xq(i, k.k[i]), xq(j, k.k[j]));
                PrecComplex::mul(t, t, invdiff(i, j));
                PrecComplex::mul(out, out, t);
            }
        }
    }

    double vandermonde_lg(const LatticePoint& k) const {
        double r = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                r += std::max(xq_lg(i, k.k[i]), xq_lg(j, k.k[j])) + 1.0 + invdiff_lg(i, j);
            }
        }
        return r;
    }

private:
    size_t pair_index(int i, int j) const {
        return static_cast<size_t>(i * (2 * n_ - i - 1) / 2 + (j - i - 1));
    }

    int n_ = 1;
    mpfr_prec_t prec_ = 128;
    std::unique_ptr<QModulus> q_;
    std::vector<PrecComplex> x_;
    std::vector<SideTable> xq_;
    std::vector<PrecComplex> invdiff_;
    std::vector<double> invdiff_lg_;
    std::vector<PrecComplex> qchain_;
};

}  // namespace

namespace detail {

// Shared skeleton of the two A_n families. A term costs n row lookups,
// one |k|-table lookup and the Vandermonde pairs.
class AnSummandBase : public Summand {
public:
    int arity() const override { return vc_.n(); }
    mpfr_prec_t prec() const override { return vc_.prec(); }

    void prepare(long M) override {
        if (M <= radius_) return;
        vc_.extend(M);
        extend_rows(M);
        const long span = static_cast<long>(vc_.n()) * M;
        ctab_.extend(region_orthant_ ? 0 : -span, span);
        extend_svals(span);
        radius_ = M;
    }

    void term(const LatticePoint& k, PrecComplex& out, Scratch& sc) const override {
        out = sval(k.norm1());
        if (out.is_zero()) return;
        for (int i = 0; i < vc_.n(); ++i) {
            PrecComplex::mul(out, out, rows_[static_cast<size_t>(i)].at(k.k[i]));
        }
        vc_.mul_vandermonde(k, out, sc.t1);
    }

    double term_log2_bound(const LatticePoint& k) const override {
        double r = sval_lg(k.norm1());
        for (int i = 0; i < vc_.n(); ++i) r += rows_[static_cast<size_t>(i)].lg(k.k[i]);
        return r + vc_.vandermonde_lg(k);
    }

    // Row and coefficient factors without the Vandermonde part (the
    // permutation-sum displays carry no Vandermonde factor).
    void term_rows_only(const LatticePoint& k, PrecComplex& out) const {
        out = sval(k.norm1());
        if (out.is_zero()) return;
        for (int i = 0; i < vc_.n(); ++i) {
            PrecComplex::mul(out, out, rows_[static_cast<size_t>(i)].at(k.k[i]));
        }
    }
    double rows_log2_bound(const LatticePoint& k) const {
        double r = sval_lg(k.norm1());
        for (int i = 0; i < vc_.n(); ++i) r += rows_[static_cast<size_t>(i)].lg(k.k[i]);
        return r;
    }


protected:
    virtual void extend_rows(long M) = 0;
    virtual void extend_svals(long span) = 0;
    virtual const PrecComplex& sval(long m) const = 0;
    virtual double sval_lg(long m) const = 0;

    VandermondeCache vc_;
    std::vector<SideTable> rows_;
    CoeffTable ctab_;
    long radius_ = 0;
    double eps_ = 0.0;
    bool region_orthant_ = false;
};

class PsiTypeSummand final : public AnSummandBase {
public:
    PsiTypeSummand(std::span<const PrecComplex> x, std::span<const PrecComplex> b_vec,
                   const QModulus& q, CoefficientFn coeff, double eps, Region region) {
        region_orthant_ = region == Region::orthant;
        eps_ = eps > 0 ? eps : pole_threshold_for(q.prec());
        mpfr_prec_t p = q.prec();
        for (const auto& v : x) p = std::max(p, v.prec());
        vc_.init(x, q, p, eps_);
        const int n = vc_.n();
        // alpha_ij = (x_i / x_j) b_j. x_i / x_i == 1 exactly, so the
        // diagonal argument is bitwise b_i; binding b_i = q then terminates
        // the bilateral sum below zero exactly.
        alpha_.assign(static_cast<size_t>(n) * n, PrecComplex(p));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                PrecComplex r = vc_.x(i) / vc_.x(j);
                PrecComplex::mul(alpha_[idx(i, j)], r, b_vec[static_cast<size_t>(j)].at_prec(p));
            }
        }
        PrecComplex one(p);
        one.set_one();
        for (int i = 0; i < n; ++i) {
            xn_.push_back(vc_.x(i).pow_int(n));
            xn_inv_.push_back(one / xn_.back());
        }
        X_ = one;
        for (int i = 0; i < n; ++i) X_ *= vc_.x(i);
        Xinv_ = one / X_;
        qn_ = vc_.q().value().pow_int(n);
        up_aq_ = alpha_;
        up_qnt_ = one;
        dn_qns_ = one;
        rows_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            PrecComplex o(p);
            o.set_one();
            rows_[static_cast<size_t>(i)].push_pos(std::move(o));
        }
        ctab_.init(std::move(coeff), vc_.q(), p, eps_);
        // structural factor X^{-m} (-1)^{(n-1)m} q^{-C(m,2)}
        PrecComplex so(p);
        so.set_one();
        struct_.push_pos(std::move(so));
        struct_up_qm_ = one;  // q^m at the up edge
        svals_.push_pos(ctab_.at(0));
    }

protected:
    void extend_rows(long M) override {
        const int n = vc_.n();
        const mpfr_prec_t p = vc_.prec();
        PrecComplex f(p), t(p), one(p);
        one.set_one();
        while (rows_[0].hi() < M) {
            for (int i = 0; i < n; ++i) {
                PrecComplex v = rows_[static_cast<size_t>(i)].at(rows_[static_cast<size_t>(i)].hi());
                for (int j = 0; j < n; ++j) {
                    PrecComplex::sub(f, one, up_aq_[idx(i, j)]);
                    check_pole(f, eps_, "psi-type row denominator");
                    PrecComplex::div(v, v, f);
                }
                PrecComplex::mul(v, v, xn_[static_cast<size_t>(i)]);
                PrecComplex::mul(v, v, up_qnt_);
                rows_[static_cast<size_t>(i)].push_pos(std::move(v));
            }
            for (auto& a : up_aq_) PrecComplex::mul(a, a, vc_.q().value());
            PrecComplex::mul(up_qnt_, up_qnt_, qn_);
        }
        if (region_orthant_) return;
        while (rows_[0].lo() > -M) {
            const long s = -rows_[0].lo() + 1;  // stepping to t = -s
            vc_.ensure_qchain(s);
            PrecComplex::mul(dn_qns_, dn_qns_, qn_);  // q^{n s}
            for (int i = 0; i < n; ++i) {
                PrecComplex v = rows_[static_cast<size_t>(i)].at(-s + 1);
                for (int j = 0; j < n; ++j) {
                    PrecComplex::div(t, alpha_[idx(i, j)], vc_.qpow_pos(s));
                    PrecComplex::sub(f, one, t);
                    PrecComplex::mul(v, v, f);  // zero legal: terminates below
                }
                PrecComplex::mul(v, v, xn_inv_[static_cast<size_t>(i)]);
                PrecComplex::mul(v, v, dn_qns_);
                rows_[static_cast<size_t>(i)].push_neg(std::move(v));
            }
        }
    }

    void extend_svals(long span) override {
        const bool flip = (vc_.n() - 1) % 2 != 0;
        PrecComplex v(vc_.prec());
        while (struct_.hi() < span) {
            // struct(m+1) = struct(m) X^{-1} (-1)^{n-1} q^{-m}
            PrecComplex sv = struct_.at(struct_.hi());
            PrecComplex::mul(sv, sv, Xinv_);
            PrecComplex::div(sv, sv, struct_up_qm_);
            if (flip) sv = -sv;
            PrecComplex::mul(struct_up_qm_, struct_up_qm_, vc_.q().value());
            struct_.push_pos(std::move(sv));
            PrecComplex::mul(v, struct_.at(struct_.hi()), ctab_.at(struct_.hi()));
            svals_.push_pos(PrecComplex(v));
        }
        if (region_orthant_) return;
        while (struct_.lo() > -span) {
            // struct(m-1) = struct(m) X (-1)^{n-1} q^{m-1},  m-1 = -s
            const long m = struct_.lo();
            const long s = 1 - m;
            vc_.ensure_qchain(s);
            PrecComplex sv = struct_.at(m);
            PrecComplex::mul(sv, sv, X_);
            PrecComplex::div(sv, sv, vc_.qpow_pos(s));
            if (flip) sv = -sv;
            struct_.push_neg(std::move(sv));
            PrecComplex::mul(v, struct_.at(m - 1), ctab_.at(m - 1));
            svals_.push_neg(PrecComplex(v));
        }
    }

    const PrecComplex& sval(long m) const override { return svals_.at(m); }
    double sval_lg(long m) const override { return svals_.lg(m); }

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * vc_.n() + j; }

    std::vector<PrecComplex> alpha_, xn_, xn_inv_, up_aq_;
    PrecComplex X_{64}, Xinv_{64}, qn_{64};
    PrecComplex up_qnt_{64}, dn_qns_{64}, struct_up_qm_{64};
    SideTable struct_, svals_;
};

class GustafsonTypeSummand final : public AnSummandBase {
public:
    GustafsonTypeSummand(std::span<const PrecComplex> x,
                         std::span<const PrecComplex> a_vec,
                         std::span<const PrecComplex> b_vec, const QModulus& q,
                         CoefficientFn coeff, double eps, Region region) {
        region_orthant_ = region == Region::orthant;
        eps_ = eps > 0 ? eps : pole_threshold_for(q.prec());
        mpfr_prec_t p = q.prec();
        for (const auto& v : x) p = std::max(p, v.prec());
        vc_.init(x, q, p, eps_);
        const int n = vc_.n();
        ua_.assign(static_cast<size_t>(n) * n, PrecComplex(p));
        ub_.assign(static_cast<size_t>(n) * n, PrecComplex(p));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                PrecComplex r = vc_.x(i) / vc_.x(j);
                PrecComplex::mul(ua_[idx(i, j)], r, a_vec[static_cast<size_t>(j)].at_prec(p));
                PrecComplex::mul(ub_[idx(i, j)], r, b_vec[static_cast<size_t>(j)].at_prec(p));
            }
        }
        up_a_ = ua_;
        up_b_ = ub_;
        rows_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            PrecComplex o(p);
            o.set_one();
            rows_[static_cast<size_t>(i)].push_pos(std::move(o));
        }
        ctab_.init(std::move(coeff), vc_.q(), p, eps_);
    }

protected:
    void extend_rows(long M) override {
        const int n = vc_.n();
        const mpfr_prec_t p = vc_.prec();
        PrecComplex f(p), t(p), one(p);
        one.set_one();
        while (rows_[0].hi() < M) {
            for (int i = 0; i < n; ++i) {
                PrecComplex v = rows_[static_cast<size_t>(i)].at(rows_[static_cast<size_t>(i)].hi());
                for (int j = 0; j < n; ++j) {
                    PrecComplex::sub(f, one, up_a_[idx(i, j)]);
                    PrecComplex::mul(v, v, f);  // zero legal: terminates above
                    PrecComplex::sub(f, one, up_b_[idx(i, j)]);
                    check_pole(f, eps_, "gustafson row denominator");
                    PrecComplex::div(v, v, f);
                }
                rows_[static_cast<size_t>(i)].push_pos(std::move(v));
            }
            for (auto& a : up_a_) PrecComplex::mul(a, a, vc_.q().value());
            for (auto& b : up_b_) PrecComplex::mul(b, b, vc_.q().value());
        }
        if (region_orthant_) return;
        while (rows_[0].lo() > -M) {
            const long s = -rows_[0].lo() + 1;
            vc_.ensure_qchain(s);
            for (int i = 0; i < n; ++i) {
                PrecComplex v = rows_[static_cast<size_t>(i)].at(-s + 1);
                for (int j = 0; j < n; ++j) {
                    PrecComplex::div(t, ub_[idx(i, j)], vc_.qpow_pos(s));
                    PrecComplex::sub(f, one, t);
                    PrecComplex::mul(v, v, f);  // zero legal
                    PrecComplex::div(t, ua_[idx(i, j)], vc_.qpow_pos(s));
                    PrecComplex::sub(f, one, t);
                    check_pole(f, eps_, "gustafson row numerator at negative order");
                    PrecComplex::div(v, v, f);
                }
                rows_[static_cast<size_t>(i)].push_neg(std::move(v));
            }
        }
    }

    void extend_svals(long) override {}
    const PrecComplex& sval(long m) const override { return ctab_.at(m); }
    double sval_lg(long m) const override { return ctab_.lg(m); }

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * vc_.n() + j; }

    std::vector<PrecComplex> ua_, ub_, up_a_, up_b_;
};

// 1-D series whose term is the coefficient itself (classical phi/psi).
class Coeff1DSummand final : public Summand {
public:
    Coeff1DSummand(CoefficientFn coeff, const QModulus& q, mpfr_prec_t prec, double eps,
                   bool orthant)
        : prec_(prec), orthant_(orthant) {
        ctab_.init(std::move(coeff), q, prec, eps > 0 ? eps : pole_threshold_for(prec));
    }
    int arity() const override { return 1; }
    mpfr_prec_t prec() const override { return prec_; }
    void prepare(long M) override { ctab_.extend(orthant_ ? 0 : -M, M); }
    void term(const LatticePoint& k, PrecComplex& out, Scratch&) const override {
        out = ctab_.at(k.k[0]);
    }
    double term_log2_bound(const LatticePoint& k) const override { return ctab_.lg(k.k[0]); }

private:
    mpfr_prec_t prec_;
    bool orthant_;
    CoeffTable ctab_;
};

}  // namespace detail

namespace {

using detail::Coeff1DSummand;
using detail::GustafsonTypeSummand;
using detail::PsiTypeSummand;

// ---- shell enumeration --------------------------------------------------

// All k with max |k_i| == s, coordinates in [-s, s] (box) or [0, s]
// (orthant), lexicographic. Requires s >= 1; the s == 0 shell is {0}.
void enum_shell_rec(int n, int dim, long s, bool hit, Region region, LatticePoint& cur,
                    std::vector<LatticePoint>& out) {
    const long lo = region == Region::box ? -s : 0;
    if (dim == n - 1) {
        if (hit) {
            for (long v = lo; v <= s; ++v) {
                cur.k[dim] = v;
                out.push_back(cur);
            }
        } else {
            if (region == Region::box) {
                cur.k[dim] = -s;
                out.push_back(cur);
            }
            cur.k[dim] = s;
            out.push_back(cur);
        }
        return;
    }
    for (long v = lo; v <= s; ++v) {
        cur.k[dim] = v;
        enum_shell_rec(n, dim + 1, s, hit || std::labs(v) == s, region, cur, out);
    }
}

// All k inside radius r with coordinate sum == target.
void enum_slice_rec(int n, int dim, long r, long target, Region region,
                    LatticePoint& cur, std::vector<LatticePoint>& out) {
    const long lo = region == Region::box ? -r : 0;
    if (dim == n - 1) {
        if (target >= lo && target <= r) {
            cur.k[dim] = target;
            out.push_back(cur);
        }
        return;
    }
    const int rem = n - dim - 1;
    const long rem_lo = region == Region::box ? -static_cast<long>(rem) * r : 0;
    const long rem_hi = static_cast<long>(rem) * r;
    const long vlo = std::max(lo, target - rem_hi);
    const long vhi = std::min(r, target - rem_lo);
    for (long v = vlo; v <= vhi; ++v) {
        cur.k[dim] = v;
        enum_slice_rec(n, dim + 1, r, target - v, region, cur, out);
    }
}

void enumerate_shell(int n, long s, Region region, std::optional<long> slice,
                     std::vector<LatticePoint>& out) {
    out.clear();
    LatticePoint cur;
    cur.n = n;
    if (s == 0) {
        if (!slice || *slice == 0) out.push_back(cur);
        return;
    }
    if (!slice) {
        enum_shell_rec(n, 0, s, false, region, cur, out);
        return;
    }
    const long m = *slice;
    if (n == 1) {
        if (std::labs(m) == s && (region == Region::box || m >= 0)) {
            cur.k[0] = m;
            out.push_back(cur);
        }
        return;
    }
    // Split on whether the leading n-1 coordinates touch the shell; this
    // keeps slice enumeration proportional to the number of slice points.
    std::vector<LatticePoint> lead;
    LatticePoint sub;
    sub.n = n - 1;
    enum_shell_rec(n - 1, 0, s, false, region, sub, lead);
    for (const auto& pt : lead) {
        long sum = 0;
        for (int i = 0; i < n - 1; ++i) sum += pt.k[i];
        const long last = m - sum;
        const long lo = region == Region::box ? -s : 0;
        if (last >= lo && last <= s) {
            cur = pt;
            cur.n = n;
            cur.k[n - 1] = last;
            out.push_back(cur);
        }
    }
    for (long last : {s, -s}) {
        if (region == Region::orthant && last < 0) continue;
        std::vector<LatticePoint> inner;
        LatticePoint sub2;
        sub2.n = n - 1;
        enum_slice_rec(n - 1, 0, s - 1, m - last, region, sub2, inner);
        for (const auto& pt : inner) {
            cur = pt;
            cur.n = n;
            cur.k[n - 1] = last;
            out.push_back(cur);
        }
    }
}

// ---- deterministic (optionally parallel) accumulation --------------------

struct ShellSums {
    PrecComplex sum;
    double mag = 0.0;
    double skipped_abs = 0.0;
};

ShellSums sum_points(const Summand& s, const std::vector<LatticePoint>& pts, int threads,
                     double prune_cut_lg) {
    const mpfr_prec_t p = s.prec();
    constexpr size_t kChunk = 128;
    const size_t nchunks = (pts.size() + kChunk - 1) / kChunk;
    std::vector<ShellSums> parts;
    parts.reserve(nchunks);
    for (size_t i = 0; i < nchunks; ++i) parts.push_back(ShellSums{PrecComplex(p), 0.0, 0.0});

    auto run_chunk = [&](size_t ci) {
        Summand::Scratch sc(p);
        PrecComplex acc(p), t(p);
        double mag = 0.0, skipped = 0.0;
        const size_t lo = ci * kChunk;
        const size_t hi = std::min(pts.size(), lo + kChunk);
        for (size_t idx = lo; idx < hi; ++idx) {
            if (prune_cut_lg > kNegInf) {
                const double bound = s.term_log2_bound(pts[idx]);
                if (bound < prune_cut_lg) {
                    skipped += std::exp2(std::max(bound, -1000.0));
                    continue;
                }
            }
            s.term(pts[idx], t, sc);
            PrecComplex::add(acc, acc, t);
            mag += t.abs_double();
        }
        parts[ci].sum = std::move(acc);
        parts[ci].mag = mag;
        parts[ci].skipped_abs = skipped;
    };

    if (threads <= 1 || nchunks <= 1) {
        for (size_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const size_t ci = next.fetch_add(1);
                if (ci >= nchunks) return;
                run_chunk(ci);
            }
        };
        std::vector<std::thread> pool;
        const int w = std::min<int>(threads, static_cast<int>(nchunks));
        for (int i = 0; i < w; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // Fixed fold order: bitwise independent of thread count.
    ShellSums total{PrecComplex(p), 0.0, 0.0};
    for (auto& part : parts) {
        PrecComplex::add(total.sum, total.sum, part.sum);
        total.mag += part.mag;
        total.skipped_abs += part.skipped_abs;
    }
    return total;
}

}  // namespace

double Summand::term_log2_bound(const LatticePoint&) const { return kPosInf; }

PrecComplex lattice_sum_box(Summand& s, long M, int threads) {
    if (M < 0) throw Error("lattice_sum_box: M must be >= 0");
    s.prepare(M);
    PrecComplex total(s.prec());
    std::vector<LatticePoint> pts;
    for (long shell = 0; shell <= M; ++shell) {
        enumerate_shell(s.arity(), shell, Region::box, std::nullopt, pts);
        ShellSums sh = sum_points(s, pts, threads, kNegInf);
        PrecComplex::add(total, total, sh.sum);
    }
    return total;
}

PrecComplex lattice_slice_sum(Summand& s, long m, long M, int threads) {
    if (M < 0) throw Error("lattice_slice_sum: M must be >= 0");
    s.prepare(M);
    PrecComplex total(s.prec());
    std::vector<LatticePoint> pts;
    for (long shell = 0; shell <= M; ++shell) {
        enumerate_shell(s.arity(), shell, Region::box, m, pts);
        ShellSums sh = sum_points(s, pts, threads, kNegInf);
        PrecComplex::add(total, total, sh.sum);
    }
    return total;
}

double prune_rel_lg_for(const AdaptiveOptions& opts, mpfr_prec_t prec) {
    if (!opts.prune) return kNegInf;
    if (opts.prune_rel_lg != 0.0) return opts.prune_rel_lg;
    return -static_cast<double>(prec - 16) - 40.0;
}

PrecComplex lattice_sum(Summand& s, long M, const AdaptiveOptions& opts) {
    if (M < 0) throw Error("lattice_sum: M must be >= 0");
    s.prepare(M);
    const double rel = prune_rel_lg_for(opts, s.prec());
    PrecComplex total(s.prec());
    std::vector<LatticePoint> pts;
    double scale = 1.0;
    for (long shell = 0; shell <= M; ++shell) {
        enumerate_shell(s.arity(), shell, opts.region, opts.slice, pts);
        const double cut = (rel > kNegInf && shell > 1) ? std::log2(scale) + rel : kNegInf;
        ShellSums sh = sum_points(s, pts, opts.threads, cut);
        PrecComplex::add(total, total, sh.sum);
        scale = std::max(scale, total.abs_double());
    }
    return total;
}

SumResult adaptive_sum(Summand& s, const TruncationSchedule& sched,
                       const AdaptiveOptions& opts) {
    if (sched.initial_radius < 1 || sched.initial_radius > sched.max_radius) {
        throw Error("adaptive_sum: bad schedule");
    }
    const mpfr_prec_t p = s.prec();
    PrecComplex total(p);
    std::vector<LatticePoint> pts;
    double scale = 1.0;
    double last_shell_mag = 0.0;
    double skipped_abs = 0.0;
    double prev_diff = kPosInf, last_diff = kPosInf;
    long shell = 0;
    long checkpoint = std::min(sched.initial_radius, sched.max_radius);
    PrecComplex at_prev(p);
    bool have_prev = false;

    const double rel = prune_rel_lg_for(opts, p);
    for (;;) {
        s.prepare(checkpoint);
        const double cut = (rel > kNegInf && have_prev) ? std::log2(scale) + rel : kNegInf;
        for (; shell <= checkpoint; ++shell) {
            enumerate_shell(s.arity(), shell, opts.region, opts.slice, pts);
            ShellSums sh = sum_points(s, pts, opts.threads, cut);
            PrecComplex::add(total, total, sh.sum);
            last_shell_mag = sh.mag;
            skipped_abs += sh.skipped_abs;
        }
        scale = std::max(scale, total.abs_double());
        if (have_prev) {
            const double rel =
                (total - at_prev).abs_double() / std::max(1.0, total.abs_double());
            prev_diff = last_diff;
            last_diff = rel;
            if (prev_diff < sched.tol && last_diff < sched.tol) {
                SumResult res{std::move(total), 0.0, checkpoint, 0.0};
                const double denom = std::max(1.0, res.value.abs_double());
                res.skipped_mass = skipped_abs / denom;
                res.err_estimate = last_diff + last_shell_mag / denom + res.skipped_mass;
                return res;
            }
        }
        at_prev = total;
        have_prev = true;
        if (checkpoint >= sched.max_radius) {
            throw NoConvergence("adaptive_sum: not stabilized at max radius " +
                                    std::to_string(sched.max_radius),
                                checkpoint, last_diff);
        }
        checkpoint = std::min(checkpoint * 2, sched.max_radius);
    }
}

PrecComplex vandermonde_ratio(std::span<const PrecComplex> x, const LatticePoint& k,
                              const QModulus& q, double sep_eps) {
    if (sep_eps <= 0) sep_eps = pole_threshold_for(q.prec());
    const int n = static_cast<int>(x.size());
    mpfr_prec_t p = q.prec();
    for (const auto& v : x) p = std::max(p, v.prec());
    PrecComplex out(p);
    out.set_one();
    PrecComplex ti(p), tj(p), num(p), den(p);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PrecComplex::sub(den, x[i], x[j]);
            if (den.abs_double() < sep_eps) {
                throw DegenerateXError("vandermonde_ratio: x_" + std::to_string(i + 1) +
                                       " ~ x_" + std::to_string(j + 1));
            }
            ti = q.value().pow_int(k.k[i]);
            PrecComplex::mul(ti, x[i], ti);
            tj = q.value().pow_int(k.k[j]);
            PrecComplex::mul(tj, x[j], tj);
            PrecComplex::sub(num, ti, tj);
            PrecComplex::div(num, num, den);
            PrecComplex::mul(out, out, num);
        }
    }
    return out;
}

CoefficientFn CoefficientFn::ratio(RatioCoeff rc) {
    CoefficientFn c;
    c.ratio_ = std::move(rc);
    return c;
}

CoefficientFn CoefficientFn::one(mpfr_prec_t prec) {
    RatioCoeff rc;
    rc.zeta = PrecComplex(prec);
    rc.zeta.set_one();
    return ratio(std::move(rc));
}

CoefficientFn CoefficientFn::table(std::vector<PrecComplex> values, long lo) {
    CoefficientFn c;
    const long hi = lo + static_cast<long>(values.size()) - 1;
    c.support_ = std::make_pair(lo, hi);
    c.fn_ = [values = std::move(values), lo](long m) {
        return values[static_cast<size_t>(m - lo)];
    };
    return c;
}

CoefficientFn CoefficientFn::fn(std::function<PrecComplex(long)> f,
                                std::optional<std::pair<long, long>> support) {
    CoefficientFn c;
    c.fn_ = std::move(f);
    c.support_ = support;
    return c;
}

PrecComplex CoefficientFn::eval(long m, const QModulus& q, double pole_eps) const {
    if (ratio_) {
        const RatioCoeff& rc = *ratio_;
        PrecComplex v = rc.zeta.pow_int(m);
        for (const auto& a : rc.num) v *= qpoch_finite(a, q, m, pole_eps);
        for (const auto& a : rc.den) v *= qpoch_finite_recip(a, q, m, pole_eps);
        if (rc.qfactor_power != 0) {
            PrecComplex qf = q.value().pow_int(binom2(m) * rc.qfactor_power);
            if ((m % 2 != 0) && (rc.qfactor_power % 2 != 0)) qf = -qf;
            v *= qf;
        }
        return v;
    }
    if (support_ && (m < support_->first || m > support_->second)) {
        return PrecComplex(q.prec());
    }
    return fn_(m);
}

std::unique_ptr<Summand> an_summand_psi_type(std::span<const PrecComplex> x,
                                             std::span<const PrecComplex> b_vec,
                                             const QModulus& q, CoefficientFn coeff,
                                             double pole_eps, Region region) {
    return std::make_unique<PsiTypeSummand>(x, b_vec, q, std::move(coeff), pole_eps,
                                            region);
}

std::unique_ptr<Summand> an_summand_psi_type(std::span<const PrecComplex> x,
                                             std::span<const PrecComplex> b_vec,
                                             const QModulus& q, const PrecComplex& a,
                                             const PrecComplex& z, double pole_eps,
                                             Region region) {
    RatioCoeff rc;
    rc.num.push_back(a);
    rc.zeta = z;
    return an_summand_psi_type(x, b_vec, q, CoefficientFn::ratio(std::move(rc)), pole_eps,
                               region);
}

std::unique_ptr<Summand> an_summand_gustafson_type(std::span<const PrecComplex> x,
                                                   std::span<const PrecComplex> a_vec,
                                                   std::span<const PrecComplex> b_vec,
                                                   const QModulus& q, CoefficientFn coeff,
                                                   double pole_eps, Region region) {
    return std::make_unique<GustafsonTypeSummand>(x, a_vec, b_vec, q, std::move(coeff),
                                                  pole_eps, region);
}

std::unique_ptr<Summand> an_summand_gustafson_type(std::span<const PrecComplex> x,
                                                   std::span<const PrecComplex> a_vec,
                                                   std::span<const PrecComplex> b_vec,
                                                   const QModulus& q, const PrecComplex& z,
                                                   double pole_eps, Region region) {
    RatioCoeff rc;
    rc.zeta = z;
    return an_summand_gustafson_type(x, a_vec, b_vec, q,
                                     CoefficientFn::ratio(std::move(rc)), pole_eps, region);
}

std::unique_ptr<Summand> classical_summand(std::span<const PrecComplex> upper,
                                           std::span<const PrecComplex> lower,
                                           const QModulus& q, const PrecComplex& z,
                                           bool phi, double pole_eps) {
    RatioCoeff rc;
    for (const auto& a : upper) rc.num.push_back(a);
    if (phi) rc.den.push_back(q.value());
    for (const auto& b : lower) rc.den.push_back(b);
    rc.zeta = z;
    const int r = static_cast<int>(upper.size());
    const int s = static_cast<int>(lower.size());
    rc.qfactor_power = phi ? (1 + s - r) : (s - r);
    mpfr_prec_t p = std::max(q.prec(), z.prec());
    return std::make_unique<Coeff1DSummand>(CoefficientFn::ratio(std::move(rc)), q, p,
                                            pole_eps, phi);
}

namespace {

SumResult classical_series(std::span<const PrecComplex> upper,
                           std::span<const PrecComplex> lower, const QModulus& q,
                           const PrecComplex& z, const TruncationSchedule& sched,
                           int threads, double pole_eps, bool phi) {
    auto summand = classical_summand(upper, lower, q, z, phi, pole_eps);
    AdaptiveOptions opts;
    opts.region = phi ? Region::orthant : Region::box;
    opts.threads = threads;
    return adaptive_sum(*summand, sched, opts);
}

int permutation_sign(std::span<const int> sigma) {
    int inv = 0;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

void for_each_permutation(int n, const std::function<void(std::span<const int>)>& fn) {
    std::vector<int> sigma(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) sigma[static_cast<size_t>(i)] = i;
    do {
        fn(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
}

PrecComplex perm_prefactor(std::span<const PrecComplex> x, std::span<const int> sigma,
                           mpfr_prec_t p) {
    PrecComplex pref(p);
    pref.set_one();
    for (size_t i = 0; i < sigma.size(); ++i) {
        pref *= x[static_cast<size_t>(sigma[i])].pow_int(static_cast<long>(i) - sigma[i]);
    }
    if (permutation_sign(sigma) < 0) pref = -pref;
    return pref;
}

}  // namespace

SumResult classical_phi(std::span<const PrecComplex> upper,
                        std::span<const PrecComplex> lower, const QModulus& q,
                        const PrecComplex& z, const TruncationSchedule& sched,
                        int threads, double pole_eps) {
    return classical_series(upper, lower, q, z, sched, threads, pole_eps, true);
}

SumResult classical_psi(std::span<const PrecComplex> upper,
                        std::span<const PrecComplex> lower, const QModulus& q,
                        const PrecComplex& z, const TruncationSchedule& sched,
                        int threads, double pole_eps) {
    return classical_series(upper, lower, q, z, sched, threads, pole_eps, false);
}

PrecComplex permutation_sum(
    std::span<const PrecComplex> x,
    const std::function<PrecComplex(std::span<const int>, const LatticePoint&)>& inner,
    const QModulus& q, int n, long M) {
    if (n > LatticePoint::kMaxArity) {
        throw ArityTooLarge("permutation_sum: n = " + std::to_string(n) + " > 8");
    }
    mpfr_prec_t p = q.prec();
    for (const auto& v : x) p = std::max(p, v.prec());
    PrecComplex total(p);
    std::vector<LatticePoint> pts;
    for_each_permutation(n, [&](std::span<const int> sigma) {
        PrecComplex part(p);
        for (long shell = 0; shell <= M; ++shell) {
            enumerate_shell(n, shell, Region::box, 0L, pts);
            for (const auto& k : pts) {
                long e = 0;
                for (int i = 0; i < n; ++i)
                    e += static_cast<long>(i) * k.k[sigma[static_cast<size_t>(i)]];
                PrecComplex t = q.value().pow_int(e);
                t *= inner(sigma, k);
                PrecComplex::add(part, part, t);
            }
        }
        PrecComplex::mul(part, part, perm_prefactor(x, sigma, p));
        PrecComplex::add(total, total, part);
    });
    return total;
}

namespace detail {

// Gustafson rows plus a per-permutation q-power twist; all permutations
// share the row tables and the box radius.
class PermTwistSummand final : public Summand {
public:
    PermTwistSummand(GustafsonTypeSummand& base, mpfr_prec_t prec) : base_(base), prec_(prec) {
        PrecComplex one(prec_);
        one.set_one();
        qp_.push_pos(std::move(one));
    }

    void set_sigma(std::span<const int> sigma) {
        const int n = base_.arity();
        weights_.assign(static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i) weights_[static_cast<size_t>(sigma[i])] = i;
    }

    int arity() const override { return base_.arity(); }
    mpfr_prec_t prec() const override { return prec_; }

    void prepare(long M) override {
        base_.prepare(M);
        const int n = base_.arity();
        const long span = static_cast<long>(n) * (n - 1) * M;
        const QModulus& q = base_q();
        while (qp_.hi() < span) {
            PrecComplex v(prec_);
            PrecComplex::mul(v, qp_.at(qp_.hi()), q.value());
            qp_.push_pos(std::move(v));
        }
        while (qp_.lo() > -span) {
            PrecComplex v(prec_);
            PrecComplex::div(v, qp_.at(qp_.lo()), q.value());
            qp_.push_neg(std::move(v));
        }
    }

    void term(const LatticePoint& k, PrecComplex& out, Scratch&) const override {
        base_.term_rows_only(k, out);
        if (out.is_zero()) return;
        PrecComplex::mul(out, out, qp_.at(twist_exponent(k)));
    }

    double term_log2_bound(const LatticePoint& k) const override {
        return base_.rows_log2_bound(k) + qp_.lg(twist_exponent(k));
    }

    void set_q(const QModulus* q) { q_ = q; }

private:
    long twist_exponent(const LatticePoint& k) const {
        long e = 0;
        for (int i = 0; i < k.n; ++i) e += weights_[static_cast<size_t>(i)] * k.k[i];
        return e;
    }
    const QModulus& base_q() const { return *q_; }

    GustafsonTypeSummand& base_;
    mpfr_prec_t prec_;
    const QModulus* q_ = nullptr;
    SideTable qp_;
    std::vector<long> weights_;
};

}  // namespace detail

SumResult permutation_series_sum(std::span<const PrecComplex> x,
                                 std::span<const PrecComplex> a_vec,
                                 std::span<const PrecComplex> b_vec, const QModulus& q,
                                 const TruncationSchedule& sched, int threads,
                                 double pole_eps, std::optional<long> fixed_radius) {
    const int n = static_cast<int>(x.size());
    if (n > LatticePoint::kMaxArity) {
        throw ArityTooLarge("permutation_series_sum: n > 8");
    }
    mpfr_prec_t p = q.prec();
    for (const auto& v : x) p = std::max(p, v.prec());
    QModulus qp(q.value().at_prec(p));
    detail::GustafsonTypeSummand base(x, a_vec, b_vec, qp, CoefficientFn::one(p), pole_eps,
                                      Region::box);
    detail::PermTwistSummand twist(base, p);
    twist.set_q(&qp);

    std::vector<std::vector<int>> sigmas;
    std::vector<PrecComplex> prefs;
    for_each_permutation(n, [&](std::span<const int> sigma) {
        sigmas.emplace_back(sigma.begin(), sigma.end());
        prefs.push_back(perm_prefactor(x, sigma, p));
    });

    std::vector<PrecComplex> sigma_parts(sigmas.size(), PrecComplex(p));
    long shells_done = 0;
    PrecComplex prev(p);
    bool have_prev = false;
    double prev_diff = kPosInf, last_diff = kPosInf;
    long M = fixed_radius ? *fixed_radius : std::min(sched.initial_radius, sched.max_radius);
    std::vector<LatticePoint> pts;
    for (;;) {
        twist.prepare(M);
        for (size_t si = 0; si < sigmas.size(); ++si) {
            twist.set_sigma(sigmas[si]);
            for (long shell = shells_done; shell <= M; ++shell) {
                enumerate_shell(n, shell, Region::box, 0L, pts);
                ShellSums sh = sum_points(twist, pts, threads, kNegInf);
                PrecComplex::add(sigma_parts[si], sigma_parts[si], sh.sum);
            }
        }
        shells_done = M + 1;
        PrecComplex total(p);
        for (size_t si = 0; si < sigmas.size(); ++si) {
            PrecComplex t(p);
            PrecComplex::mul(t, sigma_parts[si], prefs[si]);
            PrecComplex::add(total, total, t);
        }
        if (fixed_radius) return SumResult{std::move(total), 0.0, M, 0.0};
        if (have_prev) {
            const double rel =
                (total - prev).abs_double() / std::max(1.0, total.abs_double());
            prev_diff = last_diff;
            last_diff = rel;
            if (prev_diff < sched.tol && last_diff < sched.tol) {
                return SumResult{std::move(total), last_diff, M, 0.0};
            }
        }
        prev = std::move(total);
        have_prev = true;
        if (M >= sched.max_radius) {
            throw NoConvergence("permutation_series_sum: not stabilized at max radius " +
                                    std::to_string(sched.max_radius),
                                M, last_diff);
        }
        M = std::min(M * 2, sched.max_radius);
    }
}

}  // namespace qlv
