#include "qlv/catalog.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "qlv/exact.hpp"

namespace qlv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- parameter plumbing ---------------------------------------------------

PrecComplex prodv(std::span<const PrecComplex> v, mpfr_prec_t p) {
    PrecComplex r(p);
    r.set_one();
    for (const auto& e : v) r *= e;
    return r;
}

// Working context for one side evaluation: precision-normalized roles and
// the handful of expressions every display reuses.
struct Wks {
    const ParameterPoint& pt;
    const EvalOptions& opt;
    mpfr_prec_t p;
    QModulus q;
    double eps;

    Wks(const ParameterPoint& pt_, const EvalOptions& o)
        : pt(pt_),
          opt(o),
          p(o.prec),
          q(pt_.q.at_prec(o.prec)),
          eps(o.pole_eps > 0 ? o.pole_eps : pole_threshold_for(o.prec)) {}

    PrecComplex one() const {
        PrecComplex r(p);
        r.set_one();
        return r;
    }
    const PrecComplex& qv() const { return q.value(); }
    PrecComplex qpow(long e) const { return qv().pow_int(e); }
    PrecComplex s(const std::string& role) const { return pt.s(role).at_prec(p); }
    std::vector<PrecComplex> v(const std::string& role) const {
        std::vector<PrecComplex> r;
        for (const auto& e : pt.v(role)) r.push_back(e.at_prec(p));
        return r;
    }
    PrecComplex prod(std::span<const PrecComplex> vec) const { return prodv(vec, p); }
    PrecComplex prod(const std::string& role) const { return prodv(v(role), p); }
};

// Infinite-product side: value = pref * prod (num)_inf / prod (den)_inf,
// with finite q-shifted factors folded in by order.
struct Products {
    explicit Products(const Wks& w_) : w(w_), pref(w_.p) { pref.set_one(); }

    Products& n_(PrecComplex a) {
        num.push_back(std::move(a));
        return *this;
    }
    Products& d_(PrecComplex a) {
        den.push_back(std::move(a));
        return *this;
    }
    // finite factors (a)_k in numerator / denominator position
    Products& nfin(PrecComplex a, long k) {
        pref *= qpoch_finite(a, w.q, k, w.eps);
        return *this;
    }
    Products& dfin(PrecComplex a, long k) {
        pref *= qpoch_finite_recip(a, w.q, k, w.eps);
        return *this;
    }
    Products& scale(const PrecComplex& c) {
        pref *= c;
        return *this;
    }

    EvalResult result() const {
        const double tol = std::exp2(-static_cast<double>(w.p - 6));
        QPochInfResult top = qpoch_list_infinite(num, w.q, tol);
        QPochInfResult bot = qpoch_list_infinite(den, w.q, tol);
        if (bot.value.is_zero()) {
            throw PoleError("closed-form denominator product vanished");
        }
        EvalResult r{top.value, 0.0, 0};
        r.value *= pref;
        r.value /= bot.value;
        r.err_estimate = top.tail_bound + bot.tail_bound;
        return r;
    }

    const Wks& w;
    std::vector<PrecComplex> num, den;
    PrecComplex pref;
};

// ---- series execution ------------------------------------------------------

long effective_max_radius(const IdentitySpec& meta, int n, bool slice,
                          const TruncationSchedule& sched) {
    long m = sched.max_radius;
    if (n == 1) return std::max(m, 4096L);
    if (slice || meta.slice_series) m = std::max(m, 512L);
    if (meta.box_radius_floor > 0) m = std::max(m, meta.box_radius_floor);
    return m;
}

EvalResult run_series(Summand& s, Region region, std::optional<long> slice,
                      const IdentitySpec& meta, int n, const EvalOptions& o) {
    AdaptiveOptions ao;
    ao.region = region;
    ao.slice = slice;
    ao.threads = o.threads;
    ao.prune_rel_lg = o.prune_rel_lg;
    if (o.radius_override) {
        EvalResult r{lattice_sum(s, *o.radius_override, ao), 0.0, *o.radius_override};
        return r;
    }
    TruncationSchedule sched = o.schedule;
    sched.max_radius = effective_max_radius(meta, n, slice.has_value(), o.schedule);
    SumResult res = adaptive_sum(s, sched, ao);
    return EvalResult{std::move(res.value), res.err_estimate, res.radius_used};
}

EvalResult mul_results(EvalResult series, const EvalResult& prods) {
    series.value *= prods.value;
    series.err_estimate += prods.err_estimate;
    return series;
}

// ---- pole scanning ----------------------------------------------------------

// Collects q-shifted-factorial arguments by position. Denominator-position
// arguments pole at alpha = q^{-j} (j >= 0), numerator-position ones at
// alpha = q^{j} (j >= 1); closed-form denominator products behave like the
// former.
struct PoleScan {
    const Wks& w;
    double margin_eps;
    std::vector<std::string>* out;

    void check(const PrecComplex& alpha, bool den_position, const char* what) const {
        const double aa = alpha.abs_double();
        if (aa <= 0.0) return;
        const double t = std::log(aa) / std::log(w.q.abs());
        const long j = std::lround(den_position ? -t : t);
        if (den_position ? (j < 0 || j > 128) : (j < 1 || j > 128)) return;
        PrecComplex probe = alpha * w.qpow(den_position ? j : -j);
        probe -= w.one();
        if (probe.abs_double() < margin_eps) {
            out->push_back(std::string(what) + " within pole threshold of q^" +
                           std::to_string(den_position ? -j : j));
        }
    }

    void den(const PrecComplex& a, const char* what) const { check(a, true, what); }
    void num(const PrecComplex& a, const char* what) const { check(a, false, what); }
    void den_list(std::span<const PrecComplex> v, const char* what) const {
        for (const auto& a : v) den(a, what);
    }
    void num_list(std::span<const PrecComplex> v, const char* what) const {
        for (const auto& a : v) num(a, what);
    }
    // full (x_i/x_j)*c_j argument matrices
    void den_matrix(std::span<const PrecComplex> x, std::span<const PrecComplex> c,
                    const char* what) const {
        const int n = static_cast<int>(x.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) den(x[i] / x[j] * c[static_cast<size_t>(j)], what);
    }
    void num_matrix(std::span<const PrecComplex> x, std::span<const PrecComplex> c,
                    const char* what) const {
        const int n = static_cast<int>(x.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) num(x[i] / x[j] * c[static_cast<size_t>(j)], what);
    }
};

// ---- constraint helpers ------------------------------------------------------

double abs_of(const PrecComplex& v) { return v.abs_double(); }

// min_j | q^{(n-1)/2} x_j^{-n} prod_i x_i |
double x_bound(std::span<const PrecComplex> x, const QModulus& q) {
    const int n = static_cast<int>(x.size());
    double prod = 1.0;
    for (const auto& xi : x) prod *= xi.abs_double();
    double best = kInf;
    for (const auto& xj : x) {
        best = std::min(best, prod / std::pow(xj.abs_double(), n));
    }
    return best * std::pow(q.abs(), 0.5 * (n - 1));
}

void add_range(std::vector<ConstraintCheck>& out, std::string what, double lo, double v,
               double hi) {
    out.push_back(ConstraintCheck{std::move(what), lo, v, hi, false, lo < v && v < hi});
}

// ---- entry table ---------------------------------------------------------------

struct Entry {
    IdentitySpec meta;
    std::function<EvalResult(Side, const ParameterPoint&, const EvalOptions&)> eval;
    std::function<void(const ParameterPoint&, std::vector<ConstraintCheck>&)> constraints;
    std::function<void(const Wks&, const PoleScan&)> poles;
};

using ConstraintFn = std::function<void(const ParameterPoint&, std::vector<ConstraintCheck>&)>;

RatioCoeff coeff(std::vector<PrecComplex> num, std::vector<PrecComplex> den,
                 PrecComplex zeta) {
    RatioCoeff rc;
    rc.num = std::move(num);
    rc.den = std::move(den);
    rc.zeta = std::move(zeta);
    return rc;
}

// prod_ij (x_i q / x_j)_inf / (x_i b_j / x_j)_inf  (psi-type cross factor)
void cross_psi(Products& P, std::span<const PrecComplex> x,
               std::span<const PrecComplex> b) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            P.n_(x[i] / x[j] * P.w.qv());
            P.d_(x[i] / x[j] * b[static_cast<size_t>(j)]);
        }
    }
}

// prod_ij (x_i q/x_j, x_i b_j/(x_j a_i))_inf / (x_i b_j/x_j, x_i q/(x_j a_i))_inf
void cross_gustafson(Products& P, std::span<const PrecComplex> x,
                     std::span<const PrecComplex> a, std::span<const PrecComplex> b) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const PrecComplex r = x[i] / x[j];
            P.n_(r * P.w.qv());
            P.n_(r * b[static_cast<size_t>(j)] / a[static_cast<size_t>(i)]);
            P.d_(r * b[static_cast<size_t>(j)]);
            P.d_(r * P.w.qv() / a[static_cast<size_t>(i)]);
        }
    }
}

void scan_cross_psi(const PoleScan& ps, std::span<const PrecComplex> x,
                    std::span<const PrecComplex> b, const char* what) {
    ps.den_matrix(x, b, what);
}

void scan_cross_gustafson(const PoleScan& ps, std::span<const PrecComplex> x,
                          std::span<const PrecComplex> a, std::span<const PrecComplex> b,
                          const char* what) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const PrecComplex r = x[i] / x[j];
            ps.den(r * b[static_cast<size_t>(j)], what);
            ps.den(r * ps.w.qv() / a[static_cast<size_t>(i)], what);
        }
    }
}

std::vector<PrecComplex> fill(const PrecComplex& v, int n) {
    return std::vector<PrecComplex>(static_cast<size_t>(n), v);
}

std::vector<PrecComplex> times_q(std::span<const PrecComplex> v, const PrecComplex& q) {
    std::vector<PrecComplex> r;
    for (const auto& e : v) r.push_back(e * q);
    return r;
}

// ================================================================================
// entries
// ================================================================================

Entry make_I01() {
    Entry e;
    e.meta = {"I01", "classical q-binomial theorem", 1, 1, VerifyMode::numeric,
              {"a", "z"}, {}, {}, "|z| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const PrecComplex a = w.s("a"), z = w.s("z");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{a};
            auto s = classical_summand(up, {}, w.q, z, true, w.eps);
            return run_series(*s, Region::orthant, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(a * z).d_(z);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        add_range(out, "|z| < 1", 0.0, abs_of(pt.s("z")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        ps.den(w.s("z"), "(z)_inf");
    };
    return e;
}

Entry make_I02() {
    Entry e;
    e.meta = {"I02", "Ramanujan 1psi1 summation", 1, 1, VerifyMode::numeric,
              {"a", "b", "z"}, {}, {}, "|b/a| < |z| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const PrecComplex a = w.s("a"), b = w.s("b"), z = w.s("z");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{a}, lo{b};
            auto s = classical_summand(up, lo, w.q, z, false, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(b / a).n_(a * z).n_(w.qv() / (a * z));
        P.d_(b).d_(w.qv() / a).d_(z).d_(b / (a * z));
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        add_range(out, "|b/a| < |z| < 1", abs_of(pt.s("b") / pt.s("a")),
                  abs_of(pt.s("z")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const PrecComplex a = w.s("a"), b = w.s("b"), z = w.s("z");
        ps.den(b, "(b)_k");
        ps.num(a, "(a)_k");
        ps.den(z, "(z)_inf");
        ps.den(w.qv() / a, "(q/a)_inf");
        ps.den(b / (a * z), "(b/az)_inf");
    };
    return e;
}

Entry make_I03() {
    Entry e;
    e.meta = {"I03", "A_n q-binomial theorem", 1, 3, VerifyMode::numeric,
              {"a", "z"}, {"x"}, {},
              "|z| < min_j |q^{(n-1)/2} x_j^{-n} X|"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const PrecComplex a = w.s("a"), z = w.s("z");
        if (side == Side::lhs) {
            auto bvec = fill(w.qv(), pt.n);
            auto s = an_summand_psi_type(x, bvec, w.q,
                                         CoefficientFn::ratio(coeff({a}, {}, z)), w.eps,
                                         Region::orthant);
            return run_series(*s, Region::orthant, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(a * z).d_(z);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        add_range(out, "|z| < Xbound(x)", 0.0, abs_of(pt.s("z")), x_bound(pt.v("x"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        ps.den_matrix(x, fill(w.qv(), w.pt.n), "(x_i q/x_j)_k");
        ps.den(w.s("z"), "(z)_inf");
    };
    return e;
}

Entry make_I04() {
    Entry e;
    e.meta = {"I04", "A_n 1psi1 summation (psi-type)", 1, 3, VerifyMode::numeric,
              {"a", "z"}, {"b", "x"}, {},
              "|B q^{1-n} / a| < |z| < min_j |q^{(n-1)/2} x_j^{-n} X|"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const PrecComplex a = w.s("a"), z = w.s("z");
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(x, b, w.q,
                                         CoefficientFn::ratio(coeff({a}, {}, z)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(a * z).n_(w.qv() / (a * z)).n_(Bp / a);
        P.d_(z).d_(Bp / (a * z)).d_(w.qv() / a);
        cross_psi(P, x, b);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const PrecComplex Bp = prodv(pt.v("b"), pt.q.prec()) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|B q^{1-n}/a| < |z| < Xbound(x)",
                  abs_of(Bp / pt.s("a")), abs_of(pt.s("z")), x_bound(pt.v("x"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto b = w.v("b");
        const PrecComplex a = w.s("a"), z = w.s("z");
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - w.pt.n);
        scan_cross_psi(ps, x, b, "(x_i b_j/x_j)_k");
        ps.num(a, "(a)_k");
        ps.den(z, "(z)_inf");
        ps.den(Bp / (a * z), "(B'/az)_inf");
        ps.den(w.qv() / a, "(q/a)_inf");
    };
    return e;
}

Entry make_I05() {
    Entry e;
    e.meta = {"I05", "index-shift product identity", 1, 3, VerifyMode::both,
              {}, {"x"}, {}, "x_i distinct; m_i >= 0"};
    e.meta.integer_roles = {};  // vector of shifts rides in int_vectors["m"]
    e.eval = [](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto& m = pt.iv("m");
        const int n = pt.n;
        EvalResult r{w.one(), 0.0, 0};
        if (side == Side::lhs) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    r.value *= qpoch_finite(x[i] / x[j] * w.qv(), w.q, m[j] - m[i], w.eps);
                }
            }
            return r;
        }
        long long M = 0;
        for (long mi : m) M += mi;
        long long qe = -binom2(M + 1);
        for (long mi : m) qe += static_cast<long long>(n) * binom2(mi + 1);
        r.value = w.qv().pow_int(static_cast<long>(qe));
        if (((n - 1) * M) % 2 != 0) r.value = -r.value;
        for (int i = 0; i < n; ++i) r.value *= x[i].pow_int(static_cast<long>(M - n * m[i]));
        LatticePoint kneg;
        kneg.n = n;
        for (int i = 0; i < n; ++i) kneg.k[i] = -m[i];
        r.value *= vandermonde_ratio(x, kneg, w.q, w.eps);
        return r;
    };
    e.constraints = [](const ParameterPoint&, std::vector<ConstraintCheck>&) {};
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        // negative-order factors of the left product
        ps.den_matrix(x, fill(w.qv(), w.pt.n), "(x_i q/x_j)_{m_j-m_i}");
    };
    return e;
}

Entry make_I06() {
    Entry e;
    e.meta = {"I06", "finite A_n reduction lemma", 1, 3, VerifyMode::both,
              {}, {"a", "x"}, {"N"}, "finite sum; x_i distinct"};
    e.eval = [](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const long N = pt.i("N");
        const PrecComplex A = w.prod(a);
        EvalResult r{PrecComplex(w.p), 0.0, N};
        auto f = [&](long m) { return pt.ftab[static_cast<size_t>(m)].at_prec(w.p); };
        if (side == Side::lhs) {
            for (long m = 0; m <= N; ++m) {
                r.value += qpoch_finite(A, w.q, m, w.eps) *
                           qpoch_finite_recip(w.qv(), w.q, m, w.eps) * f(m);
            }
            return r;
        }
        const int n = pt.n;
        LatticePoint k;
        k.n = n;
        std::vector<long> kk(static_cast<size_t>(n), 0);
        for (;;) {
            long sum = 0;
            for (long v2 : kk) sum += v2;
            if (sum <= N) {
                for (int i = 0; i < n; ++i) k.k[i] = kk[static_cast<size_t>(i)];
                PrecComplex t = vandermonde_ratio(x, k, w.q, w.eps);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        t *= qpoch_finite(x[i] / x[j] * a[static_cast<size_t>(j)], w.q,
                                          kk[static_cast<size_t>(i)], w.eps);
                        t *= qpoch_finite_recip(x[i] / x[j] * w.qv(), w.q,
                                                kk[static_cast<size_t>(i)], w.eps);
                    }
                }
                r.value += t * f(sum);
            }
            int pos = 0;
            while (pos < n && ++kk[static_cast<size_t>(pos)] > N) kk[static_cast<size_t>(pos++)] = 0;
            if (pos == n) break;
        }
        return r;
    };
    e.constraints = [](const ParameterPoint&, std::vector<ConstraintCheck>&) {};
    e.poles = [](const Wks& w, const PoleScan& ps) {
        ps.den_matrix(w.v("x"), fill(w.qv(), w.pt.n), "(x_i q/x_j)_k");
    };
    return e;
}

Entry make_I07() {
    Entry e;
    e.meta = {"I07", "coefficient slice of the A_n 1psi1", 1, 3, VerifyMode::numeric,
              {}, {"b", "x"}, {"m"}, "nondegenerate; any integer m"};
    e.meta.slice_series = true;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const long m = pt.i("m");
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(x, b, w.q, CoefficientFn::one(w.p), w.eps);
            return run_series(*s, Region::box, m, meta, pt.n, o);
        }
        Products P(w);
        P.n_(Bp).d_(w.qv());
        cross_psi(P, x, b);
        P.dfin(Bp, m);
        return P.result();
    };
    e.constraints = [](const ParameterPoint&, std::vector<ConstraintCheck>&) {};
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto b = w.v("b");
        scan_cross_psi(ps, x, b, "(x_i b_j/x_j)_k");
        ps.den(w.prod(b) * w.qpow(1 - w.pt.n), "(B')_m");
    };
    return e;
}

// I08 samples the coefficient f(m) = (fa, fb)_m fz^m / (fd)_m.
Entry make_I08() {
    Entry e;
    e.meta = {"I08", "bilateral coefficient lemma (psi-type)", 1, 3, VerifyMode::numeric,
              {"fa", "fb", "fd", "fz"}, {"b", "x"}, {},
              "|fd B'/(fa fb)| < |fz| < min(1, Xbound(x))"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const PrecComplex fa = w.s("fa"), fb = w.s("fb"), fd = w.s("fd"), fz = w.s("fz");
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{fa, fb}, lo{fd, Bp};
            auto s = classical_summand(up, lo, w.q, fz, false, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(w.qv()).d_(Bp);
        const int n = pt.n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                P.n_(x[i] / x[j] * b[static_cast<size_t>(j)]);
                P.d_(x[i] / x[j] * w.qv());
            }
        }
        EvalResult prods = P.result();
        auto s = an_summand_psi_type(x, b, w.q,
                                     CoefficientFn::ratio(coeff({fa, fb}, {fd}, fz)),
                                     w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const PrecComplex Bp = prodv(pt.v("b"), pt.q.prec()) * pt.q.pow_int(1 - pt.n);
        const double lo =
            abs_of(pt.s("fd") * Bp / (pt.s("fa") * pt.s("fb")));
        add_range(out, "|fd B'/(fa fb)| < |fz| < min(1, Xbound)", lo, abs_of(pt.s("fz")),
                  std::min(1.0, x_bound(pt.v("x"), q)));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto b = w.v("b");
        scan_cross_psi(ps, x, b, "(x_i b_j/x_j)_k");
        ps.num(w.s("fa"), "(fa)_m");
        ps.num(w.s("fb"), "(fb)_m");
        ps.den(w.s("fd"), "(fd)_m");
        ps.den(w.prod(b) * w.qpow(1 - w.pt.n), "(B')_m");
        ps.den_matrix(x, fill(w.qv(), w.pt.n), "(x_i q/x_j)_inf");
    };
    return e;
}

// I09 samples f(m) = (fa)_m fz^m on m >= 0.
Entry make_I09() {
    Entry e;
    e.meta = {"I09", "orthant coefficient lemma", 1, 3, VerifyMode::numeric,
              {"fa", "fz"}, {"x"}, {}, "|fz| < min(1, Xbound(x))"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const PrecComplex fa = w.s("fa"), fz = w.s("fz");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{fa};
            auto s = classical_summand(up, {}, w.q, fz, true, w.eps);
            return run_series(*s, Region::orthant, std::nullopt, meta, 1, o);
        }
        auto bvec = fill(w.qv(), pt.n);
        auto s = an_summand_psi_type(x, bvec, w.q,
                                     CoefficientFn::ratio(coeff({fa}, {}, fz)), w.eps,
                                     Region::orthant);
        return run_series(*s, Region::orthant, std::nullopt, meta, pt.n, o);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        add_range(out, "|fz| < min(1, Xbound)", 0.0, abs_of(pt.s("fz")),
                  std::min(1.0, x_bound(pt.v("x"), q)));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        ps.den_matrix(w.v("x"), fill(w.qv(), w.pt.n), "(x_i q/x_j)_k");
        ps.num(w.s("fa"), "(fa)_m");
    };
    return e;
}

Entry make_I10() {
    Entry e;
    e.meta = {"I10", "Gustafson A_n 1psi1 summation", 1, 3, VerifyMode::numeric,
              {"z"}, {"a", "b", "x"}, {}, "|B q^{1-n}/A| < |z| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const PrecComplex z = w.s("z");
        const PrecComplex A = w.prod(a);
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, a, b, w.q, z, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(A * z).n_(w.qv() / (A * z));
        P.d_(z).d_(Bp / (A * z));
        cross_gustafson(P, x, a, b);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p);
        const PrecComplex Bp = prodv(pt.v("b"), p) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|B'/A| < |z| < 1", abs_of(Bp / A), abs_of(pt.s("z")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, b, "gustafson cross");
        ps.den(w.s("z"), "(z)_inf");
        ps.den(w.prod(b) * w.qpow(1 - w.pt.n) / (w.prod(a) * w.s("z")), "(B'/Az)_inf");
    };
    return e;
}

// Shared pieces of I11 / I12 / I15.
EvalResult gustafson_slice_rhs(const Wks& w, std::span<const PrecComplex> x,
                               std::span<const PrecComplex> a,
                               std::span<const PrecComplex> b, long m) {
    const PrecComplex A = w.prod(a);
    const PrecComplex Bp = w.prod(b) * w.qpow(1 - w.pt.n);
    Products P(w);
    P.n_(Bp).n_(w.qv() / A);
    P.d_(w.qv()).d_(Bp / A);
    cross_gustafson(P, x, a, b);
    P.nfin(A, m).dfin(Bp, m);
    return P.result();
}

Entry make_I11() {
    Entry e;
    e.meta = {"I11", "coefficient slice of Gustafson's 1psi1", 1, 3, VerifyMode::numeric,
              {}, {"a", "b", "x"}, {"m"}, "|B q^{1-n}/A| < 1"};
    e.meta.slice_series = true;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const long m = pt.i("m");
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, a, b, w.q, CoefficientFn::one(w.p), w.eps);
            return run_series(*s, Region::box, m, meta, pt.n, o);
        }
        return gustafson_slice_rhs(w, x, a, b, m);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p);
        const PrecComplex Bp = prodv(pt.v("b"), p) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|B'/A| < 1", 0.0, abs_of(Bp / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, b, "gustafson cross");
        ps.den(prodv(b, w.p) * w.qpow(1 - w.pt.n), "(B')_m");
        ps.num(prodv(a, w.p), "(A)_m");
    };
    return e;
}

Entry make_I12() {
    Entry e = make_I11();
    e.meta.id = "I12";
    e.meta.title = "Gustafson A_{n-1} 6psi6 summation";
    e.meta.integer_roles = {};
    e.meta.domain_description = "|B q^{1-n}/A| < 1";
    auto base_eval = e.eval;
    e.eval = [base_eval](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        ParameterPoint p2 = pt;
        p2.integers["m"] = 0;
        return base_eval(side, p2, o);
    };
    return e;
}

Entry make_I13() {
    Entry e;
    e.meta = {"I13", "permutation-sum 1psi1 (Macdonald-type)", 1, 3, VerifyMode::numeric,
              {}, {"a", "b", "x"}, {}, "|B q^{1-n}/A| < 1"};
    e.meta.slice_series = true;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        if (side == Side::lhs) {
            TruncationSchedule sched = o.schedule;
            sched.max_radius = effective_max_radius(meta, pt.n, true, o.schedule);
            SumResult res = permutation_series_sum(x, a, b, w.q, sched, o.threads, w.eps,
                                                   o.radius_override);
            return EvalResult{std::move(res.value), res.err_estimate, res.radius_used};
        }
        const PrecComplex A = w.prod(a);
        const PrecComplex Bp = w.prod(b) * w.qpow(1 - pt.n);
        Products P(w);
        P.n_(Bp).n_(w.qv() / A);
        P.d_(w.qv()).d_(Bp / A);
        cross_gustafson(P, x, a, b);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = i + 1; j < pt.n; ++j) {
                P.scale(w.one() - x[i] / x[j]);
            }
        }
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p);
        const PrecComplex Bp = prodv(pt.v("b"), p) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|B'/A| < 1", 0.0, abs_of(Bp / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, b, "gustafson cross");
    };
    return e;
}

Entry make_I14() {
    Entry e;
    e.meta = {"I14", "permutation-sum identity at b_i = a_i q", 1, 3, VerifyMode::numeric,
              {}, {"a", "x"}, {}, "0 < |q| < 1"};
    e.meta.slice_series = true;
    e.meta.q_ceiling = 0.35;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = times_q(a, w.qv());
        if (side == Side::lhs) {
            TruncationSchedule sched = o.schedule;
            sched.max_radius = effective_max_radius(meta, pt.n, true, o.schedule);
            SumResult res = permutation_series_sum(x, a, b, w.q, sched, o.threads, w.eps,
                                                   o.radius_override);
            return EvalResult{std::move(res.value), res.err_estimate, res.radius_used};
        }
        const PrecComplex A = w.prod(a);
        Products P(w);
        P.n_(A * w.qv()).n_(w.qv() / A);
        P.d_(w.qv()).d_(w.qv());
        cross_gustafson(P, x, a, b);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = i + 1; j < pt.n; ++j) {
                P.scale(w.one() - x[i] / x[j]);
            }
        }
        return P.result();
    };
    e.constraints = [](const ParameterPoint&, std::vector<ConstraintCheck>&) {};
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, times_q(a, w.qv()), "gustafson cross");
    };
    return e;
}

Entry make_I15() {
    Entry e;
    e.meta = {"I15", "slice summation at b_i = a_i q", 1, 3, VerifyMode::numeric,
              {}, {"a", "x"}, {"m"}, "1 - A q^m != 0"};
    e.meta.slice_series = true;
    e.meta.q_ceiling = 0.35;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = times_q(a, w.qv());
        const long m = pt.i("m");
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, a, b, w.q, CoefficientFn::one(w.p), w.eps);
            return run_series(*s, Region::box, m, meta, pt.n, o);
        }
        const PrecComplex A = w.prod(a);
        Products P(w);
        P.n_(A).n_(w.qv() / A);
        P.d_(w.qv()).d_(w.qv());
        cross_gustafson(P, x, a, b);
        P.dfin(A * w.qpow(m), 1);  // 1/(1 - A q^m)
        return P.result();
    };
    e.constraints = [](const ParameterPoint&, std::vector<ConstraintCheck>&) {};
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, times_q(a, w.qv()), "gustafson cross");
        const long m = w.pt.i("m");
        ps.den(w.prod(a) * w.qpow(m), "(1 - A q^m)");
    };
    return e;
}

Entry make_I16() {
    Entry e;
    e.meta = {"I16", "Bailey 2psi2 transformation", 1, 1, VerifyMode::numeric,
              {"a", "b", "c", "d", "z"}, {}, {},
              "max(|z|, |cd/abz|, |d/a|, |c/b|) < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const PrecComplex a = w.s("a"), b = w.s("b"), c = w.s("c"), d = w.s("d"),
                          z = w.s("z");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{a, b}, lo{c, d};
            auto s = classical_summand(up, lo, w.q, z, false, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(a * z).n_(d / a).n_(c / b).n_(d * w.qv() / (a * b * z));
        P.d_(z).d_(d).d_(w.qv() / b).d_(c * d / (a * b * z));
        EvalResult prods = P.result();
        std::vector<PrecComplex> up{a, a * b * z / d}, lo{a * z, c};
        auto s = classical_summand(up, lo, w.q, d / a, false, w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, 1, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const PrecComplex a = pt.s("a"), b = pt.s("b"), c = pt.s("c"), d = pt.s("d"),
                          z = pt.s("z");
        add_range(out, "|z| < 1", 0.0, abs_of(z), 1.0);
        add_range(out, "|cd/abz| < 1", 0.0, abs_of(c * d / (a * b * z)), 1.0);
        add_range(out, "|d/a| < 1", 0.0, abs_of(d / a), 1.0);
        add_range(out, "|c/b| < 1", 0.0, abs_of(c / b), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        ps.num(w.s("a"), "(a)_k");
        ps.num(w.s("b"), "(b)_k");
        ps.den(w.s("c"), "(c)_k");
        ps.den(w.s("d"), "(d)_k");
        ps.num(w.s("a") * w.s("b") * w.s("z") / w.s("d"), "(abz/d)_k");
        ps.den(w.s("a") * w.s("z"), "(az)_k");
        ps.den(w.s("z"), "(z)_inf");
        ps.den(w.qv() / w.s("b"), "(q/b)_inf");
        ps.den(w.s("c") * w.s("d") / (w.s("a") * w.s("b") * w.s("z")), "(cd/abz)_inf");
    };
    return e;
}

Entry make_I17() {
    Entry e;
    e.meta = {"I17", "iterated Bailey 2psi2 transformation", 1, 1, VerifyMode::numeric,
              {"a", "b", "c", "d", "z"}, {}, {}, "max(|z|, |cd/abz|) < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const PrecComplex a = w.s("a"), b = w.s("b"), c = w.s("c"), d = w.s("d"),
                          z = w.s("z");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{a, b}, lo{c, d};
            auto s = classical_summand(up, lo, w.q, z, false, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(a * z).n_(b * z).n_(c * w.qv() / (a * b * z)).n_(d * w.qv() / (a * b * z));
        P.d_(w.qv() / a).d_(w.qv() / b).d_(c).d_(d);
        EvalResult prods = P.result();
        std::vector<PrecComplex> up{a * b * z / c, a * b * z / d}, lo{a * z, b * z};
        auto s = classical_summand(up, lo, w.q, c * d / (a * b * z), false, w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, 1, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const PrecComplex a = pt.s("a"), b = pt.s("b"), c = pt.s("c"), d = pt.s("d"),
                          z = pt.s("z");
        add_range(out, "|z| < 1", 0.0, abs_of(z), 1.0);
        add_range(out, "|cd/abz| < 1", 0.0, abs_of(c * d / (a * b * z)), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const PrecComplex a = w.s("a"), b = w.s("b"), c = w.s("c"), d = w.s("d"),
                          z = w.s("z");
        ps.num(a, "(a)_k");
        ps.num(b, "(b)_k");
        ps.den(c, "(c)_k");
        ps.den(d, "(d)_k");
        ps.num(a * b * z / c, "(abz/c)_k");
        ps.num(a * b * z / d, "(abz/d)_k");
        ps.den(a * z, "(az)_k");
        ps.den(b * z, "(bz)_k");
        ps.den(w.qv() / a, "(q/a)_inf");
        ps.den(w.qv() / b, "(q/b)_inf");
    };
    return e;
}

Entry make_I18() {
    Entry e;
    e.meta = {"I18", "2psi2 summation", 1, 1, VerifyMode::numeric,
              {"a", "b", "c"}, {}, {}, "max(|q/a|, |c|) < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const PrecComplex a = w.s("a"), b = w.s("b"), c = w.s("c");
        if (side == Side::lhs) {
            std::vector<PrecComplex> up{a, b}, lo{c, b * w.qv()};
            auto s = classical_summand(up, lo, w.q, w.qv() / a, false, w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, 1, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(w.qv()).n_(b * w.qv() / a).n_(c / b);
        P.d_(w.qv() / a).d_(b * w.qv()).d_(w.qv() / b).d_(c);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        add_range(out, "|q/a| < 1", 0.0, abs_of(pt.q / pt.s("a")), 1.0);
        add_range(out, "|c| < 1", 0.0, abs_of(pt.s("c")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        ps.num(w.s("a"), "(a)_k");
        ps.num(w.s("b"), "(b)_k");
        ps.den(w.s("c"), "(c)_k");
        ps.den(w.s("b") * w.qv(), "(bq)_k");
        ps.den(w.qv() / w.s("a"), "(q/a)_inf");
        ps.den(w.qv() / w.s("b"), "(q/b)_inf");
    };
    return e;
}

// ---- the six A_n 2psi2 transformations --------------------------------------

Entry make_I19() {
    Entry e;
    e.meta = {"I19", "A_n 2psi2 transformation (I)", 1, 3, VerifyMode::numeric,
              {"a", "b", "d", "z"}, {"c", "x", "y"}, {},
              "|C' d/(ab)| < |z| < Xbound(x), |C' d/(ab)| < |d/a| < Xbound(y)"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto c = w.v("c");
        const PrecComplex a = w.s("a"), b = w.s("b"), d = w.s("d"), z = w.s("z");
        const PrecComplex Cp = w.prod(c) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(x, c, w.q,
                                         CoefficientFn::ratio(coeff({a, b}, {d}, z)),
                                         w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(a * z).n_(d / a).n_(Cp / b).n_(d * w.qv() / (a * b * z));
        P.d_(z).d_(d).d_(w.qv() / b).d_(Cp * d / (a * b * z));
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                P.n_(x[i] / x[j] * w.qv()).n_(y[i] / y[j] * c[static_cast<size_t>(j)]);
                P.d_(y[i] / y[j] * w.qv()).d_(x[i] / x[j] * c[static_cast<size_t>(j)]);
            }
        }
        EvalResult prods = P.result();
        auto s = an_summand_psi_type(
            y, c, w.q, CoefficientFn::ratio(coeff({a, a * b * z / d}, {a * z}, d / a)),
            w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex Cp = prodv(pt.v("c"), p) * pt.q.pow_int(1 - pt.n);
        const PrecComplex a = pt.s("a"), b = pt.s("b"), d = pt.s("d"), z = pt.s("z");
        const double L = abs_of(Cp * d / (a * b));
        add_range(out, "|C'd/ab| < |z| < Xbound(x)", L, abs_of(z), x_bound(pt.v("x"), q));
        add_range(out, "|C'd/ab| < |d/a| < Xbound(y)", L, abs_of(d / a),
                  x_bound(pt.v("y"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto c = w.v("c");
        const PrecComplex a = w.s("a"), b = w.s("b"), d = w.s("d"), z = w.s("z");
        scan_cross_psi(ps, x, c, "(x_i c_j/x_j)_k");
        scan_cross_psi(ps, y, c, "(y_i c_j/y_j)_k");
        ps.num(a, "(a)_m");
        ps.num(b, "(b)_m");
        ps.den(d, "(d)_m");
        ps.num(a * b * z / d, "(abz/d)_m");
        ps.den(a * z, "(az)_m");
        ps.den(z, "(z)_inf");
        ps.den(w.qv() / b, "(q/b)_inf");
        ps.den(w.prod(c) * w.qpow(1 - w.pt.n) * d / (a * b * z), "(C'd/abz)_inf");
    };
    return e;
}

Entry make_I20() {
    Entry e;
    e.meta = {"I20", "A_n 2psi2 transformation (II)", 1, 3, VerifyMode::numeric,
              {"b", "d"}, {"a", "c", "x", "y", "z"}, {},
              "|Cd/(Ab)| < |Z| < Xbound(x), |Cd/(Ab)| < |d q^{n-1}/A| < Xbound(y)"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const auto zv = w.v("z");
        const PrecComplex b = w.s("b"), d = w.s("d");
        const PrecComplex A = w.prod(a), C = w.prod(c), Z = w.prod(zv);
        const PrecComplex Aq = A * w.qpow(1 - pt.n);
        const PrecComplex Cq = C * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(x, c, w.q,
                                         CoefficientFn::ratio(coeff({Aq, b}, {d}, Z)),
                                         w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        std::vector<PrecComplex> az;
        for (int j = 0; j < pt.n; ++j) az.push_back(a[static_cast<size_t>(j)] * zv[static_cast<size_t>(j)]);
        Products P(w);
        P.n_(Cq).n_(d * w.qpow(pt.n - 1) / A).n_(Cq / b).n_(d * w.qpow(pt.n) / (A * b * Z));
        P.d_(Z).d_(d).d_(w.qv() / b).d_(C * d / (A * b * Z));
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                P.n_(x[i] / x[j] * w.qv()).n_(y[i] / y[j] * az[static_cast<size_t>(j)]);
                P.d_(y[i] / y[j] * w.qv()).d_(x[i] / x[j] * c[static_cast<size_t>(j)]);
            }
        }
        EvalResult prods = P.result();
        auto s = an_summand_psi_type(
            y, az, w.q,
            CoefficientFn::ratio(
                coeff({Aq, A * b * Z * w.qpow(1 - pt.n) / d}, {Cq}, d * w.qpow(pt.n - 1) / A)),
            w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p), C = prodv(pt.v("c"), p),
                          Z = prodv(pt.v("z"), p);
        const PrecComplex b = pt.s("b"), d = pt.s("d");
        const double L = abs_of(C * d / (A * b));
        add_range(out, "|Cd/Ab| < |Z| < Xbound(x)", L, abs_of(Z), x_bound(pt.v("x"), q));
        add_range(out, "|Cd/Ab| < |dq^{n-1}/A| < Xbound(y)", L,
                  abs_of(d * pt.q.pow_int(pt.n - 1) / A), x_bound(pt.v("y"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const auto zv = w.v("z");
        std::vector<PrecComplex> az;
        for (size_t j = 0; j < a.size(); ++j) az.push_back(a[j] * zv[j]);
        const PrecComplex A = w.prod(a), C = w.prod(c), Z = w.prod(zv);
        const PrecComplex b = w.s("b"), d = w.s("d");
        scan_cross_psi(ps, x, c, "(x_i c_j/x_j)_k");
        scan_cross_psi(ps, y, az, "(y_i a_j z_j/y_j)_k");
        ps.num(A * w.qpow(1 - w.pt.n), "(Aq^{1-n})_m");
        ps.num(b, "(b)_m");
        ps.den(d, "(d)_m");
        ps.num(A * b * Z * w.qpow(1 - w.pt.n) / d, "(AbZq^{1-n}/d)_m");
        ps.den(C * w.qpow(1 - w.pt.n), "(Cq^{1-n})_m");
        ps.den(Z, "(Z)_inf");
        ps.den(w.qv() / b, "(q/b)_inf");
        ps.den(C * d / (A * b * Z), "(Cd/AbZ)_inf");
    };
    return e;
}

Entry make_I21() {
    Entry e;
    e.meta = {"I21", "A_n 2psi2 transformation (III)", 1, 3, VerifyMode::numeric,
              {"b", "d", "z"}, {"a", "c", "x", "y"}, {},
              "|Cdq^{1-n}/(Ab)| < |z| < 1, |Cdq^{1-n}/(Ab)| < |d/A| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const PrecComplex b = w.s("b"), d = w.s("d"), z = w.s("z");
        const PrecComplex A = w.prod(a), C = w.prod(c);
        const PrecComplex Cq = C * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, a, c, w.q,
                                               CoefficientFn::ratio(coeff({b}, {d}, z)),
                                               w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(A * z).n_(d / A).n_(Cq / b).n_(d * w.qv() / (A * b * z));
        P.d_(z).d_(d).d_(w.qv() / b).d_(Cq * d / (A * b * z));
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const PrecComplex rx = x[i] / x[j];
                const PrecComplex ry = y[i] / y[j];
                P.n_(ry * c[static_cast<size_t>(j)])
                    .n_(y[i] * w.qv() / (y[j] * a[static_cast<size_t>(i)]))
                    .n_(rx * w.qv())
                    .n_(x[i] * c[static_cast<size_t>(j)] / (x[j] * a[static_cast<size_t>(i)]));
                P.d_(rx * c[static_cast<size_t>(j)])
                    .d_(x[i] * w.qv() / (x[j] * a[static_cast<size_t>(i)]))
                    .d_(ry * w.qv())
                    .d_(y[i] * c[static_cast<size_t>(j)] / (y[j] * a[static_cast<size_t>(i)]));
            }
        }
        EvalResult prods = P.result();
        auto s = an_summand_gustafson_type(
            y, a, c, w.q, CoefficientFn::ratio(coeff({A * b * z / d}, {A * z}, d / A)),
            w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p), C = prodv(pt.v("c"), p);
        const PrecComplex b = pt.s("b"), d = pt.s("d"), z = pt.s("z");
        const double L = abs_of(C * pt.q.pow_int(1 - pt.n) * d / (A * b));
        add_range(out, "|Cdq^{1-n}/Ab| < |z| < 1", L, abs_of(z), 1.0);
        add_range(out, "|Cdq^{1-n}/Ab| < |d/A| < 1", L, abs_of(d / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const PrecComplex b = w.s("b"), d = w.s("d"), z = w.s("z");
        const PrecComplex A = w.prod(a);
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        ps.num_matrix(y, a, "(y_i a_j/y_j)_k");
        scan_cross_gustafson(ps, x, a, c, "gustafson cross x");
        scan_cross_gustafson(ps, y, a, c, "gustafson cross y");
        ps.num(b, "(b)_m");
        ps.den(d, "(d)_m");
        ps.num(A * b * z / d, "(Abz/d)_m");
        ps.den(A * z, "(Az)_m");
        ps.den(z, "(z)_inf");
        ps.den(w.qv() / b, "(q/b)_inf");
    };
    return e;
}

Entry make_I22() {
    Entry e;
    e.meta = {"I22", "A_n 2psi2 transformation (IV)", 1, 3, VerifyMode::numeric,
              {"c"}, {"a", "b", "d", "x", "y", "z"}, {},
              "|cD/(AB)| < |Z| < 1, |cD/(AB)| < |D/A| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const auto dv = w.v("d");
        const auto zv = w.v("z");
        const PrecComplex c = w.s("c");
        const PrecComplex A = w.prod(a), B = w.prod(b), D = w.prod(dv), Z = w.prod(zv);
        const PrecComplex Aq = A * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, b, dv, w.q,
                                               CoefficientFn::ratio(coeff({Aq}, {c}, Z)),
                                               w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(D / A).n_(c / B);
        P.d_(Z).d_(c * D / (A * B * Z));
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
                P.n_(y[i] * a[sj] * zv[sj] / y[j])
                    .n_(y[i] * dv[si] * w.qv() / (y[j] * a[si] * b[si] * zv[si]))
                    .n_(x[i] / x[j] * w.qv())
                    .n_(x[i] * dv[sj] / (x[j] * b[si]));
                P.d_(x[i] * dv[sj] / x[j])
                    .d_(x[i] * w.qv() / (x[j] * b[si]))
                    .d_(y[i] / y[j] * w.qv())
                    .d_(y[i] * dv[si] * a[sj] * zv[sj] / (y[j] * a[si] * b[si] * zv[si]));
            }
        }
        EvalResult prods = P.result();
        std::vector<PrecComplex> uy, by;
        for (int j = 0; j < pt.n; ++j) {
            const size_t sj = static_cast<size_t>(j);
            uy.push_back(a[sj] * b[sj] * zv[sj] / dv[sj]);
            by.push_back(a[sj] * zv[sj]);
        }
        auto s = an_summand_gustafson_type(
            y, uy, by, w.q, CoefficientFn::ratio(coeff({Aq}, {c}, D / A)), w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p), B = prodv(pt.v("b"), p),
                          D = prodv(pt.v("d"), p), Z = prodv(pt.v("z"), p);
        const PrecComplex c = pt.s("c");
        const double L = abs_of(c * D / (A * B));
        add_range(out, "|cD/AB| < |Z| < 1", L, abs_of(Z), 1.0);
        add_range(out, "|cD/AB| < |D/A| < 1", L, abs_of(D / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const auto dv = w.v("d");
        const auto zv = w.v("z");
        std::vector<PrecComplex> uy, by;
        for (size_t j = 0; j < a.size(); ++j) {
            uy.push_back(a[j] * b[j] * zv[j] / dv[j]);
            by.push_back(a[j] * zv[j]);
        }
        ps.num_matrix(x, b, "(x_i b_j/x_j)_k");
        ps.den_matrix(x, dv, "(x_i d_j/x_j)_k");
        ps.num_matrix(y, uy, "(y_i u_j/y_j)_k");
        ps.den_matrix(y, by, "(y_i a_j z_j/y_j)_k");
        ps.num(w.prod(a) * w.qpow(1 - w.pt.n), "(Aq^{1-n})_m");
        ps.den(w.s("c"), "(c)_m");
        ps.den(w.prod(zv), "(Z)_inf");
    };
    return e;
}

Entry make_I23() {
    Entry e;
    e.meta = {"I23", "A_n 2psi2 transformation (V)", 1, 3, VerifyMode::numeric,
              {"b", "d"}, {"a", "c", "x", "y", "z"}, {},
              "|Cd/(Ab)| < |Z| < Xbound(x), |Cd/(Ab)| < |Cd/(AbZ)| < Xbound(y)"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const auto zv = w.v("z");
        const PrecComplex b = w.s("b"), d = w.s("d");
        const PrecComplex A = w.prod(a), C = w.prod(c), Z = w.prod(zv);
        const PrecComplex Aq = A * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(x, c, w.q,
                                         CoefficientFn::ratio(coeff({Aq, b}, {d}, Z)),
                                         w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        std::vector<PrecComplex> az;
        for (int j = 0; j < pt.n; ++j) az.push_back(a[static_cast<size_t>(j)] * zv[static_cast<size_t>(j)]);
        Products P(w);
        P.n_(b * Z).n_(C * w.qv() / (A * b * Z)).n_(d * w.qpow(pt.n) / (A * b * Z));
        P.d_(w.qpow(pt.n) / A).d_(w.qv() / b).d_(d);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                P.n_(x[i] / x[j] * w.qv()).n_(y[i] / y[j] * az[static_cast<size_t>(j)]);
                P.d_(y[i] / y[j] * w.qv()).d_(x[i] / x[j] * c[static_cast<size_t>(j)]);
            }
        }
        EvalResult prods = P.result();
        auto s = an_summand_psi_type(
            y, az, w.q,
            CoefficientFn::ratio(coeff({A * b * Z / C, A * b * Z * w.qpow(1 - pt.n) / d},
                                       {b * Z}, C * d / (A * b * Z))),
            w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p), C = prodv(pt.v("c"), p),
                          Z = prodv(pt.v("z"), p);
        const PrecComplex b = pt.s("b"), d = pt.s("d");
        const double L = abs_of(C * d / (A * b));
        add_range(out, "|Cd/Ab| < |Z| < Xbound(x)", L, abs_of(Z), x_bound(pt.v("x"), q));
        add_range(out, "|Cd/Ab| < |Cd/AbZ| < Xbound(y)", L, abs_of(C * d / (A * b * Z)),
                  x_bound(pt.v("y"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const auto zv = w.v("z");
        std::vector<PrecComplex> az;
        for (size_t j = 0; j < a.size(); ++j) az.push_back(a[j] * zv[j]);
        const PrecComplex A = w.prod(a), C = w.prod(c), Z = w.prod(zv);
        const PrecComplex b = w.s("b"), d = w.s("d");
        scan_cross_psi(ps, x, c, "(x_i c_j/x_j)_k");
        scan_cross_psi(ps, y, az, "(y_i a_j z_j/y_j)_k");
        ps.num(A * w.qpow(1 - w.pt.n), "(Aq^{1-n})_m");
        ps.num(b, "(b)_m");
        ps.den(d, "(d)_m");
        ps.num(A * b * Z / C, "(AbZ/C)_m");
        ps.num(A * b * Z * w.qpow(1 - w.pt.n) / d, "(AbZq^{1-n}/d)_m");
        ps.den(b * Z, "(bZ)_m");
        ps.den(w.qpow(w.pt.n) / A, "(q^n/A)_inf");
        ps.den(w.qv() / b, "(q/b)_inf");
    };
    return e;
}

Entry make_I24() {
    Entry e;
    e.meta = {"I24", "A_n 2psi2 transformation (VI)", 1, 3, VerifyMode::numeric,
              {"c"}, {"a", "b", "d", "x", "y", "z"}, {}, "|cD/(AB)| < |Z| < 1"};
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const auto dv = w.v("d");
        const auto zv = w.v("z");
        const PrecComplex c = w.s("c");
        const PrecComplex A = w.prod(a), B = w.prod(b), D = w.prod(dv), Z = w.prod(zv);
        const PrecComplex Aq = A * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(x, b, dv, w.q,
                                               CoefficientFn::ratio(coeff({Aq}, {c}, Z)),
                                               w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(B * Z).n_(c * w.qpow(pt.n) / (A * B * Z));
        P.d_(w.qpow(pt.n) / A).d_(c);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
                P.n_(y[i] * a[sj] * zv[sj] / y[j])
                    .n_(y[i] * dv[si] * w.qv() / (y[j] * a[si] * b[si] * zv[si]))
                    .n_(x[i] / x[j] * w.qv())
                    .n_(x[i] * dv[sj] / (x[j] * b[si]));
                P.d_(x[i] * dv[sj] / x[j])
                    .d_(x[i] * w.qv() / (x[j] * b[si]))
                    .d_(y[i] / y[j] * w.qv())
                    .d_(y[i] * dv[si] * a[sj] * zv[sj] / (y[j] * a[si] * b[si] * zv[si]));
            }
        }
        EvalResult prods = P.result();
        std::vector<PrecComplex> uy, by;
        for (int j = 0; j < pt.n; ++j) {
            const size_t sj = static_cast<size_t>(j);
            uy.push_back(a[sj] * b[sj] * zv[sj] / dv[sj]);
            by.push_back(a[sj] * zv[sj]);
        }
        auto s = an_summand_gustafson_type(
            y, uy, by, w.q,
            CoefficientFn::ratio(coeff({A * B * Z * w.qpow(1 - pt.n) / c}, {B * Z},
                                       c * D / (A * B * Z))),
            w.eps);
        EvalResult series = run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        return mul_results(std::move(series), prods);
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p), B = prodv(pt.v("b"), p),
                          D = prodv(pt.v("d"), p), Z = prodv(pt.v("z"), p);
        const double L = abs_of(pt.s("c") * D / (A * B));
        add_range(out, "|cD/AB| < |Z| < 1", L, abs_of(Z), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto y = w.v("y");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const auto dv = w.v("d");
        const auto zv = w.v("z");
        std::vector<PrecComplex> uy, by;
        for (size_t j = 0; j < a.size(); ++j) {
            uy.push_back(a[j] * b[j] * zv[j] / dv[j]);
            by.push_back(a[j] * zv[j]);
        }
        ps.num_matrix(x, b, "(x_i b_j/x_j)_k");
        ps.den_matrix(x, dv, "(x_i d_j/x_j)_k");
        ps.num_matrix(y, uy, "(y_i u_j/y_j)_k");
        ps.den_matrix(y, by, "(y_i a_j z_j/y_j)_k");
        ps.num(w.prod(a) * w.qpow(1 - w.pt.n), "(Aq^{1-n})_m");
        ps.den(w.s("c"), "(c)_m");
        ps.den(w.prod(b) * w.prod(zv), "(BZ)_m");
    };
    return e;
}

// ---- the six A_n 2psi2 summations --------------------------------------------

Entry make_I25() {
    Entry e;
    e.meta = {"I25", "A_n 2psi2 summation (I)", 1, 3, VerifyMode::numeric,
              {"a", "b"}, {"c", "x"}, {},
              "|Cq^{2-n}/a| < |q/a| < Xbound(x)"};
    e.meta.specializes = "I19";
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto c = w.v("c");
        const PrecComplex a = w.s("a"), b = w.s("b");
        const PrecComplex Cp = w.prod(c) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(
                x, c, w.q, CoefficientFn::ratio(coeff({a, b}, {b * w.qv()}, w.qv() / a)),
                w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(b * w.qv() / a).n_(Cp / b);
        P.d_(w.qv() / a).d_(b * w.qv()).d_(w.qv() / b);
        cross_psi(P, x, c);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const PrecComplex Cp = prodv(pt.v("c"), pt.q.prec()) * pt.q.pow_int(1 - pt.n);
        const double qa = abs_of(pt.q / pt.s("a"));
        add_range(out, "|C'q/a| < |q/a| < Xbound(x)", abs_of(Cp) * qa, qa,
                  x_bound(pt.v("x"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto c = w.v("c");
        scan_cross_psi(ps, x, c, "(x_i c_j/x_j)_k");
        ps.num(w.s("a"), "(a)_m");
        ps.num(w.s("b"), "(b)_m");
        ps.den(w.s("b") * w.qv(), "(bq)_m");
        ps.den(w.qv() / w.s("a"), "(q/a)_inf");
        ps.den(w.qv() / w.s("b"), "(q/b)_inf");
    };
    return e;
}

Entry make_I26() {
    Entry e;
    e.meta = {"I26", "A_n 2psi2 summation (II)", 1, 3, VerifyMode::numeric,
              {"a", "c"}, {"b", "x"}, {}, "|cq/a| < |q/a| < Xbound(x)"};
    e.meta.specializes = "I23";
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const PrecComplex a = w.s("a"), c = w.s("c");
        const PrecComplex B = w.prod(b);
        const auto bq = times_q(b, w.qv());
        if (side == Side::lhs) {
            auto s = an_summand_psi_type(
                x, bq, w.q, CoefficientFn::ratio(coeff({a, B}, {c}, w.qv() / a)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(B * w.qv() / a).n_(c / B);
        P.d_(w.qv() / a).d_(w.qv() / B).d_(c);
        cross_psi(P, x, bq);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        QModulus q(pt.q);
        const double qa = abs_of(pt.q / pt.s("a"));
        add_range(out, "|cq/a| < |q/a| < Xbound(x)", abs_of(pt.s("c")) * qa, qa,
                  x_bound(pt.v("x"), q));
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto bq = times_q(w.v("b"), w.qv());
        scan_cross_psi(ps, x, bq, "(x_i b_j q/x_j)_k");
        ps.num(w.s("a"), "(a)_m");
        ps.num(w.prod("b"), "(B)_m");
        ps.den(w.s("c"), "(c)_m");
        ps.den(w.qv() / w.s("a"), "(q/a)_inf");
        ps.den(w.qv() / w.prod("b"), "(q/B)_inf");
    };
    return e;
}

Entry make_I27() {
    Entry e;
    e.meta = {"I27", "A_n 2psi2 summation (III)", 1, 3, VerifyMode::numeric,
              {"b"}, {"a", "c", "x"}, {}, "max(|Cq^{1-n}|, |q/A|) < 1"};
    e.meta.specializes = "I21";
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto c = w.v("c");
        const PrecComplex b = w.s("b");
        const PrecComplex A = w.prod(a);
        const PrecComplex Cp = w.prod(c) * w.qpow(1 - pt.n);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(
                x, a, c, w.q,
                CoefficientFn::ratio(coeff({b}, {b * w.qv()}, w.qv() / A)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(b * w.qv() / A).n_(Cp / b);
        P.d_(b * w.qv()).d_(w.qv() / b).d_(Cp / A);
        cross_gustafson(P, x, a, c);
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const mpfr_prec_t p = pt.q.prec();
        const PrecComplex A = prodv(pt.v("a"), p);
        const PrecComplex Cp = prodv(pt.v("c"), p) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|Cq^{1-n}| < 1", 0.0, abs_of(Cp), 1.0);
        add_range(out, "|q/A| < 1", 0.0, abs_of(pt.q / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto c = w.v("c");
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        scan_cross_gustafson(ps, x, a, c, "gustafson cross");
        ps.num(w.s("b"), "(b)_m");
        ps.den(w.s("b") * w.qv(), "(bq)_m");
        ps.den(w.prod(c) * w.qpow(1 - w.pt.n) / w.prod(a), "(C'/A)_inf");
        ps.den(w.qv() / w.s("b"), "(q/b)_inf");
    };
    return e;
}

Entry make_I28() {
    Entry e;
    e.meta = {"I28", "A_n 2psi2 summation (IV)", 1, 3, VerifyMode::numeric,
              {"a", "c"}, {"b", "x"}, {}, "max(|c|, |q/a|) < 1"};
    e.meta.specializes = "I22";
    e.meta.q_ceiling = 0.35;      // slice-direction decay rate is exactly |q|
    e.meta.box_radius_floor = 256;
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const auto bq = times_q(b, w.qv());
        const PrecComplex a = w.s("a"), c = w.s("c");
        const PrecComplex B = w.prod(b);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(
                x, b, bq, w.q, CoefficientFn::ratio(coeff({a}, {c}, w.qv() / a)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(B * w.qv() / a).n_(c / B);
        P.d_(w.qv() / a).d_(c);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
                P.n_(x[i] / x[j] * w.qv()).n_(x[i] * b[sj] * w.qv() / (x[j] * b[si]));
                P.d_(x[i] * b[sj] * w.qv() / x[j]).d_(x[i] * w.qv() / (x[j] * b[si]));
            }
        }
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        add_range(out, "|c| < 1", 0.0, abs_of(pt.s("c")), 1.0);
        add_range(out, "|q/a| < 1", 0.0, abs_of(pt.q / pt.s("a")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto b = w.v("b");
        const auto bq = times_q(b, w.qv());
        ps.num_matrix(x, b, "(x_i b_j/x_j)_k");
        ps.den_matrix(x, bq, "(x_i b_j q/x_j)_k");
        ps.num(w.s("a"), "(a)_m");
        ps.den(w.s("c"), "(c)_m");
        ps.den(w.qv() / w.s("a"), "(q/a)_inf");
    };
    return e;
}

Entry make_I29() {
    Entry e;
    e.meta = {"I29", "A_n 2psi2 summation (V)", 1, 3, VerifyMode::numeric,
              {"a"}, {"b", "c", "x"}, {}, "max(|Cq^{1-n}|, |q/a|) < 1"};
    e.meta.specializes = "I24";
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto b = w.v("b");
        const auto c = w.v("c");
        const PrecComplex a = w.s("a");
        const PrecComplex B = w.prod(b);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(
                x, b, c, w.q,
                CoefficientFn::ratio(coeff({a}, {B * w.qv()}, w.qv() / a)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(B * w.qv() / a);
        P.d_(w.qv() / a).d_(B * w.qv());
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
                P.n_(x[i] / x[j] * w.qv()).n_(x[i] * c[sj] / (x[j] * b[si]));
                P.d_(x[i] * c[sj] / x[j]).d_(x[i] * w.qv() / (x[j] * b[si]));
            }
        }
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const PrecComplex Cp = prodv(pt.v("c"), pt.q.prec()) * pt.q.pow_int(1 - pt.n);
        add_range(out, "|Cq^{1-n}| < 1", 0.0, abs_of(Cp), 1.0);
        add_range(out, "|q/a| < 1", 0.0, abs_of(pt.q / pt.s("a")), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto b = w.v("b");
        const auto c = w.v("c");
        ps.num_matrix(x, b, "(x_i b_j/x_j)_k");
        ps.den_matrix(x, c, "(x_i c_j/x_j)_k");
        ps.num(w.s("a"), "(a)_m");
        ps.den(w.prod(b) * w.qv(), "(Bq)_m");
        ps.den(w.qv() / w.s("a"), "(q/a)_inf");
    };
    return e;
}

Entry make_I30() {
    Entry e;
    e.meta = {"I30", "A_n 2psi2 summation (VI)", 1, 3, VerifyMode::numeric,
              {"c"}, {"a", "b", "x"}, {}, "max(|c|, |q/A|) < 1"};
    e.meta.specializes = "I24";
    e.eval = [meta = e.meta](Side side, const ParameterPoint& pt, const EvalOptions& o) {
        Wks w(pt, o);
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto b = w.v("b");
        const auto bq = times_q(b, w.qv());
        const PrecComplex c = w.s("c");
        const PrecComplex A = w.prod(a), B = w.prod(b);
        if (side == Side::lhs) {
            auto s = an_summand_gustafson_type(
                x, a, bq, w.q, CoefficientFn::ratio(coeff({B}, {c}, w.qv() / A)), w.eps);
            return run_series(*s, Region::box, std::nullopt, meta, pt.n, o);
        }
        Products P(w);
        P.n_(w.qv()).n_(c / B);
        P.d_(w.qv() / B).d_(c);
        for (int i = 0; i < pt.n; ++i) {
            for (int j = 0; j < pt.n; ++j) {
                const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
                P.n_(x[i] / x[j] * w.qv()).n_(x[i] * b[sj] * w.qv() / (x[j] * a[si]));
                P.d_(x[i] * b[sj] * w.qv() / x[j]).d_(x[i] * w.qv() / (x[j] * a[si]));
            }
        }
        return P.result();
    };
    e.constraints = [](const ParameterPoint& pt, std::vector<ConstraintCheck>& out) {
        const PrecComplex A = prodv(pt.v("a"), pt.q.prec());
        add_range(out, "|c| < 1", 0.0, abs_of(pt.s("c")), 1.0);
        add_range(out, "|q/A| < 1", 0.0, abs_of(pt.q / A), 1.0);
    };
    e.poles = [](const Wks& w, const PoleScan& ps) {
        const auto x = w.v("x");
        const auto a = w.v("a");
        const auto bq = times_q(w.v("b"), w.qv());
        ps.num_matrix(x, a, "(x_i a_j/x_j)_k");
        ps.den_matrix(x, bq, "(x_i b_j q/x_j)_k");
        ps.num(w.prod("b"), "(B)_m");
        ps.den(w.s("c"), "(c)_m");
        ps.den(w.qv() / w.prod(a), "(q/A)_inf");
    };
    return e;
}

// ---- registry -------------------------------------------------------------------

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        t.push_back(make_I01());
        t.push_back(make_I02());
        t.push_back(make_I03());
        t.push_back(make_I04());
        t.push_back(make_I05());
        t.push_back(make_I06());
        t.push_back(make_I07());
        t.push_back(make_I08());
        t.push_back(make_I09());
        t.push_back(make_I10());
        t.push_back(make_I11());
        t.push_back(make_I12());
        t.push_back(make_I13());
        t.push_back(make_I14());
        t.push_back(make_I15());
        t.push_back(make_I16());
        t.push_back(make_I17());
        t.push_back(make_I18());
        t.push_back(make_I19());
        t.push_back(make_I20());
        t.push_back(make_I21());
        t.push_back(make_I22());
        t.push_back(make_I23());
        t.push_back(make_I24());
        t.push_back(make_I25());
        t.push_back(make_I26());
        t.push_back(make_I27());
        t.push_back(make_I28());
        t.push_back(make_I29());
        t.push_back(make_I30());
        return t;
    }();
    return table;
}

const Entry& entry_lookup(const std::string& id) {
    for (const auto& e : entries()) {
        if (e.meta.id == id) return e;
    }
    throw UsageError("unknown identity id: " + id);
}

}  // namespace

// ---- public surface -----------------------------------------------------------

const PrecComplex& ParameterPoint::s(const std::string& role) const {
    auto it = scalars.find(role);
    if (it == scalars.end()) throw Error("missing scalar role '" + role + "'");
    return it->second;
}

const std::vector<PrecComplex>& ParameterPoint::v(const std::string& role) const {
    auto it = vectors.find(role);
    if (it == vectors.end()) throw Error("missing vector role '" + role + "'");
    return it->second;
}

long ParameterPoint::i(const std::string& role) const {
    auto it = integers.find(role);
    if (it == integers.end()) throw Error("missing integer role '" + role + "'");
    return it->second;
}

const std::vector<long>& ParameterPoint::iv(const std::string& role) const {
    auto it = int_vectors.find(role);
    if (it == int_vectors.end()) throw Error("missing integer vector role '" + role + "'");
    return it->second;
}

ParameterPoint ParameterPoint::at_prec(mpfr_prec_t prec) const {
    ParameterPoint r;
    r.n = n;
    r.q = q.at_prec(prec);
    for (const auto& [k, v2] : scalars) r.scalars.emplace(k, v2.at_prec(prec));
    for (const auto& [k, vec] : vectors) {
        std::vector<PrecComplex> nv;
        for (const auto& e : vec) nv.push_back(e.at_prec(prec));
        r.vectors.emplace(k, std::move(nv));
    }
    r.integers = integers;
    r.int_vectors = int_vectors;
    for (const auto& e : ftab) r.ftab.push_back(e.at_prec(prec));
    return r;
}

const std::vector<IdentitySpec>& catalog_list() {
    static const std::vector<IdentitySpec> metas = [] {
        std::vector<IdentitySpec> m;
        for (const auto& e : entries()) m.push_back(e.meta);
        return m;
    }();
    return metas;
}

const IdentitySpec& catalog_lookup(const std::string& id) { return entry_lookup(id).meta; }

EvalResult eval_side(const std::string& id, Side side, const ParameterPoint& pt,
                     const EvalOptions& opts) {
    const Entry& e = entry_lookup(id);
    // A few guard bits absorb accumulation roundoff (bilateral series can
    // cancel internally), so the value handed back is solid at the
    // requested precision.
    constexpr mpfr_prec_t kGuardBits = 24;
    EvalOptions inner = opts;
    inner.prec = opts.prec + kGuardBits;
    ParameterPoint local = pt.at_prec(inner.prec);
    EvalResult r = e.eval(side, local, inner);
    if (side == Side::rhs && opts.rhs_scale_eps != 0.0) {
        PrecComplex scale(inner.prec);
        mpfr_set_d(scale.re_mut(), 1.0 + opts.rhs_scale_eps, MPFR_RNDN);
        r.value *= scale;
    }
    r.value = r.value.at_prec(opts.prec);
    return r;
}

std::vector<ConstraintCheck> domain_constraints(const std::string& id,
                                                const ParameterPoint& pt) {
    std::vector<ConstraintCheck> out;
    entry_lookup(id).constraints(pt, out);
    return out;
}

DomainReport domain_check(const std::string& id, const ParameterPoint& pt, double margin,
                          double pole_eps) {
    const Entry& e = entry_lookup(id);
    DomainReport rep;
    e.constraints(pt, rep.checks);
    for (auto& c : rep.checks) {
        bool ok = true;
        if (c.lo > 0.0 && c.value < c.lo * (1.0 + margin)) ok = false;
        if (c.hi < kInf && c.value > c.hi * (1.0 - margin)) ok = false;
        c.ok = ok;
        if (!ok) rep.violations.push_back(c.what);
    }
    // nondegeneracy: distinct x/y values and pole proximity on every
    // q-shifted-factorial argument the displays touch
    const double eps = pole_eps > 0 ? pole_eps : pole_threshold_for(pt.q.prec());
    EvalOptions opts;
    opts.prec = pt.q.prec();
    Wks w(pt, opts);
    for (const char* role : {"x", "y"}) {
        auto it = pt.vectors.find(role);
        if (it == pt.vectors.end()) continue;
        const auto& xs = it->second;
        for (size_t i = 0; i < xs.size(); ++i) {
            for (size_t j = i + 1; j < xs.size(); ++j) {
                if ((xs[i] - xs[j]).abs_double() < eps) {
                    rep.violations.push_back(std::string(role) + "_i too close to " + role +
                                             "_j");
                }
            }
        }
    }
    PoleScan ps{w, eps, &rep.violations};
    e.poles(w, ps);
    rep.ok = rep.violations.empty();
    return rep;
}

std::pair<EvalResult, EvalResult> lemma_lem1_pair(const CoefficientFn& f,
                                                  std::span<const PrecComplex> b_vec,
                                                  std::span<const PrecComplex> x,
                                                  const QModulus& q,
                                                  const EvalOptions& opts) {
    const int n = static_cast<int>(x.size());
    ParameterPoint pt;
    pt.n = n;
    pt.q = q.value();
    Wks w(pt, opts);
    const PrecComplex Bp = prodv(b_vec, w.p) * w.qpow(1 - n);
    IdentitySpec meta;
    meta.id = "lem1";
    meta.slice_series = true;  // finite-support coefficients reduce to slice sums

    // lhs = sum_m f(m) / (B')_m
    CoefficientFn lhs_coeff = CoefficientFn::fn(
        [&f, &w, Bp](long m) {
            PrecComplex v = f.eval(m, w.q, w.eps);
            v *= qpoch_finite_recip(Bp, w.q, m, w.eps);
            return v;
        },
        f.support());
    auto lhs_summand = std::make_unique<FnSummand>(1, w.p, [lhs_coeff, &w](const LatticePoint& k) {
        return lhs_coeff.eval(k.k[0], w.q, w.eps);
    });
    EvalResult lhs = run_series(*lhs_summand, Region::box, std::nullopt, meta, 1, opts);

    Products P(w);
    P.n_(w.qv()).d_(Bp);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            P.n_(x[i] / x[j] * b_vec[static_cast<size_t>(j)]);
            P.d_(x[i] / x[j] * w.qv());
        }
    }
    EvalResult prods = P.result();
    auto s = an_summand_psi_type(x, b_vec, w.q, f, w.eps);
    EvalResult rhs = run_series(*s, Region::box, std::nullopt, meta, n, opts);
    return {std::move(lhs), mul_results(std::move(rhs), prods)};
}

std::pair<EvalResult, EvalResult> lemma_lem2_pair(const CoefficientFn& g,
                                                  std::span<const PrecComplex> a_vec,
                                                  std::span<const PrecComplex> b_vec,
                                                  std::span<const PrecComplex> x,
                                                  const QModulus& q,
                                                  const EvalOptions& opts) {
    const int n = static_cast<int>(x.size());
    ParameterPoint pt;
    pt.n = n;
    pt.q = q.value();
    Wks w(pt, opts);
    const PrecComplex A = prodv(a_vec, w.p);
    const PrecComplex Bp = prodv(b_vec, w.p) * w.qpow(1 - n);
    IdentitySpec meta;
    meta.id = "lem2";
    meta.slice_series = true;

    CoefficientFn lhs_coeff = CoefficientFn::fn(
        [&g, &w, A, Bp](long m) {
            PrecComplex v = g.eval(m, w.q, w.eps);
            v *= qpoch_finite(A, w.q, m, w.eps);
            v *= qpoch_finite_recip(Bp, w.q, m, w.eps);
            return v;
        },
        g.support());
    auto lhs_summand = std::make_unique<FnSummand>(1, w.p, [lhs_coeff, &w](const LatticePoint& k) {
        return lhs_coeff.eval(k.k[0], w.q, w.eps);
    });
    EvalResult lhs = run_series(*lhs_summand, Region::box, std::nullopt, meta, 1, opts);

    Products P(w);
    P.n_(w.qv()).n_(Bp / A);
    P.d_(Bp).d_(w.qv() / A);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
            P.n_(x[i] / x[j] * b_vec[sj]).n_(x[i] * w.qv() / (x[j] * a_vec[si]));
            P.d_(x[i] / x[j] * w.qv()).d_(x[i] * b_vec[sj] / (x[j] * a_vec[si]));
        }
    }
    EvalResult prods = P.result();
    auto s = an_summand_gustafson_type(x, a_vec, b_vec, w.q, g, w.eps);
    EvalResult rhs = run_series(*s, Region::box, std::nullopt, meta, n, opts);
    return {std::move(lhs), mul_results(std::move(rhs), prods)};
}

std::optional<std::pair<std::string, ParameterPoint>> classical_counterpart(
    const std::string& id, const ParameterPoint& pt) {
    if (pt.n != 1) return std::nullopt;
    ParameterPoint out;
    out.n = 1;
    out.q = pt.q;
    auto set = [&](const char* role, PrecComplex v) { out.scalars.emplace(role, std::move(v)); };

    if (id == "I03") {
        set("a", pt.s("a"));
        set("z", pt.s("z"));
        return std::make_pair(std::string("I01"), std::move(out));
    }
    if (id == "I04") {
        set("a", pt.s("a"));
        set("b", pt.v("b")[0]);
        set("z", pt.s("z"));
        return std::make_pair(std::string("I02"), std::move(out));
    }
    if (id == "I10") {
        set("a", pt.v("a")[0]);
        set("b", pt.v("b")[0]);
        set("z", pt.s("z"));
        return std::make_pair(std::string("I02"), std::move(out));
    }
    if (id == "I12" || id == "I13") return std::nullopt;  // trivial 1 = 1 at n = 1
    if (id == "I19") {
        set("a", pt.s("a"));
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        set("d", pt.s("d"));
        set("z", pt.s("z"));
        return std::make_pair(std::string("I16"), std::move(out));
    }
    if (id == "I20") {
        set("a", pt.v("a")[0]);
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        set("d", pt.s("d"));
        set("z", pt.v("z")[0]);
        return std::make_pair(std::string("I16"), std::move(out));
    }
    if (id == "I21") {
        set("a", pt.v("a")[0]);
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        set("d", pt.s("d"));
        set("z", pt.s("z"));
        return std::make_pair(std::string("I16"), std::move(out));
    }
    if (id == "I22") {
        set("a", pt.v("b")[0]);
        set("b", pt.v("a")[0]);
        set("c", pt.v("d")[0]);
        set("d", pt.s("c"));
        set("z", pt.v("z")[0]);
        return std::make_pair(std::string("I16"), std::move(out));
    }
    if (id == "I23") {
        set("a", pt.v("a")[0]);
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        set("d", pt.s("d"));
        set("z", pt.v("z")[0]);
        return std::make_pair(std::string("I17"), std::move(out));
    }
    if (id == "I24") {
        set("a", pt.v("b")[0]);
        set("b", pt.v("a")[0]);
        set("c", pt.v("d")[0]);
        set("d", pt.s("c"));
        set("z", pt.v("z")[0]);
        return std::make_pair(std::string("I17"), std::move(out));
    }
    if (id == "I25") {
        set("a", pt.s("a"));
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        return std::make_pair(std::string("I18"), std::move(out));
    }
    if (id == "I26" || id == "I28") {
        set("a", pt.s("a"));
        set("b", pt.v("b")[0]);
        set("c", pt.s("c"));
        return std::make_pair(std::string("I18"), std::move(out));
    }
    if (id == "I27") {
        set("a", pt.v("a")[0]);
        set("b", pt.s("b"));
        set("c", pt.v("c")[0]);
        return std::make_pair(std::string("I18"), std::move(out));
    }
    if (id == "I29") {
        set("a", pt.s("a"));
        set("b", pt.v("b")[0]);
        set("c", pt.v("c")[0]);
        return std::make_pair(std::string("I18"), std::move(out));
    }
    if (id == "I30") {
        set("a", pt.v("a")[0]);
        set("b", pt.v("b")[0]);
        set("c", pt.s("c"));
        return std::make_pair(std::string("I18"), std::move(out));
    }
    return std::nullopt;
}

}  // namespace qlv
