#include "qlv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qlv/exact.hpp"

namespace qlv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRetries = 400;

long effective_radius_for(const IdentitySpec& meta, int n, const TruncationSchedule& s) {
    long r = s.max_radius;
    if (n == 1) return std::max(r, 4096L);
    if (meta.slice_series) r = std::max(r, 512L);
    if (meta.box_radius_floor > 0) r = std::max(r, meta.box_radius_floor);
    return r;
}

// Decay-ratio ceiling that lets the doubling schedule certify tol within
// the effective radius (two consecutive agreements need roughly
// rho^(R/4) * slack < tol).
double rho_cap_for(const IdentitySpec& meta, int n, const TruncationSchedule& s) {
    const long r = effective_radius_for(meta, n, s);
    const double rho = std::pow(s.tol * 1e-4, 4.0 / static_cast<double>(r));
    return std::min(rho, 0.8);
}

struct DrawCtx {
    RngStream& rng;
    const SampleConfig& cfg;
    const IdentitySpec& meta;
    int n;
    mpfr_prec_t prec;
    double rho;
    PrecComplex q{128};
    double qabs = 0.0;

    double margin() const { return cfg.margin; }

    double band(double lo, double hi) {
        const double l = lo * (1.0 + cfg.margin);
        const double h = hi * (1.0 - cfg.margin);
        if (!(l < h)) throw RangeEmpty("draw band empty");
        return rng.log_uniform(l, h);
    }

    PrecComplex with_phase(double modulus) {
        const double th = rng.phase();
        return PrecComplex::from_double(modulus * std::cos(th), modulus * std::sin(th),
                                        prec);
    }

    PrecComplex cpl(double lo, double hi) { return with_phase(band(lo, hi)); }

    // solved argument modulus in [max(L(1+m), L/rho), min(U(1-m), U rho)]
    double solve_mod(double L, double U) {
        double hi = U * std::min(1.0 - cfg.margin, rho);
        double lo = std::max({L * (1.0 + cfg.margin), L / rho, hi / 50.0});
        if (!(lo < hi)) throw RangeEmpty("argument annulus empty");
        return rng.log_uniform(lo, hi);
    }
    PrecComplex solve_arg(double L, double U) { return with_phase(solve_mod(L, U)); }

    std::vector<PrecComplex> annulus(int count, double lo, double hi, double sep) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<PrecComplex> xs;
            for (int i = 0; i < count; ++i) xs.push_back(cpl(lo, hi));
            bool ok = true;
            for (int i = 0; i < count && ok; ++i) {
                for (int j = i + 1; j < count; ++j) {
                    if ((xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)]).abs_double() < sep) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) return xs;
        }
        throw RangeEmpty("x annulus separation unreachable");
    }

    // count values whose product is exactly target, components balanced
    // near |target|^(1/count) (a lopsided component parks a Pochhammer
    // activation hump deep in the lattice)
    std::vector<PrecComplex> vec_with_product_exact(int count, const PrecComplex& target) {
        std::vector<PrecComplex> r;
        if (count == 1) {
            r.push_back(target);
            return r;
        }
        const double comp = std::pow(target.abs_double(), 1.0 / count);
        PrecComplex rest(prec);
        rest.set_one();
        for (int i = 0; i + 1 < count; ++i) {
            r.push_back(with_phase(comp * rng.uniform(0.85, 1.18)));
            rest *= r.back();
        }
        r.push_back(target / rest);
        return r;
    }
};

double cabs(const PrecComplex& v) { return v.abs_double(); }

PrecComplex prodv(std::span<const PrecComplex> v, mpfr_prec_t p) {
    PrecComplex r(p);
    r.set_one();
    for (const auto& e : v) r *= e;
    return r;
}

// ---- per-entry draw plans --------------------------------------------------
//
// Series arguments are drawn near the top of their capped annulus so the
// dominant lattice mass stays within a few shells of the origin (a tiny
// argument parks the bilateral hump at |k| ~ ln|arg|/ln q and the doubling
// schedule then cannot certify stabilization inside the radius budget).
// Up-caps differ by family: psi-type off-diagonal directions are
// q-quadratically suppressed, Gustafson-type single-coordinate directions
// decay only like the argument itself.

constexpr double kUpT1 = 0.12;
constexpr double kUpT2 = 0.025;
constexpr double kDnLo = 5e-3;
constexpr double kDnHi = 2e-2;

double up_cap(const DrawCtx& c, double family_cap) {
    return c.n == 1 ? std::min(1.0 - c.cfg.margin, c.rho) : family_cap;
}

// modulus in [frac*cap*U, cap*U)
double top_band(DrawCtx& c, double U, double cap, double frac = 0.25) {
    const double hi = U * cap * (1.0 - c.cfg.margin * 0.0);
    const double lo = hi * frac;
    if (!(lo < hi) || !(hi > 0)) throw RangeEmpty("top band empty");
    return c.rng.log_uniform(lo, hi);
}

double dn_ratio(DrawCtx& c) {
    if (c.n == 1) return c.rng.log_uniform(c.rho * c.rho / 64.0, c.rho * c.rho / 4.0);
    return c.rng.log_uniform(kDnLo, kDnHi);
}

void draw_I01(DrawCtx& c, ParameterPoint& pt) {
    pt.scalars.emplace("a", c.cpl(0.15, 6.0));
    pt.scalars.emplace("z", c.with_phase(top_band(c, 1.0, up_cap(c, kUpT1))));
}

void draw_I02(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex a = c.cpl(1.3, 5.0);
    const double z = top_band(c, 1.0, up_cap(c, kUpT1));
    const double rb = dn_ratio(c) * z;
    pt.scalars.emplace("b", a * c.with_phase(rb));
    pt.scalars.emplace("a", std::move(a));
    pt.scalars.emplace("z", c.with_phase(z));
}

double xb(const ParameterPoint& pt, const char* role = "x") {
    QModulus q(pt.q);
    const auto& xs = pt.v(role);
    const int n = static_cast<int>(xs.size());
    double prod = 1.0;
    for (const auto& xi : xs) prod *= cabs(xi);
    double best = kInf;
    for (const auto& xj : xs) best = std::min(best, prod / std::pow(cabs(xj), n));
    return best * std::pow(q.abs(), 0.5 * (n - 1));
}

void draw_I03(DrawCtx& c, ParameterPoint& pt) {
    pt.scalars.emplace("a", c.cpl(1.3, 5.0));
    pt.scalars.emplace("z", c.with_phase(top_band(c, xb(pt), up_cap(c, kUpT1))));
}

void draw_I04(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex a = c.cpl(1.3, 5.0);
    const double z = top_band(c, xb(pt), up_cap(c, kUpT1));
    const double L = dn_ratio(c) * z;  // |B q^{1-n} / a|
    const double Bmod = L * cabs(a) * std::pow(c.qabs, c.n - 1);
    pt.vectors.emplace("b", c.vec_with_product_exact(c.n, c.with_phase(Bmod)));
    pt.scalars.emplace("a", std::move(a));
    pt.scalars.emplace("z", c.with_phase(z));
}

void draw_I05(DrawCtx& c, ParameterPoint& pt) {
    std::vector<long> m;
    for (int i = 0; i < c.n; ++i) m.push_back(c.rng.next_long(0, 4));
    pt.int_vectors.emplace("m", std::move(m));
}

void draw_I06(DrawCtx& c, ParameterPoint& pt) {
    const long N = c.rng.next_long(0, 4);
    pt.integers.emplace("N", N);
    std::vector<PrecComplex> a;
    for (int i = 0; i < c.n; ++i) a.push_back(c.cpl(0.25, 2.0));
    pt.vectors.emplace("a", std::move(a));
    for (long m = 0; m <= N; ++m) pt.ftab.push_back(c.cpl(0.3, 1.2));
}

void draw_I07(DrawCtx& c, ParameterPoint& pt) {
    // |B'| moderate: deep Pochhammer activation is harmless here (the
    // slice decay is q-quadratic) but poles stay away
    const double Bp = c.rng.log_uniform(0.02, 0.3);
    pt.vectors.emplace("b", c.vec_with_product_exact(c.n, c.with_phase(Bp * std::pow(c.qabs, c.n - 1))));
    pt.integers.emplace("m", c.rng.next_long(-3, 3));
}

void draw_I08(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex fa = c.cpl(1.2, 3.5), fb = c.cpl(1.2, 3.5), fd = c.cpl(0.1, 0.6);
    const double z = top_band(c, std::min(1.0, xb(pt)), up_cap(c, kUpT1));
    const double L = dn_ratio(c) * z;  // |fd B' / (fa fb)|
    const double Bp = L * cabs(fa * fb / fd);
    pt.vectors.emplace("b", c.vec_with_product_exact(c.n, c.with_phase(Bp * std::pow(c.qabs, c.n - 1))));
    pt.scalars.emplace("fa", std::move(fa));
    pt.scalars.emplace("fb", std::move(fb));
    pt.scalars.emplace("fd", std::move(fd));
    pt.scalars.emplace("fz", c.with_phase(z));
}

void draw_I09(DrawCtx& c, ParameterPoint& pt) {
    pt.scalars.emplace("fa", c.cpl(0.3, 2.5));
    pt.scalars.emplace("fz", c.with_phase(top_band(c, std::min(1.0, xb(pt)), up_cap(c, kUpT1))));
}

void draw_avec(DrawCtx& c, ParameterPoint& pt, const char* role, double prod_lo,
               double prod_hi) {
    const double A = c.rng.log_uniform(prod_lo, prod_hi);
    pt.vectors.emplace(role, c.vec_with_product_exact(c.n, c.with_phase(A)));
}

void draw_I10(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "a", 2.0, 8.0);
    const double A = cabs(prodv(pt.v("a"), c.prec));
    const double z = top_band(c, 1.0, up_cap(c, kUpT2));
    const double L = dn_ratio(c) * z;  // |B'/A|
    pt.vectors.emplace("b", c.vec_with_product_exact(c.n, c.with_phase(L * A * std::pow(c.qabs, c.n - 1))));
    pt.scalars.emplace("z", c.with_phase(z));
}

// slice entries: the mixed-direction rate |B'/A| is the sampled knob
void draw_slice_ab(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "a", 1.5, 6.0);
    const double A = cabs(prodv(pt.v("a"), c.prec));
    const double ratio = c.rng.log_uniform(0.005, 0.1);
    pt.vectors.emplace("b", c.vec_with_product_exact(c.n, c.with_phase(ratio * A * std::pow(c.qabs, c.n - 1))));
}

void draw_I11(DrawCtx& c, ParameterPoint& pt) {
    draw_slice_ab(c, pt);
    pt.integers.emplace("m", c.rng.next_long(-3, 3));
}

void draw_I12(DrawCtx& c, ParameterPoint& pt) { draw_slice_ab(c, pt); }

void draw_I13(DrawCtx& c, ParameterPoint& pt) { draw_slice_ab(c, pt); }

void draw_I14(DrawCtx& c, ParameterPoint& pt) {
    std::vector<PrecComplex> a;
    for (int i = 0; i < c.n; ++i) a.push_back(c.cpl(0.45, 2.2));
    pt.vectors.emplace("a", std::move(a));
}

void draw_I15(DrawCtx& c, ParameterPoint& pt) {
    draw_I14(c, pt);
    pt.integers.emplace("m", c.rng.next_long(-3, 3));
}

void draw_I16(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex a = c.cpl(1.4, 4.0), b = c.cpl(1.4, 4.0);
    PrecComplex d = a * c.with_phase(c.rng.log_uniform(0.03, 0.6));
    PrecComplex cc = b * c.with_phase(c.rng.log_uniform(0.03, 0.6));
    const double L = cabs(cc * d / (a * b));
    const double zlo = std::max(L * (1.0 + c.cfg.margin) * 1.2, 0.02);
    const double zhi = (1.0 - c.cfg.margin) * 0.9;
    if (!(zlo < zhi)) throw RangeEmpty("I16 z annulus empty");
    pt.scalars.emplace("a", std::move(a));
    pt.scalars.emplace("b", std::move(b));
    pt.scalars.emplace("c", std::move(cc));
    pt.scalars.emplace("d", std::move(d));
    pt.scalars.emplace("z", c.with_phase(c.rng.log_uniform(zlo, zhi)));
}

void draw_I17(DrawCtx& c, ParameterPoint& pt) { draw_I16(c, pt); }

void draw_I18(DrawCtx& c, ParameterPoint& pt) {
    pt.scalars.emplace("a", c.cpl(1.5, 6.0));
    pt.scalars.emplace("b", c.cpl(0.5, 2.5));
    pt.scalars.emplace("c", c.cpl(0.02, 0.6));
}

void draw_I19(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex a = c.cpl(1.4, 4.0), b = c.cpl(1.4, 4.0);
    const double Xbx = xb(pt, "x"), Xby = xb(pt, "y");
    const double z = top_band(c, Xbx, up_cap(c, kUpT1));
    const double u2 = top_band(c, Xby, up_cap(c, kUpT1));
    // |C'd/ab| <= dn * min(|z|, |d/a|)  via  |C'/b| = that / u2
    const double L = dn_ratio(c) * std::min(z, u2);
    const double Cmod = (L / u2) * cabs(b) * std::pow(c.qabs, c.n - 1);
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(Cmod)));
    pt.scalars.emplace("d", a * c.with_phase(u2));
    pt.scalars.emplace("a", std::move(a));
    pt.scalars.emplace("b", std::move(b));
    pt.scalars.emplace("z", c.with_phase(z));
}

void draw_I20(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "a", 2.0, 6.0);
    PrecComplex b = c.cpl(1.4, 4.0);
    const PrecComplex A = prodv(pt.v("a"), c.prec);
    const double Xbx = xb(pt, "x"), Xby = xb(pt, "y");
    const double Z = top_band(c, Xbx, up_cap(c, kUpT1));
    const double u2 = top_band(c, Xby, up_cap(c, kUpT1));
    const double L = dn_ratio(c) * std::min(Z, u2);
    const double Cmod = (L / u2) * cabs(b) * std::pow(c.qabs, c.n - 1);
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(Cmod)));
    pt.scalars.emplace("d", c.with_phase(u2 * cabs(A) / std::pow(c.qabs, c.n - 1)));
    pt.scalars.emplace("b", std::move(b));
    pt.vectors.emplace("z", c.vec_with_product_exact(c.n, c.with_phase(Z)));
}

void draw_I21(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "a", 2.0, 6.0);
    PrecComplex b = c.cpl(1.4, 4.0);
    const PrecComplex A = prodv(pt.v("a"), c.prec);
    const double z = top_band(c, 1.0, up_cap(c, kUpT2));
    const double u2 = top_band(c, 1.0, up_cap(c, kUpT2));
    const double L = dn_ratio(c) * std::min(z, u2);
    const double Cmod = (L / u2) * cabs(b) * std::pow(c.qabs, c.n - 1);
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(Cmod)));
    pt.scalars.emplace("d", A * c.with_phase(u2));
    pt.scalars.emplace("b", std::move(b));
    pt.scalars.emplace("z", c.with_phase(z));
}

void draw_I22(DrawCtx& c, ParameterPoint& pt) {
    // Coupled bands: |c| must activate within a few shells (depth
    // ln|c|/ln q), the coefficient numerator Aq^{1-n} must not jump too
    // long, and the slice rate |D q^{1-n}/B| stays small.
    const double qp = std::pow(c.qabs, c.n - 1);
    const double Ahi = std::min(5.0, 0.8 * std::pow(c.qabs, -4.5) * qp);
    draw_avec(c, pt, "a", std::min(1.6, Ahi * 0.6), Ahi);
    draw_avec(c, pt, "b", 3.0, 4.5);
    const PrecComplex A = prodv(pt.v("a"), c.prec);
    const PrecComplex B = prodv(pt.v("b"), c.prec);
    const double Z = c.n == 1 ? top_band(c, 1.0, up_cap(c, kUpT2))
                              : c.rng.log_uniform(0.25 * kUpT2, kUpT2);
    double u2hi = std::min({Z, kUpT2, 0.05 * cabs(B) * qp / cabs(A)});
    if (c.n == 1) u2hi = std::min(Z, up_cap(c, kUpT2));
    const double u2 = c.rng.log_uniform(0.2 * u2hi, u2hi);
    const double r1lo = std::max(5e-3, 1.2 * std::pow(c.qabs, 4.5) / cabs(B));
    if (!(r1lo < 0.03)) throw RangeEmpty("I22 c band empty");
    const double r1 = c.rng.log_uniform(r1lo, 0.03);  // |c/B|
    pt.vectors.emplace("d", c.vec_with_product_exact(c.n, c.with_phase(u2 * cabs(A))));
    pt.scalars.emplace("c", B * c.with_phase(r1));
    pt.vectors.emplace("z", c.vec_with_product_exact(c.n, c.with_phase(Z)));
}

void draw_I23(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "a", 2.0, 6.0);
    PrecComplex b = c.cpl(1.4, 4.0);
    const PrecComplex A = prodv(pt.v("a"), c.prec);
    const double Xbx = xb(pt, "x"), Xby = xb(pt, "y");
    const double mx = std::min(1.0, Xbx), my = std::min(1.0, Xby);
    const double Z = top_band(c, mx, up_cap(c, kUpT1));
    // the second chain's argument is L/Z; park it inside the y-capped band
    const double u2 = top_band(c, my, up_cap(c, kUpT1)) * Z;
    const double L = std::min(u2, dn_ratio(c) * Z);
    // split L = |C'/b| * |d q^{n-1}/A| on a log scale
    const double split = c.rng.log_uniform(0.2, 5.0);
    const double cpb = std::sqrt(L) * split;
    const double u_d = L / cpb;
    pt.vectors.emplace("c", c.vec_with_product_exact(
                                c.n, c.with_phase(cpb * cabs(b) * std::pow(c.qabs, c.n - 1))));
    pt.scalars.emplace("d", c.with_phase(u_d * cabs(A) / std::pow(c.qabs, c.n - 1)));
    pt.scalars.emplace("b", std::move(b));
    pt.vectors.emplace("z", c.vec_with_product_exact(c.n, c.with_phase(Z)));
}

void draw_I24(DrawCtx& c, ParameterPoint& pt) { draw_I22(c, pt); }

void draw_I25(DrawCtx& c, ParameterPoint& pt) {
    PrecComplex b = c.cpl(0.5, 2.2);
    const double r = dn_ratio(c);  // |C'|
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(r * std::pow(c.qabs, c.n - 1))));
    const double u = top_band(c, xb(pt), up_cap(c, kUpT1));
    pt.scalars.emplace("a", pt.q / c.with_phase(u));
    pt.scalars.emplace("b", std::move(b));
}

void draw_I26(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "b", 0.6, 2.0);
    pt.scalars.emplace("c", c.with_phase(dn_ratio(c)));
    const double u = top_band(c, xb(pt), up_cap(c, kUpT1));
    pt.scalars.emplace("a", pt.q / c.with_phase(u));
}

void draw_I27(DrawCtx& c, ParameterPoint& pt) {
    pt.scalars.emplace("b", c.cpl(0.5, 2.2));
    const double r = dn_ratio(c);
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(r * std::pow(c.qabs, c.n - 1))));
    const double u = top_band(c, 1.0, up_cap(c, kUpT2));
    pt.vectors.emplace("a", c.vec_with_product_exact(c.n, pt.q / c.with_phase(u)));
}

void draw_I28(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "b", 1.0, 2.5);
    pt.scalars.emplace("c", c.with_phase(dn_ratio(c)));
    const double u = top_band(c, 1.0, up_cap(c, kUpT2));
    pt.scalars.emplace("a", pt.q / c.with_phase(u));
}

void draw_I29(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "b", 1.0, 2.5);
    const PrecComplex B = prodv(pt.v("b"), c.prec);
    const double r = dn_ratio(c);  // |C'/B|
    pt.vectors.emplace("c", c.vec_with_product_exact(c.n, c.with_phase(r * cabs(B) * std::pow(c.qabs, c.n - 1))));
    const double u = top_band(c, 1.0, up_cap(c, kUpT2));
    pt.scalars.emplace("a", pt.q / c.with_phase(u));
}

void draw_I30(DrawCtx& c, ParameterPoint& pt) {
    draw_avec(c, pt, "b", 0.8, 1.6);
    pt.scalars.emplace("c", c.with_phase(dn_ratio(c)));
    const double u = top_band(c, 1.0, up_cap(c, kUpT2));
    pt.vectors.emplace("a", c.vec_with_product_exact(c.n, pt.q / c.with_phase(u)));
}

void draw_entry(const std::string& id, DrawCtx& c, ParameterPoint& pt) {
    if (id == "I01") return draw_I01(c, pt);
    if (id == "I02") return draw_I02(c, pt);
    if (id == "I03") return draw_I03(c, pt);
    if (id == "I04") return draw_I04(c, pt);
    if (id == "I05") return draw_I05(c, pt);
    if (id == "I06") return draw_I06(c, pt);
    if (id == "I07") return draw_I07(c, pt);
    if (id == "I08") return draw_I08(c, pt);
    if (id == "I09") return draw_I09(c, pt);
    if (id == "I10") return draw_I10(c, pt);
    if (id == "I11") return draw_I11(c, pt);
    if (id == "I12") return draw_I12(c, pt);
    if (id == "I13") return draw_I13(c, pt);
    if (id == "I14") return draw_I14(c, pt);
    if (id == "I15") return draw_I15(c, pt);
    if (id == "I16") return draw_I16(c, pt);
    if (id == "I17") return draw_I17(c, pt);
    if (id == "I18") return draw_I18(c, pt);
    if (id == "I19") return draw_I19(c, pt);
    if (id == "I20") return draw_I20(c, pt);
    if (id == "I21") return draw_I21(c, pt);
    if (id == "I22") return draw_I22(c, pt);
    if (id == "I23") return draw_I23(c, pt);
    if (id == "I24") return draw_I24(c, pt);
    if (id == "I25") return draw_I25(c, pt);
    if (id == "I26") return draw_I26(c, pt);
    if (id == "I27") return draw_I27(c, pt);
    if (id == "I28") return draw_I28(c, pt);
    if (id == "I29") return draw_I29(c, pt);
    if (id == "I30") return draw_I30(c, pt);
    throw UsageError("no sampler for identity " + id);
}

bool needs_y(const IdentitySpec& meta) {
    return std::find(meta.vector_roles.begin(), meta.vector_roles.end(), "y") !=
           meta.vector_roles.end();
}

bool needs_x(const IdentitySpec& meta) {
    return std::find(meta.vector_roles.begin(), meta.vector_roles.end(), "x") !=
           meta.vector_roles.end();
}

// Entry-specific decay guards beyond the theorem constraints (slice-
// direction rates that the printed clauses do not bound).
bool decay_guards_ok(const std::string& id, const ParameterPoint& pt, double rho) {
    const mpfr_prec_t p = pt.q.prec();
    auto ratio = [&](const PrecComplex& v) { return cabs(v); };
    if (id == "I21" || id == "I27") {
        const PrecComplex Cp = prodv(pt.v("c"), p) * pt.q.pow_int(1 - pt.n);
        return ratio(Cp / prodv(pt.v("a"), p)) <= rho;
    }
    if (id == "I22" || id == "I24") {
        const PrecComplex Dp = prodv(pt.v("d"), p) * pt.q.pow_int(1 - pt.n);
        return ratio(Dp / prodv(pt.v("b"), p)) <= rho;
    }
    if (id == "I29") {
        const PrecComplex Cp = prodv(pt.v("c"), p) * pt.q.pow_int(1 - pt.n);
        return ratio(Cp / prodv(pt.v("b"), p)) <= rho;
    }
    if (id == "I30") {
        return ratio(pt.q * prodv(pt.v("b"), p) / prodv(pt.v("a"), p)) <= rho;
    }
    return true;
}

bool constraint_ratios_ok(const std::string& id, const ParameterPoint& pt, double rho,
                          int n) {
    // the draw plans control decay; this is a loose backstop against
    // wiring mistakes
    const double cap = n == 1 ? std::max(rho, 0.9) : 0.3;
    for (const auto& chk : domain_constraints(id, pt)) {
        if (chk.hi < kInf && chk.value > cap * chk.hi) return false;
        if (chk.lo > 0.0 && chk.lo > cap * chk.value) return false;
    }
    return decay_guards_ok(id, pt, n == 1 ? 0.9 : 0.3);
}

}  // namespace

void SampleConfig::validate() const {
    if (!(q_min > 0.0 && q_min < q_max && q_max < 1.0)) {
        throw UsageError("config: q_band must satisfy 0 < q_min < q_max < 1");
    }
    if (!(margin > 0.0 && margin < 1.0)) throw UsageError("config: margin in (0,1)");
    if (precision_bits < 64) throw UsageError("config: precision_bits >= 64");
    if (probe_bits < precision_bits + 64) {
        throw UsageError("config: probe_bits >= precision_bits + 64");
    }
    if (samples_per_identity < 0) throw UsageError("config: samples >= 0");
    if (schedule.initial_radius < 1 || schedule.initial_radius > schedule.max_radius) {
        throw UsageError("config: bad truncation schedule");
    }
    if (!(schedule.tol > 0.0)) throw UsageError("config: tol > 0");
}

const char* status_name(Status s) {
    switch (s) {
        case Status::PASS: return "PASS";
        case Status::FAIL: return "FAIL";
        case Status::SKIP_DOMAIN: return "SKIP_DOMAIN";
        case Status::NO_CONVERGENCE: return "NO_CONVERGENCE";
        case Status::POLE: return "POLE";
    }
    return "?";
}

Status status_from_name(const std::string& name) {
    if (name == "PASS") return Status::PASS;
    if (name == "FAIL") return Status::FAIL;
    if (name == "SKIP_DOMAIN") return Status::SKIP_DOMAIN;
    if (name == "NO_CONVERGENCE") return Status::NO_CONVERGENCE;
    if (name == "POLE") return Status::POLE;
    throw UsageError("unknown status: " + name);
}

ParameterPoint sample_point(const std::string& id, int n, RngStream& rng,
                            const SampleConfig& cfg) {
    const IdentitySpec& meta = catalog_lookup(id);
    if (n < meta.arity_min || n > meta.arity_max) {
        throw UsageError(id + " does not support n = " + std::to_string(n));
    }
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(cfg.precision_bits);
    const double eps =
        cfg.pole_threshold > 0 ? cfg.pole_threshold : pole_threshold_for(prec);
    std::string last_reason = "no feasible draw";
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        try {
            DrawCtx c{rng, cfg, meta, n, prec,
                      rho_cap_for(meta, n, cfg.schedule)};
            // q first: real positive by default, phase only with complex_q
            const double qm = c.band(cfg.q_min, std::min(cfg.q_max, meta.q_ceiling));
            c.qabs = qm;
            if (cfg.complex_q) {
                c.q = c.with_phase(qm);
            } else {
                c.q = PrecComplex::from_double(qm, 0.0, prec);
            }
            ParameterPoint pt;
            pt.n = n;
            pt.q = c.q;
            if (needs_x(meta)) pt.vectors.emplace("x", c.annulus(n, 0.7, 1.4, 0.12));
            if (needs_y(meta)) pt.vectors.emplace("y", c.annulus(n, 0.7, 1.4, 0.12));
            draw_entry(id, c, pt);
            DomainReport rep = domain_check(id, pt, cfg.margin, eps);
            if (!rep.ok) {
                last_reason = rep.violations.front();
                continue;
            }
            if (!constraint_ratios_ok(id, pt, c.rho, n)) {
                last_reason = "decay ratio above cap";
                continue;
            }
            return pt;
        } catch (const RangeEmpty& ex) {
            last_reason = ex.what();
            continue;
        }
    }
    throw InfeasibleAfterRetries(id + ": no feasible point after " +
                                 std::to_string(kMaxRetries) + " tries (" + last_reason +
                                 ")");
}

std::pair<double, double> argument_interval(const std::string& id,
                                            const ParameterPoint& pt) {
    const mpfr_prec_t p = pt.q.prec();
    if (id == "I01") return {0.0, 1.0};
    if (id == "I02") return {cabs(pt.s("b") / pt.s("a")), 1.0};
    if (id == "I03") return {0.0, xb(pt)};
    if (id == "I04") {
        const PrecComplex Bp = prodv(pt.v("b"), p) * pt.q.pow_int(1 - pt.n);
        return {cabs(Bp / pt.s("a")), xb(pt)};
    }
    if (id == "I10") {
        const PrecComplex Bp = prodv(pt.v("b"), p) * pt.q.pow_int(1 - pt.n);
        return {cabs(Bp / prodv(pt.v("a"), p)), 1.0};
    }
    throw UsageError("argument_interval: unsupported identity " + id);
}

namespace {

VerificationRecord verify_one(const std::string& id, int n, int sample_index,
                              const SampleConfig& cfg, double rhs_defect) {
    VerificationRecord rec;
    rec.id = id;
    rec.n = n;
    rec.sample_index = sample_index;
    rec.precision_bits = cfg.precision_bits;

    RngStream rng = RngStream::derive(cfg.seed, id, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(sample_index));
    try {
        rec.point = sample_point(id, n, rng, cfg);
    } catch (const InfeasibleAfterRetries& ex) {
        rec.status = Status::SKIP_DOMAIN;
        rec.detail = ex.what();
        return rec;
    } catch (const UsageError& ex) {
        rec.status = Status::SKIP_DOMAIN;
        rec.detail = ex.what();
        return rec;
    }
    VerificationRecord checked = verify_point(id, rec.point, cfg, rhs_defect);
    checked.sample_index = sample_index;
    return checked;
}

}  // namespace

VerificationRecord verify_point(const std::string& id, const ParameterPoint& pt,
                                const SampleConfig& cfg, double rhs_defect) {
    VerificationRecord rec;
    rec.id = id;
    rec.n = pt.n;
    rec.point = pt;
    rec.precision_bits = cfg.precision_bits;

    EvalOptions base;
    base.prec = static_cast<mpfr_prec_t>(cfg.precision_bits);
    base.schedule = cfg.schedule;
    base.threads = 1;
    base.pole_eps = cfg.pole_threshold;
    base.rhs_scale_eps = rhs_defect;
    base.prune_rel_lg = -static_cast<double>(cfg.precision_bits - 16) - 40.0;

    try {
        EvalResult l = eval_side(id, Side::lhs, rec.point, base);
        EvalResult r = eval_side(id, Side::rhs, rec.point, base);
        rec.lhs = l.value;
        rec.rhs = r.value;
        rec.radius_used = std::max(l.radius_used, r.radius_used);
        rec.err_estimate = l.err_estimate + r.err_estimate;

        EvalOptions probe = base;
        probe.prec = static_cast<mpfr_prec_t>(cfg.probe_bits);
        probe.radius_override = l.radius_used;
        EvalResult lp = eval_side(id, Side::lhs, rec.point, probe);
        probe.radius_override = r.radius_used;
        EvalResult rp = eval_side(id, Side::rhs, rec.point, probe);

        rec.rel_err = PrecComplex::rel_diff(lp.value, rp.value);
        {
            PrecComplex diff = lp.value - rp.value;
            rec.abs_err = diff.abs_double();
        }
        const double probe_noise =
            PrecComplex::rel_diff(l.value, lp.value) + PrecComplex::rel_diff(r.value, rp.value);
        const double consistency_bound =
            std::exp2(-static_cast<double>(cfg.precision_bits - 16));
        const bool consistent = PrecComplex::rel_diff(l.value, lp.value) <= consistency_bound &&
                                PrecComplex::rel_diff(r.value, rp.value) <= consistency_bound;
        const double tol = cfg.schedule.tol;
        if (rec.rel_err <= tol && consistent) {
            rec.status = Status::PASS;
        } else if (rec.rel_err > tol &&
                   rec.rel_err > 10.0 * (rec.err_estimate + probe_noise)) {
            rec.status = Status::FAIL;
        } else {
            rec.status = Status::NO_CONVERGENCE;
            rec.detail = consistent ? "residual within truncation estimate"
                                    : "probe precision inconsistency";
        }
    } catch (const NoConvergence& ex) {
        rec.status = Status::NO_CONVERGENCE;
        rec.detail = ex.what();
    } catch (const PoleError& ex) {
        rec.status = Status::POLE;
        rec.detail = ex.what();
    } catch (const DegenerateXError& ex) {
        rec.status = Status::POLE;
        rec.detail = ex.what();
    } catch (const DomainViolation& ex) {
        rec.status = Status::SKIP_DOMAIN;
        rec.detail = ex.what();
    }
    return rec;
}

std::vector<VerificationRecord> verify_identity(const std::string& id, int n,
                                                const SampleConfig& cfg,
                                                double rhs_defect) {
    cfg.validate();
    const IdentitySpec& meta = catalog_lookup(id);
    std::vector<VerificationRecord> out;
    if (n < meta.arity_min || n > meta.arity_max) return out;
    out.reserve(static_cast<size_t>(cfg.samples_per_identity));
    for (int s = 0; s < cfg.samples_per_identity; ++s) {
        out.push_back(verify_one(id, n, s, cfg, rhs_defect));
    }
    return out;
}

std::vector<ExactRecord> verify_exact(const std::string& id, int n, int samples,
                                      std::uint64_t seed, std::optional<long> fixed_N) {
    if (id != "I05" && id != "I06") {
        throw NotExactCapable("identity " + id + " has no exact mode");
    }
    std::vector<ExactRecord> out;
    for (int s = 0; s < samples; ++s) {
        RngStream rng = RngStream::derive(seed, "exact:" + id,
                                          static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(s));
        ExactRecord rec;
        rec.id = id;
        rec.n = n;
        rec.sample_index = s;
        auto rat = [&](long lo_num, long hi_num, long max_den) {
            for (;;) {
                long num = rng.next_long(lo_num, hi_num);
                long den = rng.next_long(1, max_den);
                if (num != 0) {
                    ExactScalar r(num, den);
                    r.canonicalize();
                    return r;
                }
            }
        };
        for (int attempt = 0; attempt < 100; ++attempt) {
            try {
                ExactPoint pt;
                pt.n = n;
                // q = s/t with 0 < s < t
                for (;;) {
                    long den = rng.next_long(2, 64);
                    long num = rng.next_long(1, den - 1);
                    pt.q = ExactScalar(num, den);
                    pt.q.canonicalize();
                    if (pt.q > 0 && pt.q < 1) break;
                }
                for (int i = 0; i < n; ++i) {
                    for (;;) {
                        ExactScalar x = rat(-64, 64, 64);
                        bool distinct = true;
                        for (const auto& xj : pt.x) {
                            if (xj == x) distinct = false;
                        }
                        if (distinct) {
                            pt.x.push_back(x);
                            break;
                        }
                    }
                }
                if (id == "I05") {
                    for (int i = 0; i < n; ++i) pt.m.push_back(rng.next_long(0, 4));
                } else {
                    pt.N = fixed_N ? *fixed_N : rng.next_long(0, 4);
                    for (int i = 0; i < n; ++i) pt.a.push_back(rat(-64, 64, 64));
                    for (long m = 0; m <= pt.N; ++m) pt.f.push_back(rat(-64, 64, 64));
                }
                rec.N = pt.N;
                rec.pass = verify_finite_identity_exact(id, pt);
                if (!rec.pass) rec.detail = "exact sides differ";
                break;
            } catch (const PoleError&) {
                continue;  // resample a degenerate rational draw
            } catch (const DegenerateXError&) {
                continue;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// ---- reduction ladder -------------------------------------------------------

namespace {

struct LadderCtx {
    const SampleConfig& cfg;
    EvalOptions opts;

    explicit LadderCtx(const SampleConfig& c) : cfg(c) {
        opts.prec = static_cast<mpfr_prec_t>(c.precision_bits);
        opts.schedule = c.schedule;
        opts.threads = 1;
        opts.pole_eps = c.pole_threshold;
    }
};

double side_diff(const std::string& id_a, const ParameterPoint& pa, const std::string& id_b,
                 const ParameterPoint& pb, Side side, const EvalOptions& oa,
                 const EvalOptions& ob) {
    EvalResult va = eval_side(id_a, side, pa, oa);
    EvalResult vb = eval_side(id_b, side, pb, ob);
    return PrecComplex::rel_diff(va.value, vb.value);
}

// draws fresh a-vector with prod(a) equal to target
std::vector<PrecComplex> avec_with_product(RngStream& rng, int n, const PrecComplex& target,
                                           mpfr_prec_t prec) {
    std::vector<PrecComplex> a;
    if (n == 1) {
        a.push_back(target);
        return a;
    }
    const double comp = std::pow(target.abs_double(), 1.0 / n);
    PrecComplex rest(prec);
    rest.set_one();
    for (int i = 0; i + 1 < n; ++i) {
        const double mod = comp * rng.uniform(0.85, 1.18);
        const double th = rng.phase();
        a.push_back(PrecComplex::from_double(mod * std::cos(th), mod * std::sin(th), prec));
        rest *= a.back();
    }
    a.push_back(target / rest);
    return a;
}

std::vector<PrecComplex> fresh_annulus(RngStream& rng, int n, mpfr_prec_t prec) {
    for (;;) {
        std::vector<PrecComplex> xs;
        for (int i = 0; i < n; ++i) {
            const double mod = rng.log_uniform(0.85, 1.2);
            const double th = rng.phase();
            xs.push_back(PrecComplex::from_double(mod * std::cos(th), mod * std::sin(th), prec));
        }
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)]).abs_double() < 0.12) ok = false;
        if (ok) return xs;
    }
}

PrecComplex complex_root_n(const PrecComplex& q, int n, mpfr_prec_t prec) {
    if (q.is_real() && mpfr_sgn(q.re()) > 0) {
        PrecComplex r(prec);
        mpfr_rootn_ui(r.re_mut(), q.re(), static_cast<unsigned long>(n), MPFR_RNDN);
        return r;
    }
    // principal branch via polar form
    mpfr_t mod, arg;
    mpfr_init2(mod, prec);
    mpfr_init2(arg, prec);
    mpfr_hypot(mod, q.re(), q.im(), MPFR_RNDN);
    mpfr_atan2(arg, q.im(), q.re(), MPFR_RNDN);
    mpfr_rootn_ui(mod, mod, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_div_ui(arg, arg, static_cast<unsigned long>(n), MPFR_RNDN);
    PrecComplex r(prec);
    mpfr_t s, c;
    mpfr_init2(s, prec);
    mpfr_init2(c, prec);
    mpfr_sin_cos(s, c, arg, MPFR_RNDN);
    mpfr_mul(r.re_mut(), mod, c, MPFR_RNDN);
    mpfr_mul(r.im_mut(), mod, s, MPFR_RNDN);
    mpfr_clear(mod);
    mpfr_clear(arg);
    mpfr_clear(s);
    mpfr_clear(c);
    return r;
}

using LadderFn = std::function<double(int point_index, const LadderCtx&)>;

LadderRecord run_ladder_check(const std::string& name, int n, int points,
                              const LadderCtx& ctx, const LadderFn& fn) {
    LadderRecord rec;
    rec.name = name;
    rec.n = n;
    rec.points = points;
    rec.pass = true;
    for (int i = 0; i < points; ++i) {
        try {
            const double err = fn(i, ctx);
            rec.worst_rel_err = std::max(rec.worst_rel_err, err);
            if (err > ctx.cfg.schedule.tol) {
                rec.pass = false;
                if (rec.detail.empty()) {
                    rec.detail = "point " + std::to_string(i) + " rel_err " +
                                 std::to_string(err);
                }
            }
        } catch (const Error& ex) {
            rec.pass = false;
            rec.worst_rel_err = kInf;
            if (rec.detail.empty()) rec.detail = ex.what();
        }
    }
    return rec;
}

ParameterPoint ladder_sample(const std::string& id, int n, const std::string& name, int i,
                             const SampleConfig& cfg) {
    RngStream rng = RngStream::derive(cfg.seed, "ladder:" + name,
                                      static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(i));
    return sample_point(id, n, rng, cfg);
}

RngStream ladder_aux_rng(const std::string& name, int n, int i, const SampleConfig& cfg) {
    return RngStream::derive(cfg.seed, "ladder-aux:" + name, static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(i));
}

}  // namespace

std::vector<LadderRecord> verify_ladder(int n, int points, const SampleConfig& cfg) {
    LadderCtx ctx(cfg);
    std::vector<LadderRecord> out;
    const mpfr_prec_t prec = ctx.opts.prec;

    auto counterpart_check = [&](const std::string& id) {
        return [id](int i, const LadderCtx& c) {
            ParameterPoint pt = ladder_sample(id, 1, id + "@n1", i, c.cfg);
            auto cp = classical_counterpart(id, pt);
            if (!cp) throw Error("no classical counterpart for " + id);
            const double dl = side_diff(id, pt, cp->first, cp->second, Side::lhs, c.opts, c.opts);
            const double dr = side_diff(id, pt, cp->first, cp->second, Side::rhs, c.opts, c.opts);
            return std::max(dl, dr);
        };
    };

    if (n == 1) {
        out.push_back(run_ladder_check("I03@n1==I01", 1, points, ctx, counterpart_check("I03")));
        out.push_back(run_ladder_check("I04@n1==I02", 1, points, ctx, counterpart_check("I04")));
        out.push_back(run_ladder_check("I10@n1==I02", 1, points, ctx, counterpart_check("I10")));
        return out;
    }

    // I04 with b_i = q reduces to I03
    out.push_back(run_ladder_check("I04[b=q]==I03", n, points, ctx, [&](int i, const LadderCtx& c) {
        ParameterPoint p03 = ladder_sample("I03", n, "I04bq", i, c.cfg);
        ParameterPoint p04 = p03;
        std::vector<PrecComplex> b(static_cast<size_t>(n), p03.q);
        p04.vectors.emplace("b", std::move(b));
        const double dl = side_diff("I04", p04, "I03", p03, Side::lhs, c.opts, c.opts);
        const double dr = side_diff("I04", p04, "I03", p03, Side::rhs, c.opts, c.opts);
        return std::max(dl, dr);
    }));

    // I12 is the m = 0 slice of I11
    out.push_back(run_ladder_check("I12==I11@m0", n, points, ctx, [&](int i, const LadderCtx& c) {
        ParameterPoint p12 = ladder_sample("I12", n, "I12m0", i, c.cfg);
        ParameterPoint p11 = p12;
        p11.integers["m"] = 0;
        const double dl = side_diff("I12", p12, "I11", p11, Side::lhs, c.opts, c.opts);
        const double dr = side_diff("I12", p12, "I11", p11, Side::rhs, c.opts, c.opts);
        return std::max(dl, dr);
    }));

    // I14 is I13 at b_i = a_i q
    out.push_back(run_ladder_check("I14==I13[b=aq]", n, points, ctx, [&](int i, const LadderCtx& c) {
        ParameterPoint p14 = ladder_sample("I14", n, "I14b", i, c.cfg);
        ParameterPoint p13 = p14;
        std::vector<PrecComplex> b;
        for (const auto& ai : p14.v("a")) b.push_back(ai * p14.q);
        p13.vectors.emplace("b", std::move(b));
        const double dl = side_diff("I14", p14, "I13", p13, Side::lhs, c.opts, c.opts);
        const double dr = side_diff("I14", p14, "I13", p13, Side::rhs, c.opts, c.opts);
        return std::max(dl, dr);
    }));

    // I15 is I11 at b_i = a_i q
    out.push_back(run_ladder_check("I15==I11[b=aq]", n, points, ctx, [&](int i, const LadderCtx& c) {
        ParameterPoint p15 = ladder_sample("I15", n, "I15b", i, c.cfg);
        ParameterPoint p11 = p15;
        std::vector<PrecComplex> b;
        for (const auto& ai : p15.v("a")) b.push_back(ai * p15.q);
        p11.vectors.emplace("b", std::move(b));
        const double dl = side_diff("I15", p15, "I11", p11, Side::lhs, c.opts, c.opts);
        const double dr = side_diff("I15", p15, "I11", p11, Side::rhs, c.opts, c.opts);
        return std::max(dl, dr);
    }));

    // Each 2psi2 summation is the stated specialization of its
    // transformation: the specialized transformation left side must hit the
    // summation's closed form.
    auto specialization_check = [&](const std::string& name, const std::string& sum_id,
                          auto map_point, bool extended_radius = false) {
        out.push_back(run_ladder_check(name, n, points, ctx, [=](int i, const LadderCtx& c) {
            ParameterPoint ps = ladder_sample(sum_id, n, name, i, c.cfg);
            RngStream aux = ladder_aux_rng(name, n, i, c.cfg);
            auto [trans_id, ptrans] = map_point(ps, aux);
            EvalOptions topts = c.opts;
            if (extended_radius) topts.schedule.max_radius = std::max(topts.schedule.max_radius, 512L);
            EvalResult tl = eval_side(trans_id, Side::lhs, ptrans, topts);
            EvalResult sl = eval_side(sum_id, Side::lhs, ps, c.opts);
            EvalResult sr = eval_side(sum_id, Side::rhs, ps, c.opts);
            const double d1 = PrecComplex::rel_diff(tl.value, sl.value);
            const double d2 = PrecComplex::rel_diff(tl.value, sr.value);
            return std::max(d1, d2);
        }));
    };

    // I25 <- I19 with z = q/a, d = bq
    specialization_check("I25 specializes I19", "I25", [prec, n](const ParameterPoint& ps, RngStream& aux) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", fresh_annulus(aux, ps.n, prec));
        pt.vectors.emplace("c", ps.v("c"));
        pt.scalars.emplace("a", ps.s("a"));
        pt.scalars.emplace("b", ps.s("b"));
        pt.scalars.emplace("d", ps.s("b") * ps.q);
        pt.scalars.emplace("z", ps.q / ps.s("a"));
        return std::make_pair(std::string("I19"), std::move(pt));
    });

    // I26 <- I23 with c_i = b_i q, z_i = q/a_i, b -> B, A -> a q^{n-1}, d -> c
    specialization_check("I26 specializes I23", "I26", [prec, n](const ParameterPoint& ps, RngStream& aux) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", fresh_annulus(aux, ps.n, prec));
        std::vector<PrecComplex> c23;
        for (const auto& bi : ps.v("b")) c23.push_back(bi * ps.q);
        pt.vectors.emplace("c", std::move(c23));
        PrecComplex Atarget = ps.s("a") * ps.q.pow_int(ps.n - 1);
        auto a23 = avec_with_product(aux, ps.n, Atarget, prec);
        std::vector<PrecComplex> z23;
        for (const auto& ai : a23) z23.push_back(ps.q / ai);
        pt.vectors.emplace("a", std::move(a23));
        pt.vectors.emplace("z", std::move(z23));
        pt.scalars.emplace("b", prodv(ps.v("b"), prec));
        pt.scalars.emplace("d", ps.s("c"));
        return std::make_pair(std::string("I23"), std::move(pt));
    });

    // I27 <- I21 with z = q/A, d = bq
    specialization_check("I27 specializes I21", "I27", [](const ParameterPoint& ps, RngStream& aux) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        const mpfr_prec_t prec2 = ps.q.prec();
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", fresh_annulus(aux, ps.n, prec2));
        pt.vectors.emplace("a", ps.v("a"));
        pt.vectors.emplace("c", ps.v("c"));
        pt.scalars.emplace("b", ps.s("b"));
        pt.scalars.emplace("d", ps.s("b") * ps.q);
        pt.scalars.emplace("z", ps.q / prodv(ps.v("a"), prec2));
        return std::make_pair(std::string("I21"), std::move(pt));
    });

    // I28 <- I22 with z_i = q/a_i, d_i = b_i q, A -> a q^{n-1}
    specialization_check("I28 specializes I22", "I28", [prec](const ParameterPoint& ps, RngStream& aux) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", fresh_annulus(aux, ps.n, prec));
        pt.vectors.emplace("b", ps.v("b"));
        std::vector<PrecComplex> d22;
        for (const auto& bi : ps.v("b")) d22.push_back(bi * ps.q);
        pt.vectors.emplace("d", std::move(d22));
        PrecComplex Atarget = ps.s("a") * ps.q.pow_int(ps.n - 1);
        auto a22 = avec_with_product(aux, ps.n, Atarget, prec);
        std::vector<PrecComplex> z22;
        for (const auto& ai : a22) z22.push_back(ps.q / ai);
        pt.vectors.emplace("a", std::move(a22));
        pt.vectors.emplace("z", std::move(z22));
        pt.scalars.emplace("c", ps.s("c"));
        return std::make_pair(std::string("I22"), std::move(pt));
    }, /*extended_radius=*/true);

    // I29 <- I24 with z_i = q/a_i, c = Bq, then d_i -> c_i, A -> a q^{n-1}
    specialization_check("I29 specializes I24", "I29", [prec](const ParameterPoint& ps, RngStream& aux) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", fresh_annulus(aux, ps.n, prec));
        pt.vectors.emplace("b", ps.v("b"));
        pt.vectors.emplace("d", ps.v("c"));
        PrecComplex Atarget = ps.s("a") * ps.q.pow_int(ps.n - 1);
        auto a24 = avec_with_product(aux, ps.n, Atarget, prec);
        std::vector<PrecComplex> z24;
        for (const auto& ai : a24) z24.push_back(ps.q / ai);
        pt.vectors.emplace("a", std::move(a24));
        pt.vectors.emplace("z", std::move(z24));
        pt.scalars.emplace("c", prodv(ps.v("b"), prec) * ps.q);
        return std::make_pair(std::string("I24"), std::move(pt));
    });

    // I30 <- I24 with z_i = q^{1/n}/b_i, d_i = a_i q^{1/n}, then
    // a_i -> b_i q^{1-1/n}, b_i -> a_i
    specialization_check("I30 specializes I24", "I30", [prec](const ParameterPoint& ps, RngStream&) {
        ParameterPoint pt;
        pt.n = ps.n;
        pt.q = ps.q;
        const PrecComplex w = complex_root_n(ps.q, ps.n, prec);
        pt.vectors.emplace("x", ps.v("x"));
        pt.vectors.emplace("y", ps.v("x"));  // y unused on the left side
        std::vector<PrecComplex> a24, b24, d24, z24;
        for (int j = 0; j < ps.n; ++j) {
            const PrecComplex& a30 = ps.v("a")[static_cast<size_t>(j)];
            const PrecComplex& b30 = ps.v("b")[static_cast<size_t>(j)];
            d24.push_back(b30 * ps.q);
            a24.push_back(d24.back() / w);  // a_i q^{1/n} = d_i
            b24.push_back(a30);
            z24.push_back(w / a30);
        }
        pt.vectors.emplace("a", std::move(a24));
        pt.vectors.emplace("b", std::move(b24));
        pt.vectors.emplace("d", std::move(d24));
        pt.vectors.emplace("z", std::move(z24));
        pt.scalars.emplace("c", ps.s("c"));
        return std::make_pair(std::string("I24"), std::move(pt));
    });

    return out;
}

bool SuiteReport::any_fail() const {
    for (const auto& r : records)
        if (r.status == Status::FAIL) return true;
    for (const auto& r : exact_records)
        if (!r.pass) return true;
    for (const auto& r : ladder_records)
        if (!r.pass) return true;
    return false;
}

bool SuiteReport::any_no_convergence() const {
    for (const auto& r : records)
        if (r.status == Status::NO_CONVERGENCE) return true;
    return false;
}

void SuiteReport::aggregate() {
    per_identity.clear();
    totals.clear();
    for (const auto& r : records) {
        auto& agg = per_identity[r.id];
        agg.status_counts[status_name(r.status)]++;
        if (r.status == Status::PASS || r.status == Status::FAIL) {
            agg.worst_rel_err = std::max(agg.worst_rel_err, r.rel_err);
        }
        totals[status_name(r.status)]++;
    }
}

SuiteReport verify_suite(const SampleConfig& cfg) {
    cfg.validate();
    SuiteReport rep;
    rep.config = cfg;

    struct Task {
        std::string id;
        int n;
        int sample;
    };
    std::vector<Task> tasks;
    for (const auto& meta : catalog_list()) {
        for (int n : cfg.arities) {
            if (n < meta.arity_min || n > meta.arity_max) continue;
            for (int s = 0; s < cfg.samples_per_identity; ++s) {
                tasks.push_back({meta.id, n, s});
            }
        }
    }
    std::vector<VerificationRecord> recs(tasks.size());
    const int w = std::max(1, cfg.threads);
    if (w == 1) {
        for (size_t t = 0; t < tasks.size(); ++t) {
            recs[t] = verify_one(tasks[t].id, tasks[t].n, tasks[t].sample, cfg, 0.0);
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const size_t t = next.fetch_add(1);
                if (t >= tasks.size()) return;
                recs[t] = verify_one(tasks[t].id, tasks[t].n, tasks[t].sample, cfg, 0.0);
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < w; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    rep.records = std::move(recs);

    // exact-mode finite checks
    for (const std::string id : {"I05", "I06"}) {
        for (int n : cfg.arities) {
            if (n < 1 || n > 3) continue;
            auto ex = verify_exact(id, n, cfg.samples_per_identity, cfg.seed);
            rep.exact_records.insert(rep.exact_records.end(), ex.begin(), ex.end());
        }
    }

    // reduction-ladder consistency checks
    const int ladder_points = std::max(1, std::min(10, cfg.samples_per_identity));
    for (int n : cfg.arities) {
        if (n < 1 || n > 3) continue;
        auto lr = verify_ladder(n, ladder_points, cfg);
        rep.ladder_records.insert(rep.ladder_records.end(), lr.begin(), lr.end());
    }

    rep.aggregate();
    return rep;
}

std::pair<PrecComplex, PrecComplex> replay(const VerificationRecord& rec,
                                           const SampleConfig& cfg) {
    EvalOptions opts;
    opts.prec = static_cast<mpfr_prec_t>(rec.precision_bits);
    opts.schedule = cfg.schedule;
    opts.threads = 1;
    opts.pole_eps = cfg.pole_threshold;
    EvalResult l = eval_side(rec.id, Side::lhs, rec.point, opts);
    EvalResult r = eval_side(rec.id, Side::rhs, rec.point, opts);
    return {std::move(l.value), std::move(r.value)};
}

}  // namespace qlv
