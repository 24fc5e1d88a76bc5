// Catalog metadata, side evaluators, domain checks, lemma pairs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qlv/catalog.hpp"
#include "qlv/rng.hpp"
#include "qlv/verify.hpp"

using namespace qlv;

namespace {

PrecComplex cpl(double re, double im = 0.0, mpfr_prec_t prec = 128) {
    return PrecComplex::from_double(re, im, prec);
}

double rel(const PrecComplex& a, const PrecComplex& b) {
    return PrecComplex::rel_diff(a, b);
}

}  // namespace

TEST_CASE("catalog has exactly the 30 stable entries") {
    const auto& list = catalog_list();
    CHECK(list.size() == 30);
    for (size_t i = 0; i < list.size(); ++i) {
        char want[8];
        std::snprintf(want, sizeof(want), "I%02zu", i + 1);
        CHECK(list[i].id == want);
    }
    CHECK_THROWS_AS(catalog_lookup("I99"), UsageError);
}

TEST_CASE("I04 role signature") {
    const auto& meta = catalog_lookup("I04");
    CHECK(meta.scalar_roles == std::vector<std::string>{"a", "z"});
    CHECK(meta.vector_roles == std::vector<std::string>{"b", "x"});
    CHECK(meta.arity_min == 1);
    CHECK(meta.mode == VerifyMode::numeric);
}

TEST_CASE("I12 domain at n = 2 carries |b1 b2 q^{-1} / (a1 a2)| < 1") {
    ParameterPoint pt;
    pt.n = 2;
    pt.q = cpl(0.5);
    pt.vectors.emplace("x", std::vector<PrecComplex>{cpl(1.0), cpl(1.5)});
    pt.vectors.emplace("a", std::vector<PrecComplex>{cpl(2.0), cpl(3.0)});
    pt.vectors.emplace("b", std::vector<PrecComplex>{cpl(0.3), cpl(0.4)});
    auto cons = domain_constraints("I12", pt);
    REQUIRE(cons.size() == 1);
    // 0.3*0.4*2 / 6 = 0.04
    CHECK(cons[0].value == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(cons[0].hi == doctest::Approx(1.0));
}

TEST_CASE("domain_check reports boundary violations and margins") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(4.0));
    pt.scalars.emplace("b", cpl(0.5));
    pt.scalars.emplace("z", cpl(1.0));  // |z| = 1 excluded
    DomainReport rep = domain_check("I02", pt, 0.05);
    CHECK_FALSE(rep.ok);
    REQUIRE(!rep.violations.empty());

    pt.scalars.at("z") = cpl(0.5);
    DomainReport ok = domain_check("I02", pt, 0.05);
    CHECK(ok.ok);

    // margin squeezes out points close to a bound
    pt.scalars.at("z") = cpl(0.145);  // |b/a| = 0.125; 0.125 * 1.2 = 0.15 > 0.145
    DomainReport margin = domain_check("I02", pt, 0.2);
    CHECK_FALSE(margin.ok);
}

TEST_CASE("I04 upper bound arithmetic at x = (1,2), q = 1/2") {
    // min_j |q^{(n-1)/2} x_j^{-n} x_1 x_2| = q^{1/2} * min(2, 1/2) = 2^{-3/2}
    ParameterPoint pt;
    pt.n = 2;
    pt.q = cpl(0.5);
    pt.vectors.emplace("x", std::vector<PrecComplex>{cpl(1.0), cpl(2.0)});
    pt.vectors.emplace("b", std::vector<PrecComplex>{cpl(0.05), cpl(0.05)});
    pt.scalars.emplace("a", cpl(3.0));
    pt.scalars.emplace("z", cpl(0.1));
    auto cons = domain_constraints("I04", pt);
    REQUIRE(cons.size() == 1);
    CHECK(cons[0].hi == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("eval_side: q-binomial point with frozen value") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(0.3));
    pt.scalars.emplace("z", cpl(0.2));
    EvalOptions opts;
    EvalResult lhs = eval_side("I01", Side::lhs, pt, opts);
    EvalResult rhs = eval_side("I01", Side::rhs, pt, opts);
    CHECK(rel(lhs.value, rhs.value) < 1e-12);
    PrecComplex frozen = PrecComplex::from_decimal(
        "0.136033933010516433602413464888254717818255e1", "0", 192);
    CHECK(rel(lhs.value, frozen) < 1e-25);
    CHECK(rel(rhs.value, frozen) < 1e-30);
}

TEST_CASE("missing roles raise") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(0.3));
    EvalOptions opts;
    CHECK_THROWS_AS(eval_side("I01", Side::lhs, pt, opts), Error);
}

TEST_CASE("I04 at n = 1 equals the Ramanujan summation pointwise") {
    ParameterPoint p4;
    p4.n = 1;
    p4.q = cpl(0.5);
    p4.scalars.emplace("a", cpl(3.0));
    p4.scalars.emplace("z", cpl(0.5));
    p4.vectors.emplace("b", std::vector<PrecComplex>{cpl(0.4)});
    p4.vectors.emplace("x", std::vector<PrecComplex>{cpl(1.1)});
    auto cp = classical_counterpart("I04", p4);
    REQUIRE(cp.has_value());
    CHECK(cp->first == "I02");
    EvalOptions opts;
    for (Side side : {Side::lhs, Side::rhs}) {
        EvalResult an = eval_side("I04", side, p4, opts);
        EvalResult cl = eval_side(cp->first, side, cp->second, opts);
        CHECK(rel(an.value, cl.value) < 1e-24);
    }
}

TEST_CASE("I18 left side hits the frozen product value") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(4.0));
    pt.scalars.emplace("b", cpl(1.0 / 3.0));
    pt.scalars.emplace("c", cpl(0.2));
    EvalOptions opts;
    opts.schedule.tol = 1e-22;
    EvalResult lhs = eval_side("I18", Side::lhs, pt, opts);
    EvalResult rhs = eval_side("I18", Side::rhs, pt, opts);
    PrecComplex frozen = PrecComplex::from_decimal(
        "-0.850473027448213787226528697187140121916388e0", "0", 192);
    CHECK(rel(lhs.value, frozen) < 1e-20);
    CHECK(rel(rhs.value, frozen) < 1e-28);
}

TEST_CASE("defect injection scales the right side only") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(0.3));
    pt.scalars.emplace("z", cpl(0.2));
    EvalOptions opts;
    EvalResult clean = eval_side("I01", Side::rhs, pt, opts);
    opts.rhs_scale_eps = 1e-6;
    EvalResult bent = eval_side("I01", Side::rhs, pt, opts);
    CHECK(rel(bent.value, clean.value) == doctest::Approx(1e-6).epsilon(1e-3));
    EvalResult lhs_bent = eval_side("I01", Side::lhs, pt, opts);
    EvalResult lhs_clean = eval_side("I01", Side::lhs, pt, [] {
        EvalOptions o;
        return o;
    }());
    CHECK(rel(lhs_bent.value, lhs_clean.value) == 0.0);
}

TEST_CASE("lemma pairs: indicator coefficients give lhs = 1 = rhs") {
    QModulus q(cpl(0.4));
    std::vector<PrecComplex> x{cpl(1.0), cpl(1.5, 0.3)};
    std::vector<PrecComplex> b{cpl(0.1), cpl(0.12)};
    EvalOptions opts;
    // f = indicator of m = 0
    std::vector<PrecComplex> tab{cpl(1.0)};
    CoefficientFn f = CoefficientFn::table(tab, 0);
    auto [l1, r1] = lemma_lem1_pair(f, b, x, q, opts);
    CHECK(rel(l1.value, cpl(1.0)) < 1e-30);
    CHECK(rel(l1.value, r1.value) < 1e-12);

    std::vector<PrecComplex> a{cpl(2.1, 0.2), cpl(1.8, -0.3)};
    auto [l2, r2] = lemma_lem2_pair(f, a, b, x, q, opts);
    CHECK(rel(l2.value, cpl(1.0)) < 1e-30);
    CHECK(rel(l2.value, r2.value) < 1e-12);
}

TEST_CASE("lem1 with b_i = q reduces to the orthant lemma") {
    // with b_i = q the right side terminates below zero; a finite-support f
    // placed on m >= 0 must then match the plain orthant sum of I09's shape
    QModulus q(cpl(0.45));
    std::vector<PrecComplex> x{cpl(1.0), cpl(1.35, 0.2)};
    std::vector<PrecComplex> bq{q.value(), q.value()};
    std::vector<PrecComplex> tab{cpl(1.0), cpl(0.4, 0.1), cpl(0.2)};
    CoefficientFn f = CoefficientFn::table(tab, 0);
    EvalOptions opts;
    auto [lhs, rhs] = lemma_lem1_pair(f, bq, x, q, opts);
    CHECK(rel(lhs.value, rhs.value) < 1e-12);
    // lhs = sum_{m} f(m)/(q)_m directly
    PrecComplex direct(128);
    for (long m = 0; m <= 2; ++m) {
        direct += tab[static_cast<size_t>(m)] * qpoch_finite_recip(q.value(), q, m);
    }
    CHECK(rel(lhs.value, direct) < 1e-25);
}

TEST_CASE("lemma pairs with the transformation pipeline coefficients") {
    // lem1 with f(m) = (a, b)_m z^m / (d)_m at an in-domain point
    SampleConfig cfg;
    cfg.seed = 1234;
    RngStream rng = RngStream::derive(cfg.seed, "I19", 2, 0);
    ParameterPoint p19 = sample_point("I19", 2, rng, cfg);
    QModulus q(p19.q);
    EvalOptions opts;
    RatioCoeff rc;
    rc.num = {p19.s("a"), p19.s("b")};
    rc.den = {p19.s("d")};
    rc.zeta = p19.s("z");
    auto [l, r] =
        lemma_lem1_pair(CoefficientFn::ratio(rc), p19.v("c"), p19.v("x"), q, opts);
    CHECK(rel(l.value, r.value) < 1e-12);

    // lem2 with g(m) = (b)_m z^m / (d)_m
    RngStream rng2 = RngStream::derive(cfg.seed, "I21", 2, 0);
    ParameterPoint p21 = sample_point("I21", 2, rng2, cfg);
    QModulus q2(p21.q);
    RatioCoeff rg;
    rg.num = {p21.s("b")};
    rg.den = {p21.s("d")};
    rg.zeta = p21.s("z");
    auto [l2, r2] = lemma_lem2_pair(CoefficientFn::ratio(rg), p21.v("a"), p21.v("c"),
                                    p21.v("x"), q2, opts);
    CHECK(rel(l2.value, r2.value) < 1e-12);
}

TEST_CASE("probe replay at a fixed radius reproduces the truncation") {
    SampleConfig cfg;
    cfg.seed = 555;
    RngStream rng = RngStream::derive(cfg.seed, "I04", 2, 0);
    ParameterPoint pt = sample_point("I04", 2, rng, cfg);
    EvalOptions opts;
    EvalResult base = eval_side("I04", Side::lhs, pt, opts);
    EvalOptions fixed = opts;
    fixed.radius_override = base.radius_used;
    EvalResult replayed = eval_side("I04", Side::lhs, pt, fixed);
    CHECK(mpfr_equal_p(base.value.re(), replayed.value.re()));
    CHECK(mpfr_equal_p(base.value.im(), replayed.value.im()));
}
