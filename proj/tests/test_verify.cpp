// Sampler determinism, verification statuses, suite behavior.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qlv/report.hpp"
#include "qlv/verify.hpp"

using namespace qlv;

namespace {

PrecComplex cpl(double re, double im = 0.0) { return PrecComplex::from_double(re, im, 128); }

}  // namespace

TEST_CASE("same seed and config give bitwise identical points") {
    SampleConfig cfg;
    cfg.seed = 31337;
    RngStream r1 = RngStream::derive(cfg.seed, "I10", 2, 4);
    RngStream r2 = RngStream::derive(cfg.seed, "I10", 2, 4);
    ParameterPoint a = sample_point("I10", 2, r1, cfg);
    ParameterPoint b = sample_point("I10", 2, r2, cfg);
    CHECK(point_to_json(a, cfg.precision_bits) == point_to_json(b, cfg.precision_bits));

    RngStream r3 = RngStream::derive(cfg.seed, "I10", 2, 5);
    ParameterPoint c = sample_point("I10", 2, r3, cfg);
    CHECK(point_to_json(a, cfg.precision_bits) != point_to_json(c, cfg.precision_bits));
}

TEST_CASE("feasible argument interval for the forced Ramanujan draw") {
    // a = 4, b = 1/2, q = 1/2: |z| must lie in (1/8, 1)
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(4.0));
    pt.scalars.emplace("b", cpl(0.5));
    auto [lo, hi] = argument_interval("I02", pt);
    CHECK(lo == doctest::Approx(0.125));
    CHECK(hi == doctest::Approx(1.0));

    SampleConfig cfg;
    for (int s = 0; s < 5; ++s) {
        RngStream rng = RngStream::derive(7, "I02", 1, static_cast<std::uint64_t>(s));
        ParameterPoint drawn = sample_point("I02", 1, rng, cfg);
        auto [dlo, dhi] = argument_interval("I02", drawn);
        const double z = drawn.s("z").abs_double();
        CHECK(z > dlo);
        CHECK(z < dhi);
    }
}

TEST_CASE("margin 0.999 leaves no room and reports infeasibility") {
    SampleConfig cfg;
    cfg.margin = 0.999;
    RngStream rng = RngStream::derive(1, "I12", 2, 0);
    CHECK_THROWS_AS(sample_point("I12", 2, rng, cfg), InfeasibleAfterRetries);
}

TEST_CASE("sampled points pass their own domain check") {
    SampleConfig cfg;
    for (const char* id : {"I04", "I10", "I19", "I25"}) {
        RngStream rng = RngStream::derive(11, id, 2, 0);
        ParameterPoint pt = sample_point(id, 2, rng, cfg);
        DomainReport rep = domain_check(id, pt, cfg.margin);
        CHECK(rep.ok);
    }
}

TEST_CASE("verify_identity: clean PASS run and injected defect") {
    SampleConfig cfg;
    cfg.samples_per_identity = 5;
    cfg.seed = 42;
    auto recs = verify_identity("I01", 1, cfg);
    REQUIRE(recs.size() == 5);
    for (const auto& r : recs) {
        CHECK(r.status == Status::PASS);
        CHECK(r.rel_err <= cfg.schedule.tol);
    }

    auto bad = verify_identity("I01", 1, cfg, 1e-6);
    for (const auto& r : bad) {
        CHECK(r.status == Status::FAIL);
        CHECK(r.rel_err > 1e-7);
    }
}

TEST_CASE("radius starvation surfaces as NO_CONVERGENCE") {
    SampleConfig cfg;
    cfg.samples_per_identity = 2;
    cfg.schedule.initial_radius = 1;
    cfg.schedule.max_radius = 1;
    auto recs = verify_identity("I04", 3, cfg);
    for (const auto& r : recs) CHECK(r.status == Status::NO_CONVERGENCE);
}

TEST_CASE("replay reproduces stored sides bitwise") {
    SampleConfig cfg;
    cfg.samples_per_identity = 2;
    auto recs = verify_identity("I10", 2, cfg);
    for (const auto& r : recs) {
        REQUIRE(r.status == Status::PASS);
        auto [lhs, rhs] = replay(r, cfg);
        CHECK(lhs.re_decimal() == r.lhs.re_decimal());
        CHECK(lhs.im_decimal() == r.lhs.im_decimal());
        CHECK(rhs.re_decimal() == r.rhs.re_decimal());
        CHECK(rhs.im_decimal() == r.rhs.im_decimal());
    }
}

TEST_CASE("monotone truncation: doubling the radius stays inside err_estimate") {
    SampleConfig cfg;
    cfg.samples_per_identity = 3;
    auto recs = verify_identity("I04", 2, cfg);
    EvalOptions opts;
    opts.prec = 128;
    for (const auto& r : recs) {
        REQUIRE(r.status == Status::PASS);
        EvalOptions wide = opts;
        wide.radius_override = 2 * r.radius_used;
        EvalResult wide_lhs = eval_side("I04", Side::lhs, r.point, wide);
        const double change = PrecComplex::rel_diff(wide_lhs.value, r.lhs);
        CHECK(change <= std::max(r.err_estimate, 1e-28));
    }
}

TEST_CASE("probe consistency holds on PASS records") {
    SampleConfig cfg;
    cfg.samples_per_identity = 2;
    const double bound = std::exp2(-(128.0 - 16.0));
    for (const char* id : {"I03", "I11"}) {
        auto recs = verify_identity(id, 2, cfg);
        for (const auto& r : recs) {
            REQUIRE(r.status == Status::PASS);
            EvalOptions probe;
            probe.prec = 256;
            probe.radius_override = r.radius_used;
            EvalResult lp = eval_side(id, Side::lhs, r.point, probe);
            CHECK(PrecComplex::rel_diff(r.lhs, lp.value) <= bound);
        }
    }
}

TEST_CASE("verify_point classifies a hand-built point") {
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(0.3));
    pt.scalars.emplace("z", cpl(0.2));
    SampleConfig cfg;
    VerificationRecord rec = verify_point("I01", pt, cfg);
    CHECK(rec.status == Status::PASS);
    VerificationRecord bad = verify_point("I01", pt, cfg, 1e-6);
    CHECK(bad.status == Status::FAIL);
}

TEST_CASE("complex q is an explicit opt-in and verifies cleanly") {
    SampleConfig cfg;
    cfg.complex_q = true;
    cfg.samples_per_identity = 2;
    cfg.seed = 9090;
    for (const char* id : {"I01", "I04", "I10"}) {
        auto recs = verify_identity(id, id[2] == '1' && id[1] == '0' ? 2 : 1, cfg);
        for (const auto& r : recs) {
            CHECK(r.status == Status::PASS);
            if (std::string(id) != "I01") continue;
        }
    }
    // default runs keep q on the positive real axis
    SampleConfig real_cfg;
    RngStream rng = RngStream::derive(1, "I01", 1, 0);
    ParameterPoint pt = sample_point("I01", 1, rng, real_cfg);
    CHECK(pt.q.is_real());
    CHECK(mpfr_sgn(pt.q.re()) > 0);
}

TEST_CASE("suite respects empty arities and zero samples") {
    SampleConfig cfg;
    cfg.arities = {};
    cfg.samples_per_identity = 3;
    SuiteReport empty = verify_suite(cfg);
    CHECK(empty.records.empty());
    CHECK(empty.exact_records.empty());
    CHECK(empty.ladder_records.empty());

    SampleConfig zero;
    zero.arities = {1};
    zero.samples_per_identity = 0;
    SuiteReport only_checks = verify_suite(zero);
    CHECK(only_checks.records.empty());
    CHECK(!only_checks.ladder_records.empty());
    for (const auto& l : only_checks.ladder_records) CHECK(l.pass);
}

TEST_CASE("pole injection is reported as POLE with the factor description") {
    SampleConfig cfg;
    // z placed exactly on a q-power zero of the (z)_inf denominator product
    ParameterPoint pt;
    pt.n = 1;
    pt.q = cpl(0.5);
    pt.scalars.emplace("a", cpl(0.25));
    pt.scalars.emplace("b", cpl(0.05));
    pt.scalars.emplace("z", cpl(2.0));  // z = q^{-1}
    VerificationRecord rec = verify_point("I02", pt, cfg);
    CHECK(rec.status == Status::POLE);
    CHECK(!rec.detail.empty());

    // a = q^2 exactly: the numerator factor (a)_m poles at order m <= -2
    ParameterPoint pt2;
    pt2.n = 1;
    pt2.q = cpl(0.5);
    pt2.scalars.emplace("a", cpl(0.25));
    pt2.scalars.emplace("b", cpl(1.7));
    pt2.scalars.emplace("c", cpl(0.1));
    pt2.scalars.emplace("d", cpl(0.6));
    pt2.scalars.emplace("z", cpl(0.3));
    VerificationRecord r2 = verify_point("I16", pt2, cfg);
    CHECK(r2.status == Status::POLE);
    CHECK(!r2.detail.empty());
}
