// Report serialization: decimal-string round-trips, CSV, baselines.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qlv/report.hpp"

using namespace qlv;

namespace {

PrecComplex cpl(double re, double im = 0.0) { return PrecComplex::from_double(re, im, 128); }

VerificationRecord make_record(const std::string& id, int n, int sample, Status st,
                               double rel_err) {
    VerificationRecord r;
    r.id = id;
    r.n = n;
    r.sample_index = sample;
    r.status = st;
    r.rel_err = rel_err;
    r.abs_err = rel_err * 2;
    r.radius_used = 16;
    r.err_estimate = 1e-20;
    r.precision_bits = 128;
    r.point.n = n;
    r.point.q = cpl(0.5);
    r.point.scalars.emplace("a", cpl(0.3, 0.7));
    r.point.vectors.emplace("x", std::vector<PrecComplex>{cpl(1.0), cpl(1.5, -0.25)});
    r.point.integers.emplace("m", -2);
    r.lhs = cpl(1.234567890123456789e-3, 0.5);
    r.rhs = cpl(1.234567890123456789e-3, 0.5);
    return r;
}

}  // namespace

TEST_CASE("empty report round-trips") {
    SuiteReport rep;
    rep.aggregate();
    std::string js = report_to_json(rep, "2026-01-01T00:00:00Z");
    SuiteReport back = report_from_json(js);
    CHECK(back.records.empty());
    std::string js2 = report_to_json(back, "2026-01-01T00:00:00Z");
    CHECK(js == js2);
}

TEST_CASE("records round-trip byte-identically and keep POLE details") {
    SuiteReport rep;
    rep.records.push_back(make_record("I04", 2, 0, Status::PASS, 1e-30));
    rep.records.push_back(make_record("I04", 2, 1, Status::POLE, 0.0));
    rep.records.back().detail = "pole in psi-type row denominator: factor below threshold";
    rep.records.push_back(make_record("I10", 3, 0, Status::NO_CONVERGENCE, 0.0));
    rep.aggregate();

    std::string js = report_to_json(rep, "2026-01-01T00:00:00Z");
    SuiteReport back = report_from_json(js);
    REQUIRE(back.records.size() == 3);
    CHECK(back.records[1].status == Status::POLE);
    CHECK(back.records[1].detail ==
          "pole in psi-type row denominator: factor below threshold");
    CHECK(back.records[0].lhs.re_decimal() == rep.records[0].lhs.re_decimal());
    CHECK(report_to_json(back, "2026-01-01T00:00:00Z") == js);
}

TEST_CASE("schema mismatch is rejected") {
    CHECK_THROWS_AS(report_from_json("{\"schema\": \"other/9\", \"records\": []}"), IOError);
    CHECK_THROWS_AS(report_from_json("not json at all"), IOError);
}

TEST_CASE("CSV flattening") {
    SuiteReport rep;
    rep.records.push_back(make_record("I07", 2, 0, Status::PASS, 3e-40));
    rep.records.push_back(make_record("I07", 2, 1, Status::FAIL, 2e-6));
    rep.aggregate();
    std::string csv = report_to_csv(rep);
    CHECK(csv.find("id,n,sample,status") == 0);
    size_t rows = 0;
    for (char c : csv) rows += c == '\n' ? 1 : 0;
    CHECK(rows == 3);  // header + 2 records
    CHECK(csv.find("FAIL") != std::string::npos);
}

TEST_CASE("point JSON round-trips bitwise") {
    ParameterPoint pt;
    pt.n = 2;
    pt.q = cpl(0.31);
    pt.scalars.emplace("a", cpl(2.5, -0.7));
    pt.vectors.emplace("x", std::vector<PrecComplex>{cpl(1.0), cpl(0.85, 0.4)});
    pt.integers.emplace("N", 3);
    pt.int_vectors.emplace("m", std::vector<long>{2, 0});
    pt.ftab.push_back(cpl(0.9, 0.1));
    std::string js = point_to_json(pt, 128);
    ParameterPoint back = point_from_json(js);
    CHECK(point_to_json(back, 128) == js);
    CHECK(back.i("N") == 3);
    CHECK(back.iv("m") == std::vector<long>{2, 0});
}

TEST_CASE("config round-trip and validation") {
    SampleConfig cfg;
    cfg.seed = 17;
    cfg.samples_per_identity = 9;
    cfg.arities = {1, 3};
    cfg.q_min = 0.25;
    cfg.q_max = 0.6;
    cfg.schedule.tol = 1e-14;
    std::string js = config_to_json(cfg);
    SampleConfig back = config_from_json(js);
    CHECK(back.seed == 17);
    CHECK(back.samples_per_identity == 9);
    CHECK(back.arities == std::vector<int>{1, 3});
    CHECK(back.q_min == doctest::Approx(0.25));
    CHECK(back.schedule.tol == doctest::Approx(1e-14));

    CHECK_THROWS_AS(config_from_json("{\"q_band\": [\"0.9\", \"0.2\"]}"), UsageError);
    CHECK_THROWS_AS(config_from_json("{\"probe_bits\": 130}"), UsageError);
}

TEST_CASE("baseline comparison flags regressions") {
    SuiteReport old_rep;
    old_rep.records.push_back(make_record("I04", 2, 0, Status::PASS, 1e-30));
    old_rep.records.push_back(make_record("I05", 2, 0, Status::PASS, 1e-35));
    old_rep.aggregate();

    SuiteReport same = old_rep;
    CHECK(baseline_compare(old_rep, same).empty());

    SuiteReport worse;
    worse.records.push_back(make_record("I04", 2, 0, Status::NO_CONVERGENCE, 0.0));
    worse.records.push_back(make_record("I05", 2, 0, Status::PASS, 1e-30));
    worse.aggregate();
    auto regs = baseline_compare(old_rep, worse);
    REQUIRE(regs.size() >= 2);  // status regression + worst rel_err growth
    bool has_status = false, has_growth = false;
    for (const auto& r : regs) {
        if (r.what.find("PASS ->") != std::string::npos) has_status = true;
        if (r.what.find("worst rel_err grew") != std::string::npos) has_growth = true;
    }
    CHECK(has_status);
    CHECK(has_growth);
}
