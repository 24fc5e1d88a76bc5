// End-to-end CLI exit codes and file handling, driven through the built
// binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qlv/report.hpp"

namespace {

std::string cli() { return QLV_CLI_PATH; }

int run(const std::string& args, std::string* out = nullptr) {
    const std::string tmp = std::filesystem::temp_directory_path() / "qlv_cli_out.txt";
    const std::string cmd = cli() + " " + args + " > " + tmp + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream f(tmp);
        std::stringstream ss;
        ss << f.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("list prints the full catalog") {
    std::string out;
    CHECK(run("list", &out) == 0);
    CHECK(out.find("I01") != std::string::npos);
    CHECK(out.find("I30") != std::string::npos);
    CHECK(out.find("Ramanujan") != std::string::npos);
}

TEST_CASE("verify: clean run exits 0, unknown identity exits 1") {
    std::string out;
    CHECK(run("verify --identity I01 --samples 5 --seed 42", &out) == 0);
    CHECK(out.find("PASS") != std::string::npos);
    CHECK(run("verify --identity I99 --samples 1", &out) == 1);
    CHECK(run("verify", &out) == 1);  // missing required option
}

TEST_CASE("eval reads a point file") {
    const std::string dir = std::filesystem::temp_directory_path() / "qlv_cli_eval";
    std::filesystem::create_directories(dir);
    qlv::ParameterPoint pt;
    pt.n = 1;
    pt.q = qlv::PrecComplex::from_double(0.5, 0.0, 128);
    pt.scalars.emplace("a", qlv::PrecComplex::from_double(0.3, 0.0, 128));
    pt.scalars.emplace("z", qlv::PrecComplex::from_double(0.2, 0.0, 128));
    qlv::write_file(dir + "/point.json", qlv::point_to_json(pt, 128));

    std::string out;
    CHECK(run("eval --identity I01 --side lhs --point " + dir + "/point.json", &out) == 0);
    CHECK(out.find("value_re 0.136033933") != std::string::npos);
    CHECK(run("eval --identity I01 --side rhs --point " + dir + "/point.json", &out) == 0);
    CHECK(out.find("value_re 0.136033933") != std::string::npos);
    CHECK(run("eval --identity I01 --side both --point " + dir + "/point.json", &out) == 1);
    CHECK(run("eval --identity I01 --side lhs --point /nonexistent.json", &out) == 1);
}

TEST_CASE("suite, report, and baseline round-trip") {
    namespace fs = std::filesystem;
    const std::string dir = fs::temp_directory_path() / "qlv_cli_suite";
    fs::remove_all(dir);
    fs::create_directories(dir);
    qlv::write_file(dir + "/config.json",
                    "{\"seed\": 5, \"samples\": 1, \"arities\": [1],\n"
                    " \"schedule\": {\"initial_radius\": 7, \"max_radius\": 32, "
                    "\"tol\": \"1e-12\"}}");
    std::string out;
    CHECK(run("suite --config " + dir + "/config.json --out " + dir + "/run1", &out) == 0);
    CHECK(fs::exists(dir + "/run1/report.json"));

    CHECK(run("report --in " + dir + "/run1 --format csv --out " + dir + "/run1.csv",
              &out) == 0);
    std::string csv = qlv::read_file(dir + "/run1.csv");
    CHECK(csv.find("id,n,sample,status") == 0);
    CHECK(run("report --in " + dir + "/run1 --format json --out " + dir + "/run1.json",
              &out) == 0);
    CHECK(run("report --in " + dir + "/run1 --format xml", &out) == 1);

    // identical runs: no regressions, exit 0
    CHECK(run("suite --config " + dir + "/config.json --out " + dir + "/run2", &out) == 0);
    CHECK(run("baseline --compare " + dir + "/run1/report.json " + dir +
                  "/run2/report.json",
              &out) == 0);
    CHECK(out.find("no regressions") != std::string::npos);

    // doctor a regression into the new report: one PASS becomes FAIL
    qlv::SuiteReport rep = qlv::report_from_json(qlv::read_file(dir + "/run2/report.json"));
    bool flipped = false;
    for (auto& r : rep.records) {
        if (r.status == qlv::Status::PASS && !flipped) {
            r.status = qlv::Status::FAIL;
            flipped = true;
        }
    }
    REQUIRE(flipped);
    rep.aggregate();
    qlv::write_file(dir + "/run3.json", qlv::report_to_json(rep, "2026-01-01T00:00:00Z"));
    CHECK(run("baseline --compare " + dir + "/run1/report.json " + dir + "/run3.json",
              &out) == 2);
    CHECK(out.find("REGRESSION") != std::string::npos);
}
