// qlv: evaluate classical and A_n multilateral basic hypergeometric series
// and verify the catalog of summation/transformation identities at sampled
// parameter points.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "qlv/report.hpp"
#include "qlv/verify.hpp"

namespace {

using namespace qlv;

int exit_code_for(const SuiteReport& rep) {
    if (rep.any_fail()) return 2;
    if (rep.any_no_convergence()) return 3;
    return 0;
}

int exit_code_for_records(const std::vector<VerificationRecord>& recs) {
    bool fail = false, noconv = false;
    for (const auto& r : recs) {
        if (r.status == Status::FAIL) fail = true;
        if (r.status == Status::NO_CONVERGENCE) noconv = true;
    }
    if (fail) return 2;
    if (noconv) return 3;
    return 0;
}

void print_records(const std::vector<VerificationRecord>& recs) {
    for (const auto& r : recs) {
        std::printf("%-4s n=%d #%02d %-14s rel_err=%-12.3e radius=%-5ld %s\n", r.id.c_str(),
                    r.n, r.sample_index, status_name(r.status), r.rel_err, r.radius_used,
                    r.detail.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multilateral basic hypergeometric series identity verifier"};
    app.require_subcommand(1);

    // ---- list ----
    auto* list_cmd = app.add_subcommand("list", "print the identity catalog");

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one side of an identity");
    std::string eval_id, eval_side_name = "lhs", eval_point_file;
    long eval_prec = 128;
    double eval_tol = 1e-12;
    eval_cmd->add_option("--identity", eval_id, "identity id (I01..I30)")->required();
    eval_cmd->add_option("--side", eval_side_name, "lhs or rhs");
    eval_cmd->add_option("--point", eval_point_file, "JSON point file")->required();
    eval_cmd->add_option("--prec", eval_prec, "working precision in bits");
    eval_cmd->add_option("--tol", eval_tol, "truncation tolerance");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "verify one identity at sampled points");
    std::string verify_id;
    int verify_n = 0, verify_samples = 20;
    std::uint64_t verify_seed = 20250810;
    long verify_prec = 128;
    double verify_tol = 1e-12;
    int verify_threads = 1;
    verify_cmd->add_option("--identity", verify_id, "identity id")->required();
    verify_cmd->add_option("--n", verify_n, "arity (default: all supported)");
    verify_cmd->add_option("--samples", verify_samples, "points per arity");
    verify_cmd->add_option("--seed", verify_seed, "run seed");
    verify_cmd->add_option("--prec", verify_prec, "precision bits");
    verify_cmd->add_option("--tol", verify_tol, "relative tolerance");
    verify_cmd->add_option("--threads", verify_threads, "worker threads");

    // ---- suite ----
    auto* suite_cmd = app.add_subcommand("suite", "run the full verification suite");
    std::string suite_config, suite_out;
    int suite_threads = 1;
    bool suite_complex_q = false;
    suite_cmd->add_option("--config", suite_config, "JSON config file");
    suite_cmd->add_option("--out", suite_out, "output directory");
    suite_cmd->add_option("--threads", suite_threads, "worker threads");
    suite_cmd->add_flag("--complex-q", suite_complex_q, "sample q with a phase");

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "re-emit a suite report");
    std::string report_in, report_format = "json", report_out;
    report_cmd->add_option("--in", report_in, "suite output directory or report.json")
        ->required();
    report_cmd->add_option("--format", report_format, "json or csv");
    report_cmd->add_option("--out", report_out, "output file (default stdout)");

    // ---- baseline ----
    auto* baseline_cmd = app.add_subcommand("baseline", "compare two reports");
    std::string base_old, base_new;
    baseline_cmd->add_option("--compare", base_old, "baseline report.json")->required();
    baseline_cmd->add_option("new", base_new, "new report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*list_cmd) {
            for (const auto& meta : catalog_list()) {
                std::printf("%-4s %-46s n=%d..%d  mode=%s\n", meta.id.c_str(),
                            meta.title.c_str(), meta.arity_min, meta.arity_max,
                            meta.mode == VerifyMode::both ? "numeric+exact" : "numeric");
                std::printf("     roles:");
                for (const auto& r : meta.scalar_roles) std::printf(" %s", r.c_str());
                for (const auto& r : meta.vector_roles) std::printf(" %s[]", r.c_str());
                for (const auto& r : meta.integer_roles) std::printf(" %s(int)", r.c_str());
                std::printf("\n     domain: %s\n", meta.domain_description.c_str());
            }
            return 0;
        }

        if (*eval_cmd) {
            if (eval_side_name != "lhs" && eval_side_name != "rhs") {
                throw UsageError("--side must be lhs or rhs");
            }
            ParameterPoint pt = point_from_json(read_file(eval_point_file));
            EvalOptions opts;
            opts.prec = static_cast<mpfr_prec_t>(eval_prec);
            opts.schedule.tol = eval_tol;
            EvalResult r = eval_side(eval_id,
                                     eval_side_name == "lhs" ? Side::lhs : Side::rhs, pt,
                                     opts);
            std::printf("value_re %s\nvalue_im %s\nerr_estimate %.3e\nradius_used %ld\n",
                        r.value.re_decimal().c_str(), r.value.im_decimal().c_str(),
                        r.err_estimate, r.radius_used);
            return 0;
        }

        if (*verify_cmd) {
            const IdentitySpec& meta = catalog_lookup(verify_id);
            SampleConfig cfg;
            cfg.seed = verify_seed;
            cfg.samples_per_identity = verify_samples;
            cfg.precision_bits = verify_prec;
            cfg.probe_bits = std::max(verify_prec + 128, 256L);
            cfg.schedule.tol = verify_tol;
            cfg.threads = verify_threads;
            std::vector<VerificationRecord> recs;
            std::vector<int> ns;
            if (verify_n > 0) ns = {verify_n};
            else {
                for (int n = meta.arity_min; n <= meta.arity_max; ++n) ns.push_back(n);
            }
            for (int n : ns) {
                auto part = verify_identity(verify_id, n, cfg);
                recs.insert(recs.end(), part.begin(), part.end());
            }
            print_records(recs);
            return exit_code_for_records(recs);
        }

        if (*suite_cmd) {
            SampleConfig cfg;
            if (!suite_config.empty()) {
                cfg = config_from_json(read_file(suite_config));
            }
            cfg.threads = suite_threads;
            if (suite_complex_q) cfg.complex_q = true;
            SuiteReport rep = verify_suite(cfg);
            const std::string js = report_to_json(rep, iso_timestamp_now());
            if (!suite_out.empty()) {
                std::filesystem::create_directories(suite_out);
                write_file(suite_out + "/report.json", js);
                std::printf("wrote %s/report.json\n", suite_out.c_str());
            } else {
                std::fputs(js.c_str(), stdout);
            }
            for (const auto& [k, v] : rep.totals) {
                std::printf("%s: %ld\n", k.c_str(), v);
            }
            return exit_code_for(rep);
        }

        if (*report_cmd) {
            std::string path = report_in;
            if (std::filesystem::is_directory(path)) path += "/report.json";
            SuiteReport rep = report_from_json(read_file(path));
            std::string outtext;
            if (report_format == "json") {
                outtext = report_to_json(rep, iso_timestamp_now());
            } else if (report_format == "csv") {
                outtext = report_to_csv(rep);
            } else {
                throw UsageError("--format must be json or csv");
            }
            if (report_out.empty()) std::fputs(outtext.c_str(), stdout);
            else write_file(report_out, outtext);
            return 0;
        }

        if (*baseline_cmd) {
            SuiteReport older = report_from_json(read_file(base_old));
            SuiteReport newer = report_from_json(read_file(base_new));
            auto regs = baseline_compare(older, newer);
            for (const auto& r : regs) std::printf("REGRESSION %s\n", r.what.c_str());
            if (regs.empty()) std::printf("no regressions\n");
            return regs.empty() ? 0 : 2;
        }
    } catch (const UsageError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    } catch (const IOError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    } catch (const Error& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
