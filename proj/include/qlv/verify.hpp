#pragma once

#include <cstdint>
#include <optional>
#include <map>
#include <string>
#include <vector>

#include "qlv/catalog.hpp"
#include "qlv/rng.hpp"

namespace qlv {

struct SampleConfig {
    std::uint64_t seed = 20250810;
    int samples_per_identity = 20;
    std::vector<int> arities = {1, 2, 3};
    double margin = 0.2;
    double q_min = 0.2, q_max = 0.7;
    double pole_threshold = 0.0;  // 0: derived from precision
    TruncationSchedule schedule{7, 32, 1e-12};
    long precision_bits = 128;
    long probe_bits = 256;  // must be >= precision_bits + 64
    bool complex_q = false;
    int threads = 1;

    void validate() const;
};

enum class Status { PASS, FAIL, SKIP_DOMAIN, NO_CONVERGENCE, POLE };

const char* status_name(Status s);
Status status_from_name(const std::string& name);

struct VerificationRecord {
    std::string id;
    int n = 1;
    int sample_index = 0;
    ParameterPoint point;
    PrecComplex lhs{64}, rhs{64};  // values at precision_bits
    double abs_err = 0.0;
    double rel_err = 0.0;          // from the probe-precision values
    long radius_used = 0;
    double err_estimate = 0.0;
    long precision_bits = 128;
    Status status = Status::PASS;
    std::string detail;
};

struct ExactRecord {
    std::string id;
    int n = 1;
    long N = 0;
    int sample_index = 0;
    bool pass = false;
    std::string detail;
};

struct LadderRecord {
    std::string name;
    int n = 1;
    int points = 0;
    double worst_rel_err = 0.0;
    bool pass = false;
    std::string detail;
};

struct IdentityAggregate {
    std::map<std::string, long> status_counts;
    double worst_rel_err = 0.0;
};

struct SuiteReport {
    SampleConfig config;
    std::vector<VerificationRecord> records;
    std::vector<ExactRecord> exact_records;
    std::vector<LadderRecord> ladder_records;
    std::map<std::string, IdentityAggregate> per_identity;
    std::map<std::string, long> totals;

    bool any_fail() const;
    bool any_no_convergence() const;
    void aggregate();
};

// Draws a point inside the identity's margin-shrunk domain; throws
// InfeasibleAfterRetries when the configured margins leave no room.
ParameterPoint sample_point(const std::string& id, int n, RngStream& rng,
                            const SampleConfig& cfg);

// Feasible annulus for the solved argument role given the other draws of a
// candidate point (exposed for tests; margins not yet applied).
std::pair<double, double> argument_interval(const std::string& id,
                                            const ParameterPoint& partial);

// Samples and checks one identity at one arity; every failure mode becomes
// a record status, not an exception. rhs_defect multiplies the right side
// by (1 + rhs_defect) at both precisions (defect-sensitivity runs).
std::vector<VerificationRecord> verify_identity(const std::string& id, int n,
                                                const SampleConfig& cfg,
                                                double rhs_defect = 0.0);

// Classifies one already-bound point: base evaluation, probe re-evaluation
// at the same truncation, status per the FAIL/NO_CONVERGENCE rules.
VerificationRecord verify_point(const std::string& id, const ParameterPoint& pt,
                                const SampleConfig& cfg, double rhs_defect = 0.0);

// Exact-rational checks for I05 / I06; fixed_N pins the I06 order.
std::vector<ExactRecord> verify_exact(const std::string& id, int n, int samples,
                                      std::uint64_t seed,
                                      std::optional<long> fixed_N = std::nullopt);

// The reduction-ladder consistency checks at one arity.
std::vector<LadderRecord> verify_ladder(int n, int points, const SampleConfig& cfg);

// Full run: every catalog entry over the configured arities, the
// exact-mode checks, and the reduction ladder.
SuiteReport verify_suite(const SampleConfig& cfg);

// Re-evaluates both sides of a record's stored point at its stored
// precision (replay checks).
std::pair<PrecComplex, PrecComplex> replay(const VerificationRecord& rec,
                                           const SampleConfig& cfg);

}  // namespace qlv
