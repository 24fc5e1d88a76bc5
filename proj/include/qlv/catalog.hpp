#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlv/lattice.hpp"
#include "qlv/prec_complex.hpp"

namespace qlv {

// Named parameter bindings for one identity evaluation. Scalar and vector
// role namespaces are separate, so an entry may use "a" for either. The
// product abbreviations (A = a_1...a_n etc.) are always recomputed from the
// bound factors, never stored.
struct ParameterPoint {
    int n = 1;
    PrecComplex q{128};
    std::map<std::string, PrecComplex> scalars;
    std::map<std::string, std::vector<PrecComplex>> vectors;
    std::map<std::string, long> integers;
    std::map<std::string, std::vector<long>> int_vectors;
    std::vector<PrecComplex> ftab;  // arbitrary coefficient values f(0..N)

    const PrecComplex& s(const std::string& role) const;
    const std::vector<PrecComplex>& v(const std::string& role) const;
    long i(const std::string& role) const;
    const std::vector<long>& iv(const std::string& role) const;

    // Same point with every value re-rounded to prec (sampled values are
    // exactly representable, so this is value-preserving for probes).
    ParameterPoint at_prec(mpfr_prec_t prec) const;
};

enum class Side { lhs, rhs };

struct EvalOptions {
    mpfr_prec_t prec = 128;
    TruncationSchedule schedule{7, 32, 1e-12};
    int threads = 1;
    double pole_eps = 0.0;       // 0: derived from prec
    double rhs_scale_eps = 0.0;  // defect injection: rhs *= (1 + eps)
    std::optional<long> radius_override;  // fixed truncation (probe replays)
    // Pruning cutoff exponent; probes inherit the base precision's value so
    // both evaluations skip the same negligible mass. 0 derives from prec.
    double prune_rel_lg = 0.0;
};

struct EvalResult {
    PrecComplex value;
    double err_estimate = 0.0;
    long radius_used = 0;
};

// One evaluated domain constraint: ok iff lo-margin <= |value| <= hi+margin
// in the multiplicative sense; lo = 0 or hi = +inf disable that side.
struct ConstraintCheck {
    std::string what;
    double lo = 0.0;
    double value = 0.0;
    double hi = 0.0;  // +inf for one-sided
    bool hard = false;  // nondegeneracy: margin does not apply
    bool ok = true;
};

struct DomainReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<ConstraintCheck> checks;
};

enum class VerifyMode { numeric, exact, both };

struct IdentitySpec {
    std::string id;
    std::string title;
    int arity_min = 1;
    int arity_max = 3;  // catalog-supported range at desk scale
    VerifyMode mode = VerifyMode::numeric;
    std::vector<std::string> scalar_roles;
    std::vector<std::string> vector_roles;   // length-n roles
    std::vector<std::string> integer_roles;  // m, N
    std::string domain_description;

    // Evaluation hints. Slice-restricted and permutation entries escalate
    // further than box entries (their decay rate can be as slow as |q|),
    // and entries whose mixed-direction decay is exactly |q| also cap the
    // sampled q.
    bool slice_series = false;
    long box_radius_floor = 0;  // raise schedule.max_radius to at least this
    double q_ceiling = 1.0;
    std::string specializes;  // §5.2 entries name their §5.1 transformation
};

const std::vector<IdentitySpec>& catalog_list();
const IdentitySpec& catalog_lookup(const std::string& id);

EvalResult eval_side(const std::string& id, Side side, const ParameterPoint& pt,
                     const EvalOptions& opts);

// Evaluates the theorem's convergence constraints plus nondegeneracy with
// the given multiplicative margin. Reports, never throws.
DomainReport domain_check(const std::string& id, const ParameterPoint& pt, double margin,
                          double pole_eps = 0.0);

// Raw constraints (unshrunk bounds) for the sampler's guided draws.
std::vector<ConstraintCheck> domain_constraints(const std::string& id,
                                                const ParameterPoint& pt);

// The two bilateral coefficient lemmas, with an arbitrary coefficient
// function on the left and the lattice form on the right.
std::pair<EvalResult, EvalResult> lemma_lem1_pair(const CoefficientFn& f,
                                                  std::span<const PrecComplex> b_vec,
                                                  std::span<const PrecComplex> x,
                                                  const QModulus& q,
                                                  const EvalOptions& opts);
std::pair<EvalResult, EvalResult> lemma_lem2_pair(const CoefficientFn& g,
                                                  std::span<const PrecComplex> a_vec,
                                                  std::span<const PrecComplex> b_vec,
                                                  std::span<const PrecComplex> x,
                                                  const QModulus& q,
                                                  const EvalOptions& opts);

// For the n = 1 reduction layer: the classical entry and mapped point an
// A_n entry collapses to at n = 1 (nullopt when the reduction is the
// trivial identity 1 = 1).
std::optional<std::pair<std::string, ParameterPoint>> classical_counterpart(
    const std::string& id, const ParameterPoint& pt);

}  // namespace qlv
