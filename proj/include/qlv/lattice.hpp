#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qlv/prec_complex.hpp"
#include "qlv/qpochhammer.hpp"

namespace qlv {

// Integer lattice point k = (k_1,...,k_n); |k| is the coordinate sum.
struct LatticePoint {
    static constexpr int kMaxArity = 8;
    int n = 1;
    std::array<long, kMaxArity> k{};

    long norm1() const {
        long s = 0;
        for (int i = 0; i < n; ++i) s += k[i];
        return s;
    }
    long norm_max() const {
        long s = 0;
        for (int i = 0; i < n; ++i) s = std::max(s, std::labs(k[i]));
        return s;
    }
};

struct TruncationSchedule {
    long initial_radius = 7;
    long max_radius = 32;     // radii escalate by doubling up to this
    double tol = 1e-12;
};

enum class Region { box, orthant };

// A pure lattice summand. prepare() extends internal tables and is called
// single-threaded; term() is safe to call concurrently afterwards.
class Summand {
public:
    struct Scratch {
        explicit Scratch(mpfr_prec_t p) : t1(p), t2(p) {}
        PrecComplex t1, t2;
    };

    virtual ~Summand() = default;
    virtual int arity() const = 0;
    virtual mpfr_prec_t prec() const = 0;
    virtual void prepare(long radius) = 0;
    virtual void term(const LatticePoint& k, PrecComplex& out, Scratch& sc) const = 0;
    // Upper bound on log2|term(k)|; +inf disables pruning for the point.
    virtual double term_log2_bound(const LatticePoint& k) const;
};

// Wraps an arbitrary term function (tests, ad-hoc sums).
class FnSummand : public Summand {
public:
    FnSummand(int n, mpfr_prec_t prec, std::function<PrecComplex(const LatticePoint&)> fn)
        : n_(n), prec_(prec), fn_(std::move(fn)) {}
    int arity() const override { return n_; }
    mpfr_prec_t prec() const override { return prec_; }
    void prepare(long) override {}
    void term(const LatticePoint& k, PrecComplex& out, Scratch&) const override {
        out = fn_(k);
    }

private:
    int n_;
    mpfr_prec_t prec_;
    std::function<PrecComplex(const LatticePoint&)> fn_;
};

struct SumResult {
    PrecComplex value;
    double err_estimate = 0.0;  // relative to max(1, |value|)
    long radius_used = 0;
    double skipped_mass = 0.0;  // certified relative bound on pruned terms
};

struct AdaptiveOptions {
    Region region = Region::box;
    std::optional<long> slice;  // restrict to |k| = slice
    int threads = 1;
    bool prune = true;
    // Pruning cutoff: skip points whose term bound is below
    // 2^(prune_rel_lg) * scale. 0 derives -(prec-16)-40 from the summand
    // precision, far below the probe-consistency budget.
    double prune_rel_lg = 0.0;
};

// Sum over max_i |k_i| <= M in a deterministic shell-major order; the
// result is bitwise independent of the thread count.
PrecComplex lattice_sum_box(Summand& s, long M, int threads = 1);

// Same restricted to the hyperplane |k| = m.
PrecComplex lattice_slice_sum(Summand& s, long m, long M, int threads = 1);

// Fixed-radius sum over an arbitrary region/slice (probe replays use this
// to re-evaluate at the exact truncation a previous run settled on).
PrecComplex lattice_sum(Summand& s, long M, const AdaptiveOptions& opts);

// Evaluates at radii M, 2M, 4M, ... until two consecutive relative
// differences fall below tol; NoConvergence once max_radius is exhausted.
SumResult adaptive_sum(Summand& s, const TruncationSchedule& sched,
                       const AdaptiveOptions& opts = {});

// prod_{i<j} (x_i q^{k_i} - x_j q^{k_j}) / (x_i - x_j); 1 for n = 1.
PrecComplex vandermonde_ratio(std::span<const PrecComplex> x, const LatticePoint& k,
                              const QModulus& q, double sep_eps = 0.0);

// Coefficient of the |k|-dependent part of a summand: either the ratio
// shape prod_u (N_u)_m zeta^m ((-1)^m q^C(m,2))^p / prod_v (D_v)_m or an
// arbitrary function with optional finite support.
struct RatioCoeff {
    std::vector<PrecComplex> num;
    std::vector<PrecComplex> den;
    PrecComplex zeta;
    int qfactor_power = 0;
};

class CoefficientFn {
public:
    static CoefficientFn ratio(RatioCoeff rc);
    static CoefficientFn one(mpfr_prec_t prec);
    // table[i] = f(lo + i); zero outside
    static CoefficientFn table(std::vector<PrecComplex> values, long lo);
    static CoefficientFn fn(std::function<PrecComplex(long)> f,
                            std::optional<std::pair<long, long>> support = std::nullopt);

    bool is_ratio() const { return ratio_.has_value(); }
    const RatioCoeff& as_ratio() const { return *ratio_; }
    // Pointwise evaluation (arbitrary mode; also valid for ratio mode).
    PrecComplex eval(long m, const QModulus& q, double pole_eps) const;
    std::optional<std::pair<long, long>> support() const { return support_; }

private:
    std::optional<RatioCoeff> ratio_;
    std::function<PrecComplex(long)> fn_;
    std::optional<std::pair<long, long>> support_;
};

// Summand of the A_n 1psi1 family:
//   V(x,k) prod_{i,j} ((x_i/x_j) b_j)_{k_i}^{-1} prod_i x_i^{n k_i - |k|}
//   (-1)^{(n-1)|k|} q^{-C(|k|,2) + n sum_i C(k_i,2)} c(|k|)
// Orthant summands skip the negative table sides (an orthant sum must not
// trip poles its region never touches).
std::unique_ptr<Summand> an_summand_psi_type(std::span<const PrecComplex> x,
                                             std::span<const PrecComplex> b_vec,
                                             const QModulus& q, CoefficientFn coeff,
                                             double pole_eps = 0.0,
                                             Region region = Region::box);
// Convenience form with c(m) = (a)_m z^m.
std::unique_ptr<Summand> an_summand_psi_type(std::span<const PrecComplex> x,
                                             std::span<const PrecComplex> b_vec,
                                             const QModulus& q, const PrecComplex& a,
                                             const PrecComplex& z, double pole_eps = 0.0,
                                             Region region = Region::box);

// Summand of the Gustafson family:
//   V(x,k) prod_{i,j} ((x_i/x_j) a_j)_{k_i} / ((x_i/x_j) b_j)_{k_i} c(|k|)
std::unique_ptr<Summand> an_summand_gustafson_type(std::span<const PrecComplex> x,
                                                   std::span<const PrecComplex> a_vec,
                                                   std::span<const PrecComplex> b_vec,
                                                   const QModulus& q, CoefficientFn coeff,
                                                   double pole_eps = 0.0,
                                                   Region region = Region::box);
std::unique_ptr<Summand> an_summand_gustafson_type(std::span<const PrecComplex> x,
                                                   std::span<const PrecComplex> a_vec,
                                                   std::span<const PrecComplex> b_vec,
                                                   const QModulus& q, const PrecComplex& z,
                                                   double pole_eps = 0.0,
                                                   Region region = Region::box);

// The 1-D summand of an r_phi_s (phi = true, implicit (q)_k, orthant) or
// r_psi_s (phi = false, bilateral) series.
std::unique_ptr<Summand> classical_summand(std::span<const PrecComplex> upper,
                                           std::span<const PrecComplex> lower,
                                           const QModulus& q, const PrecComplex& z,
                                           bool phi, double pole_eps = 0.0);

// Unilateral r_phi_s and bilateral r_psi_s series with adaptive truncation.
SumResult classical_phi(std::span<const PrecComplex> upper,
                        std::span<const PrecComplex> lower, const QModulus& q,
                        const PrecComplex& z, const TruncationSchedule& sched,
                        int threads = 1, double pole_eps = 0.0);
SumResult classical_psi(std::span<const PrecComplex> upper,
                        std::span<const PrecComplex> lower, const QModulus& q,
                        const PrecComplex& z, const TruncationSchedule& sched,
                        int threads = 1, double pole_eps = 0.0);

// sum_{sigma in S_n} sign(sigma) prod_i x_{sigma(i)}^{i - sigma(i)}
//   sum_{|k| = 0, box M} q^{sum_i (i-1) k_{sigma(i)}} inner(sigma, k)
// The exponent sum runs over all n rows. ArityTooLarge for n > 8.
PrecComplex permutation_sum(
    std::span<const PrecComplex> x,
    const std::function<PrecComplex(std::span<const int>, const LatticePoint&)>& inner,
    const QModulus& q, int n, long M);

// Adaptive permutation series with the Gustafson ratio inner term, all
// permutations sharing one box radius. A fixed radius skips escalation.
SumResult permutation_series_sum(std::span<const PrecComplex> x,
                                 std::span<const PrecComplex> a_vec,
                                 std::span<const PrecComplex> b_vec, const QModulus& q,
                                 const TruncationSchedule& sched, int threads = 1,
                                 double pole_eps = 0.0,
                                 std::optional<long> fixed_radius = std::nullopt);

}  // namespace qlv
