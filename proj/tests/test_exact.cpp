// Exact rational arithmetic and bit-exact finite-identity checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qlv/exact.hpp"
#include "qlv/verify.hpp"

using namespace qlv;

namespace {

ExactScalar rat(long num, long den) {
    ExactScalar r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("qpoch_finite_exact examples") {
    ExactScalar q = rat(1, 2);
    CHECK(qpoch_finite_exact(rat(1, 2), q, 2) == rat(3, 8));
    CHECK(qpoch_finite_exact(rat(1, 1), q, 1) == 0);
    CHECK(qpoch_finite_exact(rat(1, 4), q, -1) == rat(2, 1));
    // zero denominator factor at negative order
    CHECK_THROWS_AS(qpoch_finite_exact(q, q, -1), PoleError);
}

TEST_CASE("shift identity: displayed point and brute-force cross-check") {
    // n = 2, m = (1, 0), x = (1, 2), q = 1/2
    std::vector<ExactScalar> x{rat(1, 1), rat(2, 1)};
    std::vector<long> m{1, 0};
    ExactScalar q = rat(1, 2);
    auto sides = shift_identity_exact(x, q, m);
    CHECK(sides.lhs == sides.rhs);

    // brute-force left product, written out independently
    ExactScalar lhs(1);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            lhs *= qpoch_finite_exact(x[i] / x[j] * q, q, m[j] - m[i]);
        }
    }
    CHECK(lhs == sides.lhs);

    // n = 1 degenerates to 1 = 1
    std::vector<ExactScalar> x1{rat(3, 7)};
    std::vector<long> m1{3};
    auto s1 = shift_identity_exact(x1, rat(2, 5), m1);
    CHECK(s1.lhs == 1);
    CHECK(s1.rhs == 1);
}

TEST_CASE("finite lemma: N = 0 and the displayed q^m point") {
    // any valid point with f == 1 gives 1 on both sides at N = 0
    std::vector<ExactScalar> a{rat(1, 3), rat(2, 7)};
    std::vector<ExactScalar> x{rat(1, 1), rat(5, 2)};
    std::vector<ExactScalar> f1{rat(1, 1)};
    auto s0 = finite_lemma_exact(a, x, rat(1, 2), 0, f1);
    CHECK(s0.lhs == 1);
    CHECK(s0.rhs == 1);

    // n = 2, N = 3, x = (1, 3), a = (1/5, 1/7), q = 1/2, f(m) = q^m
    std::vector<ExactScalar> a2{rat(1, 5), rat(1, 7)};
    std::vector<ExactScalar> x2{rat(1, 1), rat(3, 1)};
    ExactScalar q = rat(1, 2);
    std::vector<ExactScalar> f;
    ExactScalar qm(1);
    for (int mth = 0; mth <= 3; ++mth) {
        f.push_back(qm);
        qm *= q;
    }
    auto s = finite_lemma_exact(a2, x2, q, 3, f);
    CHECK(s.lhs == s.rhs);

    // brute force over all lattice points with |k| <= 3 (independent loop)
    ExactScalar rhs(0);
    for (long k1 = 0; k1 <= 3; ++k1) {
        for (long k2 = 0; k2 + k1 <= 3; ++k2) {
            std::vector<long> k{k1, k2};
            ExactScalar t = vandermonde_exact(x2, k, q);
            for (size_t i = 0; i < 2; ++i) {
                for (size_t j = 0; j < 2; ++j) {
                    t *= qpoch_finite_exact(x2[i] / x2[j] * a2[j], q, k[i]);
                    t /= qpoch_finite_exact(x2[i] / x2[j] * q, q, k[i]);
                }
            }
            rhs += t * f[static_cast<size_t>(k1 + k2)];
        }
    }
    CHECK(rhs == s.rhs);
}

TEST_CASE("verify_finite_identity_exact dispatch") {
    ExactPoint pt;
    pt.n = 1;
    pt.q = rat(1, 2);
    pt.x = {rat(2, 3)};
    pt.m = {2};
    CHECK(verify_finite_identity_exact("I05", pt));
    CHECK_THROWS_AS(verify_finite_identity_exact("I01", pt), NotExactCapable);
}

TEST_CASE("random rational points hold exactly across n and N") {
    for (int n = 1; n <= 3; ++n) {
        auto recs05 = verify_exact("I05", n, 6, 424242);
        for (const auto& r : recs05) CHECK(r.pass);
        for (long N = 0; N <= 4; ++N) {
            auto recs06 = verify_exact("I06", n, 3, 424242, N);
            for (const auto& r : recs06) {
                CHECK(r.pass);
                CHECK(r.N == N);
            }
        }
    }
}

TEST_CASE("exact and numeric evaluators agree on exact-capable identities") {
    // one concrete I06 point, both pipelines
    std::vector<ExactScalar> a{rat(2, 5), rat(-3, 8)};
    std::vector<ExactScalar> x{rat(1, 1), rat(7, 4)};
    ExactScalar q = rat(2, 5);
    std::vector<ExactScalar> f{rat(1, 1), rat(-5, 3), rat(7, 11)};
    auto sides = finite_lemma_exact(a, x, q, 2, f);
    CHECK(sides.lhs == sides.rhs);

    ParameterPoint pt;
    pt.n = 2;
    pt.q = to_complex(q, 128);
    pt.vectors.emplace("a", std::vector<PrecComplex>{to_complex(a[0], 128), to_complex(a[1], 128)});
    pt.vectors.emplace("x", std::vector<PrecComplex>{to_complex(x[0], 128), to_complex(x[1], 128)});
    pt.integers.emplace("N", 2);
    for (const auto& fv : f) pt.ftab.push_back(to_complex(fv, 128));
    EvalOptions opts;
    EvalResult lhs = eval_side("I06", Side::lhs, pt, opts);
    EvalResult rhs = eval_side("I06", Side::rhs, pt, opts);
    PrecComplex exact_val = to_complex(sides.lhs, 128);
    CHECK(PrecComplex::rel_diff(lhs.value, exact_val) < 1e-30);
    CHECK(PrecComplex::rel_diff(rhs.value, exact_val) < 1e-30);
}
