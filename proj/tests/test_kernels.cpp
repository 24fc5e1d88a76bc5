// Lattice summation drivers, summand constructors, classical series.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qlv/lattice.hpp"
#include "qlv/rng.hpp"

using namespace qlv;

namespace {

PrecComplex cpl(double re, double im = 0.0, mpfr_prec_t prec = 128) {
    return PrecComplex::from_double(re, im, prec);
}

double rel(const PrecComplex& a, const PrecComplex& b) {
    return PrecComplex::rel_diff(a, b);
}

PrecComplex one128() {
    PrecComplex o(128);
    o.set_one();
    return o;
}

// The psi-type display evaluated directly, term by term, with no shared
// tables; the oracle for the optimized summand.
PrecComplex psi_term_direct(std::span<const PrecComplex> x,
                            std::span<const PrecComplex> b, const QModulus& q,
                            const PrecComplex& a, const PrecComplex& z,
                            const LatticePoint& k) {
    const int n = static_cast<int>(x.size());
    PrecComplex t = vandermonde_ratio(x, k, q);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            t *= qpoch_finite_recip(x[i] / x[j] * b[static_cast<size_t>(j)], q, k.k[i]);
        }
    }
    const long K = k.norm1();
    for (int i = 0; i < n; ++i) t *= x[i].pow_int(n * k.k[i] - K);
    t *= a.pow_int(0);  // keep shape obvious
    t *= qpoch_finite(a, q, K);
    long long e = -binom2(K);
    for (int i = 0; i < n; ++i) e += static_cast<long long>(n) * binom2(k.k[i]);
    t *= q.value().pow_int(static_cast<long>(e));
    if (((n - 1) * K) % 2 != 0) t = -t;
    t *= z.pow_int(K);
    return t;
}

}  // namespace

TEST_CASE("vandermonde_ratio basics") {
    QModulus q(cpl(0.5));
    std::vector<PrecComplex> x{cpl(1.0), cpl(2.0)};
    LatticePoint k0;
    k0.n = 2;
    CHECK(rel(vandermonde_ratio(x, k0, q), one128()) == 0.0);

    std::vector<PrecComplex> x1{cpl(1.7)};
    LatticePoint k1;
    k1.n = 1;
    k1.k[0] = 5;
    CHECK(rel(vandermonde_ratio(x1, k1, q), one128()) == 0.0);

    // n=2, x=(1,2), k=(1,0): (q - 2)/(1 - 2) = 3/2 at q = 1/2
    LatticePoint k;
    k.n = 2;
    k.k[0] = 1;
    k.k[1] = 0;
    CHECK(rel(vandermonde_ratio(x, k, q), cpl(1.5)) < 1e-35);

    std::vector<PrecComplex> bad{cpl(1.0), cpl(1.0)};
    CHECK_THROWS_AS(vandermonde_ratio(bad, k, q), DegenerateXError);
}

TEST_CASE("vandermonde_ratio is invariant under pair permutations at n = 3") {
    RngStream rng(31);
    QModulus q(cpl(0.45));
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<PrecComplex> x;
        LatticePoint k;
        k.n = 3;
        for (int i = 0; i < 3; ++i) {
            x.push_back(cpl(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)));
            k.k[i] = rng.next_long(-3, 3);
        }
        PrecComplex ref = vandermonde_ratio(x, k, q);
        std::vector<int> idx{0, 1, 2};
        do {
            std::vector<PrecComplex> xp;
            LatticePoint kp;
            kp.n = 3;
            for (int i = 0; i < 3; ++i) {
                xp.push_back(x[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
                kp.k[i] = k.k[idx[static_cast<size_t>(i)]];
            }
            CHECK(rel(vandermonde_ratio(xp, kp, q), ref) < 1e-30);
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
}

TEST_CASE("classical_phi: geometric collapse and termination") {
    QModulus q(cpl(0.5));
    TruncationSchedule sched{7, 4096, 1e-24};
    // 1phi0(q; -; q, z) = 1/(1-z): the (q)_k ratio cancels
    std::vector<PrecComplex> up{q.value()};
    SumResult r = classical_phi(up, {}, q, cpl(0.5), sched);
    CHECK(rel(r.value, cpl(2.0)) < 1e-22);

    // q-binomial theorem at a=0.3, z=0.2, q=0.5
    std::vector<PrecComplex> upb{cpl(0.3)};
    SumResult lhs = classical_phi(upb, {}, q, cpl(0.2), sched);
    PrecComplex rhs = qpoch_infinite(cpl(0.3) * cpl(0.2), q, 1e-30).value /
                      qpoch_infinite(cpl(0.2), q, 1e-30).value;
    CHECK(rel(lhs.value, rhs) < 1e-22);
    PrecComplex frozen = PrecComplex::from_decimal(
        "0.136033933010516433602413464888254717818255e1", "0", 192);
    CHECK(rel(lhs.value, frozen) < 1e-22);

    // terminating series: a = q^{-2} kills k >= 3; matches 3-term accumulation
    PrecComplex a = one128() / (q.value() * q.value());
    std::vector<PrecComplex> upt{a};
    SumResult t = classical_phi(upt, {}, q, cpl(3.0), sched);
    PrecComplex direct(128);
    for (long k = 0; k <= 2; ++k) {
        direct += qpoch_finite(a, q, k) * qpoch_finite_recip(q.value(), q, k) *
                  cpl(3.0).pow_int(k);
    }
    CHECK(rel(t.value, direct) < 1e-24);
}

TEST_CASE("classical_psi: Ramanujan 1psi1 and the terminating spec point") {
    QModulus q(cpl(0.5));
    TruncationSchedule sched{7, 4096, 1e-24};
    // generic point a=3, b=2/5, z=1/2
    std::vector<PrecComplex> up{cpl(3.0)}, lo{cpl(0.4)};
    SumResult lhs = classical_psi(up, lo, q, cpl(0.5), sched);
    PrecComplex frozen = PrecComplex::from_decimal(
        "-0.12184025291359666135018963995198902020914e0", "0", 192);
    CHECK(rel(lhs.value, frozen) < 1e-22);

    // independent product side (arguments built from the same inputs)
    auto P = [&](const PrecComplex& v) { return qpoch_infinite(v, q, 1e-28).value; };
    const PrecComplex a3 = cpl(3.0), b04 = cpl(0.4), z05 = cpl(0.5);
    PrecComplex rhs = P(q.value()) * P(b04 / a3) * P(a3 * z05) * P(q.value() / (a3 * z05)) /
                      (P(b04) * P(q.value() / a3) * P(z05) * P(b04 / (a3 * z05)));
    CHECK(rel(lhs.value, rhs) < 1e-22);

    // a = 4 = q^{-2}, b = q: terminates on both sides and sums to zero
    std::vector<PrecComplex> up4{cpl(4.0)}, loq{q.value()};
    SumResult degenerate = classical_psi(up4, loq, q, cpl(0.5), sched);
    CHECK(degenerate.value.abs_double() < 1e-22);

    // b = q degeneration: 1psi1(a; q; q, z) = 1phi0(a; -; q, z)
    std::vector<PrecComplex> upa{cpl(0.7, 0.2)};
    SumResult bil = classical_psi(upa, loq, q, cpl(0.3, 0.1), sched);
    SumResult uni = classical_phi(upa, {}, q, cpl(0.3, 0.1), sched);
    CHECK(rel(bil.value, uni.value) < 1e-22);
}

TEST_CASE("2psi2 summation point") {
    QModulus q(cpl(0.5));
    TruncationSchedule sched{7, 4096, 1e-24};
    std::vector<PrecComplex> up{cpl(4.0), cpl(1.0 / 3.0)};
    std::vector<PrecComplex> lo{cpl(0.2), cpl(1.0 / 3.0) * q.value()};
    SumResult lhs = classical_psi(up, lo, q, q.value() / cpl(4.0), sched);
    PrecComplex frozen = PrecComplex::from_decimal(
        "-0.850473027448213787226528697187140121916388e0", "0", 192);
    CHECK(rel(lhs.value, frozen) < 1e-20);
}

TEST_CASE("psi-type summand reduces to the classical 1psi1 term at n = 1") {
    RngStream rng(404);
    QModulus q(cpl(0.5));
    const double bound = std::exp2(-(128.0 - 8.0));
    for (int trial = 0; trial < 100; ++trial) {
        PrecComplex a = cpl(rng.uniform(0.5, 3.0), rng.uniform(-1, 1));
        PrecComplex b = cpl(rng.uniform(0.1, 0.9), rng.uniform(-0.3, 0.3));
        PrecComplex z = cpl(rng.uniform(0.1, 0.8), rng.uniform(-0.2, 0.2));
        std::vector<PrecComplex> x{cpl(rng.uniform(0.7, 1.4))};
        std::vector<PrecComplex> bv{b};
        auto s = an_summand_psi_type(x, bv, q, a, z);
        s->prepare(6);
        Summand::Scratch sc(128);
        const long k = rng.next_long(-6, 6);
        LatticePoint kp;
        kp.n = 1;
        kp.k[0] = k;
        PrecComplex term(128);
        s->term(kp, term, sc);
        PrecComplex classical =
            qpoch_finite(a, q, k) * qpoch_finite_recip(b, q, k) * z.pow_int(k);
        const double scale = std::max(1.0, classical.abs_double());
        CHECK((term - classical).abs_double() < bound * scale);
    }
}

TEST_CASE("psi-type summand matches the direct display at n = 2, k = (1, -1)") {
    QModulus q(cpl(0.4));
    std::vector<PrecComplex> x{cpl(1.0), cpl(1.7)};
    std::vector<PrecComplex> b{cpl(0.12), cpl(0.18)};
    PrecComplex a = cpl(2.3, 0.4), z = cpl(0.15, -0.05);
    auto s = an_summand_psi_type(x, b, q, a, z);
    s->prepare(4);
    Summand::Scratch sc(128);
    LatticePoint k;
    k.n = 2;
    k.k[0] = 1;
    k.k[1] = -1;
    PrecComplex term(128);
    s->term(k, term, sc);
    CHECK(rel(term, psi_term_direct(x, b, q, a, z, k)) < 1e-30);

    // k = 0 gives exactly 1 (empty products, (a)_0 = 1, z^0 = 1)
    LatticePoint k0;
    k0.n = 2;
    s->term(k0, term, sc);
    CHECK(rel(term, one128()) < 1e-33);

    // more lattice points against the direct display
    RngStream rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        LatticePoint kr;
        kr.n = 2;
        kr.k[0] = rng.next_long(-4, 4);
        kr.k[1] = rng.next_long(-4, 4);
        s->term(kr, term, sc);
        PrecComplex direct = psi_term_direct(x, b, q, a, z, kr);
        CHECK((term - direct).abs_double() <=
              1e-30 * std::max(1.0, direct.abs_double()));
    }
}

TEST_CASE("gustafson summand: n = 1 reduction, k = 0, and a = b cancellation") {
    QModulus q(cpl(0.45));
    std::vector<PrecComplex> x1{cpl(1.2)};
    std::vector<PrecComplex> av{cpl(2.0, 0.3)}, bv{cpl(0.2, -0.1)};
    PrecComplex z = cpl(0.3, 0.1);
    auto s = an_summand_gustafson_type(x1, av, bv, q, z);
    s->prepare(5);
    Summand::Scratch sc(128);
    PrecComplex term(128);
    for (long k = -5; k <= 5; ++k) {
        LatticePoint kp;
        kp.n = 1;
        kp.k[0] = k;
        s->term(kp, term, sc);
        PrecComplex classical = qpoch_finite(av[0], q, k) *
                                qpoch_finite_recip(bv[0], q, k) * z.pow_int(k);
        CHECK((term - classical).abs_double() <=
              1e-30 * std::max(1.0, classical.abs_double()));
    }

    // a_j = b_j: ratio collapses to V * z^{|k|}
    std::vector<PrecComplex> x2{cpl(1.0), cpl(1.6, 0.2)};
    std::vector<PrecComplex> same{cpl(0.8, 0.1), cpl(1.3)};
    auto s2 = an_summand_gustafson_type(x2, same, same, q, z);
    s2->prepare(3);
    LatticePoint k2;
    k2.n = 2;
    k2.k[0] = 2;
    k2.k[1] = -1;
    s2->term(k2, term, sc);
    PrecComplex expect = vandermonde_ratio(x2, k2, q) * z.pow_int(k2.norm1());
    CHECK(rel(term, expect) < 1e-30);

    LatticePoint k0;
    k0.n = 2;
    s2->term(k0, term, sc);
    CHECK(rel(term, one128()) < 1e-33);
}

TEST_CASE("lattice_sum_box on simple summands") {
    // M = 0 is the single origin term
    FnSummand origin(2, 128, [](const LatticePoint& k) {
        return PrecComplex::from_double(k.norm_max() == 0 ? 42.0 : 1.0, 0, 128);
    });
    CHECK(rel(lattice_sum_box(origin, 0), cpl(42.0)) == 0.0);

    // 1-D geometric restricted to k >= 0: 1 + 1/2 + 1/4 + 1/8 = 15/8
    FnSummand geo(1, 128, [](const LatticePoint& k) {
        if (k.k[0] < 0) return PrecComplex(128);
        return cpl(1.0).pow_int(0) * cpl(std::pow(0.5, static_cast<double>(k.k[0])));
    });
    CHECK(rel(lattice_sum_box(geo, 3), cpl(15.0 / 8.0)) < 1e-30);

    // additivity: box(2) = box(1) + shell-2 contribution
    FnSummand f(2, 128, [](const LatticePoint& k) {
        return cpl(std::pow(0.3, std::abs(static_cast<double>(k.k[0]))) *
                   std::pow(0.25, std::abs(static_cast<double>(k.k[1]))));
    });
    PrecComplex b1 = lattice_sum_box(f, 1);
    PrecComplex b2 = lattice_sum_box(f, 2);
    PrecComplex shell2(128);
    Summand::Scratch sc(128);
    for (long k1 = -2; k1 <= 2; ++k1) {
        for (long k2 = -2; k2 <= 2; ++k2) {
            if (std::max(std::labs(k1), std::labs(k2)) != 2) continue;
            LatticePoint k;
            k.n = 2;
            k.k[0] = k1;
            k.k[1] = k2;
            PrecComplex t(128);
            f.term(k, t, sc);
            shell2 += t;
        }
    }
    CHECK(rel(b2, b1 + shell2) < 1e-30);
}

TEST_CASE("lattice_slice_sum: empty slice, n = 1, and the partition identity") {
    FnSummand f(2, 128, [](const LatticePoint& k) {
        return cpl(std::pow(0.4, std::abs(static_cast<double>(k.k[0]))) *
                   std::pow(0.3, std::abs(static_cast<double>(k.k[1]))) *
                   (1.0 + 0.1 * static_cast<double>(k.norm1())));
    });
    CHECK(lattice_slice_sum(f, 9, 2).is_zero());  // |m| > nM

    FnSummand g(1, 128, [](const LatticePoint& k) {
        return cpl(static_cast<double>(10 + k.k[0]));
    });
    CHECK(rel(lattice_slice_sum(g, -2, 4), cpl(8.0)) == 0.0);

    // partition over slices reproduces the box for n <= 3, M <= 6
    for (int n = 1; n <= 3; ++n) {
        FnSummand h(n, 128, [n](const LatticePoint& k) {
            double v = 1.0;
            for (int i = 0; i < n; ++i) v *= std::pow(0.5, std::abs(static_cast<double>(k.k[i])));
            return PrecComplex::from_double(v, 0.3 * v, 128);
        });
        for (long M : {2L, 6L}) {
            PrecComplex box = lattice_sum_box(h, M);
            PrecComplex slices(128);
            for (long m = -n * M; m <= n * M; ++m) {
                slices += lattice_slice_sum(h, m, M);
            }
            const double tol =
                n * std::pow(2.0 * M + 1.0, n) * std::exp2(-(128.0 - 8.0));
            CHECK(rel(box, slices) < tol);
        }
    }
}

TEST_CASE("adaptive_sum: geometric value, divergence, and thread invariance") {
    FnSummand geo(1, 128, [](const LatticePoint& k) {
        if (k.k[0] < 0) return PrecComplex(128);
        return cpl(0.5).pow_int(k.k[0]);
    });
    TruncationSchedule sched{7, 4096, 1e-20};
    AdaptiveOptions opts;
    SumResult r = adaptive_sum(geo, sched, opts);
    CHECK(rel(r.value, cpl(2.0)) < 1e-20);

    // |z| > 1 diverges
    FnSummand div(1, 128, [](const LatticePoint& k) {
        if (k.k[0] < 0) return PrecComplex(128);
        return cpl(1.5).pow_int(k.k[0]);
    });
    TruncationSchedule small{7, 64, 1e-12};
    CHECK_THROWS_AS(adaptive_sum(div, small, opts), NoConvergence);

    // Ramanujan 1psi1 summand vs independent product side
    QModulus q(cpl(0.5));
    PrecComplex a = cpl(3.0), b = cpl(0.4), z = cpl(0.5);
    std::vector<PrecComplex> x1{cpl(1.0)};
    std::vector<PrecComplex> bv{b};
    auto s = an_summand_psi_type(x1, bv, q, a, z);
    TruncationSchedule s2{7, 4096, 1e-24};
    SumResult lhs = adaptive_sum(*s, s2, opts);
    auto P = [&](const PrecComplex& v) { return qpoch_infinite(v, q, 1e-30).value; };
    PrecComplex rhs = P(q.value()) * P(b / a) * P(a * z) * P(q.value() / (a * z)) /
                      (P(b) * P(q.value() / a) * P(z) * P(b / (a * z)));
    CHECK(rel(lhs.value, rhs) < std::max(lhs.err_estimate, 1e-22));

    // identical bits for 1 worker and 3 workers
    std::vector<PrecComplex> x3{cpl(1.0), cpl(1.25, 0.3), cpl(0.8, -0.2)};
    std::vector<PrecComplex> b3{cpl(0.1), cpl(0.12), cpl(0.09)};
    auto s3a = an_summand_psi_type(x3, b3, q, a, cpl(0.02));
    auto s3b = an_summand_psi_type(x3, b3, q, a, cpl(0.02));
    TruncationSchedule s3s{7, 32, 1e-12};
    AdaptiveOptions o1, o3;
    o1.threads = 1;
    o3.threads = 3;
    SumResult r1 = adaptive_sum(*s3a, s3s, o1);
    SumResult r3 = adaptive_sum(*s3b, s3s, o3);
    CHECK(mpfr_equal_p(r1.value.re(), r3.value.re()));
    CHECK(mpfr_equal_p(r1.value.im(), r3.value.im()));
}

TEST_CASE("permutation_sum: identity, S_2 signs, and the inner = 1 collapse") {
    QModulus q(cpl(0.4));
    auto inner_one = [](std::span<const int>, const LatticePoint&) {
        PrecComplex o(128);
        o.set_one();
        return o;
    };
    // n = 1: single identity permutation, prefactor 1
    std::vector<PrecComplex> x1{cpl(1.3)};
    CHECK(rel(permutation_sum(x1, inner_one, q, 1, 0), one128()) == 0.0);

    // n = 2, M = 0: 1 - x_1/x_2 by direct expansion
    std::vector<PrecComplex> x2{cpl(1.1, 0.2), cpl(0.8, -0.4)};
    PrecComplex expect2 = one128() - x2[0] / x2[1];
    CHECK(rel(permutation_sum(x2, inner_one, q, 2, 0), expect2) < 1e-30);

    // n = 3, M = 0: brute-force expansion of sum_sigma eps prod x^{i-sigma(i)}
    std::vector<PrecComplex> x3{cpl(1.0, 0.1), cpl(1.4, -0.2), cpl(0.75, 0.3)};
    PrecComplex expect3(128);
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    int sign[6] = {1, -1, -1, 1, 1, -1};
    for (int p = 0; p < 6; ++p) {
        PrecComplex t = one128();
        for (int i = 0; i < 3; ++i) {
            t *= x3[static_cast<size_t>(perm[p][i])].pow_int(i - perm[p][i]);
        }
        if (sign[p] < 0) t = -t;
        expect3 += t;
    }
    CHECK(rel(permutation_sum(x3, inner_one, q, 3, 0), expect3) < 1e-30);

    CHECK_THROWS_AS(permutation_sum(x3, inner_one, q, 9, 0), ArityTooLarge);
}

TEST_CASE("permutation_series_sum equals the generic driver") {
    QModulus q(cpl(0.35));
    std::vector<PrecComplex> x{cpl(1.0), cpl(1.45, 0.25)};
    std::vector<PrecComplex> av{cpl(2.2, 0.2), cpl(1.9, -0.4)};
    std::vector<PrecComplex> bv{cpl(0.08), cpl(0.1, 0.02)};
    auto inner = [&](std::span<const int>, const LatticePoint& k) {
        PrecComplex t(128);
        t.set_one();
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                t *= qpoch_finite(x[static_cast<size_t>(i)] / x[static_cast<size_t>(j)] *
                                      av[static_cast<size_t>(j)],
                                  q, k.k[i]);
                t *= qpoch_finite_recip(x[static_cast<size_t>(i)] / x[static_cast<size_t>(j)] *
                                            bv[static_cast<size_t>(j)],
                                        q, k.k[i]);
            }
        }
        return t;
    };
    PrecComplex generic = permutation_sum(x, inner, q, 2, 10);
    TruncationSchedule sched{10, 10, 1e-12};
    SumResult fast = permutation_series_sum(x, av, bv, q, sched, 1, 0.0, 10L);
    CHECK(rel(fast.value, generic) < 1e-32);
}
