#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "openlz/algebra.hpp"
#include "openlz/model.hpp"

using namespace openlz;

namespace {

std::mt19937_64 rng(42);

cplx rc() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    const double im = u(rng);
    return {re, im};
}

Operator2 random_op() {
    Operator2 a;
    for (int i = 0; i < 4; ++i) a.m[i] = rc();
    return a;
}

}  // namespace

TEST_CASE("trace norm on pinned matrices") {
    CHECK(trace_norm(identity_op()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(trace_norm(Operator2(1.0, 0.0, 0.0, -1.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    // rank-1 split: 3 E + 4 E* has trace norm exactly 7 at any (g, s)
    const LZFamily fam(1.3);
    for (const double s : {-4.0, 0.0, 0.7, 11.0}) {
        const Operator2 E = coherence_op(fam, s);
        CHECK(trace_norm(3.0 * E + 4.0 * adjoint(E)) ==
              doctest::Approx(7.0).epsilon(1e-13));
    }
}

TEST_CASE("operator norm on pinned matrices") {
    CHECK(operator_norm(identity_op()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(operator_norm(Operator2(3.0, 0.0, 0.0, 4.0)) ==
          doctest::Approx(4.0).epsilon(1e-14));
    for (int t = 0; t < 100; ++t) {
        const Operator2 a = random_op();
        CHECK(operator_norm(a) <= trace_norm(a) + 1e-12);
    }
}

TEST_CASE("pairing inequality |tr(AB)| <= ||A|| ||B||_1") {
    for (int t = 0; t < 1000; ++t) {
        const Operator2 a = random_op();
        const Operator2 b = random_op();
        CHECK(std::abs(trace(a * b)) <=
              operator_norm(a) * trace_norm(b) + 1e-12);
    }
}

TEST_CASE("trace norm is a norm") {
    for (int t = 0; t < 300; ++t) {
        const Operator2 a = random_op();
        const Operator2 b = random_op();
        CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12);
        const cplx c = rc();
        CHECK(trace_norm(c * a) ==
              doctest::Approx(std::abs(c) * trace_norm(a)).epsilon(1e-12));
    }
    CHECK(trace_norm(Operator2()) == 0.0);
}

TEST_CASE("vectorization convention and round trip") {
    const Vec4 vid = vectorize(identity_op());
    CHECK(vid[0] == cplx(1.0));
    CHECK(vid[1] == cplx(0.0));
    CHECK(vid[2] == cplx(0.0));
    CHECK(vid[3] == cplx(1.0));

    const Operator2 z{};
    for (const cplx& c : vectorize(z)) CHECK(c == cplx(0.0));

    for (int t = 0; t < 100; ++t) {
        const Operator2 a = random_op();
        CHECK(max_abs_diff(devectorize(vectorize(a)), a) == 0.0);
    }

    // linearity of vectorize
    const Operator2 a = random_op();
    const Operator2 b = random_op();
    const cplx c = rc();
    const Vec4 lhs = vectorize(c * a + b);
    const Vec4 va = vectorize(a);
    const Vec4 vb = vectorize(b);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(lhs[i] - (c * va[i] + vb[i])) == 0.0);
}

TEST_CASE("apply on structured superoperators") {
    const Operator2 rho = random_op();
    CHECK(max_abs_diff(apply(identity_superop(), rho), rho) == 0.0);

    // [H, H] = 0 through the commutator superoperator
    const LZFamily fam(1.0);
    const Operator2 H = hamiltonian(fam, 1.7);
    CHECK(trace_norm(apply(commutator_superop(H), H)) < 1e-14);

    // left multiplication matches the direct product
    for (int t = 0; t < 50; ++t) {
        const Operator2 A = random_op();
        const Operator2 r = random_op();
        CHECK(max_abs_diff(apply(left_mult(A), r), A * r) < 1e-14);
        CHECK(max_abs_diff(apply(right_mult(A), r), r * A) < 1e-14);
    }

    // sandwich(A, B) rho = A rho B
    for (int t = 0; t < 50; ++t) {
        const Operator2 A = random_op();
        const Operator2 B = random_op();
        const Operator2 r = random_op();
        CHECK(max_abs_diff(apply(sandwich(A, B), r), A * r * B) < 1e-13);
    }
}

TEST_CASE("superoperator composition is associative and matches application") {
    for (int t = 0; t < 20; ++t) {
        SuperOp S1, S2, S3;
        for (int i = 0; i < 16; ++i) {
            S1.s[i] = rc();
            S2.s[i] = rc();
            S3.s[i] = rc();
        }
        CHECK(max_abs_diff((S1 * S2) * S3, S1 * (S2 * S3)) < 1e-12);
        const Operator2 r = random_op();
        CHECK(max_abs_diff(apply(S1 * S2, r), apply(S1, apply(S2, r))) <
              1e-13);
    }
}

TEST_CASE("bilinear dual pairing") {
    for (int t = 0; t < 200; ++t) {
        SuperOp S;
        for (int i = 0; i < 16; ++i) S.s[i] = rc();
        const SuperOp D = dual(S);
        const Operator2 A = random_op();
        const Operator2 r = random_op();
        CHECK(std::abs(trace(apply(D, A) * r) - trace(A * apply(S, r))) <
              1e-13);
        // involution
        CHECK(max_abs_diff(dual(D), S) < 1e-15);
    }
    // contravariance: dual(S1 S2) = dual(S2) dual(S1)
    SuperOp S1, S2;
    for (int i = 0; i < 16; ++i) {
        S1.s[i] = rc();
        S2.s[i] = rc();
    }
    CHECK(max_abs_diff(dual(S1 * S2), dual(S2) * dual(S1)) < 1e-13);
}

TEST_CASE("Choi matrix of the identity channel") {
    const auto ev = hermitian_eigenvalues(choi_matrix(identity_superop()));
    CHECK(std::abs(ev[0]) < 1e-14);
    CHECK(std::abs(ev[1]) < 1e-14);
    CHECK(std::abs(ev[2]) < 1e-14);
    CHECK(ev[3] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hermitian eigenvalues are sorted and reproduce trace and square sum") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Herm4 h;
        for (int i = 0; i < 4; ++i) {
            h(i, i) = u(rng);
            for (int j = i + 1; j < 4; ++j) {
                h(i, j) = rc();
                h(j, i) = std::conj(h(i, j));
            }
        }
        const auto ev = hermitian_eigenvalues(h);
        CHECK(ev[0] <= ev[1]);
        CHECK(ev[1] <= ev[2]);
        CHECK(ev[2] <= ev[3]);
        double tr = 0.0, frob = 0.0;
        for (int i = 0; i < 4; ++i) {
            tr += h(i, i).real();
            for (int j = 0; j < 4; ++j) frob += std::norm(h(i, j));
        }
        double evsum = 0.0, evsq = 0.0;
        for (const double e : ev) {
            evsum += e;
            evsq += e * e;
        }
        CHECK(evsum == doctest::Approx(tr).epsilon(1e-10));
        CHECK(evsq == doctest::Approx(frob).epsilon(1e-10));
    }
}

TEST_CASE("hermiticity predicate") {
    const Operator2 h(1.0, cplx(0.5, 0.25), cplx(0.5, -0.25), -2.0);
    CHECK(is_hermitian(h));
    CHECK_FALSE(is_hermitian(Operator2(0.0, 1.0, 0.0, 0.0)));
}
