#pragma once

// Dense 2x2 operators and the 4x4 superoperators acting on their
// vectorization.  Everything here is closed-form and allocation-free; these
// types sit in the integrator hot loop.
//
// Vectorization convention (fixed, used by every superoperator builder):
//   vec(rho) = (rho_00, rho_01, rho_10, rho_11)   -- row-major.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace openlz {

using cplx = std::complex<double>;

struct Operator2 {
    // row-major entries: m[2*i + j] = <i|M|j>
    std::array<cplx, 4> m{};

    Operator2() = default;
    Operator2(cplx a00, cplx a01, cplx a10, cplx a11) : m{a00, a01, a10, a11} {}

    cplx& operator()(int i, int j) { return m[2 * i + j]; }
    const cplx& operator()(int i, int j) const { return m[2 * i + j]; }

    Operator2& operator+=(const Operator2& o) {
        for (int k = 0; k < 4; ++k) m[k] += o.m[k];
        return *this;
    }
    Operator2& operator-=(const Operator2& o) {
        for (int k = 0; k < 4; ++k) m[k] -= o.m[k];
        return *this;
    }
    Operator2& operator*=(cplx z) {
        for (int k = 0; k < 4; ++k) m[k] *= z;
        return *this;
    }
};

inline Operator2 operator+(Operator2 a, const Operator2& b) { return a += b; }
inline Operator2 operator-(Operator2 a, const Operator2& b) { return a -= b; }
inline Operator2 operator*(cplx z, Operator2 a) { return a *= z; }
inline Operator2 operator*(Operator2 a, cplx z) { return a *= z; }
inline Operator2 operator*(double x, Operator2 a) { return a *= cplx(x, 0.0); }
inline Operator2 operator-(const Operator2& a) { return cplx(-1.0, 0.0) * a; }

inline Operator2 operator*(const Operator2& a, const Operator2& b) {
    return Operator2(a.m[0] * b.m[0] + a.m[1] * b.m[2],
                     a.m[0] * b.m[1] + a.m[1] * b.m[3],
                     a.m[2] * b.m[0] + a.m[3] * b.m[2],
                     a.m[2] * b.m[1] + a.m[3] * b.m[3]);
}

inline Operator2 identity_op() { return Operator2(1.0, 0.0, 0.0, 1.0); }

inline Operator2 adjoint(const Operator2& a) {
    return Operator2(std::conj(a.m[0]), std::conj(a.m[2]),
                     std::conj(a.m[1]), std::conj(a.m[3]));
}

inline cplx trace(const Operator2& a) { return a.m[0] + a.m[3]; }

inline cplx det(const Operator2& a) { return a.m[0] * a.m[3] - a.m[1] * a.m[2]; }

// Hilbert-Schmidt inner product tr(A^* B); the {P+, P-, E, E*} basis is
// orthonormal under it.
inline cplx hs_inner(const Operator2& a, const Operator2& b) {
    cplx s = 0.0;
    for (int k = 0; k < 4; ++k) s += std::conj(a.m[k]) * b.m[k];
    return s;
}

inline double frobenius_sq(const Operator2& a) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += std::norm(a.m[k]);
    return s;
}

inline double max_abs(const Operator2& a) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s = std::max(s, std::abs(a.m[k]));
    return s;
}

inline double max_abs_diff(const Operator2& a, const Operator2& b) {
    return max_abs(a - b);
}

// Singular values of a 2x2 matrix in closed form, from the eigenvalues of
// M^*M: with t = ||M||_F^2 and d = |det M|,
//   sigma_{1,2}^2 = (t ± sqrt(t^2 - 4 d^2)) / 2.
// trace_norm = sigma_1 + sigma_2 = sqrt(t + 2d); avoids a general SVD.
inline double trace_norm(const Operator2& a) {
    const double t = frobenius_sq(a);
    const double d = std::abs(det(a));
    return std::sqrt(std::max(0.0, t + 2.0 * d));
}

inline double operator_norm(const Operator2& a) {
    const double t = frobenius_sq(a);
    const double d = std::abs(det(a));
    const double p = std::sqrt(std::max(0.0, t + 2.0 * d));
    const double q = std::sqrt(std::max(0.0, t - 2.0 * d));
    return 0.5 * (p + q);
}

inline bool is_hermitian(const Operator2& a, double tol = 1e-10) {
    return max_abs_diff(a, adjoint(a)) <= tol;
}

// ---------------------------------------------------------------------------
// Vectorization

using Vec4 = std::array<cplx, 4>;

// With row-major storage the map is the identity on the entry array; kept
// explicit so every superoperator builder goes through one convention point.
inline Vec4 vectorize(const Operator2& a) { return a.m; }
inline Operator2 devectorize(const Vec4& v) {
    Operator2 a;
    a.m = v;
    return a;
}

// ---------------------------------------------------------------------------
// Superoperators: 4x4 complex, row-major, acting on vec(rho).

struct SuperOp {
    std::array<cplx, 16> s{};

    cplx& operator()(int r, int c) { return s[4 * r + c]; }
    const cplx& operator()(int r, int c) const { return s[4 * r + c]; }

    SuperOp& operator+=(const SuperOp& o) {
        for (int k = 0; k < 16; ++k) s[k] += o.s[k];
        return *this;
    }
    SuperOp& operator-=(const SuperOp& o) {
        for (int k = 0; k < 16; ++k) s[k] -= o.s[k];
        return *this;
    }
    SuperOp& operator*=(cplx z) {
        for (int k = 0; k < 16; ++k) s[k] *= z;
        return *this;
    }
};

inline SuperOp operator+(SuperOp a, const SuperOp& b) { return a += b; }
inline SuperOp operator-(SuperOp a, const SuperOp& b) { return a -= b; }
inline SuperOp operator*(cplx z, SuperOp a) { return a *= z; }
inline SuperOp operator*(double x, SuperOp a) { return a *= cplx(x, 0.0); }

inline SuperOp operator*(const SuperOp& a, const SuperOp& b) {
    SuperOp c;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a.s[4 * i + k];
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < 4; ++j) c.s[4 * i + j] += aik * b.s[4 * k + j];
        }
    return c;
}

inline SuperOp identity_superop() {
    SuperOp u;
    for (int i = 0; i < 4; ++i) u(i, i) = 1.0;
    return u;
}

// Named apply_vec (not an apply overload): an unqualified apply(S, <rvalue
// std::array>) call would pull std::apply into the overload set via ADL
// whenever <tuple> is in scope, and the forwarding-reference binding wins.
inline Vec4 apply_vec(const SuperOp& S, const Vec4& v) {
    Vec4 w{};
    for (int i = 0; i < 4; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < 4; ++j) acc += S.s[4 * i + j] * v[j];
        w[i] = acc;
    }
    return w;
}

inline Operator2 apply(const SuperOp& S, const Operator2& rho) {
    return devectorize(apply_vec(S, vectorize(rho)));
}

inline double max_abs(const SuperOp& a) {
    double s = 0.0;
    for (int k = 0; k < 16; ++k) s = std::max(s, std::abs(a.s[k]));
    return s;
}

inline double max_abs_diff(const SuperOp& a, const SuperOp& b) {
    return max_abs(a - b);
}

// vec(A rho) = (A (x) I) vec(rho)
inline SuperOp left_mult(const Operator2& A) {
    SuperOp S;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) S(2 * i + k, 2 * j + k) = A(i, j);
    return S;
}

// vec(rho B) = (I (x) B^T) vec(rho)
inline SuperOp right_mult(const Operator2& B) {
    SuperOp S;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) S(2 * i + l, 2 * i + k) = B(k, l);
    return S;
}

// vec(A rho B) = (A (x) B^T) vec(rho)
inline SuperOp sandwich(const Operator2& A, const Operator2& B) {
    SuperOp S;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    S(2 * i + k, 2 * j + l) = A(i, j) * B(l, k);
    return S;
}

inline SuperOp commutator_superop(const Operator2& H) {
    return left_mult(H) - right_mult(H);
}

// Dual with respect to the bilinear trace pairing tr(A S(rho)) = tr(S*(A) rho)
// (observable side, no conjugation).  In the row-major vectorization this is
// (Pi S Pi)^T with Pi the transpose permutation swapping components 1 and 2.
inline SuperOp dual(const SuperOp& S) {
    auto p = [](int k) { return k == 1 ? 2 : (k == 2 ? 1 : k); };
    SuperOp D;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) D(r, c) = S(p(c), p(r));
    return D;
}

// ---------------------------------------------------------------------------
// Choi matrix and a small Hermitian eigensolver (complete-positivity checks).

struct Herm4 {
    // row-major 4x4, Hermitian by construction where used
    std::array<cplx, 16> a{};
    cplx& operator()(int i, int j) { return a[4 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[4 * i + j]; }
};

// Choi matrix C[(2i+k),(2j+l)] = S(|i><j|)_{kl}; PSD iff S completely positive.
inline Herm4 choi_matrix(const SuperOp& S) {
    Herm4 C;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Operator2 unit;
            unit(i, j) = 1.0;
            const Operator2 out = apply(S, unit);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) C(2 * i + k, 2 * j + l) = out(k, l);
        }
    return C;
}

// Cyclic complex Jacobi; adequate for 4x4 Hermitian matrices at 1e-14.
inline std::array<double, 4> hermitian_eigenvalues(Herm4 A) {
    // symmetrize against roundoff
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const cplx v = 0.5 * (A(i, j) + std::conj(A(j, i)));
            A(i, j) = v;
            A(j, i) = std::conj(v);
        }
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) off += std::norm(A(i, j));
        if (off < 1e-30) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const cplx apq = A(p, q);
                if (std::abs(apq) < 1e-18) continue;
                const double app = A(p, p).real(), aqq = A(q, q).real();
                // unitary 2x2 rotation diagonalizing the (p,q) block:
                // phase out apq, then a real Jacobi rotation
                const cplx phase = apq / std::abs(apq);
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx sph = t * c * phase;  // s * e^{i arg(apq)}
                for (int k = 0; k < 4; ++k) {
                    const cplx akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - std::conj(sph) * akq;
                    A(k, q) = sph * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const cplx apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - sph * aqk;
                    A(q, k) = std::conj(sph) * apk + c * aqk;
                }
            }
    }
    std::array<double, 4> ev{A(0, 0).real(), A(1, 1).real(), A(2, 2).real(),
                             A(3, 3).real()};
    for (int i = 0; i < 3; ++i)  // tiny insertion sort, ascending
        for (int j = i + 1; j < 4; ++j)
            if (ev[j] < ev[i]) std::swap(ev[i], ev[j]);
    return ev;
}

}  // namespace openlz
