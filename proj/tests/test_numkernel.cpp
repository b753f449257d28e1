#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fidgap/numkernel.hpp"
#include "fidgap/rng.hpp"

using namespace fidgap;

namespace {

CMatrix diag2(double a, double b) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Independent elementwise partial trace used as an oracle.
CMatrix ptrace_b_oracle(const CMatrix& m, int dQ, int dB) {
    CMatrix out = CMatrix::Zero(dQ, dQ);
    for (int i = 0; i < dQ; ++i)
        for (int j = 0; j < dQ; ++j)
            for (int b = 0; b < dB; ++b) out(i, j) += m(i * dB + b, j * dB + b);
    return out;
}

}  // namespace

TEST_CASE("herm_eig on diagonal and identity input") {
    const HermEig eig = herm_eig(diag2(2.0, 1.0));
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    // Eigenvectors of a diagonal matrix form a permutation matrix.
    CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.vectors(0, 0)) < 1e-12);
    CHECK(std::abs(eig.vectors(1, 1)) < 1e-12);

    const HermEig id3 = herm_eig(CMatrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(id3.values[i] == doctest::Approx(1.0));
}

TEST_CASE("herm_eig of sigma_x: characteristic polynomial lambda^2 - 1") {
    const HermEig eig = herm_eig(pauli_x());
    CHECK(eig.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_eig reconstruction and unitarity on random Hermitian input") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 7;
        const CMatrix m = rng.hermitian(n);
        const HermEig eig = herm_eig(m);
        const CMatrix back = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
        CHECK((back - m).norm() <= 1e-10 * std::max(m.norm(), 1.0));
        CHECK((eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(n, n)).norm() <= 1e-10);
        for (Eigen::Index i = 1; i < eig.values.size(); ++i) {
            CHECK(eig.values[i] >= eig.values[i - 1]);
        }
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(herm_eig(m), NotHermitian);
    CHECK_THROWS_AS(herm_eig(CMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("mat_func basics") {
    CHECK(max_abs(mat_exp_herm(CMatrix::Zero(2, 2)) - CMatrix::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(mat_sqrt(diag2(4.0, 9.0)) - diag2(2.0, 3.0)) < 1e-12);
    // (1/2)^(-1/2) = sqrt(2)
    const CMatrix half = 0.5 * CMatrix::Identity(2, 2);
    CHECK(max_abs(mat_inv_sqrt(half) - std::sqrt(2.0) * CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("mat_func singular guard and inverse identities") {
    CHECK_THROWS_AS(mat_inv_sqrt(diag2(1.0, 0.0)), SingularInput);

    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix m = rng.hermitian(4, 1.5);
        const CMatrix prod = mat_exp_herm(m) * mat_exp_herm(-m);
        CHECK(max_abs(prod - CMatrix::Identity(4, 4)) < 1e-10);
        // sqrt of the square is the absolute value on PSD input.
        const CMatrix psd = m * m.adjoint();
        CHECK(max_abs(mat_sqrt(psd * psd) - psd) < 1e-9 * std::max(max_abs(psd * psd), 1.0));
    }
}

TEST_CASE("kron identities") {
    CHECK(max_abs(kron(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)) -
                  CMatrix::Identity(6, 6)) == 0.0);

    CMatrix d(2, 2);
    d << 1, 0, 0, 2;
    CMatrix expect = CMatrix::Zero(4, 4);
    expect(0, 0) = 1;
    expect(1, 1) = 1;
    expect(2, 2) = 2;
    expect(3, 3) = 2;
    CHECK(max_abs(kron(d, CMatrix::Identity(2, 2)) - expect) == 0.0);

    Rng rng(3);
    const CMatrix a = rng.gaussian(2, 2), b = rng.gaussian(3, 3);
    const CMatrix c = rng.gaussian(2, 2), e = rng.gaussian(3, 3);
    CHECK(kron(a, b)(0, 0) == a(0, 0) * b(0, 0));
    // Mixed product property (a kron b)(c kron e) = ac kron be.
    CHECK(max_abs(kron(a, b) * kron(c, e) - kron(a * c, b * e)) < 1e-12);
}

TEST_CASE("partial_trace_B basics") {
    Rng rng(5);
    const CMatrix q = rng.gaussian(2, 2);
    CMatrix b = rng.gaussian(3, 3);
    b /= b.trace();
    CHECK(max_abs(partial_trace_B(kron(q, b), 2, 3) - q) < 1e-12);

    CHECK(max_abs(partial_trace_B(CMatrix::Identity(6, 6), 2, 3) -
                  3.0 * CMatrix::Identity(2, 2)) == 0.0);
    CHECK_THROWS_AS(partial_trace_B(CMatrix::Identity(5, 5), 2, 3), DimensionMismatch);
}

TEST_CASE("partial trace of the maximally entangled 2-qubit projector") {
    CVector bell = CVector::Zero(4);
    bell[0] = 1.0 / std::sqrt(2.0);
    bell[3] = 1.0 / std::sqrt(2.0);
    const CMatrix proj = bell * bell.adjoint();
    const CMatrix reduced = partial_trace_B(proj, 2, 2);
    CHECK(max_abs(reduced - 0.5 * CMatrix::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(reduced - ptrace_b_oracle(proj, 2, 2)) == 0.0);
}

TEST_CASE("partial_trace_B is the adjoint of the embedding") {
    Rng rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        const CMatrix m = rng.gaussian(6, 6);
        const CMatrix q = rng.gaussian(2, 2);
        const Complex lhs = (kron(q, CMatrix::Identity(3, 3)) * m).trace();
        const Complex rhs = (q * partial_trace_B(m, 2, 3)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(std::abs(lhs), 1.0));
        CHECK(std::abs(m.trace() - partial_trace_B(m, 2, 3).trace()) < 1e-12);
        CHECK(max_abs(partial_trace_B(m, 2, 3) - ptrace_b_oracle(m, 2, 3)) < 1e-14);
    }
}

TEST_CASE("expm_dense against closed forms") {
    // Nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]].
    CMatrix nil = CMatrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    CMatrix expect(2, 2);
    expect << 1, 1, 0, 1;
    CHECK(max_abs(expm_dense(nil) - expect) < 1e-13);

    CHECK(max_abs(expm_dense(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)) == 0.0);

    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix h = rng.hermitian(4, 2.0);
        CHECK(max_abs(expm_dense(h) - mat_exp_herm(h)) <
              1e-11 * std::max(max_abs(mat_exp_herm(h)), 1.0));
    }
}

TEST_CASE("vec and unvec round trip with the product identity") {
    Rng rng(19);
    const CMatrix a = rng.gaussian(3, 3), x = rng.gaussian(3, 3), b = rng.gaussian(3, 3);
    CHECK(max_abs(unvec(vec(x), 3, 3) - x) == 0.0);
    // vec(AXB) = (B^T kron A) vec(X), column-major convention.
    const CVector lhs = vec(a * x * b);
    const CVector rhs = kron(b.transpose(), a) * vec(x);
    CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("predicates") {
    CHECK(is_hermitian(pauli_y()));
    CHECK(!is_hermitian(mat2(0, 1, 0, 0)));
    CHECK(is_unitary(pauli_x()));
    CHECK(is_psd(diag2(0.0, 3.0)));
    CHECK(!is_psd(diag2(-0.1, 3.0)));
}
