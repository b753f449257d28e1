#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fidgap/algebra.hpp"
#include "fidgap/rng.hpp"

using namespace fidgap;

namespace {

ReferenceState tracial(int dQ, int dB) {
    const int n = dQ * dB;
    return ReferenceState::build({dQ, dB}, CMatrix::Zero(n, n));
}

ReferenceState random_ref(Rng& rng, int dQ, int dB, double scale = 1.0) {
    return ReferenceState::build({dQ, dB}, rng.hermitian(dQ * dB, scale));
}

}  // namespace

TEST_CASE("tracial reference state") {
    const ReferenceState ref = tracial(2, 2);
    CHECK(max_abs(ref.omega() - 0.25 * CMatrix::Identity(4, 4)) < 1e-14);
    CHECK(max_abs(restrict_to_Q(ref) - 0.5 * CMatrix::Identity(2, 2)) < 1e-14);
    CHECK(std::abs(ref.expect(CMatrix::Identity(4, 4)) - 1.0) < 1e-14);
}

TEST_CASE("2-qubit K = sigma_z x sigma_z restricts to the maximally mixed state") {
    // Gibbs weights exp(-/+1) on the diagonal; both partial sums are equal.
    const ReferenceState ref = ReferenceState::build({2, 2}, kron(pauli_z(), pauli_z()));
    CHECK(max_abs(restrict_to_Q(ref) - 0.5 * CMatrix::Identity(2, 2)) < 1e-12);

    const double z = 2.0 * std::exp(-1.0) + 2.0 * std::exp(1.0);
    CHECK(std::real(ref.omega()(0, 0)) == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
    CHECK(std::real(ref.omega()(1, 1)) == doctest::Approx(std::exp(1.0) / z).epsilon(1e-12));
}

TEST_CASE("product reference state restricts to its Q factor") {
    Rng rng(23);
    const CMatrix kq = rng.hermitian(2, 0.7);
    const CMatrix kb = rng.hermitian(3, 0.7);
    const CMatrix k = kron(kq, CMatrix::Identity(3, 3)) + kron(CMatrix::Identity(2, 2), kb);
    const ReferenceState ref = ReferenceState::build({2, 3}, k);
    // exp(-k) factorizes, so omega_Q is the Gibbs state of kq alone.
    const ReferenceState q_only = ReferenceState::build({2, 1}, kq);
    CHECK(max_abs(restrict_to_Q(ref) - q_only.omega()) < 1e-12);
}

TEST_CASE("faithfulness is enforced at ingestion") {
    CMatrix k = CMatrix::Zero(2, 2);
    k(1, 1) = 40.0;  // weight ratio exp(-40) < 1e-10
    CHECK_THROWS_AS(ReferenceState::build({2, 1}, k), NotFaithful);
}

TEST_CASE("embed_Q is a unital homomorphism") {
    const AlgebraShape shape{2, 2};
    CHECK(max_abs(embed_Q(CMatrix::Identity(2, 2), shape) - CMatrix::Identity(4, 4)) == 0.0);

    // P_psi for psi = (1,0), dB = 2 -> diag(1,1,0,0).
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK(max_abs(embed_Q(p, shape) - expected) == 0.0);

    Rng rng(29);
    const CMatrix q1 = rng.gaussian(2, 2), q2 = rng.gaussian(2, 2);
    CHECK(max_abs(embed_Q(q1 * q2, shape) - embed_Q(q1, shape) * embed_Q(q2, shape)) < 1e-12);
}

TEST_CASE("gns inner product basics") {
    const ReferenceState ref = tracial(2, 1);
    const CMatrix id = CMatrix::Identity(2, 2);
    CHECK(std::abs(gns_inner(id, id, ref) - Complex(1.0)) < 1e-14);
    // tr((1/2) sigma_x^2) = 1.
    CHECK(std::abs(gns_inner(pauli_x(), pauli_x(), ref) - Complex(1.0)) < 1e-14);

    // Centred observables are orthogonal to the identity.
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    const CMatrix y = p - ref.expect(p) * id;
    CHECK(std::abs(gns_inner(id, y, ref)) < 1e-14);
}

TEST_CASE("gns inner product is sesquilinear and positive definite") {
    Rng rng(31);
    const ReferenceState ref = random_ref(rng, 2, 2);
    const int n = 4;
    const CMatrix x = rng.gaussian(n, n), y = rng.gaussian(n, n), z = rng.gaussian(n, n);
    const Complex alpha = rng.cnormal();

    CHECK(std::abs(gns_inner(x, alpha * y + z, ref) -
                   (alpha * gns_inner(x, y, ref) + gns_inner(x, z, ref))) < 1e-12);
    CHECK(std::abs(gns_inner(alpha * x, y, ref) - std::conj(alpha) * gns_inner(x, y, ref)) <
          1e-12);
    CHECK(std::abs(gns_inner(x, y, ref) - std::conj(gns_inner(y, x, ref))) < 1e-13);

    // Faithfulness: vanishing norm forces the zero observable.
    CHECK(gns_norm(x, ref) > 1e-6 * x.norm());
    CHECK(gns_norm(CMatrix::Zero(n, n), ref) == 0.0);
}

TEST_CASE("gns embedding is an isometry") {
    Rng rng(37);
    const ReferenceState ref = random_ref(rng, 3, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix x = rng.gaussian(6, 6), y = rng.gaussian(6, 6);
        const Complex direct = gns_inner(x, y, ref);
        const Complex embedded = gns_embed(x, ref).dot(gns_embed(y, ref));
        CHECK(std::abs(direct - embedded) < 1e-11 * x.norm() * y.norm());
    }
}

TEST_CASE("modular flow basics") {
    Rng rng(41);
    const ReferenceState ref = random_ref(rng, 2, 2);
    const CMatrix a = rng.gaussian(4, 4);
    CHECK(max_abs(modular_flow(a, 0.0, ref) - a) < 1e-13);

    // Anything commuting with K is fixed at every complex time.
    const CMatrix f_of_k = mat_exp_herm(0.3 * ref.K());
    for (Complex z : {Complex(0.7, 0), Complex(0, 1), Complex(0.3, -0.4)}) {
        CHECK(max_abs(modular_flow(f_of_k, z, ref) - f_of_k) < 1e-11);
    }
}

TEST_CASE("imaginary-time conjugation with K = diag(0, ln 3)") {
    CMatrix k = CMatrix::Zero(2, 2);
    k(1, 1) = std::log(3.0);
    const ReferenceState ref = ReferenceState::build({2, 1}, k);
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    // exp(-K) a exp(K) multiplies the (0,1) entry by exp(ln 3) = 3.
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 1) = 3.0;
    CHECK(max_abs(modular_flow(a, Complex(0, 1), ref) - expected) < 1e-12);
}

TEST_CASE("modular flow group law and isometry") {
    Rng rng(43);
    const ReferenceState ref = random_ref(rng, 2, 3);
    const CMatrix a = rng.gaussian(6, 6);
    const Complex z1(0.4, 0.2), z2(-0.9, 0.5);
    CHECK(max_abs(modular_flow(modular_flow(a, z2, ref), z1, ref) -
                  modular_flow(a, z1 + z2, ref)) < 1e-10);

    for (double t : {0.1, 1.0, 10.0}) {
        CHECK(gns_norm(modular_flow(a, Complex(t, 0), ref), ref) ==
              doctest::Approx(gns_norm(a, ref)).epsilon(1e-10));
    }
}

TEST_CASE("kms identity") {
    Rng rng(47);
    const ReferenceState ref = random_ref(rng, 2, 2);
    const CMatrix id = CMatrix::Identity(4, 4);
    CHECK(kms_check(id, id, ref) < 1e-13);

    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix a = rng.gaussian(4, 4), b = rng.gaussian(4, 4);
        CHECK(kms_check(a, b, ref) <= 1e-10 * a.norm() * b.norm());
    }

    // omega(tau_{-i}(a) a^dag) = omega(a^dag a) = 1 for a = sqrt(2) P_psi, K = 0.
    const ReferenceState flat = ReferenceState::build({2, 1}, CMatrix::Zero(2, 2));
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    const CMatrix a = std::sqrt(2.0) * p;
    CHECK(kms_check(a.adjoint(), a, flat) < 1e-14);
    CHECK(std::abs(flat.expect(a.adjoint() * a) - Complex(1.0)) < 1e-14);
}

TEST_CASE("modular_trivial_on_Q distinguishes product modular Hamiltonians") {
    Rng rng(53);
    const CMatrix kb = rng.hermitian(2);
    const ReferenceState prod =
        ReferenceState::build({2, 2}, kron(CMatrix::Identity(2, 2), kb));
    CHECK(modular_trivial_on_Q(prod));

    const ReferenceState coupled = ReferenceState::build({2, 2}, kron(pauli_z(), pauli_z()));
    CHECK(!modular_trivial_on_Q(coupled));
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(ReferenceState::build({1, 2}, CMatrix::Zero(2, 2)), DimensionMismatch);
    CHECK_THROWS_AS(ReferenceState::build({2, 2}, CMatrix::Zero(3, 3)), DimensionMismatch);
    CHECK_THROWS_AS(tracial(3, 12), DimensionMismatch);  // n = 36 > 32
}
