#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fidgap/rng.hpp"
#include "fidgap/spectral.hpp"

using namespace fidgap;

namespace {

ReferenceState tracial(int dQ, int dB) {
    const int n = dQ * dB;
    return ReferenceState::build({dQ, dB}, CMatrix::Zero(n, n));
}

LindbladGenerator qubit_depolarizing(double gamma) {
    LindbladGenerator gen;
    gen.jumps = {{pauli_x(), gamma / 4.0}, {pauli_y(), gamma / 4.0}, {pauli_z(), gamma / 4.0}};
    return gen;
}

// Full-space depolarizing over a 2-qubit tracial state: the fifteen
// non-identity Pauli products at rate gamma/16.
LindbladGenerator full_depolarizing_2q(double gamma) {
    LindbladGenerator gen;
    const std::vector<CMatrix> p = {CMatrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            gen.jumps.push_back({kron(p[a], p[b]), gamma / 16.0});
        }
    }
    return gen;
}

// Decay-fit oracle for the slowest rate of exp(t L_dis) on the complement of
// u: renormalized propagation with a fixed step, re-projected against u each
// step so the invariant direction cannot leak back in. The propagator itself
// comes from the Taylor exponential in the ordinary representation, a route
// independent of the Hermitian eigensolve inside spectral_gap.
double decay_fit_rate(const LindbladGenerator& gen, const ReferenceState& ref, Rng& rng) {
    const int n = ref.n();
    const CMatrix s = superop_of_generator(gen, true);
    const GnsOperator op = to_gns_matrix(s, ref);
    const CMatrix basis = complement_basis(op.u);
    CVector eta = basis * rng.gaussian(n * n - 1, 1);
    eta -= op.u * op.u.dot(eta);
    eta /= eta.norm();

    auto propagate_norm = [&](const CMatrix& step, CVector& v) {
        v = step * v;
        v -= op.u * op.u.dot(v);  // keep the iteration inside the complement
        const double norm = v.norm();
        v /= norm;
        return norm;
    };

    // Rough slope over a unit step, then a power iteration with a step long
    // enough that faster modes die out between renormalizations.
    const CMatrix unit_step = gns_similarity(expm_dense(s), ref);
    CVector probe = eta;
    double rough = 0.0;
    for (int k = 0; k < 8; ++k) rough = -std::log(propagate_norm(unit_step, probe));
    const double step_t = 3.0 / rough;
    const CMatrix long_step = gns_similarity(expm_dense(step_t * s), ref);
    double rate = rough;
    for (int k = 0; k < 40; ++k) rate = -std::log(propagate_norm(long_step, eta)) / step_t;
    return rate;
}

}  // namespace

TEST_CASE("to_gns_matrix basics") {
    Rng rng(149);
    const ReferenceState ref = ReferenceState::build({2, 2}, rng.hermitian(4, 0.8));

    SUBCASE("identity map") {
        const GnsOperator op = to_gns_matrix(CMatrix::Identity(16, 16), ref);
        CHECK(max_abs(op.matrix - CMatrix::Identity(16, 16)) < 1e-10);
        CHECK(std::abs(op.u.norm() - 1.0) < 1e-12);
    }

    SUBCASE("unitary flow is represented unitarily") {
        const GnsOperator op = gns_of_spec(DynamicsSpec::unitary(), 1.3, ref);
        CHECK(max_abs(op.matrix.adjoint() * op.matrix - CMatrix::Identity(16, 16)) < 1e-10);
        // The identity stays fixed.
        CHECK((op.matrix * op.u - op.u).norm() < 1e-11);
    }

    SUBCASE("action agreement on random observables") {
        const LindbladGenerator gen =
            davies_generator(ref, {rng.hermitian(4)}, KmsRateFamily{1.0});
        const DynamicsSpec spec = DynamicsSpec::from_generator(gen, true);
        const Propagator prop(spec, ref);
        const double t = 0.9;
        const GnsOperator op = gns_of_spec(spec, t, ref);
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix x = rng.gaussian(4, 4);
            const CVector lhs = op.matrix * gns_embed(x, ref);
            const CVector rhs = gns_embed(prop.heisenberg(t, x), ref);
            CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, gns_embed(x, ref).norm()));
        }
    }

    SUBCASE("generic basis-application route agrees") {
        const LindbladGenerator gen = qubit_depolarizing(0.7);
        const ReferenceState flat = tracial(2, 1);
        const GnsOperator direct = gns_of_generator(gen, flat, false);
        const GnsOperator generic =
            gns_of_action([&gen](const CMatrix& x) { return gen.apply(x); }, flat);
        CHECK(max_abs(direct.matrix - generic.matrix) < 1e-12);
    }
}

TEST_CASE("depolarizing spectrum in the GNS representation") {
    const ReferenceState ref = tracial(2, 1);
    const double gamma = 0.8, t = 1.1;
    const GnsOperator op =
        gns_of_spec(DynamicsSpec::from_generator(qubit_depolarizing(gamma)), t, ref);
    const HermEig eig = herm_eig(op.matrix);  // self-adjoint here
    // Eigenvalues {1, exp(-gamma t) three times}.
    CHECK(eig.values[3] == doctest::Approx(1.0).epsilon(1e-11));
    for (int i = 0; i < 3; ++i) {
        CHECK(eig.values[i] == doctest::Approx(std::exp(-gamma * t)).epsilon(1e-11));
    }
}

TEST_CASE("complement basis is orthonormal and deterministic") {
    Rng rng(151);
    const ReferenceState ref = ReferenceState::build({3, 2}, rng.hermitian(6, 0.8));
    const CVector u = vec(ref.omega_half());
    const CMatrix basis = complement_basis(u);
    CHECK(basis.cols() == 35);
    CHECK(max_abs(basis.adjoint() * basis - CMatrix::Identity(35, 35)) < 1e-12);
    CHECK((basis.adjoint() * u).norm() < 1e-12);
    CHECK(max_abs(basis - complement_basis(u)) == 0.0);
}

TEST_CASE("block decomposition") {
    Rng rng(157);
    const ReferenceState ref = ReferenceState::build({2, 2}, rng.hermitian(4, 0.8));

    SUBCASE("identity map decomposes trivially") {
        const GnsOperator op = to_gns_matrix(CMatrix::Identity(16, 16), ref);
        const BlockDecomposition dec = block_decompose(op);
        CHECK(dec.phi_residual < 1e-12);
        CHECK(max_abs(dec.tilde - CMatrix::Identity(15, 15)) < 1e-10);
        CHECK(contraction_check(dec.tilde) == doctest::Approx(0.0).epsilon(1e-10));
    }

    SUBCASE("invariant maps have vanishing coupling and reassemble") {
        const LindbladGenerator gen =
            davies_generator(ref, {rng.hermitian(4)}, KmsRateFamily{1.0});
        const GnsOperator op = gns_of_spec(DynamicsSpec::from_generator(gen, true), 0.8, ref);
        const BlockDecomposition dec = block_decompose(op);
        CHECK(dec.phi_residual <= 1e-10);

        // [ [1, 0], [0, tilde] ] in the basis {u, B} reproduces M.
        const Eigen::Index nn = op.matrix.rows();
        CMatrix q(nn, nn);
        q.col(0) = op.u;
        q.rightCols(nn - 1) = dec.basis;
        CMatrix block = CMatrix::Zero(nn, nn);
        block(0, 0) = 1.0;
        block.bottomRightCorner(nn - 1, nn - 1) = dec.tilde;
        CHECK(max_abs(q * block * q.adjoint() - op.matrix) < 1e-10);
    }

    SUBCASE("a unital but non-invariant map has phi_residual > 0") {
        // Conjugation by sigma_x against a non-tracial omega: unital and CP
        // but omega is not preserved.
        const ReferenceState thermal = ReferenceState::build({2, 1}, 0.9 * pauli_z());
        const CpMap flip{{pauli_x()}, CMatrix(), true, false};
        const GnsOperator op =
            gns_of_spec(DynamicsSpec::from_map(flip), 1.0, thermal);
        const BlockDecomposition dec = block_decompose(op);
        CHECK(dec.phi_residual > 1e-3);
    }
}

TEST_CASE("contraction margins") {
    Rng rng(163);
    const ReferenceState ref = ReferenceState::build({2, 2}, rng.hermitian(4, 0.8));

    const GnsOperator flow = gns_of_spec(DynamicsSpec::unitary(), 2.0, ref);
    CHECK(contraction_check(block_decompose(flow).tilde) == doctest::Approx(0.0).epsilon(1e-10));

    const ReferenceState flat = tracial(2, 1);
    const double gamma = 0.6, t = 1.4;
    const GnsOperator dep =
        gns_of_spec(DynamicsSpec::from_generator(qubit_depolarizing(gamma)), t, flat);
    CHECK(contraction_check(block_decompose(dep).tilde) ==
          doctest::Approx(1.0 - std::exp(-gamma * t)).epsilon(1e-10));
}

TEST_CASE("spectral gap of the full depolarizing model") {
    const ReferenceState ref = tracial(2, 2);
    const DynamicsSpec spec = DynamicsSpec::from_generator(full_depolarizing_2q(1.0));
    const SpectralReport report = spectral_gap(spec, ref, GapMode::detailed_balance);
    CHECK(report.valid);
    CHECK(report.gap_lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(report.gap_gamma == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(report.kernel_dim_on_complement == 0);
    CHECK(report.phi_residual < 1e-10);
}

TEST_CASE("unitary dynamics yields no decay certificate") {
    Rng rng(167);
    const ReferenceState ref = ReferenceState::build({2, 2}, rng.hermitian(4, 0.8));
    const SpectralReport report = spectral_gap(DynamicsSpec::unitary(), ref, GapMode::symmetrized);
    CHECK(!report.valid);
    CHECK(report.gap_gamma == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(report.contraction_margin == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(certified_rate(report), InvalidGap);
}

TEST_CASE("detailed balance mode rejects non-balanced generators") {
    const ReferenceState ref = ReferenceState::build({2, 1}, pauli_z());
    LindbladGenerator gen;
    CMatrix lower = CMatrix::Zero(2, 2);
    lower(1, 0) = 1.0;
    gen.jumps = {{lower, 1.0}, {lower.adjoint(), 1.0}};  // KMS-violating rates
    CHECK_THROWS_AS(
        spectral_gap(DynamicsSpec::from_generator(gen), ref, GapMode::detailed_balance),
        NotDetailedBalance);
    // The symmetrized mode still certifies a decay rate.
    const SpectralReport report =
        spectral_gap(DynamicsSpec::from_generator(gen), ref, GapMode::symmetrized);
    CHECK(report.valid);
    CHECK(report.gap_gamma > 0.0);
}

TEST_CASE("single-qubit Davies gap matches the decay-fit oracle") {
    const ReferenceState ref = ReferenceState::build({2, 1}, pauli_z());
    const LindbladGenerator gen = davies_generator(ref, {pauli_x()}, KmsRateFamily{1.0});
    const DynamicsSpec spec = DynamicsSpec::from_generator(gen, true);
    const SpectralReport report = spectral_gap(spec, ref, GapMode::detailed_balance);
    CHECK(report.valid);
    CHECK(report.gap_lambda > 0.0);
    // Coherence relaxation at (gamma(2) + gamma(-2))/2 = g/2 is the slowest mode.
    CHECK(report.gap_lambda == doctest::Approx(0.5).epsilon(1e-10));

    Rng rng(173);
    const double fitted = decay_fit_rate(gen, ref, rng);
    CHECK(std::abs(fitted - report.gap_lambda) <= 1e-6 * report.gap_lambda);
}

TEST_CASE("gap certificate bounds the norm decay of centred observables") {
    const CMatrix id2 = CMatrix::Identity(2, 2);
    const CMatrix k = kron(pauli_z(), id2) + 0.5 * kron(id2, pauli_z());
    const ReferenceState ref = ReferenceState::build({2, 2}, k);
    const LindbladGenerator gen = davies_generator(
        ref, {kron(pauli_x(), id2), kron(id2, pauli_x())}, KmsRateFamily{1.0});
    const DynamicsSpec spec = DynamicsSpec::from_generator(gen, true);
    const SpectralReport report = spectral_gap(spec, ref, GapMode::detailed_balance);
    REQUIRE(report.valid);

    const GnsOperator dis = gns_of_generator(gen, ref, true);
    const CMatrix basis = complement_basis(dis.u);
    Rng rng(179);
    for (int trial = 0; trial < 100; ++trial) {
        CVector eta = basis * rng.gaussian(15, 1);
        eta /= eta.norm();
        for (double t : {0.1 / report.gap_lambda, 1.0 / report.gap_lambda,
                         10.0 / report.gap_lambda}) {
            const double decayed = (gns_similarity(
                                        expm_dense(t * superop_of_generator(gen, true)), ref) *
                                    eta)
                                       .norm();
            CHECK(decayed <= std::exp(-report.gap_lambda * t) + 1e-9);
        }
    }
}

TEST_CASE("spectral gap is basis independent on the B factor") {
    Rng rng(181);
    const CMatrix id2 = CMatrix::Identity(2, 2);
    const CMatrix k = kron(pauli_z(), id2) + 0.5 * kron(id2, pauli_z());
    const CMatrix coupling = kron(pauli_x(), id2) + kron(id2, pauli_x());

    const ReferenceState ref = ReferenceState::build({2, 2}, k);
    const SpectralReport base = spectral_gap(
        DynamicsSpec::from_generator(davies_generator(ref, {coupling}, KmsRateFamily{1.0}), true),
        ref, GapMode::detailed_balance);

    const CMatrix u = kron(id2, rng.unitary(2));
    const ReferenceState rotated = ReferenceState::build({2, 2}, u * k * u.adjoint());
    const SpectralReport after = spectral_gap(
        DynamicsSpec::from_generator(
            davies_generator(rotated, {u * coupling * u.adjoint()}, KmsRateFamily{1.0}), true),
        rotated, GapMode::detailed_balance);

    CHECK(std::abs(base.gap_lambda - after.gap_lambda) <= 1e-9);
}
