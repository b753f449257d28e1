#include "fidgap/prep.hpp"

#include <cmath>

namespace fidgap {

namespace {

void check_operation_normalization(const std::vector<CMatrix>& kraus, int n, double tol) {
    CMatrix sum = CMatrix::Zero(n, n);
    for (const CMatrix& a : kraus) {
        if (a.rows() != n || a.cols() != n) {
            throw DimensionMismatch("preparation: Kraus element does not match the algebra dimension");
        }
        sum += a.adjoint() * a;
    }
    if (max_abs(sum - CMatrix::Identity(n, n)) > tol) {
        throw InvariantViolation("preparation: sum_j a_j^dag a_j deviates from identity");
    }
}

}  // namespace

QubitTarget QubitTarget::from_psi(const CVector& psi, double tol) {
    if (std::abs(psi.norm() - 1.0) > tol) {
        throw InvariantViolation("QubitTarget: psi is not a unit vector");
    }
    QubitTarget t;
    t.psi = psi;
    t.sigma = psi * psi.adjoint();
    t.pure = true;
    return t;
}

QubitTarget QubitTarget::from_sigma(const CMatrix& sigma, double tol) {
    if (sigma.rows() != sigma.cols()) {
        throw DimensionMismatch("QubitTarget: sigma is not square");
    }
    if (!is_psd(sigma, tol) || std::abs(std::real(sigma.trace()) - 1.0) > tol ||
        std::abs(std::imag(sigma.trace())) > tol) {
        throw InvariantViolation("QubitTarget: sigma is not a trace-one PSD matrix");
    }
    QubitTarget t;
    t.sigma = 0.5 * (sigma + sigma.adjoint());
    t.pure = false;
    return t;
}

Preparation single_perturbation(const QubitTarget& target, const ReferenceState& ref) {
    const int dQ = ref.shape().dQ;
    if (target.sigma.rows() != dQ) {
        throw DimensionMismatch("single_perturbation: target does not match dQ");
    }
    const CMatrix omega_q = restrict_to_Q(ref);  // throws NotFaithful when degenerate
    const CMatrix a_q = mat_sqrt(target.sigma) * mat_inv_sqrt(omega_q);

    Preparation prep;
    prep.kind = PrepKind::single;
    prep.kraus = {embed_Q(a_q, ref.shape())};
    prep.target_sigma = target.sigma;

    const Complex norm = ref.expect(prep.kraus[0].adjoint() * prep.kraus[0]);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw InvariantViolation("single_perturbation: omega(a^dag a) != 1");
    }
    return prep;
}

Preparation replacement_operation(const QubitTarget& target, const ReferenceState& ref) {
    const int dQ = ref.shape().dQ;
    if (target.sigma.rows() != dQ) {
        throw DimensionMismatch("replacement_operation: target does not match dQ");
    }

    Preparation prep;
    prep.kind = PrepKind::replacement;
    prep.target_sigma = target.sigma;

    if (target.pure) {
        for (int j = 0; j < dQ; ++j) {
            CMatrix dyad = CMatrix::Zero(dQ, dQ);
            dyad.col(j) = target.psi;
            prep.kraus.push_back(embed_Q(dyad, ref.shape()));
        }
    } else {
        const HermEig eig = herm_eig(target.sigma);
        for (int k = 0; k < dQ; ++k) {
            const double p = std::max(eig.values[k], 0.0);
            if (p < 1e-14) continue;
            for (int j = 0; j < dQ; ++j) {
                CMatrix dyad = CMatrix::Zero(dQ, dQ);
                dyad.col(j) = std::sqrt(p) * eig.vectors.col(k);
                prep.kraus.push_back(embed_Q(dyad, ref.shape()));
            }
        }
    }
    check_operation_normalization(prep.kraus, ref.n(), 1e-10);
    return prep;
}

Preparation filtered_preparation(const CMatrix& a, double p, const ReferenceState& ref) {
    const int n = ref.n();
    if (a.rows() != n || a.cols() != n) {
        throw DimensionMismatch("filtered_preparation: operator does not match the algebra dimension");
    }
    if (p <= 0.0 || p > 1.0) {
        throw WeightTooLarge("filtered_preparation: weight p must lie in (0, 1]");
    }
    const CMatrix ada = a.adjoint() * a;
    const HermEig eig = herm_eig(ada);
    if (p * eig.values.maxCoeff() > 1.0 + 1e-12) {
        throw WeightTooLarge("filtered_preparation: p * ||a^dag a|| exceeds 1");
    }
    // (1 - p a^dag a)^{1/2}; clamp tiny negative eigenvalues at the boundary.
    const CMatrix rest = mat_func(CMatrix::Identity(n, n) - p * ada,
                                  [](double x) { return std::sqrt(std::max(x, 0.0)); });

    Preparation prep;
    prep.kind = PrepKind::filtered;
    prep.kraus = {std::sqrt(p) * a, rest};
    check_operation_normalization(prep.kraus, n, 1e-10);
    return prep;
}

Preparation custom_preparation(std::vector<CMatrix> kraus, const ReferenceState& ref) {
    check_operation_normalization(kraus, ref.n(), 1e-10);
    Preparation prep;
    prep.kind = PrepKind::custom;
    prep.kraus = std::move(kraus);
    // Restriction checked rather than assumed: record the implied target.
    prep.target_sigma = partial_trace_B(perturbed_state(prep, ref), ref.shape().dQ, ref.shape().dB);
    return prep;
}

CMatrix build_y(const CVector& psi, const ReferenceState& ref) {
    if (psi.size() != ref.shape().dQ) {
        throw DimensionMismatch("build_y: psi does not match dQ");
    }
    const CMatrix p_psi = embed_Q(psi * psi.adjoint(), ref.shape());
    const Complex floor = ref.expect(p_psi);
    return p_psi - floor * CMatrix::Identity(ref.n(), ref.n());
}

CMatrix build_x(const Preparation& prep, const ReferenceState& ref) {
    const int n = ref.n();
    CMatrix x = -CMatrix::Identity(n, n);
    for (const CMatrix& a : prep.kraus) {
        x += a * modular_flow(a.adjoint(), Complex(0, 1), ref);
    }
    if (std::abs(ref.expect(x)) > 1e-10) {
        throw InvariantViolation("build_x: omega(x) deviates from zero");
    }
    return x;
}

CMatrix perturbed_state(const Preparation& prep, const ReferenceState& ref) {
    const int n = ref.n();
    CMatrix state = CMatrix::Zero(n, n);
    for (const CMatrix& a : prep.kraus) state += a * ref.omega() * a.adjoint();
    if (std::abs(state.trace() - Complex(1.0)) > 1e-12) {
        throw InvariantViolation("perturbed_state: trace deviates from one");
    }
    return state;
}

}  // namespace fidgap
