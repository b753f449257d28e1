#include "fidgap/algebra.hpp"

#include <cmath>

namespace fidgap {

void AlgebraShape::validate() const {
    if (dQ < 2) throw DimensionMismatch("AlgebraShape: dQ must be at least 2");
    if (dB < 1) throw DimensionMismatch("AlgebraShape: dB must be at least 1");
    if (n() > 32) throw DimensionMismatch("AlgebraShape: total dimension above 32 is unsupported");
}

ReferenceState ReferenceState::build(const AlgebraShape& shape, const CMatrix& modular_hamiltonian,
                                     double faithful_tol) {
    shape.validate();
    const int n = shape.n();
    if (modular_hamiltonian.rows() != n || modular_hamiltonian.cols() != n) {
        throw DimensionMismatch("ReferenceState: modular Hamiltonian does not match dQ*dB");
    }

    ReferenceState ref;
    ref.shape_ = shape;
    ref.faithful_tol_ = faithful_tol;
    ref.k_eig_ = herm_eig(modular_hamiltonian);
    ref.k_ = ref.k_eig_.vectors * ref.k_eig_.values.asDiagonal() * ref.k_eig_.vectors.adjoint();

    // Gibbs weights from the shifted spectrum; the shift cancels in omega.
    const double top = ref.k_eig_.values.minCoeff();
    RVector w(n);
    for (int i = 0; i < n; ++i) w[i] = std::exp(-(ref.k_eig_.values[i] - top));
    const double z = w.sum();
    w /= z;
    if (w.minCoeff() < faithful_tol * w.maxCoeff()) {
        throw NotFaithful("ReferenceState: Gibbs state is not faithful at the requested tolerance");
    }

    const CMatrix& u = ref.k_eig_.vectors;
    ref.omega_ = u * w.asDiagonal() * u.adjoint();
    ref.omega_half_ = u * w.cwiseSqrt().asDiagonal() * u.adjoint();
    ref.omega_inv_half_ = u * w.cwiseSqrt().cwiseInverse().asDiagonal() * u.adjoint();

    // Modular invariance [K, omega] = 0 holds by construction; keep the check loud.
    if (max_abs(ref.k_ * ref.omega_ - ref.omega_ * ref.k_) >
        1e-12 * std::max(max_abs(ref.k_), 1.0)) {
        throw InvariantViolation("ReferenceState: [K, omega] != 0");
    }
    return ref;
}

Complex ReferenceState::expect(const CMatrix& a) const {
    if (a.rows() != n() || a.cols() != n()) {
        throw DimensionMismatch("expect: observable does not match the algebra dimension");
    }
    return (omega_ * a).trace();
}

CMatrix embed_Q(const CMatrix& q, const AlgebraShape& shape) {
    if (q.rows() != shape.dQ || q.cols() != shape.dQ) {
        throw DimensionMismatch("embed_Q: operator does not match dQ");
    }
    return kron(q, CMatrix::Identity(shape.dB, shape.dB));
}

CMatrix restrict_to_Q(const ReferenceState& ref) {
    CMatrix omega_q = partial_trace_B(ref.omega(), ref.shape().dQ, ref.shape().dB);
    const HermEig eig = herm_eig(omega_q);
    if (eig.values.minCoeff() < ref.faithful_tol() * eig.values.maxCoeff()) {
        throw NotFaithful("restrict_to_Q: omega_Q is not strictly positive at tolerance");
    }
    return omega_q;
}

Complex gns_inner(const CMatrix& x, const CMatrix& y, const ReferenceState& ref) {
    const int n = ref.n();
    if (x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n) {
        throw DimensionMismatch("gns_inner: operands do not match the algebra dimension");
    }
    return (ref.omega() * x.adjoint() * y).trace();
}

double gns_norm(const CMatrix& x, const ReferenceState& ref) {
    const double sq = std::real(gns_inner(x, x, ref));
    return std::sqrt(std::max(sq, 0.0));
}

CVector gns_embed(const CMatrix& x, const ReferenceState& ref) {
    return vec(x * ref.omega_half());
}

CMatrix modular_flow(const CMatrix& a, Complex z, const ReferenceState& ref) {
    const int n = ref.n();
    if (a.rows() != n || a.cols() != n) {
        throw DimensionMismatch("modular_flow: observable does not match the algebra dimension");
    }
    const HermEig& ke = ref.k_eig();
    const Complex iz = Complex(0, 1) * z;
    CVector phase(n), phase_inv(n);
    for (int i = 0; i < n; ++i) {
        phase[i] = std::exp(iz * ke.values[i]);
        phase_inv[i] = std::exp(-iz * ke.values[i]);
    }
    const CMatrix left = ke.vectors * phase.asDiagonal() * ke.vectors.adjoint();
    const CMatrix right = ke.vectors * phase_inv.asDiagonal() * ke.vectors.adjoint();
    return left * a * right;
}

double kms_check(const CMatrix& a, const CMatrix& b, const ReferenceState& ref) {
    const Complex lhs = ref.expect(a * modular_flow(b, Complex(0, 1), ref));
    const Complex rhs = ref.expect(b * a);
    return std::abs(lhs - rhs);
}

bool modular_trivial_on_Q(const ReferenceState& ref, double tol) {
    const int dQ = ref.shape().dQ;
    const double scale = std::max(max_abs(ref.K()), 1.0);
    for (int i = 0; i < dQ; ++i) {
        for (int j = 0; j < dQ; ++j) {
            CMatrix e = CMatrix::Zero(dQ, dQ);
            e(i, j) = 1.0;
            const CMatrix q = embed_Q(e, ref.shape());
            if (max_abs(ref.K() * q - q * ref.K()) > tol * scale) return false;
        }
    }
    return true;
}

}  // namespace fidgap
