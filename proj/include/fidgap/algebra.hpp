#pragma once

#include "fidgap/numkernel.hpp"

namespace fidgap {

// Bipartite split of the total algebra: dQ encoded-qubit dimensions times
// dB syndrome dimensions.
struct AlgebraShape {
    int dQ = 2;
    int dB = 1;

    int n() const { return dQ * dB; }
    void validate() const;
};

// Faithful Gibbs reference state omega = exp(-K)/Z together with everything
// derived from it: the square roots used by the GNS embedding and the
// eigendecomposition of the modular Hamiltonian K (inverse temperature
// already absorbed into K).
class ReferenceState {
public:
    ReferenceState() = default;  // empty until build() assigns it

    static ReferenceState build(const AlgebraShape& shape, const CMatrix& modular_hamiltonian,
                                double faithful_tol = 1e-10);

    const AlgebraShape& shape() const { return shape_; }
    const CMatrix& K() const { return k_; }
    const CMatrix& omega() const { return omega_; }
    const CMatrix& omega_half() const { return omega_half_; }
    const CMatrix& omega_inv_half() const { return omega_inv_half_; }
    const HermEig& k_eig() const { return k_eig_; }
    double faithful_tol() const { return faithful_tol_; }
    int n() const { return shape_.n(); }

    // omega(a) = tr(omega a).
    Complex expect(const CMatrix& a) const;

private:
    AlgebraShape shape_;
    CMatrix k_, omega_, omega_half_, omega_inv_half_;
    HermEig k_eig_;
    double faithful_tol_ = 1e-10;
};

// q (dQ x dQ) -> q tensor 1_B. Unital *-homomorphism into the total algebra.
CMatrix embed_Q(const CMatrix& q, const AlgebraShape& shape);

// omega_Q = tr_B(omega); throws NotFaithful when its smallest eigenvalue
// drops below faithful_tol * largest.
CMatrix restrict_to_Q(const ReferenceState& ref);

// <x, y>_omega = omega(x^dag y) and the induced norm.
Complex gns_inner(const CMatrix& x, const CMatrix& y, const ReferenceState& ref);
double gns_norm(const CMatrix& x, const ReferenceState& ref);

// Isometric embedding of the algebra into C^{n^2}: x -> vec(x omega^{1/2}).
CVector gns_embed(const CMatrix& x, const ReferenceState& ref);

// tau_z(a) = exp(izK) a exp(-izK) for complex z. Finite dimension makes every
// element analytic, so imaginary parts of z need no extra condition.
CMatrix modular_flow(const CMatrix& a, Complex z, const ReferenceState& ref);

// |omega(A tau_i(B)) - omega(B A)|, the KMS boundary identity residual.
double kms_check(const CMatrix& a, const CMatrix& b, const ReferenceState& ref);

// True when K commutes with every embedded Q element, i.e. the modular flow
// is trivial on Q (the assumption behind the tracial closed-form bound).
bool modular_trivial_on_Q(const ReferenceState& ref, double tol = 1e-10);

}  // namespace fidgap
