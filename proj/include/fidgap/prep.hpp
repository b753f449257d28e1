#pragma once

#include <vector>

#include "fidgap/algebra.hpp"

namespace fidgap {

// A pure target vector or a mixed target density matrix on Q.
struct QubitTarget {
    CVector psi;    // empty unless pure
    CMatrix sigma;  // always populated (|psi><psi| for pure targets)
    bool pure = false;

    static QubitTarget from_psi(const CVector& psi, double tol = 1e-12);
    static QubitTarget from_sigma(const CMatrix& sigma, double tol = 1e-10);
};

enum class PrepKind { single, replacement, filtered, custom };

// A preparation is a list of Kraus operators {a_j} on the total algebra.
// kind=single carries one element normalized as omega(a^dag a) = 1; the
// operation kinds satisfy sum_j a_j^dag a_j = 1.
struct Preparation {
    PrepKind kind = PrepKind::custom;
    std::vector<CMatrix> kraus;
    CMatrix target_sigma;  // dQ x dQ when a target is defined, else empty

    bool has_target() const { return target_sigma.size() > 0; }
};

// Single-element perturbation a = embed(sigma^{1/2} omega_Q^{-1/2}); the
// perturbed state restricts to sigma on Q for any faithful omega.
Preparation single_perturbation(const QubitTarget& target, const ReferenceState& ref);

// Kraus set realizing Phi(q) = tr(sigma q) 1. Pure targets use {|psi><j|};
// mixed targets use the sigma eigendecomposition dyads sqrt(p_k) |phi_k><j|.
Preparation replacement_operation(const QubitTarget& target, const ReferenceState& ref);

// Two-element operation {sqrt(p) a, (1 - p a^dag a)^{1/2}} whose first branch
// post-selects the single-element perturbation with weight p.
Preparation filtered_preparation(const CMatrix& a, double p, const ReferenceState& ref);

// Arbitrary Kraus list; normalization is verified and the restriction of the
// perturbed state is recorded as the implied target.
Preparation custom_preparation(std::vector<CMatrix> kraus, const ReferenceState& ref);

// y = P_psi - omega(P_psi), centred.
CMatrix build_y(const CVector& psi, const ReferenceState& ref);

// x = sum_j a_j tau_i(a_j^dag) - 1, centred through the KMS identity.
CMatrix build_x(const Preparation& prep, const ReferenceState& ref);

// omega' = sum_j a_j omega a_j^dag as a density matrix on the total space.
CMatrix perturbed_state(const Preparation& prep, const ReferenceState& ref);

}  // namespace fidgap
