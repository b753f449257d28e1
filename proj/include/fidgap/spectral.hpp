#pragma once

#include <functional>

#include "fidgap/dynamics.hpp"

namespace fidgap {

// Matrix of a Heisenberg action on the GNS space, i.e. M with
// vec(Lambda(x) omega^{1/2}) = M vec(x omega^{1/2}), together with the image
// u = vec(omega^{1/2}) of the identity (a unit vector).
struct GnsOperator {
    CMatrix matrix;
    CVector u;
};

// Similarity transform between the ordinary vec representation and the GNS
// one: M = (conj(omega^{1/2}) kron 1) S (conj(omega^{-1/2}) kron 1).
CMatrix gns_similarity(const CMatrix& superop, const ReferenceState& ref);
CMatrix gns_similarity_inverse(const CMatrix& gns_matrix, const ReferenceState& ref);

GnsOperator to_gns_matrix(const CMatrix& ordinary_superop, const ReferenceState& ref);

// Generic route through basis application; used to cross-check the direct
// superoperator formulas.
GnsOperator gns_of_action(const std::function<CMatrix(const CMatrix&)>& action,
                          const ReferenceState& ref);

// GNS matrix of Lambda_t for a dynamics spec, and of a Lindblad generator
// (full action or the dissipative slot alone).
GnsOperator gns_of_spec(const DynamicsSpec& spec, double t, const ReferenceState& ref);
GnsOperator gns_of_generator(const LindbladGenerator& gen, const ReferenceState& ref,
                             bool dissipative_only);

// Orthonormal basis of the complement of u, built by Gram-Schmidt from u
// against the standard basis (skipping the largest component of u), with one
// re-orthogonalization pass. Deterministic ordering.
CMatrix complement_basis(const CVector& u);

// Decomposition of M against u and its complement. phi_residual is the norm
// of the coupling row that must vanish for invariant unital maps; tilde is
// the compression to the complement.
struct BlockDecomposition {
    double phi_residual = 0.0;
    CMatrix tilde;
    CMatrix basis;  // n^2 x (n^2 - 1), columns orthonormal, all orthogonal to u
};

BlockDecomposition block_decompose(const GnsOperator& op);

// 1 - (largest singular value); nonnegative up to tolerance for contractions.
double contraction_check(const CMatrix& tilde);

enum class GapMode { detailed_balance, symmetrized };

struct SpectralReport {
    GapMode mode = GapMode::symmetrized;
    double gap_gamma = 0.0;        // smallest eigenvalue of -(L + L*)/2 on the complement
    double gap_lambda = 0.0;       // smallest eigenvalue of -L_dis on the complement
    bool lambda_available = false;
    bool valid = false;            // a usable decay certificate exists
    int kernel_dim_on_complement = 0;
    double phi_residual = 0.0;
    double contraction_margin = 0.0;
    DetailedBalanceReport db;
    bool db_available = false;
};

// Spectral gap extraction. detailed_balance mode requires the detailed
// balance check to pass (NotDetailedBalance otherwise) and reports the gap
// lambda of -L_dis; symmetrized mode reports the rate gamma that certifies
// exponential norm decay for the generated semigroup. Unitary and map specs
// yield valid=false reports with diagnostics only.
SpectralReport spectral_gap(const DynamicsSpec& spec, const ReferenceState& ref, GapMode mode);

// Rate feeding the decay bound: lambda when available, else gamma.
double certified_rate(const SpectralReport& report, std::string* source = nullptr);

}  // namespace fidgap
