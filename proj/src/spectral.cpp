#include "fidgap/spectral.hpp"

#include <cmath>
#include <string>

namespace fidgap {

CMatrix gns_similarity(const CMatrix& superop, const ReferenceState& ref) {
    const int n = ref.n();
    if (superop.rows() != static_cast<Eigen::Index>(n) * n || superop.rows() != superop.cols()) {
        throw DimensionMismatch("gns_similarity: superoperator does not match n^2");
    }
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix w = kron(ref.omega_half().conjugate(), id);
    const CMatrix w_inv = kron(ref.omega_inv_half().conjugate(), id);
    return w * superop * w_inv;
}

CMatrix gns_similarity_inverse(const CMatrix& gns_matrix, const ReferenceState& ref) {
    const int n = ref.n();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix w = kron(ref.omega_half().conjugate(), id);
    const CMatrix w_inv = kron(ref.omega_inv_half().conjugate(), id);
    return w_inv * gns_matrix * w;
}

GnsOperator to_gns_matrix(const CMatrix& ordinary_superop, const ReferenceState& ref) {
    GnsOperator op;
    op.matrix = gns_similarity(ordinary_superop, ref);
    op.u = vec(ref.omega_half());
    return op;
}

GnsOperator gns_of_action(const std::function<CMatrix(const CMatrix&)>& action,
                          const ReferenceState& ref) {
    const int n = ref.n();
    CMatrix superop(n * n, n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            CMatrix e = CMatrix::Zero(n, n);
            e(i, j) = 1.0;
            superop.col(static_cast<Eigen::Index>(j) * n + i) = vec(action(e));
        }
    }
    return to_gns_matrix(superop, ref);
}

GnsOperator gns_of_spec(const DynamicsSpec& spec, double t, const ReferenceState& ref) {
    switch (spec.kind) {
        case DynKind::unitary: {
            const HermEig& ke = ref.k_eig();
            CVector phase(ref.n());
            for (int i = 0; i < ref.n(); ++i) {
                phase[i] = std::exp(Complex(0, t) * ke.values[i]);
            }
            const CMatrix u_t = ke.vectors * phase.asDiagonal() * ke.vectors.adjoint();
            return to_gns_matrix(superop_of_conjugation(u_t), ref);
        }
        case DynKind::map: {
            const CMatrix one = spec.map.superop.size() > 0 ? spec.map.superop
                                                            : superop_of_kraus(spec.map.kraus);
            const long long steps = std::llround(t);
            if (std::abs(t - static_cast<double>(steps)) > 1e-9 || steps < 0) {
                throw InvalidTime("gns_of_spec: single-step maps evolve over integer times");
            }
            CMatrix s = CMatrix::Identity(one.rows(), one.cols());
            for (long long i = 0; i < steps; ++i) s = one * s;
            return to_gns_matrix(s, ref);
        }
        case DynKind::semigroup: {
            if (t < 0.0) throw NegativeTime("gns_of_spec: negative time for a semigroup");
            const CMatrix s = superop_of_generator(spec.gen, false);
            return to_gns_matrix(expm_dense(t * s), ref);
        }
    }
    throw Error("gns_of_spec: unreachable");
}

GnsOperator gns_of_generator(const LindbladGenerator& gen, const ReferenceState& ref,
                             bool dissipative_only) {
    return to_gns_matrix(superop_of_generator(gen, dissipative_only), ref);
}

CMatrix complement_basis(const CVector& u) {
    const Eigen::Index n = u.size();
    if (std::abs(u.norm() - 1.0) > 1e-8) {
        throw InvariantViolation("complement_basis: reference vector is not normalized");
    }
    Eigen::Index skip = 0;
    u.cwiseAbs().maxCoeff(&skip);

    CMatrix basis(n, n - 1);
    Eigen::Index col = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == skip) continue;
        CVector v = CVector::Zero(n);
        v[k] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            v -= u * u.dot(v);
            for (Eigen::Index c = 0; c < col; ++c) {
                v -= basis.col(c) * basis.col(c).dot(v);
            }
        }
        const double norm = v.norm();
        if (norm < 1e-8) {
            throw InvariantViolation("complement_basis: degenerate direction in Gram-Schmidt");
        }
        basis.col(col++) = v / norm;
    }
    return basis;
}

BlockDecomposition block_decompose(const GnsOperator& op) {
    BlockDecomposition dec;
    dec.basis = complement_basis(op.u);
    const CMatrix coupling = op.u.adjoint() * op.matrix * dec.basis;
    dec.phi_residual = coupling.norm();
    dec.tilde = dec.basis.adjoint() * op.matrix * dec.basis;
    return dec;
}

double contraction_check(const CMatrix& tilde) {
    Eigen::BDCSVD<CMatrix> svd(tilde);
    return 1.0 - svd.singularValues()(0);
}

namespace {

// Eigenvalues of -(A + A^dag)/2 compressed to the complement basis, ascending.
RVector negative_symmetrized_spectrum(const CMatrix& m, const CMatrix& basis) {
    const CMatrix a = basis.adjoint() * m * basis;
    const CMatrix sym = -0.5 * (a + a.adjoint());
    return herm_eig(sym, 1e-6).values;
}

int count_kernel(const RVector& spectrum, double tol) {
    int k = 0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        if (spectrum[i] < tol) ++k;
    }
    return k;
}

}  // namespace

SpectralReport spectral_gap(const DynamicsSpec& spec, const ReferenceState& ref, GapMode mode) {
    SpectralReport report;
    report.mode = mode;

    if (spec.kind != DynKind::semigroup) {
        // No generator: report block diagnostics of the map at t = 1, no certificate.
        const GnsOperator op = gns_of_spec(spec, 1.0, ref);
        const BlockDecomposition dec = block_decompose(op);
        report.phi_residual = dec.phi_residual;
        report.contraction_margin = contraction_check(dec.tilde);
        report.gap_gamma = 0.0;
        report.valid = false;
        // Undamped directions of the one-step compression.
        Eigen::BDCSVD<CMatrix> svd(dec.tilde);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) > 1.0 - 1e-10) ++report.kernel_dim_on_complement;
        }
        return report;
    }

    const GnsOperator full = gns_of_generator(spec.gen, ref, false);
    const BlockDecomposition dec = block_decompose(full);
    report.phi_residual = dec.phi_residual;

    const RVector full_spectrum = negative_symmetrized_spectrum(full.matrix, dec.basis);
    report.gap_gamma = full_spectrum.minCoeff();

    if (mode == GapMode::detailed_balance) {
        report.db = detailed_balance_check(spec.gen, ref);
        report.db_available = true;
        if (!report.db.pass()) {
            throw NotDetailedBalance("spectral_gap: detailed balance check failed");
        }
        const GnsOperator dis = gns_of_generator(spec.gen, ref, true);
        const CMatrix a = dec.basis.adjoint() * dis.matrix * dec.basis;
        if ((a - a.adjoint()).norm() > 1e-9 * std::max(a.norm(), 1e-300)) {
            throw NotDetailedBalance("spectral_gap: dissipative compression is not Hermitian");
        }
        const RVector dis_spectrum = negative_symmetrized_spectrum(dis.matrix, dec.basis);
        report.gap_lambda = std::max(dis_spectrum.minCoeff(), 0.0);
        report.lambda_available = true;
        report.kernel_dim_on_complement = count_kernel(dis_spectrum, 1e-10);
        report.valid = dis_spectrum.minCoeff() > -1e-12;
    } else {
        report.kernel_dim_on_complement = count_kernel(full_spectrum, 1e-10);
        report.valid = report.gap_gamma > 0.0;
    }

    const CMatrix propagated = expm_dense(full.matrix);
    const GnsOperator at_one{propagated, full.u};
    report.contraction_margin = contraction_check(block_decompose(at_one).tilde);
    return report;
}

double certified_rate(const SpectralReport& report, std::string* source) {
    if (!report.valid) {
        throw InvalidGap("certified_rate: the report carries no valid decay certificate");
    }
    if (report.lambda_available) {
        if (source) *source = "lambda";
        return report.gap_lambda;
    }
    if (source) *source = "gamma";
    return report.gap_gamma;
}

}  // namespace fidgap
