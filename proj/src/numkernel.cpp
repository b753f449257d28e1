#include "fidgap/numkernel.hpp"

#include <cmath>

namespace fidgap {

double max_abs(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol * std::max(max_abs(m), 1e-300);
}

bool is_unitary(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
    return max_abs(m.adjoint() * m - id) <= tol;
}

bool is_psd(const CMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()),
                                              Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    return es.eigenvalues().minCoeff() >= -tol * std::max(max_abs(m), 1.0);
}

HermEig herm_eig(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("herm_eig: matrix is not square");
    }
    const double scale = max_abs(m);
    if (max_abs(m - m.adjoint()) > tol * std::max(scale, 1e-300)) {
        throw NotHermitian("herm_eig: input deviates from its adjoint beyond tolerance");
    }
    // Symmetrize first so the solver sees an exactly Hermitian matrix.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NoConvergence("herm_eig: eigensolver did not converge");
    }
    return HermEig{es.eigenvalues(), es.eigenvectors()};
}

CMatrix mat_func(const CMatrix& m, const std::function<double(double)>& f,
                 double pos_floor, double tol) {
    const HermEig eig = herm_eig(m, tol);
    if (pos_floor > 0.0) {
        const double top = eig.values.maxCoeff();
        if (eig.values.minCoeff() <= pos_floor * std::max(top, 0.0)) {
            throw SingularInput("mat_func: eigenvalue below positivity floor for a singular function");
        }
    }
    RVector fv(eig.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(eig.values[i]);
    return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

CMatrix mat_exp_herm(const CMatrix& m) {
    return mat_func(m, [](double x) { return std::exp(x); });
}

CMatrix mat_sqrt(const CMatrix& m) {
    return mat_func(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix mat_inv_sqrt(const CMatrix& m, double pos_floor) {
    return mat_func(m, [](double x) { return 1.0 / std::sqrt(x); }, pos_floor);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix partial_trace_B(const CMatrix& m, int dQ, int dB) {
    const int n = dQ * dB;
    if (m.rows() != n || m.cols() != n) {
        throw DimensionMismatch("partial_trace_B: matrix does not match dQ*dB");
    }
    CMatrix out = CMatrix::Zero(dQ, dQ);
    for (int i = 0; i < dQ; ++i) {
        for (int j = 0; j < dQ; ++j) {
            Complex s = 0.0;
            for (int b = 0; b < dB; ++b) s += m(i * dB + b, j * dB + b);
            out(i, j) = s;
        }
    }
    return out;
}

CMatrix partial_trace_Q(const CMatrix& m, int dQ, int dB) {
    const int n = dQ * dB;
    if (m.rows() != n || m.cols() != n) {
        throw DimensionMismatch("partial_trace_Q: matrix does not match dQ*dB");
    }
    CMatrix out = CMatrix::Zero(dB, dB);
    for (int i = 0; i < dB; ++i) {
        for (int j = 0; j < dB; ++j) {
            Complex s = 0.0;
            for (int q = 0; q < dQ; ++q) s += m(q * dB + i, q * dB + j);
            out(i, j) = s;
        }
    }
    return out;
}

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
        throw DimensionMismatch("unvec: vector length does not match rows*cols");
    }
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix expm_dense(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("expm_dense: matrix is not square");
    }
    const Eigen::Index n = a.rows();
    // Scale so the 1-norm is at most 1/2, then square back.
    double nrm = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    while (nrm > 0.5 && s < 64) {
        nrm *= 0.5;
        ++s;
    }
    const CMatrix b = a / std::ldexp(1.0, s);
    CMatrix term = CMatrix::Identity(n, n);
    CMatrix sum = term;
    for (int k = 1; k <= 64; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.norm() <= kExpmTruncTol * sum.norm()) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace fidgap
