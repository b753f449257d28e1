#include "fidgap/rng.hpp"

namespace fidgap {

double Rng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(eng_);
}

double Rng::normal() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(eng_);
}

Complex Rng::cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
}

CMatrix Rng::gaussian(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = cnormal();
    }
    return m;
}

CMatrix Rng::hermitian(int n, double scale) {
    const CMatrix g = gaussian(n, n);
    return scale * 0.5 * (g + g.adjoint());
}

CMatrix Rng::unitary(int n) {
    const CMatrix g = gaussian(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    // Fix phases so the factorization is unique.
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

CVector Rng::unit_vector(int d) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v[i] = cnormal();
    return v / v.norm();
}

CMatrix Rng::density(int d) {
    const CMatrix g = gaussian(d, d);
    CMatrix rho = g * g.adjoint() + 1e-3 * CMatrix::Identity(d, d);
    return rho / rho.trace();
}

}  // namespace fidgap
