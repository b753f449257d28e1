#pragma once

#include <cstdint>
#include <random>

#include "fidgap/numkernel.hpp"

namespace fidgap {

// Seeded generator for the randomized invariant checks and the test suites.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double normal();
    Complex cnormal();

    // Complex Gaussian entries.
    CMatrix gaussian(int rows, int cols);
    // (G + G^dag)/2 with Gaussian G, scaled entrywise.
    CMatrix hermitian(int n, double scale = 1.0);
    // Haar-ish unitary via QR of a Gaussian matrix.
    CMatrix unitary(int n);
    // Normalized random vector.
    CVector unit_vector(int d);
    // Random full-rank density matrix.
    CMatrix density(int d);

private:
    std::mt19937_64 eng_;
};

}  // namespace fidgap
