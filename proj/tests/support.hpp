#pragma once

// Deterministic random matrices for tests. Everything is seeded explicitly so
// failures reproduce bit-for-bit across runs and machines.

#include "riccati/types.hpp"

#include <Eigen/Dense>

#include <random>

namespace test_support {

using riccati::Complex;
using riccati::ComplexMatrix;
using riccati::Index;

inline ComplexMatrix rand_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

inline ComplexMatrix rand_hermitian(Index n, std::uint64_t seed) {
    ComplexMatrix a = rand_matrix(n, n, seed);
    return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix rand_unitary(Index n, std::uint64_t seed) {
    ComplexMatrix a = rand_matrix(n, n, seed);
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    // Fix the phase ambiguity so the result is a deterministic function of the seed.
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        Complex d = r(j, j);
        double ad = std::abs(d);
        if (ad > 0) q.col(j) *= d / ad;
    }
    return q;
}

} // namespace test_support
