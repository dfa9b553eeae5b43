#pragma once

#include "riccati/matrix_core.hpp"
#include "riccati/types.hpp"

#include <utility>

namespace riccati {

/// Canonical decomposition of C^n induced by an ordered pair of orthogonal
/// projections (P, Q). The ambient space splits into four "corner" subspaces
/// on which P and Q commute, plus a generic part on which they are in general
/// position. On the generic part the pair is unitarily equivalent to a direct
/// sum of 2x2 rotations through the principal angles theta.
///
/// Corner convention (first index: membership in Ran P, second: in Ran Q):
///   m11 = Ran P  ∩ Ran Q      m10 = Ran P  ∩ Ker Q
///   m01 = Ker P  ∩ Ran Q      m00 = Ker P  ∩ Ker Q
/// m0_prime is the generic slice of Ran P, m1_prime the generic slice of
/// Ker P; they always have equal dimension m = theta.size().
///
/// The bases stored in m0_prime/m1_prime are the frames in which theta and w
/// are expressed: with F0 = m0_prime.basis(), F1 = m1_prime.basis(),
/// G = F1 * w^* pairs each angle with its partner direction, and
///   Q = P_m11 + P_m01 + F0 cos²Θ F0* + F0 sinΘcosΘ G* + G sinΘcosΘ F0* + G sin²Θ G*.
struct CanonicalDecomposition {
    Subspace m00, m01, m10, m11;
    Subspace m0_prime, m1_prime;
    RealVector theta;      // ascending, strictly inside (0, pi/2)
    ComplexMatrix w;       // m x m unitary: m1_prime coordinates -> m0_prime coordinates
    double w_condition = 1.0; // spread of the polar factor's singular values
                              // (max/min of sin·cos over the angles); large
                              // values flag a nearly ill-posed pairing

    Index ambient() const { return m11.ambient_dim(); }
    Index generic_dim() const { return theta.size(); }
};

/// Decompose the pair of ranges (p, q). Throws DimensionMismatch on ambient
/// mismatch, DegenerateFrame when the generic halves cannot be paired (the
/// polar factor is numerically rank-deficient, or the two halves disagree in
/// dimension after corner extraction).
CanonicalDecomposition halmos_decompose(const Subspace& p, const Subspace& q,
                                        const TolerancePolicy& pol);

/// Rebuild the pair of projection matrices from the decomposition data alone.
std::pair<ComplexMatrix, ComplexMatrix> reconstruct(const CanonicalDecomposition& d);

/// max sin(theta) — the operator norm of the generic-part difference Q' - P'.
/// Zero when the generic part is empty.
double sin_theta_distance(const CanonicalDecomposition& d);

/// ||P - Q||: 1 whenever m10 or m01 is nontrivial, otherwise sin_theta_distance.
double projection_distance(const CanonicalDecomposition& d);

} // namespace riccati
