#pragma once

#include "riccati/types.hpp"

#include <vector>

namespace riccati {

/// Closed subspace of C^n stored as an orthonormal basis (n x k, k >= 0).
/// Construction always re-orthonormalizes; raw spanning sets never escape.
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(Index ambient);
    static Subspace full(Index ambient);
    /// span{e_first, ..., e_{first+count-1}} with the canonical coordinate frame.
    static Subspace coordinates(Index ambient, Index first, Index count);
    /// Orthonormalize the columns of `spanning` (column-pivoted QR), truncating
    /// at the policy's rank cutoff.
    static Subspace from_span(const ComplexMatrix& spanning, const TolerancePolicy& pol);
    /// Adopt columns that are already orthonormal to working precision.
    static Subspace from_orthonormal(ComplexMatrix basis);

    Index ambient_dim() const { return ambient_; }
    Index dim() const { return basis_.cols(); }
    const ComplexMatrix& basis() const { return basis_; }
    bool is_zero() const { return dim() == 0; }

private:
    Subspace(Index ambient, ComplexMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

    Index ambient_ = 0;
    ComplexMatrix basis_; // ambient_ x k, orthonormal columns
};

struct HermitianEig {
    RealVector eigenvalues;           // ascending
    ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues
    std::vector<std::vector<int>> clusters; // partition of indices by cluster width
};

/// Eigendecomposition of a Hermitian matrix with eigenvalue clustering.
/// Gaps below pol.cluster_width(||H||) merge adjacent eigenvalues into one
/// cluster; clusters, not raw eigenvalues, define degeneracy downstream.
HermitianEig eig_hermitian(const ComplexMatrix& h, const TolerancePolicy& pol);

/// Numerical null space of m: span{x : ||Mx|| <= rank_rtol * sigma_max * ||x||}.
/// The zero matrix returns the full ambient (domain) space.
Subspace kernel(const ComplexMatrix& m, const TolerancePolicy& pol);

/// kernel() with an external magnitude scale for the cutoff. Needed when m is
/// a residual-like matrix (e.g. I - X*X for nearly unitary X) whose own
/// largest singular value is itself roundoff and cannot anchor rank decisions.
Subspace kernel_scaled(const ComplexMatrix& m, const TolerancePolicy& pol, double scale);

/// Numerical intersection via the kernel of stacked complementary projections.
Subspace intersect(const Subspace& a, const Subspace& b, const TolerancePolicy& pol);

/// Span of the union of two subspaces.
Subspace subspace_sum(const Subspace& a, const Subspace& b, const TolerancePolicy& pol);

/// Orthogonal complement within the ambient space. Exact unitary completion
/// of the stored basis; no rank decisions involved.
Subspace ortho_complement(const Subspace& s);

/// Orthogonal projection matrix basis * basis^*.
ComplexMatrix project(const Subspace& s);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);

double frobenius(const ComplexMatrix& m);

/// ||P_a - P_b||_F; zero iff the spans coincide.
double span_distance(const Subspace& a, const Subspace& b);

bool span_equal(const Subspace& a, const Subspace& b, double tol);

/// Frobenius norm of (I - P_s) M P_s: how far s is from being M-invariant.
double invariance_defect(const ComplexMatrix& m, const Subspace& s);

/// Image M * s, re-orthonormalized (rank-truncated by pol).
Subspace apply_to_subspace(const ComplexMatrix& m, const Subspace& s, const TolerancePolicy& pol);

/// {x : Mx in s}, computed as the kernel of (I - P_s) M.
Subspace preimage(const ComplexMatrix& m, const Subspace& s, const TolerancePolicy& pol,
                  double scale = 0.0);

} // namespace riccati
