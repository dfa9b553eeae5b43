#pragma once

#include "riccati/graph_subspaces.hpp"
#include "riccati/matrix_core.hpp"
#include "riccati/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace riccati {

/// Hermitian block operator
///   B = [[ A0, V  ],
///        [ V*, A1 ]]
/// on C^n0 ⊕ C^n1. A0 and A1 are the diagonal entries of the unperturbed
/// part, V the off-diagonal coupling (mapping the second summand into the
/// first).
struct BlockOperator {
    Index n0 = 0;
    Index n1 = 0;
    ComplexMatrix a0; // n0 x n0, Hermitian
    ComplexMatrix a1; // n1 x n1, Hermitian
    ComplexMatrix v;  // n0 x n1

    Index dim() const { return n0 + n1; }
    ComplexMatrix assembled() const;
    /// Shape and Hermiticity checks; throws DimensionMismatch / NotHermitian.
    void validate(const TolerancePolicy& pol) const;
};

/// A candidate solution X of A1 X - X A0 - X V X + V* = 0, together with its
/// classification. X's graph {u ⊕ Xu} is B-invariant exactly when the
/// residual vanishes; it is *spectral* when it is spanned by whole eigenvalue
/// clusters of B, which is the finite-dimensional test for being an isolated
/// solution.
struct RiccatiSolution {
    ComplexMatrix x;                    // n1 x n0
    double residual = 0.0;              // Frobenius norm of the Riccati defect
    bool is_spectral = false;
    std::optional<bool> is_isolated;    // known only when spectrality is settled
    bool is_contractive = false;        // op_norm(x) <= 1 + rank_rtol
    std::vector<int> selected_spectrum; // indices of the clusters spanning the
                                        // graph, ascending; empty if not spectral
};

/// Frobenius norm of A1 X - X A0 - X V X + V*.
double residual(const BlockOperator& b, const ComplexMatrix& x);

/// (residual, ||(I-Q) B Q||_F) for Q the graph projection of x. The two
/// defects vanish together: the graph is B-invariant iff x solves.
std::pair<double, double> invariance_check(const BlockOperator& b, const ComplexMatrix& x);

/// Enumerate all solutions whose graphs are spectral subspaces of B: for
/// every subset of eigenvalue clusters with total multiplicity n0, test
/// whether the spanned invariant subspace is a graph over the first summand.
/// Results are sorted by ascending operator norm of x (ties by cluster
/// subset). Throws TooManyClusters if B has more than 20 clusters.
std::vector<RiccatiSolution> solve_spectral(const BlockOperator& b, const TolerancePolicy& pol);

/// True iff q is spanned by whole eigenvalue clusters: dim(q ∩ E) ∈ {0, dim E}
/// for every cluster eigenspace E. Throws NotInvariant when q is not even
/// B-invariant to tolerance.
bool is_spectral(const BlockOperator& b, const Subspace& q, const TolerancePolicy& pol);

/// For a non-spectral solution, produce a genuinely different nearby solution
/// by rotating the partially-selected eigenvalue cluster through the angle
/// epsilon; returns (y, ||y - x||_F). Returns nothing when the solution is
/// spectral — that absence is the isolation certificate.
std::optional<std::pair<ComplexMatrix, double>> isolation_witness(const BlockOperator& b,
                                                                  const RiccatiSolution& sol,
                                                                  const TolerancePolicy& pol,
                                                                  double epsilon = 1e-3);

/// Classify an arbitrary candidate x: residual, contractivity, spectrality of
/// its graph (when the graph is B-invariant), isolation when decidable.
RiccatiSolution classify(const BlockOperator& b, const ComplexMatrix& x,
                         const TolerancePolicy& pol);

} // namespace riccati
