#pragma once

#include "riccati/matrix_core.hpp"
#include "riccati/subspace_geometry.hpp"
#include "riccati/types.hpp"

#include <optional>
#include <string>
#include <utility>

namespace riccati {

/// Result of testing whether Ran Q is the graph of an operator from Ran P to
/// Ker P. When it is, `x` holds that operator's matrix in the report's frames:
/// column coordinates over h0_frame (a basis of Ran P), row coordinates over
/// h1_frame (a basis of Ker P).
struct GraphReport {
    bool is_graph = false;
    std::optional<ComplexMatrix> x; // (n - dim P) x dim P
    double norm_x = 0.0;            // ||X|| = tan of the largest principal angle
    double dist = 0.0;              // ||P - Q||
    Subspace ker_x;                 // directions of Ran P fixed by Q (angle 0)
    Subspace coker_x;               // directions of Ker P untouched by Q
    std::string reason;             // empty iff is_graph
    ComplexMatrix h0_frame;         // n x dim P
    ComplexMatrix h1_frame;         // n x (n - dim P)
};

/// Decide graph status of Ran Q over the base Ran P and extract the angular
/// operator via the canonical decomposition (tan of the principal angles in
/// the paired frames). Frames are taken from p's stored basis and its
/// computed complement.
GraphReport analyze_graph(const Subspace& p, const Subspace& q, const TolerancePolicy& pol);

/// Same analysis against the coordinate splitting C^n = C^n0 ⊕ C^n1: frames
/// are exactly the identity blocks, so `x` comes out in plain block
/// coordinates. This is the entry point the Riccati solver uses.
GraphReport analyze_graph_split(Index n0, const Subspace& q, const TolerancePolicy& pol);

/// Orthogonal projection onto the graph of x over the coordinate splitting:
/// [[ (I+X*X)^{-1},   (I+X*X)^{-1} X* ],
///  [ X (I+X*X)^{-1}, X (I+X*X)^{-1} X* ]]
/// computed with a positive-definite solve, never an explicit inverse.
ComplexMatrix graph_projection(Index n0, const ComplexMatrix& x);

/// Orthonormal basis of the graph {u ⊕ Xu} itself.
Subspace graph_subspace(Index n0, const ComplexMatrix& x, const TolerancePolicy& pol);

/// Orthocomplement of the graph; verified against its closed form, the graph
/// of -X* over the complementary summand.
Subspace graph_complement(Index n0, const ComplexMatrix& x, const TolerancePolicy& pol);

/// The two norm identities tying ||X|| to the projection distance:
/// dist = ||X||/sqrt(1+||X||^2) and back again. Returns (dist, recovered_norm).
std::pair<double, double> norm_identities(const ComplexMatrix& x);

} // namespace riccati
