#pragma once

#include "riccati/matrix_core.hpp"
#include "riccati/riccati_engine.hpp"
#include "riccati/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace riccati {

/// Diagnostics for the kernel L = Ker(I + Y*X) of a pair of contractive
/// solutions with commuting graph projections. The defects quantify the
/// structural identities that make L the "sign-flip locus" between Y and X:
/// Y = -X on L, Y = X on the complement, and X acts isometrically on L.
struct CommutingKernelReport {
    Subspace l;
    double commutator = 0.0;        // ||[Q_X, Q_Y]||_F of the graph projections
    double flip_defect = 0.0;       // ||(Y + X) B_L||_F
    double match_defect = 0.0;      // ||(Y - X) B_{L^perp}||_F
    double kernel_identity_gap = 0.0;     // L vs Ker(X+Y) ⊖ (Ker X ∩ Ker Y)
    double complement_identity_gap = 0.0; // L^perp vs Ker(X-Y)
    double unit_norm_defect_x = 0.0;      // ||(I - X*X) B_L||_F
    double unit_norm_defect_y = 0.0;      // ||(I - Y*Y) B_L||_F
};

/// The subspace data controlling how many contractive solutions share the
/// spectral base solution x: the kernel k on which x is norm-preserving and
/// the Riccati defect pairing vanishes, its largest subspace l_max reducing
/// both A0 and VX, and a deterministic decomposition of l_max into minimal
/// reducing components (the atoms of the solution lattice).
struct AdmissibleKernel {
    Subspace k;
    Subspace l_max;
    std::vector<Subspace> minimal_components;
};

struct ContractiveMember {
    Subspace l;      // the reducing subspace selecting this solution
    ComplexMatrix y; // = X (I - 2 P_l)
    double residual = 0.0;
};

/// The family of contractive solutions reachable from base_x through its
/// reducing lattice. lattice_only records that only the finite lattice of
/// minimal-component sums was emitted — when a component carries a
/// multiplicity the full family is a continuum, and sampling can expose more
/// members than the lattice does.
struct ContractiveFamily {
    ComplexMatrix base_x;
    bool lattice_only = true;
    std::vector<ContractiveMember> members;
};

struct SampleSpec {
    int count = 0;
    std::uint64_t seed = 0;
};

enum class UniquenessCriterion {
    strict_contraction, // ||Xu|| < ||u|| everywhere: the kernel k is forced trivial
    dissipative,        // Im(VX) is injective on the unit-norm kernel
    kernel_trivial,     // k = {0} established directly
    not_unique,
};

struct UniquenessReport {
    bool unique = false;
    UniquenessCriterion criterion = UniquenessCriterion::not_unique;
};

/// Kernel of I + Y*X for two contractive solutions whose graph projections
/// commute, plus the identity diagnostics. Throws NotContractive when either
/// operator exceeds norm 1, ProjectionsDontCommute when the hypothesis fails.
CommutingKernelReport commuting_pair_kernel(const ComplexMatrix& x, const ComplexMatrix& y,
                                            const TolerancePolicy& pol);

/// k, l_max and minimal components for a contractive solution x of b.
/// Throws NotContractive / NotASolution.
AdmissibleKernel admissible_kernel(const BlockOperator& b, const ComplexMatrix& x,
                                   const TolerancePolicy& pol);

/// Y = X (I - 2 P_l): flip x's sign on l, keep it elsewhere. l must lie in
/// the admissible kernel and reduce A0 and VX; each violated precondition is
/// named in the InvalidSubspace error.
ComplexMatrix construct_solution(const BlockOperator& b, const ComplexMatrix& x,
                                 const Subspace& l, const TolerancePolicy& pol);

/// All lattice solutions (sums of minimal components), plus optional random
/// reducing subspaces sampled from the commutant when `sample` is given.
/// x must be a contractive spectral solution (NotContractive / NotASolution /
/// NotSpectral otherwise); TooManyComponents caps the lattice at 2^20.
ContractiveFamily enumerate_contractive(const BlockOperator& b, const ComplexMatrix& x,
                                        const TolerancePolicy& pol,
                                        const std::optional<SampleSpec>& sample = std::nullopt);

/// Is x the only contractive solution? Decided by triviality of the
/// admissible kernel k; the criterion reports which sufficient test settled
/// it (strict contraction, dissipativity of VX on the unit-norm kernel, or
/// the kernel intersection computed directly).
UniquenessReport uniqueness(const BlockOperator& b, const ComplexMatrix& x,
                            const TolerancePolicy& pol);

/// The dual reducing subspace l* = X·l on the second summand; verifies the
/// dual kernel membership, that l* reduces A1 and V*X*, and that X*·l* maps
/// back onto l.
Subspace dual_map(const BlockOperator& b, const ComplexMatrix& x, const Subspace& l,
                  const TolerancePolicy& pol);

/// Invariance defects of the lifted subspace {u ⊕ Xu : u ∈ l} under
/// A = diag(A0, A1) and under B. Both vanish when l reduces the pair.
std::pair<double, double> lifted_invariance(const BlockOperator& b, const ComplexMatrix& x,
                                            const Subspace& l);

} // namespace riccati
