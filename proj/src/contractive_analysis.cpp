#include "riccati/contractive_analysis.hpp"

#include "riccati/graph_subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <utility>

namespace riccati {

namespace {

void check_contraction(const ComplexMatrix& m, const TolerancePolicy& pol, const char* label) {
    const double nm = op_norm(m);
    if (nm > 1.0 + pol.rank_rtol) {
        std::ostringstream os;
        os << label << " has norm " << nm << ", which exceeds 1";
        throw NotContractive(os.str());
    }
}

void check_solution(const BlockOperator& b, const ComplexMatrix& x, const TolerancePolicy& pol) {
    b.validate(pol);
    if (x.rows() != b.n1 || x.cols() != b.n0) {
        std::ostringstream os;
        os << "solution block is " << x.rows() << "x" << x.cols() << ", expected " << b.n1 << "x"
           << b.n0;
        throw DimensionMismatch(os.str());
    }
    const double res = residual(b, x);
    const double bound = pol.residual_bound(op_norm(b.assembled()), op_norm(x));
    if (res > bound) {
        std::ostringstream os;
        os << "Riccati residual " << res << " exceeds the acceptance bound " << bound;
        throw NotASolution(os.str());
    }
}

void check_spectral(const BlockOperator& b, const ComplexMatrix& x, const TolerancePolicy& pol) {
    if (!classify(b, x, pol).is_spectral) {
        throw NotSpectral(
            "the solution's graph is not a union of full eigenvalue clusters, so the "
            "family analysis does not apply");
    }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Basis, as d x d matrices, of {Z : ZM = MZ for every M in ops}. Computed as
/// the joint kernel of the stacked Sylvester maps Z -> ZM - MZ in vectorized
/// (column-major) form: vec(ZM - MZ) = (M^T (x) I - I (x) M) vec(Z).
std::vector<ComplexMatrix> commutant_basis(const std::vector<ComplexMatrix>& ops,
                                           const TolerancePolicy& pol) {
    const Index d = ops.front().rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix sys(static_cast<Index>(ops.size()) * d * d, d * d);
    double scale = 0.0;
    for (std::size_t m = 0; m < ops.size(); ++m) {
        sys.block(static_cast<Index>(m) * d * d, 0, d * d, d * d) =
            kron(ops[m].transpose(), id) - kron(id, ops[m]);
        scale = std::max(scale, op_norm(ops[m]));
    }
    const Subspace null_space = kernel_scaled(sys, pol, scale);
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(null_space.dim()));
    for (Index j = 0; j < null_space.dim(); ++j) {
        const ComplexVector v = null_space.basis().col(j);
        basis.emplace_back(Eigen::Map<const ComplexMatrix>(v.data(), d, d));
    }
    return basis;
}

/// A Hermitian element of the span of `basis` with pseudo-random coefficients.
/// Splitting each basis matrix into Hermitian and skew parts keeps the draw
/// inside the commutant (which is closed under adjoints here, because the op
/// list always contains each operator together with its adjoint).
ComplexMatrix random_hermitian_element(const std::vector<ComplexMatrix>& basis,
                                       std::mt19937_64& rng) {
    const Index d = basis.front().rows();
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (const ComplexMatrix& z : basis) {
        const ComplexMatrix herm = 0.5 * (z + z.adjoint());
        const ComplexMatrix skew = Complex(0.0, -0.5) * (z - z.adjoint());
        if (herm.norm() > 1e-14) h += gauss(rng) * (herm / herm.norm());
        if (skew.norm() > 1e-14) h += gauss(rng) * (skew / skew.norm());
    }
    return h;
}

/// Recursive simultaneous block diagonalization. `ops` are the operators
/// restricted to the span of `frame` (orthonormal, ambient x d); minimal
/// invariant-for-all components are appended to `out` as ambient subspaces.
/// A generic Hermitian element of the commutant has eigenspaces that are
/// invariant under every op; splitting along its eigenvalue clusters and
/// recursing terminates because each split strictly reduces the dimension.
void split_components(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& frame,
                      const TolerancePolicy& pol, int depth, std::vector<Subspace>& out) {
    const Index d = frame.cols();
    if (d == 0) return;
    if (d == 1) {
        out.push_back(Subspace::from_orthonormal(frame));
        return;
    }
    const auto basis = commutant_basis(ops, pol);
    if (basis.size() <= 1) {
        // Commutant is just the scalars: the block is irreducible.
        out.push_back(Subspace::from_orthonormal(frame));
        return;
    }
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(depth));
    for (int attempt = 0; attempt < 8; ++attempt) {
        ComplexMatrix h = random_hermitian_element(basis, rng);
        if (h.norm() < 1e-14) continue;
        h /= op_norm(h);
        const HermitianEig eig = eig_hermitian(h, pol);
        if (eig.clusters.size() < 2) continue; // accidental near-scalar draw, retry
        for (const auto& cluster : eig.clusters) {
            ComplexMatrix u(d, static_cast<Index>(cluster.size()));
            for (std::size_t c = 0; c < cluster.size(); ++c)
                u.col(static_cast<Index>(c)) = eig.eigenvectors.col(cluster[c]);
            std::vector<ComplexMatrix> sub;
            sub.reserve(ops.size());
            for (const ComplexMatrix& m : ops) sub.push_back(u.adjoint() * m * u);
            split_components(sub, frame * u, pol, depth + 1, out);
        }
        return;
    }
    // Every generic draw collapsed to a scalar despite a nontrivial commutant;
    // refuse to loop and report the block as one component.
    out.push_back(Subspace::from_orthonormal(frame));
}

/// Shared precondition check for construct_solution / dual_map /
/// lifted_invariance: l must sit inside the admissible kernel and reduce both
/// A0 and VX. Violations are collected and named together.
void check_reducing(const BlockOperator& b, const ComplexMatrix& x, const Subspace& l,
                    const TolerancePolicy& pol) {
    if (l.ambient_dim() != b.n0) {
        std::ostringstream os;
        os << "subspace lives on C^" << l.ambient_dim() << " but the first summand is C^" << b.n0;
        throw DimensionMismatch(os.str());
    }
    if (l.dim() == 0) return;
    const ComplexMatrix& bl = l.basis();
    const double nx = op_norm(x);
    const double nv = op_norm(b.v);
    const double cols = std::sqrt(static_cast<double>(l.dim()));
    std::string violations;
    auto flag = [&violations](const char* what) {
        if (!violations.empty()) violations += "; ";
        violations += what;
    };

    const double unit_defect = (bl - x.adjoint() * (x * bl)).norm();
    if (unit_defect > pol.residual_atol * (1.0 + nx * nx) * cols)
        flag("the solution is not norm-preserving on it");
    const double pairing_defect = (x * (b.v * (x * bl)) - b.v.adjoint() * bl).norm();
    if (pairing_defect > pol.residual_atol * (1.0 + nv) * (1.0 + nx) * (1.0 + nx) * cols)
        flag("the Riccati defect pairing does not vanish on it");
    const ComplexMatrix vx = b.v * x;
    if (invariance_defect(b.a0, l) > pol.residual_atol * (1.0 + op_norm(b.a0)) * cols)
        flag("it is not invariant under the diagonal block");
    if (invariance_defect(vx, l) > pol.residual_atol * (1.0 + op_norm(vx)) * cols)
        flag("it is not invariant under the coupling composition");
    if (invariance_defect(vx.adjoint(), l) > pol.residual_atol * (1.0 + op_norm(vx)) * cols)
        flag("it is not invariant under the adjoint of the coupling composition");

    if (!violations.empty()) throw InvalidSubspace(violations);
}

} // namespace

CommutingKernelReport commuting_pair_kernel(const ComplexMatrix& x, const ComplexMatrix& y,
                                            const TolerancePolicy& pol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        std::ostringstream os;
        os << "solutions have shapes " << x.rows() << "x" << x.cols() << " and " << y.rows() << "x"
           << y.cols();
        throw DimensionMismatch(os.str());
    }
    check_contraction(x, pol, "first operator");
    check_contraction(y, pol, "second operator");
    const double nx = op_norm(x);
    const double ny = op_norm(y);
    const Index n0 = x.cols();

    const ComplexMatrix qx = graph_projection(n0, x);
    const ComplexMatrix qy = graph_projection(n0, y);
    CommutingKernelReport rep;
    rep.commutator = (qx * qy - qy * qx).norm();
    const double comm_tol = pol.residual_atol * (1.0 + nx) * (1.0 + ny);
    if (rep.commutator > comm_tol) {
        std::ostringstream os;
        os << "graph projections have commutator norm " << rep.commutator << " (tolerance "
           << comm_tol << ")";
        throw ProjectionsDontCommute(os.str());
    }

    const ComplexMatrix gram = ComplexMatrix::Identity(n0, n0) + y.adjoint() * x;
    rep.l = kernel_scaled(gram, pol, 1.0 + nx * ny);

    const ComplexMatrix& bl = rep.l.basis();
    rep.flip_defect = ((y + x) * bl).norm();
    rep.match_defect = ((y - x) * ortho_complement(rep.l).basis()).norm();
    rep.unit_norm_defect_x = (bl - x.adjoint() * (x * bl)).norm();
    rep.unit_norm_defect_y = (bl - y.adjoint() * (y * bl)).norm();

    const Subspace ker_sum = kernel_scaled(x + y, pol, nx + ny);
    const Subspace joint = intersect(kernel(x, pol), kernel(y, pol), pol);
    const Subspace expected = intersect(ker_sum, ortho_complement(joint), pol);
    rep.kernel_identity_gap = span_distance(rep.l, expected);
    rep.complement_identity_gap =
        span_distance(ortho_complement(rep.l), kernel_scaled(x - y, pol, nx + ny));
    return rep;
}

AdmissibleKernel admissible_kernel(const BlockOperator& b, const ComplexMatrix& x,
                                   const TolerancePolicy& pol) {
    check_solution(b, x, pol);
    check_contraction(x, pol, "solution");
    const Index n0 = b.n0;
    const double nx = op_norm(x);

    const ComplexMatrix unit_gram = ComplexMatrix::Identity(n0, n0) - x.adjoint() * x;
    const Subspace k_unit = kernel_scaled(unit_gram, pol, 1.0 + nx * nx);
    const ComplexMatrix pairing = x * b.v * x - b.v.adjoint();
    const Subspace k_pair =
        kernel_scaled(pairing, pol, op_norm(b.v) * (1.0 + nx) * (1.0 + nx));

    AdmissibleKernel out;
    out.k = intersect(k_unit, k_pair, pol);

    const ComplexMatrix vx = b.v * x;
    const ComplexMatrix vxa = vx.adjoint();
    Subspace l = out.k;
    // Monotone fixpoint: cut away anything whose image under A0 or VX (or its
    // adjoint) escapes. Dimension strictly decreases until invariance holds.
    while (l.dim() > 0) {
        Subspace next = intersect(l, preimage(b.a0, l, pol), pol);
        next = intersect(next, preimage(vx, l, pol), pol);
        next = intersect(next, preimage(vxa, l, pol), pol);
        if (next.dim() >= l.dim()) break;
        l = std::move(next);
    }
    out.l_max = l;

    if (out.l_max.dim() > 0) {
        const ComplexMatrix& frame = out.l_max.basis();
        const std::vector<ComplexMatrix> ops = {
            frame.adjoint() * b.a0 * frame,
            frame.adjoint() * vx * frame,
            frame.adjoint() * vxa * frame,
        };
        split_components(ops, frame, pol, 0, out.minimal_components);
    }
    return out;
}

ComplexMatrix construct_solution(const BlockOperator& b, const ComplexMatrix& x,
                                 const Subspace& l, const TolerancePolicy& pol) {
    check_solution(b, x, pol);
    check_contraction(x, pol, "base solution");
    check_reducing(b, x, l, pol);
    return x * (ComplexMatrix::Identity(b.n0, b.n0) - 2.0 * project(l));
}

ContractiveFamily enumerate_contractive(const BlockOperator& b, const ComplexMatrix& x,
                                        const TolerancePolicy& pol,
                                        const std::optional<SampleSpec>& sample) {
    check_solution(b, x, pol);
    check_contraction(x, pol, "base solution");
    check_spectral(b, x, pol);

    const AdmissibleKernel ak = admissible_kernel(b, x, pol);
    const std::size_t m = ak.minimal_components.size();
    if (m > 20) {
        std::ostringstream os;
        os << "the reducing lattice has " << m
           << " minimal components; enumerating 2^" << m << " members exceeds the cap of 2^20";
        throw TooManyComponents(os.str());
    }

    ContractiveFamily fam;
    fam.base_x = x;
    fam.lattice_only = !sample.has_value();
    const double b_norm = op_norm(b.assembled());

    auto push_member = [&](const Subspace& l) {
        for (const ContractiveMember& mem : fam.members)
            if (span_equal(mem.l, l, 1e-8)) return;
        ContractiveMember mem;
        mem.l = l;
        mem.y = construct_solution(b, x, l, pol);
        mem.residual = residual(b, mem.y);
        if (mem.residual > pol.residual_bound(b_norm, op_norm(mem.y)))
            throw NumericalFailure("a constructed family member violates its residual bound");
        if (op_norm(mem.y) > 1.0 + pol.rank_rtol)
            throw NumericalFailure("a constructed family member is not contractive");
        fam.members.push_back(std::move(mem));
    };

    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
        Index total = 0;
        for (std::size_t c = 0; c < m; ++c)
            if (mask & (std::uint64_t(1) << c)) total += ak.minimal_components[c].dim();
        if (total == 0) {
            push_member(Subspace::zero(b.n0));
            continue;
        }
        ComplexMatrix basis(b.n0, total);
        Index at = 0;
        for (std::size_t c = 0; c < m; ++c) {
            if (!(mask & (std::uint64_t(1) << c))) continue;
            const Subspace& comp = ak.minimal_components[c];
            basis.middleCols(at, comp.dim()) = comp.basis();
            at += comp.dim();
        }
        push_member(Subspace::from_orthonormal(basis));
    }

    if (sample && ak.l_max.dim() > 0) {
        const ComplexMatrix& frame = ak.l_max.basis();
        const ComplexMatrix vx = b.v * x;
        const std::vector<ComplexMatrix> ops = {
            frame.adjoint() * b.a0 * frame,
            frame.adjoint() * vx * frame,
            frame.adjoint() * vx.adjoint() * frame,
        };
        const auto basis = commutant_basis(ops, pol);
        std::mt19937_64 rng(sample->seed);
        for (int draw = 0; draw < sample->count; ++draw) {
            ComplexMatrix h = random_hermitian_element(basis, rng);
            if (h.norm() < 1e-14) continue;
            h /= op_norm(h);
            const HermitianEig eig = eig_hermitian(h, pol);
            // Pick a random subset of eigenvalue clusters; their joint
            // eigenspace reduces every operator commuting with h.
            ComplexMatrix sel(frame.cols(), frame.cols());
            Index total = 0;
            for (const auto& cluster : eig.clusters) {
                if ((rng() & 1u) == 0) continue;
                for (int idx : cluster) sel.col(total++) = eig.eigenvectors.col(idx);
            }
            if (total == 0) continue;
            push_member(Subspace::from_orthonormal(frame * sel.leftCols(total)));
        }
    }
    return fam;
}

UniquenessReport uniqueness(const BlockOperator& b, const ComplexMatrix& x,
                            const TolerancePolicy& pol) {
    check_solution(b, x, pol);
    check_contraction(x, pol, "solution");
    check_spectral(b, x, pol);

    const Index n0 = b.n0;
    const double nx = op_norm(x);
    UniquenessReport rep;

    const ComplexMatrix unit_gram = ComplexMatrix::Identity(n0, n0) - x.adjoint() * x;
    const Subspace k_unit = kernel_scaled(unit_gram, pol, 1.0 + nx * nx);
    if (k_unit.dim() == 0) {
        rep.unique = true;
        rep.criterion = UniquenessCriterion::strict_contraction;
        return rep;
    }

    const ComplexMatrix pairing = x * b.v * x - b.v.adjoint();
    const Subspace k = intersect(
        k_unit, kernel_scaled(pairing, pol, op_norm(b.v) * (1.0 + nx) * (1.0 + nx)), pol);
    if (k.dim() > 0) {
        rep.unique = false;
        rep.criterion = UniquenessCriterion::not_unique;
        return rep;
    }

    rep.unique = true;
    const ComplexMatrix vx = b.v * x;
    const ComplexMatrix im_vx = Complex(0.0, -0.5) * (vx - vx.adjoint());
    const Subspace k_dissi =
        intersect(k_unit, kernel_scaled(im_vx, pol, op_norm(vx)), pol);
    rep.criterion = k_dissi.dim() == 0 ? UniquenessCriterion::dissipative
                                       : UniquenessCriterion::kernel_trivial;
    return rep;
}

Subspace dual_map(const BlockOperator& b, const ComplexMatrix& x, const Subspace& l,
                  const TolerancePolicy& pol) {
    check_solution(b, x, pol);
    check_contraction(x, pol, "base solution");
    check_reducing(b, x, l, pol);

    const Subspace ls = apply_to_subspace(x, l, pol);
    if (ls.dim() != l.dim())
        throw NumericalFailure("the solution collapsed the reducing subspace; the dual lost rank");
    if (l.dim() == 0) return ls;

    const double nx = op_norm(x);
    const double nv = op_norm(b.v);
    const double cols = std::sqrt(static_cast<double>(l.dim()));
    const ComplexMatrix& bs = ls.basis();

    const double unit = (bs - x * (x.adjoint() * bs)).norm();
    const double pairing =
        (x.adjoint() * (b.v.adjoint() * (x.adjoint() * bs)) - b.v * bs).norm();
    const ComplexMatrix vxs = b.v.adjoint() * x.adjoint();
    const double inv_a1 = invariance_defect(b.a1, ls);
    const double inv_vxs = std::max(invariance_defect(vxs, ls), invariance_defect(vxs.adjoint(), ls));
    const bool kernel_ok =
        unit <= pol.residual_atol * (1.0 + nx * nx) * cols &&
        pairing <= pol.residual_atol * (1.0 + nv) * (1.0 + nx) * (1.0 + nx) * cols;
    const bool reduces_ok =
        inv_a1 <= pol.residual_atol * (1.0 + op_norm(b.a1)) * cols &&
        inv_vxs <= pol.residual_atol * (1.0 + op_norm(vxs)) * cols;
    const Subspace back = apply_to_subspace(x.adjoint(), ls, pol);
    if (!kernel_ok || !reduces_ok || !span_equal(back, l, 1e-8))
        throw NumericalFailure("the dual subspace failed its structural identities");
    return ls;
}

std::pair<double, double> lifted_invariance(const BlockOperator& b, const ComplexMatrix& x,
                                            const Subspace& l) {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    check_solution(b, x, pol);
    check_contraction(x, pol, "base solution");
    check_reducing(b, x, l, pol);
    if (l.dim() == 0) return {0.0, 0.0};

    ComplexMatrix lifted(b.dim(), l.dim());
    lifted.topRows(b.n0) = l.basis();
    lifted.bottomRows(b.n1) = x * l.basis();
    const Subspace lp = Subspace::from_span(lifted, pol);

    ComplexMatrix diag = ComplexMatrix::Zero(b.dim(), b.dim());
    diag.topLeftCorner(b.n0, b.n0) = b.a0;
    diag.bottomRightCorner(b.n1, b.n1) = b.a1;
    return {invariance_defect(diag, lp), invariance_defect(b.assembled(), lp)};
}

} // namespace riccati
