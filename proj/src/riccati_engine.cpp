#include "riccati/riccati_engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace riccati {

namespace {

constexpr int kMaxClusters = 20;

void check_shape(const BlockOperator& b, const ComplexMatrix& x, const char* what) {
    if (x.rows() != b.n1 || x.cols() != b.n0) {
        std::ostringstream os;
        os << what << ": x is " << x.rows() << "x" << x.cols() << ", expected " << b.n1 << "x"
           << b.n0;
        throw DimensionMismatch(os.str());
    }
}

struct ClusterData {
    HermitianEig eig;
    std::vector<Subspace> eigenspaces; // one per cluster, ascending eigenvalues
    double b_norm = 0.0;
};

ClusterData cluster_eigenspaces(const BlockOperator& b, const TolerancePolicy& pol) {
    ClusterData cd;
    const ComplexMatrix big = b.assembled();
    cd.eig = eig_hermitian(big, pol);
    cd.b_norm = std::max(std::abs(cd.eig.eigenvalues(0)),
                         std::abs(cd.eig.eigenvalues(cd.eig.eigenvalues.size() - 1)));
    for (const auto& cluster : cd.eig.clusters) {
        ComplexMatrix cols(big.rows(), static_cast<Index>(cluster.size()));
        for (size_t j = 0; j < cluster.size(); ++j)
            cols.col(static_cast<Index>(j)) = cd.eig.eigenvectors.col(cluster[j]);
        cd.eigenspaces.push_back(Subspace::from_orthonormal(std::move(cols)));
    }
    return cd;
}

bool clusters_fully_selected(const Subspace& q, const ClusterData& cd, const TolerancePolicy& pol,
                             std::vector<int>* selected) {
    for (size_t i = 0; i < cd.eigenspaces.size(); ++i) {
        const Index cap = intersect(q, cd.eigenspaces[i], pol).dim();
        if (cap == 0) continue;
        if (cap != cd.eigenspaces[i].dim()) return false;
        if (selected) selected->push_back(static_cast<int>(i));
    }
    return true;
}

} // namespace

ComplexMatrix BlockOperator::assembled() const {
    ComplexMatrix big(dim(), dim());
    big.topLeftCorner(n0, n0) = a0;
    big.topRightCorner(n0, n1) = v;
    big.bottomLeftCorner(n1, n0) = v.adjoint();
    big.bottomRightCorner(n1, n1) = a1;
    return big;
}

void BlockOperator::validate(const TolerancePolicy& pol) const {
    if (n0 < 0 || n1 < 0) throw DimensionMismatch("block operator sizes must be non-negative");
    if (a0.rows() != n0 || a0.cols() != n0) {
        throw DimensionMismatch("a0 does not match the declared first block size");
    }
    if (a1.rows() != n1 || a1.cols() != n1) {
        throw DimensionMismatch("a1 does not match the declared second block size");
    }
    if (v.rows() != n0 || v.cols() != n1) {
        throw DimensionMismatch("v must map the second summand into the first");
    }
    const double s0 = (a0 - a0.adjoint()).norm();
    if (s0 > pol.residual_atol * (1.0 + a0.norm())) {
        std::ostringstream os;
        os << "a0 is not Hermitian (defect " << s0 << ")";
        throw NotHermitian(os.str());
    }
    const double s1 = (a1 - a1.adjoint()).norm();
    if (s1 > pol.residual_atol * (1.0 + a1.norm())) {
        std::ostringstream os;
        os << "a1 is not Hermitian (defect " << s1 << ")";
        throw NotHermitian(os.str());
    }
}

double residual(const BlockOperator& b, const ComplexMatrix& x) {
    check_shape(b, x, "residual");
    return (b.a1 * x - x * b.a0 - x * (b.v * x) + b.v.adjoint()).norm();
}

std::pair<double, double> invariance_check(const BlockOperator& b, const ComplexMatrix& x) {
    check_shape(b, x, "invariance_check");
    const ComplexMatrix q = graph_projection(b.n0, x);
    const ComplexMatrix big = b.assembled();
    const Index n = b.dim();
    const double defect = ((ComplexMatrix::Identity(n, n) - q) * big * q).norm();
    return {residual(b, x), defect};
}

std::vector<RiccatiSolution> solve_spectral(const BlockOperator& b, const TolerancePolicy& pol) {
    b.validate(pol);
    ClusterData cd = cluster_eigenspaces(b, pol);
    const int d = static_cast<int>(cd.eigenspaces.size());
    if (d > kMaxClusters) {
        std::ostringstream os;
        os << "operator has " << d << " eigenvalue clusters; subset enumeration is capped at "
           << kMaxClusters;
        throw TooManyClusters(os.str());
    }

    std::vector<RiccatiSolution> out;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        Index total = 0;
        for (int i = 0; i < d; ++i)
            if (mask & (1u << i)) total += cd.eigenspaces[static_cast<size_t>(i)].dim();
        if (total != b.n0) continue;

        ComplexMatrix cols(b.dim(), b.n0);
        Index at = 0;
        std::vector<int> delta;
        for (int i = 0; i < d; ++i) {
            if (!(mask & (1u << i))) continue;
            const auto& e = cd.eigenspaces[static_cast<size_t>(i)];
            cols.middleCols(at, e.dim()) = e.basis();
            at += e.dim();
            delta.push_back(i);
        }

        GraphReport rep = analyze_graph_split(b.n0, Subspace::from_orthonormal(std::move(cols)), pol);
        if (!rep.is_graph) continue;

        RiccatiSolution sol;
        sol.x = *rep.x;
        sol.residual = residual(b, sol.x);
        const double bound = pol.residual_bound(cd.b_norm, rep.norm_x);
        if (sol.residual > bound) {
            std::ostringstream os;
            os << "spectral graph subspace produced residual " << sol.residual
               << " above the admissible bound " << bound;
            throw NumericalFailure(os.str());
        }
        sol.is_spectral = true;
        sol.is_isolated = true;
        sol.is_contractive = op_norm(sol.x) <= 1.0 + pol.rank_rtol;
        sol.selected_spectrum = std::move(delta);
        out.push_back(std::move(sol));
    }

    std::sort(out.begin(), out.end(), [](const RiccatiSolution& a, const RiccatiSolution& c) {
        const double na = op_norm(a.x), nc = op_norm(c.x);
        if (na != nc) return na < nc;
        return a.selected_spectrum < c.selected_spectrum;
    });
    return out;
}

bool is_spectral(const BlockOperator& b, const Subspace& q, const TolerancePolicy& pol) {
    b.validate(pol);
    if (q.ambient_dim() != b.dim()) {
        throw DimensionMismatch("is_spectral: subspace does not live on the operator's space");
    }
    ClusterData cd = cluster_eigenspaces(b, pol);
    const double defect = invariance_defect(b.assembled(), q);
    const double bound = pol.residual_atol * (1.0 + cd.b_norm);
    if (defect > bound) {
        std::ostringstream os;
        os << "subspace is not invariant (defect " << defect << ", bound " << bound << ")";
        throw NotInvariant(os.str());
    }
    return clusters_fully_selected(q, cd, pol, nullptr);
}

std::optional<std::pair<ComplexMatrix, double>> isolation_witness(const BlockOperator& b,
                                                                  const RiccatiSolution& sol,
                                                                  const TolerancePolicy& pol,
                                                                  double epsilon) {
    if (sol.is_spectral) return std::nullopt;
    check_shape(b, sol.x, "isolation_witness");

    ClusterData cd = cluster_eigenspaces(b, pol);
    const Subspace q = graph_subspace(b.n0, sol.x, pol);
    const Index n = b.dim();

    for (const auto& e : cd.eigenspaces) {
        const Subspace cap = intersect(q, e, pol);
        if (cap.dim() == 0 || cap.dim() == e.dim()) continue;

        // Rotate one selected direction toward an unselected one inside the
        // same degenerate eigenspace; the result stays invariant and stays a
        // graph for small angles, but is a different subspace.
        const ComplexMatrix u = cap.basis().col(0);
        const ComplexMatrix gamma = e.basis().adjoint() * cap.basis();
        const Subspace unselected = ortho_complement(Subspace::from_span(gamma, pol));
        if (unselected.is_zero()) continue;
        const ComplexMatrix vdir = e.basis() * unselected.basis().col(0);

        const ComplexMatrix rest_raw =
            (ComplexMatrix::Identity(n, n) - u * u.adjoint()) * q.basis();
        ComplexMatrix cols(n, q.dim());
        const Subspace rest = Subspace::from_span(rest_raw, pol);
        if (rest.dim() != q.dim() - 1) continue;
        cols.leftCols(q.dim() - 1) = rest.basis();
        cols.col(q.dim() - 1) = std::cos(epsilon) * u + std::sin(epsilon) * vdir;

        GraphReport rep = analyze_graph_split(b.n0, Subspace::from_span(cols, pol), pol);
        if (!rep.is_graph) continue;
        const double distance = (*rep.x - sol.x).norm();
        if (distance <= 0.0) continue;
        return std::make_pair(*rep.x, distance);
    }
    return std::nullopt;
}

RiccatiSolution classify(const BlockOperator& b, const ComplexMatrix& x,
                         const TolerancePolicy& pol) {
    check_shape(b, x, "classify");
    RiccatiSolution sol;
    sol.x = x;
    sol.residual = residual(b, x);
    sol.is_contractive = op_norm(x) <= 1.0 + pol.rank_rtol;

    ClusterData cd = cluster_eigenspaces(b, pol);
    const Subspace q = graph_subspace(b.n0, x, pol);
    const double defect = invariance_defect(b.assembled(), q);
    if (defect <= pol.residual_atol * (1.0 + cd.b_norm) * (1.0 + op_norm(x))) {
        std::vector<int> delta;
        sol.is_spectral = clusters_fully_selected(q, cd, pol, &delta);
        if (sol.is_spectral) {
            sol.selected_spectrum = std::move(delta);
            sol.is_isolated = true;
        }
    }
    return sol;
}

} // namespace riccati
