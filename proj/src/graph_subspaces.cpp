#include "riccati/graph_subspaces.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace riccati {

namespace {

GraphReport analyze_core(const Subspace& p, ComplexMatrix h0, ComplexMatrix h1,
                         const Subspace& q, const TolerancePolicy& pol) {
    GraphReport rep;
    rep.h0_frame = std::move(h0);
    rep.h1_frame = std::move(h1);

    CanonicalDecomposition d = halmos_decompose(p, q, pol);
    rep.dist = projection_distance(d);
    rep.ker_x = d.m11;
    rep.coker_x = d.m00;

    if (q.dim() != p.dim()) {
        std::ostringstream os;
        os << "candidate dimension " << q.dim() << " differs from base dimension " << p.dim();
        rep.reason = os.str();
        return rep;
    }
    if (d.m10.dim() > 0 || d.m01.dim() > 0) {
        std::ostringstream os;
        os << "candidate meets the base or its complement orthogonally (" << d.m10.dim()
           << " base directions lost, " << d.m01.dim() << " complement directions absorbed)";
        rep.reason = os.str();
        return rep;
    }

    rep.is_graph = true;
    const Index m = d.generic_dim();
    rep.norm_x = m > 0 ? std::tan(d.theta(m - 1)) : 0.0;

    // X sends each paired frame vector f to tan(theta) times its partner in
    // Ker P, and annihilates the angle-zero directions.
    ComplexMatrix x_op = ComplexMatrix::Zero(p.ambient_dim(), p.ambient_dim());
    if (m > 0) {
        ComplexMatrix partners = d.m1_prime.basis() * d.w.adjoint();
        RealVector tans = d.theta.array().tan();
        x_op = partners * tans.cast<Complex>().asDiagonal() * d.m0_prime.basis().adjoint();
    }
    rep.x = rep.h1_frame.adjoint() * x_op * rep.h0_frame;
    return rep;
}

} // namespace

GraphReport analyze_graph(const Subspace& p, const Subspace& q, const TolerancePolicy& pol) {
    if (p.ambient_dim() != q.ambient_dim()) {
        throw DimensionMismatch("analyze_graph: ambient dimensions differ");
    }
    return analyze_core(p, p.basis(), ortho_complement(p).basis(), q, pol);
}

GraphReport analyze_graph_split(Index n0, const Subspace& q, const TolerancePolicy& pol) {
    const Index n = q.ambient_dim();
    if (n0 < 0 || n0 > n) {
        std::ostringstream os;
        os << "analyze_graph_split: base dimension " << n0 << " does not fit in C^" << n;
        throw DimensionMismatch(os.str());
    }
    auto p = Subspace::coordinates(n, 0, n0);
    return analyze_core(p, p.basis(), Subspace::coordinates(n, n0, n - n0).basis(), q, pol);
}

ComplexMatrix graph_projection(Index n0, const ComplexMatrix& x) {
    if (x.cols() != n0) {
        std::ostringstream os;
        os << "graph_projection: x has " << x.cols() << " columns, expected " << n0;
        throw DimensionMismatch(os.str());
    }
    const Index n1 = x.rows();
    ComplexMatrix gram = ComplexMatrix::Identity(n0, n0) + x.adjoint() * x;
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericalFailure("graph_projection: I + X*X failed its positive-definite factorization");
    }
    ComplexMatrix inv = llt.solve(ComplexMatrix::Identity(n0, n0));

    ComplexMatrix q(n0 + n1, n0 + n1);
    q.topLeftCorner(n0, n0) = inv;
    q.topRightCorner(n0, n1) = inv * x.adjoint();
    q.bottomLeftCorner(n1, n0) = x * inv;
    q.bottomRightCorner(n1, n1) = x * inv * x.adjoint();
    return 0.5 * (q + q.adjoint());
}

Subspace graph_subspace(Index n0, const ComplexMatrix& x, const TolerancePolicy& pol) {
    if (x.cols() != n0) throw DimensionMismatch("graph_subspace: column count does not match base");
    ComplexMatrix cols(n0 + x.rows(), n0);
    cols.topRows(n0) = ComplexMatrix::Identity(n0, n0);
    cols.bottomRows(x.rows()) = x;
    Subspace g = Subspace::from_span(cols, pol);
    if (g.dim() != n0) throw NumericalFailure("graph_subspace: graph columns lost rank");
    return g;
}

Subspace graph_complement(Index n0, const ComplexMatrix& x, const TolerancePolicy& pol) {
    Subspace comp = ortho_complement(graph_subspace(n0, x, pol));

    // Closed form: the complement is the graph of -X* over the second summand.
    const Index n1 = x.rows();
    ComplexMatrix cols(n0 + n1, n1);
    cols.topRows(n0) = -x.adjoint();
    cols.bottomRows(n1) = ComplexMatrix::Identity(n1, n1);
    Subspace closed = Subspace::from_span(cols, pol);
    if (!span_equal(comp, closed, 1e-10 * (1.0 + op_norm(x)))) {
        throw NumericalFailure("graph_complement: computed complement drifted from its closed form");
    }
    return comp;
}

std::pair<double, double> norm_identities(const ComplexMatrix& x) {
    const double nx = op_norm(x);
    const double dist = nx / std::sqrt(1.0 + nx * nx);
    const double recovered = dist / std::sqrt(1.0 - dist * dist);
    return {dist, recovered};
}

} // namespace riccati
