#include "riccati/subspace_geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace riccati {

namespace {

/// Orthonormal basis of (span of `within`) ⊖ (corner1 ⊕ corner2): vectors that
/// `off_projector` annihilates and that are orthogonal to both corners.
Subspace generic_half(const ComplexMatrix& off_projector, const Subspace& c1, const Subspace& c2,
                      const TolerancePolicy& pol) {
    const Index n = off_projector.cols();
    ComplexMatrix stacked(n + c1.dim() + c2.dim(), n);
    stacked.topRows(n) = off_projector;
    stacked.middleRows(n, c1.dim()) = c1.basis().adjoint();
    stacked.bottomRows(c2.dim()) = c2.basis().adjoint();
    return kernel_scaled(stacked, pol, 1.0);
}

Subspace append_columns(const Subspace& s, const ComplexMatrix& extra, const TolerancePolicy& pol) {
    if (extra.cols() == 0) return s;
    ComplexMatrix joined(s.ambient_dim(), s.dim() + extra.cols());
    joined.leftCols(s.dim()) = s.basis();
    joined.rightCols(extra.cols()) = extra;
    return Subspace::from_span(joined, pol);
}

} // namespace

CanonicalDecomposition halmos_decompose(const Subspace& p, const Subspace& q,
                                        const TolerancePolicy& pol) {
    if (p.ambient_dim() != q.ambient_dim()) {
        std::ostringstream os;
        os << "halmos_decompose: ambient dimensions differ (" << p.ambient_dim() << " vs "
           << q.ambient_dim() << ")";
        throw DimensionMismatch(os.str());
    }
    const Index n = p.ambient_dim();
    const Subspace p_perp = ortho_complement(p);
    const Subspace q_perp = ortho_complement(q);

    CanonicalDecomposition d;
    d.m11 = intersect(p, q, pol);
    d.m10 = intersect(p, q_perp, pol);
    d.m01 = intersect(p_perp, q, pol);
    d.m00 = intersect(p_perp, q_perp, pol);

    const ComplexMatrix pp = project(p);
    const ComplexMatrix pq = project(q);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);

    Subspace half0 = generic_half(id - pp, d.m11, d.m10, pol);
    Subspace half1 = generic_half(pp, d.m01, d.m00, pol);
    if (half0.dim() != half1.dim()) {
        std::ostringstream os;
        os << "generic halves disagree in dimension (" << half0.dim() << " vs " << half1.dim()
           << "); corner extraction is inconsistent at this tolerance";
        throw DegenerateFrame(os.str());
    }
    const Index m = half0.dim();
    if (m == 0) {
        d.m0_prime = Subspace::zero(n);
        d.m1_prime = Subspace::zero(n);
        d.theta = RealVector(0);
        d.w = ComplexMatrix(0, 0);
        return d;
    }

    // Principal angles: diagonalize the compression of Q to the generic slice
    // of Ran P. Eigenvalues are cos^2(theta); the eigenvector frame makes the
    // compression diagonal.
    ComplexMatrix f0 = half0.basis();
    ComplexMatrix c0 = f0.adjoint() * (pq * f0);
    c0 = 0.5 * (c0 + c0.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c0);
    if (es.info() != Eigen::Success) throw NumericalFailure("angle diagonalization failed");
    f0 = f0 * es.eigenvectors();

    // Per-column angles from the projected/rejected vector norms; both stay
    // fully accurate near 0 and near pi/2 where cos^2 alone loses digits.
    std::vector<double> sines(static_cast<size_t>(m)), cosines(static_cast<size_t>(m));
    ComplexMatrix qf0 = pq * f0;
    for (Index j = 0; j < m; ++j) {
        cosines[static_cast<size_t>(j)] = qf0.col(j).norm();
        sines[static_cast<size_t>(j)] = (f0.col(j) - qf0.col(j)).norm();
    }

    // Ascending angles == descending cosines.
    std::vector<Index> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return cosines[static_cast<size_t>(a)] > cosines[static_cast<size_t>(b)];
    });

    // Angles indistinguishable from 0 or pi/2 belong to the corners; move
    // them there so the generic part keeps its open-interval invariant.
    std::vector<Index> keep;
    ComplexMatrix to_m11(n, 0), to_m10(n, 0);
    for (Index idx : order) {
        const double s = sines[static_cast<size_t>(idx)];
        const double c = cosines[static_cast<size_t>(idx)];
        if (s <= pol.rank_rtol) {
            to_m11.conservativeResize(n, to_m11.cols() + 1);
            to_m11.col(to_m11.cols() - 1) = f0.col(idx);
        } else if (c <= pol.rank_rtol) {
            to_m10.conservativeResize(n, to_m10.cols() + 1);
            to_m10.col(to_m10.cols() - 1) = f0.col(idx);
        } else {
            keep.push_back(idx);
        }
    }
    d.m11 = append_columns(d.m11, to_m11, pol);
    d.m10 = append_columns(d.m10, to_m10, pol);

    const Index mk = static_cast<Index>(keep.size());
    ComplexMatrix f0_final(n, mk);
    RealVector theta(mk);
    ComplexMatrix partners(n, mk); // unit vectors in the generic slice of Ker P
    double min_sc = 1.0, max_sc = 1.0;
    for (Index j = 0; j < mk; ++j) {
        const Index idx = keep[static_cast<size_t>(j)];
        const double s = sines[static_cast<size_t>(idx)];
        const double c = cosines[static_cast<size_t>(idx)];
        f0_final.col(j) = f0.col(idx);
        theta(j) = std::atan2(s, c);
        // Q f = cos^2 f + sin cos g with g the partner direction in Ker P.
        partners.col(j) = (qf0.col(idx) - Complex(c * c, 0.0) * f0.col(idx)) / (s * c);
        if (j == 0) min_sc = max_sc = s * c;
        min_sc = std::min(min_sc, s * c);
        max_sc = std::max(max_sc, s * c);
    }

    if (mk > 0) {
        if (min_sc <= 0.5 * pol.rank_rtol) {
            throw DegenerateFrame("polar pairing is rank-deficient: an angle survived too close "
                                  "to 0 or pi/2 — tighten cluster_atol or rank_rtol");
        }
        const double gram_defect =
            (partners.adjoint() * partners - ComplexMatrix::Identity(mk, mk)).norm();
        if (gram_defect > 1e-8 * std::sqrt(static_cast<double>(mk))) {
            std::ostringstream os;
            os << "partner frame lost orthonormality (defect " << gram_defect
               << "); angles are numerically degenerate";
            throw DegenerateFrame(os.str());
        }
    }

    // The migration may have consumed part of the Ker P slice; rebuild it so
    // the stored frame spans exactly the partners' side, and split whatever
    // is left over between m00 (angle ~ 0) and m01 (angle ~ pi/2).
    ComplexMatrix f1 = half1.basis();
    ComplexMatrix gamma = f1.adjoint() * partners; // mk columns, orthonormal to eps
    if (mk < m) {
        Subspace gamma_span = Subspace::from_span(gamma, pol);
        if (gamma_span.dim() != mk) {
            throw DegenerateFrame("partner frame does not embed into the generic slice of Ker P");
        }
        Subspace leftover = ortho_complement(gamma_span); // coordinates within half1
        ComplexMatrix to_m00(n, 0), to_m01(n, 0);
        for (Index j = 0; j < leftover.dim(); ++j) {
            ComplexMatrix v = f1 * leftover.basis().col(j);
            const double along_q = (pq * v).norm(); // sin of this direction's angle
            if (std::min(along_q, 1.0 - along_q) > 1e-6) {
                throw DegenerateFrame("unpaired generic direction is not close to a corner");
            }
            if (along_q < 0.5) {
                to_m00.conservativeResize(n, to_m00.cols() + 1);
                to_m00.col(to_m00.cols() - 1) = v;
            } else {
                to_m01.conservativeResize(n, to_m01.cols() + 1);
                to_m01.col(to_m01.cols() - 1) = v;
            }
        }
        d.m00 = append_columns(d.m00, to_m00, pol);
        d.m01 = append_columns(d.m01, to_m01, pol);
        // Restrict the Ker P frame to the span actually paired with f0_final.
        f1 = f1 * gamma_span.basis();
        gamma = f1.adjoint() * partners;
    }

    d.m0_prime = Subspace::from_orthonormal(f0_final);
    d.m1_prime = Subspace::from_orthonormal(f1);
    d.theta = theta;
    d.w = gamma.adjoint(); // unitary taking m1_prime coordinates to m0_prime coordinates
    if (mk > 0) {
        const double unitary_defect =
            (d.w.adjoint() * d.w - ComplexMatrix::Identity(mk, mk)).norm();
        if (unitary_defect > 1e-8 * std::sqrt(static_cast<double>(mk))) {
            std::ostringstream os;
            os << "pairing unitary defect " << unitary_defect << " exceeds tolerance";
            throw DegenerateFrame(os.str());
        }
        d.w_condition = max_sc / min_sc;
    }
    return d;
}

std::pair<ComplexMatrix, ComplexMatrix> reconstruct(const CanonicalDecomposition& d) {
    ComplexMatrix p = project(d.m11) + project(d.m10) + project(d.m0_prime);
    ComplexMatrix q = project(d.m11) + project(d.m01);
    const Index m = d.generic_dim();
    if (m > 0) {
        const ComplexMatrix& f0 = d.m0_prime.basis();
        const ComplexMatrix g = d.m1_prime.basis() * d.w.adjoint(); // partner frame
        RealVector c = d.theta.array().cos();
        RealVector s = d.theta.array().sin();
        ComplexMatrix cc = (c.array().square()).matrix().cast<Complex>().asDiagonal();
        ComplexMatrix ss = (s.array().square()).matrix().cast<Complex>().asDiagonal();
        ComplexMatrix sc = (s.array() * c.array()).matrix().cast<Complex>().asDiagonal();
        q += f0 * cc * f0.adjoint() + f0 * sc * g.adjoint() + g * sc * f0.adjoint() +
             g * ss * g.adjoint();
    }
    return {p, q};
}

double sin_theta_distance(const CanonicalDecomposition& d) {
    if (d.theta.size() == 0) return 0.0;
    return std::sin(d.theta(d.theta.size() - 1));
}

double projection_distance(const CanonicalDecomposition& d) {
    if (d.m10.dim() > 0 || d.m01.dim() > 0) return 1.0;
    return sin_theta_distance(d);
}

} // namespace riccati
