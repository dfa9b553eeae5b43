#include "riccati/matrix_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace riccati {

namespace {

void check_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": expected square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionMismatch(os.str());
    }
}

void check_same_ambient(const Subspace& a, const Subspace& b, const char* what) {
    if (a.ambient_dim() != b.ambient_dim()) {
        std::ostringstream os;
        os << what << ": ambient dimensions differ (" << a.ambient_dim() << " vs "
           << b.ambient_dim() << ")";
        throw DimensionMismatch(os.str());
    }
}

} // namespace

Subspace Subspace::zero(Index ambient) {
    if (ambient < 0) throw InvalidSubspace("subspace ambient dimension must be non-negative");
    return Subspace(ambient, ComplexMatrix(ambient, 0));
}

Subspace Subspace::full(Index ambient) {
    if (ambient < 0) throw InvalidSubspace("subspace ambient dimension must be non-negative");
    return Subspace(ambient, ComplexMatrix::Identity(ambient, ambient));
}

Subspace Subspace::coordinates(Index ambient, Index first, Index count) {
    if (first < 0 || count < 0 || first + count > ambient) {
        std::ostringstream os;
        os << "coordinate block [" << first << ", " << first + count << ") does not fit in C^"
           << ambient;
        throw InvalidSubspace(os.str());
    }
    ComplexMatrix basis = ComplexMatrix::Zero(ambient, count);
    for (Index j = 0; j < count; ++j) basis(first + j, j) = Complex(1.0, 0.0);
    return Subspace(ambient, std::move(basis));
}

Subspace Subspace::from_span(const ComplexMatrix& spanning, const TolerancePolicy& pol) {
    const Index n = spanning.rows();
    if (spanning.cols() == 0) return zero(n);

    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(spanning);
    // Rank decision on the R diagonal, relative to its largest entry.
    const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs().head(
        std::min(spanning.rows(), spanning.cols()));
    const double top = diag.size() > 0 ? diag(0) : 0.0;
    if (top <= 0.0) return zero(n);
    Index rank = 0;
    const double cut = pol.rank_cutoff(top);
    for (Index j = 0; j < diag.size(); ++j) {
        if (diag(j) > cut) ++rank;
        else break; // column pivoting sorts |R_jj| non-increasing
    }
    if (rank == 0) return zero(n);

    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, rank);
    return Subspace(n, std::move(q));
}

Subspace Subspace::from_orthonormal(ComplexMatrix basis) {
    const Index n = basis.rows();
    const Index k = basis.cols();
    if (k > n) throw InvalidSubspace("orthonormal basis has more columns than ambient dimension");
    if (k > 0) {
        const double defect = (basis.adjoint() * basis - ComplexMatrix::Identity(k, k)).norm();
        if (defect > 1e-10 * std::sqrt(static_cast<double>(k))) {
            std::ostringstream os;
            os << "basis is not orthonormal (Gram defect " << defect << ")";
            throw InvalidSubspace(os.str());
        }
    }
    return Subspace(n, std::move(basis));
}

HermitianEig eig_hermitian(const ComplexMatrix& h, const TolerancePolicy& pol) {
    check_square(h, "eig_hermitian");
    const double scale = 1.0 + h.norm();
    const double herm_defect = (h - h.adjoint()).norm();
    if (herm_defect > pol.residual_atol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (defect " << herm_defect << ", bound "
           << pol.residual_atol * scale << ")";
        throw NotHermitian(os.str());
    }

    // Symmetrize so the solver sees an exactly Hermitian input.
    ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");

    HermitianEig out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();

    const double width = pol.cluster_width(op_norm(sym));
    std::vector<int> current;
    for (Index i = 0; i < out.eigenvalues.size(); ++i) {
        if (!current.empty() &&
            out.eigenvalues(i) - out.eigenvalues(current.back()) > width) {
            out.clusters.push_back(current);
            current.clear();
        }
        current.push_back(static_cast<int>(i));
    }
    if (!current.empty()) out.clusters.push_back(current);
    return out;
}

Subspace kernel(const ComplexMatrix& m, const TolerancePolicy& pol) {
    return kernel_scaled(m, pol, 0.0);
}

Subspace kernel_scaled(const ComplexMatrix& m, const TolerancePolicy& pol, double scale) {
    const Index n = m.cols();
    if (m.rows() == 0 || n == 0) return Subspace::full(n);

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    if (top <= 0.0 && scale <= 0.0) return Subspace::full(n); // exactly-zero matrix
    const double cut = pol.rank_cutoff(top, scale);
    Index rank = 0;
    for (Index j = 0; j < sv.size(); ++j) {
        if (sv(j) > cut) ++rank;
    }
    if (rank == n) return Subspace::zero(n);
    ComplexMatrix v = svd.matrixV();
    return Subspace::from_orthonormal(v.rightCols(n - rank));
}

Subspace intersect(const Subspace& a, const Subspace& b, const TolerancePolicy& pol) {
    check_same_ambient(a, b, "intersect");
    const Index n = a.ambient_dim();
    if (a.is_zero() || b.is_zero()) return Subspace::zero(n);
    if (a.dim() == n) return b;
    if (b.dim() == n) return a;

    // x lies in both spans iff (I - P_a)x = 0 and (I - P_b)x = 0.
    ComplexMatrix stacked(2 * n, n);
    stacked.topRows(n) = ComplexMatrix::Identity(n, n) - project(a);
    stacked.bottomRows(n) = ComplexMatrix::Identity(n, n) - project(b);
    // Projections have unit scale, so anchor the cutoff at 1 even if the
    // stack happens to be tiny (a = b = full space never reaches here).
    return kernel_scaled(stacked, pol, 1.0);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, const TolerancePolicy& pol) {
    check_same_ambient(a, b, "subspace_sum");
    ComplexMatrix joined(a.ambient_dim(), a.dim() + b.dim());
    joined.leftCols(a.dim()) = a.basis();
    joined.rightCols(b.dim()) = b.basis();
    return Subspace::from_span(joined, pol);
}

Subspace ortho_complement(const Subspace& s) {
    const Index n = s.ambient_dim();
    const Index k = s.dim();
    if (k == 0) return Subspace::full(n);
    if (k == n) return Subspace::zero(n);

    // Complete the orthonormal basis to a unitary; the trailing columns span
    // the complement exactly (Householder Q is unitary by construction).
    Eigen::HouseholderQR<ComplexMatrix> qr(s.basis());
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    // Q's leading k columns may differ from s.basis() by a unitary k x k
    // factor; the trailing n-k columns still span the orthogonal complement.
    return Subspace::from_orthonormal(q.rightCols(n - k));
}

ComplexMatrix project(const Subspace& s) {
    return s.basis() * s.basis().adjoint();
}

double op_norm(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

double frobenius(const ComplexMatrix& m) {
    return m.norm();
}

double span_distance(const Subspace& a, const Subspace& b) {
    check_same_ambient(a, b, "span_distance");
    return (project(a) - project(b)).norm();
}

bool span_equal(const Subspace& a, const Subspace& b, double tol) {
    return a.dim() == b.dim() && span_distance(a, b) <= tol;
}

double invariance_defect(const ComplexMatrix& m, const Subspace& s) {
    check_square(m, "invariance_defect");
    if (m.rows() != s.ambient_dim()) {
        throw DimensionMismatch("invariance_defect: operator and subspace ambient dims differ");
    }
    if (s.is_zero()) return 0.0;
    const ComplexMatrix img = m * s.basis();
    return (img - s.basis() * (s.basis().adjoint() * img)).norm();
}

Subspace apply_to_subspace(const ComplexMatrix& m, const Subspace& s, const TolerancePolicy& pol) {
    if (m.cols() != s.ambient_dim()) {
        throw DimensionMismatch("apply_to_subspace: operator and subspace ambient dims differ");
    }
    if (s.is_zero()) return Subspace::zero(m.rows());
    return Subspace::from_span(m * s.basis(), pol);
}

Subspace preimage(const ComplexMatrix& m, const Subspace& s, const TolerancePolicy& pol,
                  double scale) {
    if (m.rows() != s.ambient_dim()) {
        throw DimensionMismatch("preimage: operator range and subspace ambient dims differ");
    }
    const Index n = s.ambient_dim();
    ComplexMatrix off = (ComplexMatrix::Identity(n, n) - project(s)) * m;
    return kernel_scaled(off, pol, scale > 0.0 ? scale : op_norm(m));
}

} // namespace riccati
