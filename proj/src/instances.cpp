#include "riccati/instances.hpp"

#include "riccati/contractive_analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace riccati {

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
}

ComplexMatrix Rng::matrix(Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = gaussian();
            const double im = gaussian();
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

ComplexMatrix Rng::hermitian(Index n) {
    const ComplexMatrix g = matrix(n, n);
    return 0.5 * (g + g.adjoint());
}

ComplexMatrix Rng::unitary(Index n) {
    const ComplexMatrix g = matrix(n, n);
    const Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

InstanceSpec InstanceSpec::involution(Index k) {
    InstanceSpec s;
    s.kind = Kind::involution;
    s.k_dim = k;
    std::ostringstream os;
    os << "sign involution on C^" << k << " (X^2 = I)";
    s.description = os.str();
    return s;
}

InstanceSpec InstanceSpec::multiplication(Index n) {
    InstanceSpec s;
    s.kind = Kind::multiplication;
    s.grid_n = n;
    std::ostringstream os;
    os << "multiplication operator sampled on the " << n << "-point interior grid of (0,1)";
    s.description = os.str();
    return s;
}

InstanceSpec InstanceSpec::random(Index n0, Index n1, std::uint64_t seed,
                                  std::optional<double> gap) {
    InstanceSpec s;
    s.kind = Kind::random;
    s.n0 = n0;
    s.n1 = n1;
    s.seed = seed;
    s.gap = gap;
    std::ostringstream os;
    os << "seeded Gaussian blocks on C^" << n0 << " + C^" << n1;
    if (gap) os << " with spectral separation " << *gap;
    s.description = os.str();
    return s;
}

InstanceSpec InstanceSpec::constructed_nonunique(std::uint64_t seed) {
    InstanceSpec s;
    s.kind = Kind::constructed_nonunique;
    s.seed = seed;
    s.description = "seeded search for a certified pair of distinct contractive solutions";
    return s;
}

void InstanceSpec::validate() const {
    switch (kind) {
    case Kind::involution:
        if (k_dim < 1) throw InvalidSpec("involution dimension must be at least 1");
        return;
    case Kind::multiplication:
        if (grid_n < 2) throw InvalidSpec("multiplication grid needs at least 2 points");
        return;
    case Kind::random:
        if (n0 < 1 || n1 < 1) throw InvalidSpec("random instance needs positive dimensions");
        if (gap && *gap < 0.0) throw InvalidSpec("spectral gap must be non-negative");
        return;
    case Kind::constructed_nonunique:
        return;
    }
    throw InvalidSpec("unknown instance kind");
}

namespace {

// The unbounded root of l f^2 - 2 f - l = 0; the other root is the bounded
// companion -1/f. The pole at l = 0 is what blows the norm up under grid
// refinement.
double unbounded_root(double lambda) {
    return (1.0 + std::sqrt(1.0 + lambda * lambda)) / lambda;
}

Instance build_involution(const InstanceSpec& spec) {
    const Index k = spec.k_dim;
    Instance inst;
    inst.spec = spec;
    inst.b.n0 = inst.b.n1 = k;
    inst.b.a0 = ComplexMatrix::Zero(k, k);
    inst.b.a1 = ComplexMatrix::Zero(k, k);
    inst.b.v = ComplexMatrix::Identity(k, k);
    inst.known_solutions.push_back(ComplexMatrix::Identity(k, k));
    inst.known_solutions.push_back(-ComplexMatrix::Identity(k, k));
    return inst;
}

Instance build_multiplication(const InstanceSpec& spec) {
    const Index n = spec.grid_n;
    RealVector lambda(n);
    for (Index j = 0; j < n; ++j)
        lambda(j) = static_cast<double>(j + 1) / static_cast<double>(n + 1);
    Instance inst;
    inst.spec = spec;
    inst.b.n0 = inst.b.n1 = n;
    inst.b.a0 = (-lambda).cast<Complex>().asDiagonal();
    inst.b.a1 = lambda.cast<Complex>().asDiagonal();
    inst.b.v = lambda.array().square().matrix().cast<Complex>().asDiagonal();
    RealVector f(n);
    for (Index j = 0; j < n; ++j) f(j) = unbounded_root(lambda(j));
    inst.known_solutions.emplace_back(f.cast<Complex>().asDiagonal());
    return inst;
}

Instance build_random(const InstanceSpec& spec) {
    Rng rng(spec.seed);
    Instance inst;
    inst.spec = spec;
    inst.b.n0 = spec.n0;
    inst.b.n1 = spec.n1;
    inst.b.a0 = rng.hermitian(spec.n0);
    inst.b.a1 = rng.hermitian(spec.n1);
    inst.b.v = rng.matrix(spec.n0, spec.n1);
    if (spec.gap) {
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> e0(inst.b.a0);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> e1(inst.b.a1);
        const double shift = *spec.gap + e0.eigenvalues().maxCoeff() - e1.eigenvalues().minCoeff();
        if (shift > 0.0)
            inst.b.a1 += shift * ComplexMatrix::Identity(spec.n1, spec.n1);
    }
    return inst;
}

// Search over derived seeds for a 2x2 instance carrying two certified
// contractive spectral solutions. Candidates are drawn with a hidden frame in
// which A0 and VX are simultaneously diagonal and the solution is unitary, so
// non-uniqueness is expected; every property is then re-certified through the
// public solving and analysis machinery before the instance is emitted.
Instance build_nonunique(const InstanceSpec& spec) {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    const Index n = 2;
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        Rng rng(spec.seed + 0x9e3779b97f4a7c15ULL * (attempt + 1));
        RealVector alpha(n), eta(n);
        for (Index i = 0; i < n; ++i) {
            alpha(i) = static_cast<double>(i + 1);
            eta(i) = 0.35 + 0.1 * rng.uniform();
        }
        const ComplexMatrix u = rng.unitary(n);
        const ComplexMatrix w0 = rng.unitary(n);
        const ComplexMatrix w1 = rng.unitary(n);
        const ComplexMatrix a0_hat = alpha.cast<Complex>().asDiagonal();
        const ComplexMatrix v_hat = eta.cast<Complex>().asDiagonal() * u.adjoint();

        Instance inst;
        inst.spec = spec;
        inst.b.n0 = inst.b.n1 = n;
        inst.b.a0 = w0 * a0_hat * w0.adjoint();
        inst.b.a1 = w1 * (u * a0_hat * u.adjoint()) * w1.adjoint();
        inst.b.v = w0 * v_hat * w1.adjoint();
        const ComplexMatrix x = w1 * u * w0.adjoint();

        try {
            const double bound =
                pol.residual_bound(op_norm(inst.b.assembled()), op_norm(x));
            if (residual(inst.b, x) > bound) continue;
            const RiccatiSolution sol = classify(inst.b, x, pol);
            if (!sol.is_spectral || !sol.is_contractive) continue;
            if (uniqueness(inst.b, x, pol).unique) continue;
            const ComplexMatrix y = construct_solution(
                inst.b, x, Subspace::from_orthonormal(w0.col(0)), pol);
            if (residual(inst.b, y) > pol.residual_bound(op_norm(inst.b.assembled()), op_norm(y)))
                continue;
            if (op_norm(y) > 1.0 + pol.rank_rtol) continue;
            if ((y - x).norm() <= 1e-6) continue;
            inst.known_solutions.push_back(x);
            inst.known_solutions.push_back(y);
        } catch (const Error&) {
            continue;
        }
        return inst;
    }
    throw NumericalFailure("the seeded search budget produced no certified non-unique instance");
}

} // namespace

Instance build(const InstanceSpec& spec) {
    spec.validate();
    switch (spec.kind) {
    case InstanceSpec::Kind::involution:
        return build_involution(spec);
    case InstanceSpec::Kind::multiplication:
        return build_multiplication(spec);
    case InstanceSpec::Kind::random:
        return build_random(spec);
    case InstanceSpec::Kind::constructed_nonunique:
        return build_nonunique(spec);
    }
    throw InvalidSpec("unknown instance kind");
}

std::vector<RefinementRow> refinement_study(const std::vector<Index>& n_list) {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    std::vector<RefinementRow> rows;
    rows.reserve(n_list.size());
    for (const Index n : n_list) {
        const Instance inst = build(InstanceSpec::multiplication(n));
        const ComplexMatrix& x = inst.known_solutions.front();
        const double nx = op_norm(x);
        const double res = residual(inst.b, x);
        if (res > pol.residual_bound(op_norm(inst.b.assembled()), nx)) {
            std::ostringstream os;
            os << "refinement at n = " << n << " lost the solution: residual " << res;
            throw NumericalFailure(os.str());
        }
        RefinementRow row;
        row.n = n;
        row.norm_x = nx;
        row.dist = nx / std::sqrt(1.0 + nx * nx);
        rows.push_back(row);
    }
    return rows;
}

std::vector<InstanceSpec> builtin_corpus() {
    return {
        InstanceSpec::involution(1),
        InstanceSpec::involution(2),
        InstanceSpec::multiplication(2),
        InstanceSpec::multiplication(6),
        InstanceSpec::random(3, 3, 7, 1.0),
        InstanceSpec::random(2, 3, 11),
        InstanceSpec::constructed_nonunique(5),
    };
}

} // namespace riccati
