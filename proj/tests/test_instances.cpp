#include "riccati/instances.hpp"

#include "riccati/contractive_analysis.hpp"
#include "riccati/graph_subspaces.hpp"
#include "riccati/subspace_geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace riccati;

namespace {

// Spectrum of b compressed to the graph of y (the graph must be invariant).
RealVector graph_spectrum(const BlockOperator& b, const ComplexMatrix& y) {
    const Index n0 = y.cols();
    ComplexMatrix j(b.dim(), n0);
    j.topRows(n0) = ComplexMatrix::Identity(n0, n0);
    j.bottomRows(y.rows()) = y;
    const Eigen::HouseholderQR<ComplexMatrix> qr(j);
    const ComplexMatrix jo = qr.householderQ() * ComplexMatrix::Identity(b.dim(), n0);
    const ComplexMatrix c = jo.adjoint() * b.assembled() * jo;
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(c).eigenvalues();
}

double known_residual_bound(const BlockOperator& b, const ComplexMatrix& x) {
    const double nx = op_norm(x);
    return 1e-9 * (1.0 + op_norm(b.assembled())) * (1.0 + nx) * (1.0 + nx);
}

} // namespace

TEST_CASE("scalar involution instance") {
    const Instance inst = build(InstanceSpec::involution(1));
    ComplexMatrix expected(2, 2);
    expected << 0, 1, 1, 0;
    CHECK((inst.b.assembled() - expected).norm() == 0.0);
    REQUIRE(inst.known_solutions.size() == 2);
    for (const ComplexMatrix& x : inst.known_solutions)
        CHECK(residual(inst.b, x) == 0.0);

    const auto solutions = solve_spectral(inst.b, TolerancePolicy::defaults());
    REQUIRE(solutions.size() == 2);
    for (const RiccatiSolution& sol : solutions) {
        CHECK(sol.is_spectral);
        CHECK(sol.is_contractive);
        REQUIRE(sol.is_isolated.has_value());
        CHECK(*sol.is_isolated);
        CHECK(std::abs(std::abs(sol.x(0, 0)) - 1.0) <= 1e-14);
    }
}

TEST_CASE("planar involution: spectral pair plus sampled reflections") {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    const Instance inst = build(InstanceSpec::involution(2));
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);

    const auto solutions = solve_spectral(inst.b, pol);
    REQUIRE(solutions.size() == 2);
    for (const RiccatiSolution& sol : solutions) {
        const bool is_plus = (sol.x - id).norm() <= 1e-12;
        const bool is_minus = (sol.x + id).norm() <= 1e-12;
        CHECK((is_plus || is_minus));
        REQUIRE(sol.is_isolated.has_value());
        CHECK(*sol.is_isolated);
    }

    // Non-spectral solutions sampled from the continuum: Hermitian unitary,
    // and the block operator restricted to their graphs has spectrum {1, -1}.
    const ContractiveFamily fam =
        enumerate_contractive(inst.b, id, pol, SampleSpec{6, 13});
    int proper_reflections = 0;
    for (const ContractiveMember& mem : fam.members) {
        CHECK((mem.y - mem.y.adjoint()).norm() <= 1e-12);
        CHECK((mem.y * mem.y - id).norm() <= 1e-12);
        const RealVector spectrum = graph_spectrum(inst.b, mem.y);
        for (Index i = 0; i < spectrum.size(); ++i)
            CHECK(std::abs(std::abs(spectrum(i)) - 1.0) <= 1e-12);
        if (std::abs(mem.y.trace()) <= 1e-12) {
            ++proper_reflections;
            CHECK(spectrum(0) == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(spectrum(1) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(proper_reflections >= 3); // two lattice reflections plus sampled ones
}

TEST_CASE("multiplication instance on two grid points") {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    const Instance inst = build(InstanceSpec::multiplication(2));
    REQUIRE(inst.known_solutions.size() == 1);
    const ComplexMatrix& x = inst.known_solutions.front();

    // Grid {1/3, 2/3}; the closed form at 1/3 is 3 + sqrt(10).
    CHECK(std::real(x(0, 0)) == doctest::Approx(3.0 + std::sqrt(10.0)).epsilon(1e-14));
    CHECK(std::abs(x(0, 1)) == 0.0);
    CHECK((x - x.adjoint()).norm() == 0.0); // real diagonal, exactly Hermitian
    CHECK(residual(inst.b, x) <= known_residual_bound(inst.b, x));

    const RiccatiSolution sol = classify(inst.b, x, pol);
    CHECK(sol.is_spectral);
    CHECK_FALSE(sol.is_contractive); // the unbounded branch
    REQUIRE(sol.is_isolated.has_value());
    CHECK(*sol.is_isolated);

    // The spectral enumeration rediscovers the closed form.
    const auto solutions = solve_spectral(inst.b, pol);
    bool found = false;
    for (const RiccatiSolution& s : solutions)
        if ((s.x - x).norm() <= 1e-9) found = true;
    CHECK(found);
}

TEST_CASE("random instances: shapes, gap, determinism") {
    const Instance gapped = build(InstanceSpec::random(3, 3, 7, 1.0));
    gapped.b.validate(TolerancePolicy::defaults());
    CHECK(gapped.known_solutions.empty());
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> e0(gapped.b.a0);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> e1(gapped.b.a1);
    CHECK(e1.eigenvalues().minCoeff() - e0.eigenvalues().maxCoeff() >= 1.0 - 1e-9);
    CHECK(op_norm(gapped.b.v) > 0.0);

    const Instance again = build(InstanceSpec::random(3, 3, 7, 1.0));
    CHECK((gapped.b.assembled() - again.b.assembled()).norm() == 0.0);

    const Instance rect = build(InstanceSpec::random(2, 3, 11));
    CHECK(rect.b.a0.rows() == 2);
    CHECK(rect.b.a1.rows() == 3);
    CHECK(rect.b.v.rows() == 2);
    CHECK(rect.b.v.cols() == 3);
}

TEST_CASE("constructed non-unique instance is certified and reproducible") {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    const Instance inst = build(InstanceSpec::constructed_nonunique(5));
    REQUIRE(inst.known_solutions.size() == 2);
    const ComplexMatrix& x = inst.known_solutions[0];
    const ComplexMatrix& y = inst.known_solutions[1];
    for (const ComplexMatrix& s : inst.known_solutions) {
        CHECK(residual(inst.b, s) <= known_residual_bound(inst.b, s));
        CHECK(op_norm(s) <= 1.0 + 1e-10);
    }
    CHECK((x - y).norm() > 1e-6);
    const UniquenessReport rep = uniqueness(inst.b, x, pol);
    CHECK_FALSE(rep.unique);

    const Instance again = build(InstanceSpec::constructed_nonunique(5));
    CHECK((inst.b.assembled() - again.b.assembled()).norm() == 0.0);
    CHECK((again.known_solutions[1] - y).norm() == 0.0);
}

TEST_CASE("refinement study tracks the unbounded branch") {
    const std::vector<Index> grid = {2, 64, 128, 256, 512};
    const auto rows = refinement_study(grid);
    REQUIRE(rows.size() == grid.size());

    CHECK(rows[0].norm_x == doctest::Approx(3.0 + std::sqrt(10.0)).epsilon(1e-12));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].dist < 1.0);
        if (i > 0) CHECK(rows[i].dist > rows[i - 1].dist);
    }
    const double ratio = rows.back().norm_x / (2.0 * 513.0);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);

    // Cross-check the reported distance against the canonical decomposition
    // of (coordinate summand, solution graph) at n = 2.
    const TolerancePolicy pol = TolerancePolicy::defaults();
    const Instance inst = build(InstanceSpec::multiplication(2));
    const Subspace p = Subspace::coordinates(4, 0, 2);
    const Subspace q = graph_subspace(2, inst.known_solutions.front(), pol);
    const CanonicalDecomposition cd = halmos_decompose(p, q, pol);
    CHECK(sin_theta_distance(cd) == doctest::Approx(rows[0].dist).epsilon(1e-12));
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(build(InstanceSpec::involution(0)), InvalidSpec);
    CHECK_THROWS_AS(build(InstanceSpec::multiplication(1)), InvalidSpec);
    CHECK_THROWS_AS(build(InstanceSpec::random(0, 3, 1)), InvalidSpec);
    CHECK_THROWS_AS(build(InstanceSpec::random(2, 2, 1, -0.5)), InvalidSpec);
}

TEST_CASE("corpus-wide consistency: residuals and uniqueness vs enumeration") {
    const TolerancePolicy pol = TolerancePolicy::defaults();
    for (const InstanceSpec& spec : builtin_corpus()) {
        CAPTURE(spec.description);
        const Instance inst = build(spec);
        inst.b.validate(pol);
        for (const ComplexMatrix& x : inst.known_solutions)
            CHECK(residual(inst.b, x) <= known_residual_bound(inst.b, x));

        // Every contractive spectral solution that is certified unique must
        // enumerate to a one-member family, in both lattice and sample modes.
        for (const RiccatiSolution& sol : solve_spectral(inst.b, pol)) {
            if (!sol.is_contractive) continue;
            const UniquenessReport rep = uniqueness(inst.b, sol.x, pol);
            if (!rep.unique) continue;
            CHECK(enumerate_contractive(inst.b, sol.x, pol).members.size() == 1);
            CHECK(enumerate_contractive(inst.b, sol.x, pol, SampleSpec{4, 17}).members.size() ==
                  1);
        }
    }
}
