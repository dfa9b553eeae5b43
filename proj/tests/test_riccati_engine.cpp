#include "riccati/riccati_engine.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace riccati;
using test_support::rand_hermitian;
using test_support::rand_matrix;
using test_support::rand_unitary;

namespace {

/// A0 = A1 = 0, V = I on C^k: the Riccati equation collapses to X^2 = I.
BlockOperator involution(Index k) {
    BlockOperator b;
    b.n0 = b.n1 = k;
    b.a0 = ComplexMatrix::Zero(k, k);
    b.a1 = ComplexMatrix::Zero(k, k);
    b.v = ComplexMatrix::Identity(k, k);
    return b;
}

BlockOperator random_block(Index n0, Index n1, std::uint64_t seed) {
    BlockOperator b;
    b.n0 = n0;
    b.n1 = n1;
    b.a0 = rand_hermitian(n0, seed);
    b.a1 = rand_hermitian(n1, seed + 1);
    b.v = rand_matrix(n0, n1, seed + 2);
    return b;
}

} // namespace

TEST_CASE("residual closed forms") {
    TolerancePolicy pol;
    BlockOperator b = random_block(3, 3, 70);
    b.v.setZero();
    CHECK(residual(b, ComplexMatrix::Zero(3, 3)) == 0.0);

    BlockOperator inv2 = involution(2);
    CHECK(residual(inv2, ComplexMatrix::Identity(2, 2)) == 0.0);
    CHECK(residual(inv2, -ComplexMatrix::Identity(2, 2)) == 0.0);
    // Non-solutions leave exactly the coupling behind.
    BlockOperator bv = random_block(2, 2, 71);
    CHECK(invariance_check(bv, ComplexMatrix::Zero(2, 2)).first ==
          doctest::Approx(bv.v.norm()));

    CHECK_THROWS_AS(residual(inv2, ComplexMatrix::Zero(3, 2)), DimensionMismatch);
}

TEST_CASE("solution residual and graph invariance defect vanish together") {
    TolerancePolicy pol;
    // Two-sided bound: defect <= residual <= defect * (1 + ||x||^2), up to
    // roundoff slack. Checked over a large random corpus.
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Index n0 = 1 + static_cast<Index>(seed % 3);
        const Index n1 = 1 + static_cast<Index>((seed / 3) % 3);
        BlockOperator b = random_block(n0, n1, 9000 + seed * 7);
        ComplexMatrix x = rand_matrix(n1, n0, 9500 + seed * 7);
        auto [res, defect] = invariance_check(b, x);
        const double slack = 1e-12 * (1.0 + b.assembled().norm()) * (1.0 + x.norm());
        const double nx = op_norm(x);
        CHECK(defect <= res + slack);
        CHECK(res <= defect * (1.0 + nx * nx) + slack);
        ++checked;
    }
    CHECK(checked == 1000);

    // And at an exact solution both sides are at roundoff level.
    auto [res_i, def_i] = invariance_check(involution(3), ComplexMatrix::Identity(3, 3));
    CHECK(res_i == 0.0);
    CHECK(def_i < 1e-14);
}

TEST_CASE("decoupled operator with disjoint block spectra has only the zero solution") {
    TolerancePolicy pol;
    BlockOperator b;
    b.n0 = 2;
    b.n1 = 2;
    b.a0 = rand_hermitian(2, 80);                                   // spectrum O(1)
    b.a1 = rand_hermitian(2, 81) + 10.0 * ComplexMatrix::Identity(2, 2); // shifted away
    b.v = ComplexMatrix::Zero(2, 2);

    auto sols = solve_spectral(b, pol);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].x.norm() == 0.0);
    CHECK(sols[0].is_spectral);
    CHECK(sols[0].is_contractive);
    CHECK(sols[0].is_isolated.value());
}

TEST_CASE("involution instance has exactly the two spectral solutions +I and -I") {
    TolerancePolicy pol;
    for (Index k : {1, 2, 3}) {
        CAPTURE(k);
        auto sols = solve_spectral(involution(k), pol);
        REQUIRE(sols.size() == 2);
        const ComplexMatrix id = ComplexMatrix::Identity(k, k);
        // Sorted by norm (both have norm 1), then by cluster subset.
        CHECK(((sols[0].x - id).norm() < 1e-12 || (sols[0].x + id).norm() < 1e-12));
        CHECK(((sols[1].x - id).norm() < 1e-12 || (sols[1].x + id).norm() < 1e-12));
        CHECK((sols[0].x - sols[1].x).norm() > 1.0);
        for (const auto& s : sols) {
            CHECK(s.is_spectral);
            CHECK(s.is_isolated.value());
            CHECK(s.is_contractive);
            CHECK(s.residual < 1e-12);
            CHECK(s.selected_spectrum.size() == 1);
        }
    }
}

TEST_CASE("solve_spectral equals the exhaustive eigenvector-subset oracle") {
    TolerancePolicy pol;
    for (std::uint64_t seed : {91u, 92u, 93u}) {
        CAPTURE(seed);
        BlockOperator b = random_block(3, 3, seed);
        auto sols = solve_spectral(b, pol);

        // Oracle: try every 3-element subset of the 6 eigenvectors directly.
        auto eig = eig_hermitian(b.assembled(), pol);
        REQUIRE(eig.clusters.size() == 6); // random spectra are simple
        int graphs = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                for (int k = j + 1; k < 6; ++k) {
                    ComplexMatrix cols(6, 3);
                    cols.col(0) = eig.eigenvectors.col(i);
                    cols.col(1) = eig.eigenvectors.col(j);
                    cols.col(2) = eig.eigenvectors.col(k);
                    auto rep = analyze_graph_split(3, Subspace::from_orthonormal(cols), pol);
                    if (rep.is_graph) ++graphs;
                }
        CHECK(static_cast<int>(sols.size()) == graphs);
        for (const auto& s : sols) {
            CHECK(s.residual <= 1e-10 * op_norm(b.assembled()));
            CHECK(is_spectral(b, graph_subspace(b.n0, s.x, pol), pol));
        }
        // Sorted by norm.
        for (size_t i = 1; i < sols.size(); ++i)
            CHECK(op_norm(sols[i - 1].x) <= op_norm(sols[i].x) + 1e-12);
    }
}

TEST_CASE("spectrality is decided at the cluster level") {
    TolerancePolicy pol;
    BlockOperator b = involution(2);

    // The +1 eigenspace of [[0,I],[I,0]] is two-dimensional: vectors (u, u).
    ComplexMatrix full(4, 2);
    full.setZero();
    full(0, 0) = full(2, 0) = Complex(1 / std::sqrt(2.0), 0);
    full(1, 1) = full(3, 1) = Complex(1 / std::sqrt(2.0), 0);
    CHECK(is_spectral(b, Subspace::from_orthonormal(full), pol));

    // A line inside it is invariant but not spectral.
    CHECK(!is_spectral(b, Subspace::from_orthonormal(full.leftCols(1)), pol));

    // A coordinate line is not even invariant.
    CHECK_THROWS_AS(is_spectral(b, Subspace::coordinates(4, 0, 1), pol), NotInvariant);
}

TEST_CASE("non-spectral solutions admit nearby witnesses, spectral ones do not") {
    TolerancePolicy pol;
    BlockOperator b = involution(2);

    // diag(1,-1) solves X^2 = I but mixes both eigenvalue clusters.
    ComplexMatrix mixed(2, 2);
    mixed.setZero();
    mixed(0, 0) = Complex(1, 0);
    mixed(1, 1) = Complex(-1, 0);
    RiccatiSolution sol = classify(b, mixed, pol);
    CHECK(sol.residual == 0.0);
    CHECK(!sol.is_spectral);
    CHECK(!sol.is_isolated.has_value());

    auto witness = isolation_witness(b, sol, pol);
    REQUIRE(witness.has_value());
    auto [y, distance] = *witness;
    CHECK(distance > 0.0);
    CHECK(distance <= 10.0 * 1e-3);
    CHECK((y - mixed).norm() > 0.0);
    // The witness is itself a genuine solution.
    CHECK(residual(b, y) <= pol.residual_bound(1.0, op_norm(y)));

    // The identity is spectral: no witness, isolation certified.
    RiccatiSolution id_sol = classify(b, ComplexMatrix::Identity(2, 2), pol);
    CHECK(id_sol.is_spectral);
    CHECK(id_sol.is_isolated.value());
    CHECK(!isolation_witness(b, id_sol, pol).has_value());
}

TEST_CASE("solutions transform covariantly under block-diagonal conjugation") {
    TolerancePolicy pol;
    BlockOperator b = random_block(3, 3, 95);
    auto sols = solve_spectral(b, pol);
    REQUIRE(!sols.empty());

    ComplexMatrix u0 = rand_unitary(3, 96);
    ComplexMatrix u1 = rand_unitary(3, 97);
    BlockOperator bc;
    bc.n0 = bc.n1 = 3;
    bc.a0 = u0 * b.a0 * u0.adjoint();
    bc.a1 = u1 * b.a1 * u1.adjoint();
    bc.v = u0 * b.v * u1.adjoint();
    auto sols_c = solve_spectral(bc, pol);

    REQUIRE(sols_c.size() == sols.size());
    for (size_t i = 0; i < sols.size(); ++i) {
        ComplexMatrix mapped = u1 * sols[i].x * u0.adjoint();
        // Same norms in the same order, and the mapped solution solves bc.
        CHECK(op_norm(sols_c[i].x) == doctest::Approx(op_norm(sols[i].x)).epsilon(1e-8));
        CHECK(residual(bc, mapped) <=
              pol.residual_bound(op_norm(bc.assembled()), op_norm(mapped)));
    }
}

TEST_CASE("classify rejects wrong shapes and flags non-solutions") {
    TolerancePolicy pol;
    BlockOperator b = random_block(2, 3, 98);
    CHECK_THROWS_AS(classify(b, ComplexMatrix::Zero(2, 3), pol), DimensionMismatch);

    RiccatiSolution junk = classify(b, rand_matrix(3, 2, 99), pol);
    CHECK(junk.residual > 1e-3);
    CHECK(!junk.is_spectral);
}

TEST_CASE("cluster count is capped") {
    TolerancePolicy pol;
    BlockOperator b;
    b.n0 = 10;
    b.n1 = 11;
    RealVector d0 = RealVector::LinSpaced(10, 1.0, 10.0);
    RealVector d1 = RealVector::LinSpaced(11, 20.0, 30.0);
    b.a0 = d0.cast<Complex>().asDiagonal();
    b.a1 = d1.cast<Complex>().asDiagonal();
    b.v = ComplexMatrix::Zero(10, 11);
    CHECK_THROWS_AS(solve_spectral(b, pol), TooManyClusters);
}

TEST_CASE("malformed block operators are rejected") {
    TolerancePolicy pol;
    BlockOperator b = random_block(2, 2, 100);
    b.a0(0, 1) += Complex(0.3, 0.7); // break Hermiticity
    CHECK_THROWS_AS(b.validate(pol), NotHermitian);

    BlockOperator b2 = random_block(2, 2, 101);
    b2.v = ComplexMatrix::Zero(3, 2);
    CHECK_THROWS_AS(b2.validate(pol), DimensionMismatch);
}
