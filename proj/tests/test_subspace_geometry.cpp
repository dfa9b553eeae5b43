#include "riccati/subspace_geometry.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace riccati;
using test_support::rand_matrix;
using test_support::rand_unitary;

namespace {

constexpr double kPi = 3.14159265358979323846;

Subspace line(double angle) {
    ComplexMatrix v(2, 1);
    v(0, 0) = std::cos(angle);
    v(1, 0) = std::sin(angle);
    return Subspace::from_orthonormal(v);
}

/// P, Q in C^(2m) with prescribed principal angles: P spans e_1..e_m and Q
/// spans cos(a_j) e_j + sin(a_j) e_{m+j}. Every angle is generic by design.
std::pair<Subspace, Subspace> angle_pair(const std::vector<double>& angles) {
    const Index m = static_cast<Index>(angles.size());
    ComplexMatrix qb = ComplexMatrix::Zero(2 * m, m);
    for (Index j = 0; j < m; ++j) {
        qb(j, j) = std::cos(angles[static_cast<size_t>(j)]);
        qb(m + j, j) = std::sin(angles[static_cast<size_t>(j)]);
    }
    return {Subspace::coordinates(2 * m, 0, m), Subspace::from_orthonormal(qb)};
}

/// Concatenate all six bases and verify mutual orthonormality and that the
/// pieces exhaust the ambient space.
void check_complete_orthogonal(const CanonicalDecomposition& d) {
    const Index n = d.ambient();
    ComplexMatrix all(n, d.m00.dim() + d.m01.dim() + d.m10.dim() + d.m11.dim() +
                             d.m0_prime.dim() + d.m1_prime.dim());
    REQUIRE(all.cols() == n);
    Index at = 0;
    for (const Subspace* s : {&d.m00, &d.m01, &d.m10, &d.m11, &d.m0_prime, &d.m1_prime}) {
        all.middleCols(at, s->dim()) = s->basis();
        at += s->dim();
    }
    CHECK((all.adjoint() * all - ComplexMatrix::Identity(n, n)).norm() < 1e-10);
}

} // namespace

TEST_CASE("single generic angle in C^2 is recovered exactly") {
    TolerancePolicy pol;
    auto d = halmos_decompose(line(0.0), line(0.3), pol);

    CHECK(d.m00.is_zero());
    CHECK(d.m01.is_zero());
    CHECK(d.m10.is_zero());
    CHECK(d.m11.is_zero());
    REQUIRE(d.theta.size() == 1);
    CHECK(d.theta(0) == doctest::Approx(0.3).epsilon(1e-12));
    REQUIRE(d.w.rows() == 1);
    CHECK(std::abs(d.w(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(sin_theta_distance(d) == doctest::Approx(std::sin(0.3)).epsilon(1e-12));
    // The angle is the whole story: ||P - Q|| must equal sin(theta).
    const double direct = op_norm(project(line(0.3)) - project(line(0.0)));
    CHECK(sin_theta_distance(d) == doctest::Approx(direct).epsilon(1e-12));

    auto [p, q] = reconstruct(d);
    CHECK((p - project(line(0.0))).norm() < 1e-12);
    CHECK((q - project(line(0.3))).norm() < 1e-12);
}

TEST_CASE("equal projections: everything lands in the corners") {
    TolerancePolicy pol;
    ComplexMatrix u = rand_unitary(5, 101);
    auto s = Subspace::from_orthonormal(u.leftCols(2));
    auto d = halmos_decompose(s, s, pol);
    CHECK(d.theta.size() == 0);
    CHECK(span_equal(d.m11, s, 1e-10));
    CHECK(d.m00.dim() == 3);
    CHECK(d.m10.is_zero());
    CHECK(d.m01.is_zero());
    CHECK(projection_distance(d) == 0.0);
}

TEST_CASE("commuting projections have an empty generic part") {
    TolerancePolicy pol;
    auto p = Subspace::coordinates(5, 0, 2); // e1, e2
    auto q = Subspace::coordinates(5, 1, 2); // e2, e3
    auto d = halmos_decompose(p, q, pol);

    CHECK(d.theta.size() == 0);
    CHECK(span_equal(d.m11, Subspace::coordinates(5, 1, 1), 1e-10));
    CHECK(span_equal(d.m10, Subspace::coordinates(5, 0, 1), 1e-10));
    CHECK(span_equal(d.m01, Subspace::coordinates(5, 2, 1), 1e-10));
    CHECK(span_equal(d.m00, Subspace::coordinates(5, 3, 2), 1e-10));

    // With no generic part, Q is rebuilt purely from m01 and m11.
    auto [pmat, qmat] = reconstruct(d);
    CHECK((qmat - (project(d.m01) + project(d.m11))).norm() < 1e-12);
    CHECK((pmat - project(p)).norm() < 1e-10);
}

TEST_CASE("orthocomplement pair: only the off-corners survive") {
    TolerancePolicy pol;
    auto p = Subspace::coordinates(4, 0, 2);
    auto d = halmos_decompose(p, ortho_complement(p), pol);
    CHECK(d.theta.size() == 0);
    CHECK(d.m11.is_zero());
    CHECK(d.m00.is_zero());
    CHECK(d.m10.dim() == 2);
    CHECK(d.m01.dim() == 2);
    CHECK(projection_distance(d) == 1.0);
}

TEST_CASE("prescribed multi-angle pair is fully recovered") {
    TolerancePolicy pol;
    std::vector<double> angles = {0.7, 0.2, 1.2}; // deliberately unsorted
    auto [p, q] = angle_pair(angles);
    auto d = halmos_decompose(p, q, pol);

    REQUIRE(d.theta.size() == 3);
    CHECK(d.theta(0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d.theta(1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(d.theta(2) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(sin_theta_distance(d) == doctest::Approx(std::sin(1.2)).epsilon(1e-12));
    CHECK(sin_theta_distance(d) ==
          doctest::Approx(op_norm(project(q) - project(p))).epsilon(1e-10));

    check_complete_orthogonal(d);
    CHECK((d.w.adjoint() * d.w - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);

    auto [pmat, qmat] = reconstruct(d);
    CHECK((pmat - project(p)).norm() < 1e-10);
    CHECK((qmat - project(q)).norm() < 1e-10);
}

TEST_CASE("theta = pi/4 on a two-dimensional generic part") {
    TolerancePolicy pol;
    auto [p, q] = angle_pair({kPi / 4});
    auto d = halmos_decompose(p, q, pol);
    REQUIRE(d.theta.size() == 1);
    auto [pmat, qmat] = reconstruct(d);
    ComplexMatrix expected(2, 2);
    expected << Complex(0.5, 0), Complex(0.5, 0), Complex(0.5, 0), Complex(0.5, 0);
    CHECK((qmat - expected).norm() < 1e-12);
}

TEST_CASE("random pairs: orthogonality, round-trip, and the distance rule") {
    TolerancePolicy pol;
    struct Shape {
        Index n, dp, dq;
        std::uint64_t seed;
    };
    for (auto [n, dp, dq, seed] : {Shape{6, 3, 3, 7}, Shape{8, 3, 5, 8}, Shape{12, 5, 4, 9},
                                   Shape{9, 2, 7, 10}, Shape{7, 6, 1, 11}}) {
        CAPTURE(seed);
        ComplexMatrix u = rand_unitary(n, seed);
        auto p = Subspace::from_orthonormal(u.leftCols(dp));
        auto q = Subspace::from_span(rand_matrix(n, dq, seed + 1000), pol);
        auto d = halmos_decompose(p, q, pol);

        check_complete_orthogonal(d);

        auto [pmat, qmat] = reconstruct(d);
        CHECK((pmat - project(p)).norm() < 1e-10);
        CHECK((qmat - project(q)).norm() < 1e-10);

        const double direct = op_norm(project(p) - project(q));
        CHECK(projection_distance(d) == doctest::Approx(direct).epsilon(1e-10));

        // Generic-part factorization: in the paired frames, Q - P restricted
        // to the generic part must be [[-sin^2, sin cos], [sin cos, sin^2]].
        const Index m = d.generic_dim();
        if (m > 0) {
            ComplexMatrix frame(n, 2 * m);
            frame.leftCols(m) = d.m0_prime.basis();
            frame.rightCols(m) = d.m1_prime.basis() * d.w.adjoint();
            ComplexMatrix diff = frame.adjoint() * (project(q) - project(p)) * frame;
            ComplexMatrix expected = ComplexMatrix::Zero(2 * m, 2 * m);
            for (Index j = 0; j < m; ++j) {
                const double s = std::sin(d.theta(j)), c = std::cos(d.theta(j));
                expected(j, j) = -s * s;
                expected(j, m + j) = s * c;
                expected(m + j, j) = s * c;
                expected(m + j, m + j) = s * s;
            }
            CHECK((diff - expected).norm() < 1e-10);
        }
    }
}

TEST_CASE("theta is an invariant of the pair, not of the computation") {
    TolerancePolicy pol;
    auto [p, q] = angle_pair({0.4, 0.9});
    auto d1 = halmos_decompose(p, q, pol);

    // Conjugating both projections by one unitary must preserve the angles.
    ComplexMatrix u = rand_unitary(4, 77);
    auto p2 = Subspace::from_orthonormal(u * p.basis());
    auto q2 = Subspace::from_orthonormal(u * q.basis());
    auto d2 = halmos_decompose(p2, q2, pol);

    REQUIRE(d1.theta.size() == d2.theta.size());
    for (Index j = 0; j < d1.theta.size(); ++j)
        CHECK(d1.theta(j) == doctest::Approx(d2.theta(j)).epsilon(1e-8));

    // And decomposing the identical pair twice is deterministic.
    auto d3 = halmos_decompose(p, q, pol);
    CHECK((d1.w - d3.w).norm() == 0.0);
    CHECK((d1.theta - d3.theta).norm() == 0.0);
}

TEST_CASE("angles at the working-precision boundary still decompose validly") {
    TolerancePolicy pol;
    // Sweep angles from far below the rank cutoff to nearly pi/2. Wherever
    // each direction lands (corner or generic part), the result must stay a
    // valid decomposition with an exact-enough round-trip.
    for (double a : {1e-15, 1e-13, 1e-12, 5e-12, 1e-10, 1e-6, 0.1, kPi / 2 - 1e-6,
                     kPi / 2 - 1e-12, kPi / 2 - 1e-15}) {
        CAPTURE(a);
        auto [p, q] = angle_pair({a});
        auto d = halmos_decompose(p, q, pol);
        for (Index j = 0; j < d.theta.size(); ++j) {
            CHECK(d.theta(j) > 0.0);
            CHECK(d.theta(j) < kPi / 2);
        }
        check_complete_orthogonal(d);
        auto [pmat, qmat] = reconstruct(d);
        CHECK((pmat - project(p)).norm() < 1e-10);
        CHECK((qmat - project(q)).norm() < 1e-10);
    }
}

TEST_CASE("ambient mismatch is rejected") {
    TolerancePolicy pol;
    CHECK_THROWS_AS(halmos_decompose(Subspace::full(2), Subspace::full(3), pol),
                    DimensionMismatch);
}
