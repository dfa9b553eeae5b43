#pragma once

#include "riccati/riccati_engine.hpp"
#include "riccati/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace riccati {

/// Deterministic random source with a pinned stream contract so corpora are
/// reproducible bit-for-bit:
///   - raw stream: std::mt19937_64 seeded directly;
///   - uniform(): top 53 bits of one raw draw, scaled to [0, 1);
///   - gaussian(): Box-Muller on two uniforms, the sine partner cached and
///     returned by the next call;
///   - matrix(): entries column by column, each as gaussian real part followed
///     by gaussian imaginary part;
///   - hermitian(): (G + G*)/2 of one matrix() draw;
///   - unitary(): QR of one matrix() draw with column phases fixed so the
///     triangular factor has positive diagonal.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();
    double gaussian();
    ComplexMatrix matrix(Index rows, Index cols);
    ComplexMatrix hermitian(Index n);
    ComplexMatrix unitary(Index n);

private:
    std::mt19937_64 gen_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

struct InstanceSpec {
    enum class Kind { involution, multiplication, random, constructed_nonunique };

    Kind kind = Kind::involution;
    Index k_dim = 1;       // involution: ambient dimension of each summand
    Index grid_n = 2;      // multiplication: number of interior grid points
    Index n0 = 1, n1 = 1;  // random: summand dimensions
    std::uint64_t seed = 0;
    std::optional<double> gap; // random: enforced spectral separation
    std::string description;

    static InstanceSpec involution(Index k);
    static InstanceSpec multiplication(Index n);
    static InstanceSpec random(Index n0, Index n1, std::uint64_t seed,
                               std::optional<double> gap = std::nullopt);
    static InstanceSpec constructed_nonunique(std::uint64_t seed);

    void validate() const; // throws InvalidSpec
};

struct Instance {
    InstanceSpec spec;
    BlockOperator b;
    std::vector<ComplexMatrix> known_solutions;
};

/// Materialize an instance. Each known solution satisfies the Riccati
/// equation of b up to roundoff:
///   - involution(k): A0 = A1 = 0, V = I; the equation degenerates to X^2 = I
///     and the known solutions are +I and -I.
///   - multiplication(n): Lambda = diag(j/(n+1)), A0 = -Lambda, A1 = Lambda,
///     V = Lambda^2; the known solution is f(Lambda) with
///     f(l) = (1 + sqrt(1 + l^2))/l, the unbounded root of l f^2 - 2 f - l = 0.
///     Its norm grows like 2(n+1): the finite shadow of an unbounded operator.
///   - random(n0, n1, seed, gap): seeded Gaussian Hermitian diagonal blocks
///     and a full Gaussian coupling; when gap is set, A1 is shifted so
///     min spec(A1) - max spec(A0) >= gap. No closed-form solutions.
///   - constructed_nonunique(seed): seeded search for an instance with a
///     certified pair of distinct contractive spectral solutions; the
///     certification is done by the solver and analysis machinery, never
///     assumed from the construction.
Instance build(const InstanceSpec& spec);

struct RefinementRow {
    Index n = 0;
    double norm_x = 0.0; // operator norm of the known solution
    double dist = 0.0;   // ||P - Q|| = norm_x / sqrt(1 + norm_x^2)
};

/// Grid-refinement table for the multiplication instance: for each n the
/// known solution is rebuilt, its residual re-verified, and the pair
/// (||X||, ||P - Q||) reported. dist increases strictly with n and tends to 1,
/// which is how the finite sections witness unboundedness.
std::vector<RefinementRow> refinement_study(const std::vector<Index>& n_list);

/// The standard spec list exercised by the cross-cutting property suites and
/// exported by the command-line corpus dump.
std::vector<InstanceSpec> builtin_corpus();

} // namespace riccati
