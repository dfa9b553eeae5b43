#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace riccati {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class DegenerateFrame : public Error {
public:
    using Error::Error;
};

class NotInvariant : public Error {
public:
    using Error::Error;
};

class NotContractive : public Error {
public:
    using Error::Error;
};

class ProjectionsDontCommute : public Error {
public:
    using Error::Error;
};

class NotASolution : public Error {
public:
    using Error::Error;
};

class NotSpectral : public Error {
public:
    using Error::Error;
};

class InvalidSubspace : public Error {
public:
    using Error::Error;
};

class TooManyClusters : public Error {
public:
    using Error::Error;
};

class TooManyComponents : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Shared tolerance policy. All rank, clustering and residual-acceptance
/// decisions in the library flow through one of these, so the lattice
/// operations (kernel, intersection, complement) stay mutually consistent.
struct TolerancePolicy {
    /// Relative singular-value cutoff for rank decisions. A singular value
    /// sigma is treated as zero when sigma <= rank_rtol * max(sigma_max, scale).
    double rank_rtol = 1e-12;
    /// Absolute eigenvalue-clustering width, scaled by (1 + ||H||) at use.
    double cluster_atol = 1e-8;
    /// Absolute residual acceptance floor.
    double residual_atol = 1e-10;
    /// Relative residual acceptance, scaled by ||B||(1+||X||)^2 at use.
    double residual_rtol = 1e-10;

    static TolerancePolicy defaults() { return TolerancePolicy{}; }

    static TolerancePolicy strict() {
        TolerancePolicy pol;
        pol.rank_rtol = 1e-13;
        pol.cluster_atol = 1e-10;
        pol.residual_atol = 1e-12;
        pol.residual_rtol = 1e-12;
        return pol;
    }

    void validate() const {
        if (!(rank_rtol > 0.0) || !(cluster_atol > 0.0) || !(residual_atol > 0.0) ||
            !(residual_rtol > 0.0)) {
            throw InvalidSpec("TolerancePolicy: all four tolerances must be strictly positive");
        }
    }

    double rank_cutoff(double sigma_max, double scale = 0.0) const {
        return rank_rtol * std::max(sigma_max, scale);
    }

    double cluster_width(double h_norm) const { return cluster_atol * (1.0 + h_norm); }

    /// Acceptance bound for the Riccati residual; quadratic in ||X|| because
    /// the Riccati map is quadratic in X.
    double residual_bound(double b_norm, double x_norm) const {
        return residual_atol + residual_rtol * b_norm * (1.0 + x_norm) * (1.0 + x_norm);
    }
};

} // namespace riccati
