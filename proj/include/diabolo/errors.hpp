#pragma once

#include <stdexcept>
#include <string>

namespace diabolo {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands have incompatible or unsupported dimensions.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Iterative eigensolver did not reach its residual target.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

// A matrix (or matrix family) does not conform to its declared symmetry class.
class ClassMismatch : public Error {
public:
    using Error::Error;
};

// Finite-difference derivative failed its step-halving self-check.
class DerivativeFailure : public Error {
public:
    using Error::Error;
};

// Eigenvector selection: both ratio forms are below the resolvable threshold.
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

// Discriminant of the degeneracy-splitting problem is negative: no real
// solutions for coalescence points exist (chirality-dominated regime).
class NegativeD : public Error {
public:
    using Error::Error;
};

// Discriminant is zero within tolerance: the two coalescence points merge.
class DegenerateD : public Error {
public:
    using Error::Error;
};

// The linear map from parameters to unfolding coordinates is rank-deficient.
class SingularFrame : public Error {
public:
    using Error::Error;
};

// The branch-locus line is undefined (vanishing normal vector).
class DegenerateLine : public Error {
public:
    using Error::Error;
};

// Near-intersection sheet approximation requested too close to Re c = 0.
class NearZeroRec : public Error {
public:
    using Error::Error;
};

// Real-perturbation geometry requested with non-real perturbation scalars.
class RealnessViolated : public Error {
public:
    using Error::Error;
};

// Dielectric model is not biaxial (eigenvalues not strictly ordered).
class NotBiaxial : public Error {
public:
    using Error::Error;
};

// Exceptional ring has (numerically) zero radius.
class DegenerateRing : public Error {
public:
    using Error::Error;
};

// Point handed to the ring partition does not lie on the ring plane.
class OffPlane : public Error {
public:
    using Error::Error;
};

// A material tensor violates a construction-time invariant.
class InvalidTensor : public Error {
public:
    using Error::Error;
};

// Configuration file missing, unreadable, or malformed.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace diabolo
