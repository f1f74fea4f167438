#pragma once

#include <stdexcept>
#include <string>

namespace superhyp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two Grassmann numbers from different algebra contexts were combined.
struct ContextMismatchError : Error {
    explicit ContextMismatchError(const std::string& what = "algebra context mismatch") : Error(what) {}
};

/// Inversion of a Grassmann number whose body is zero.
struct ZeroBodyError : Error {
    explicit ZeroBodyError(const std::string& what = "body is zero, element not invertible") : Error(what) {}
};

/// Analytic lift evaluated outside the classical domain of the function,
/// or a value not representable in exact mode.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Analytic lift applied to an element that is not even.
struct OddInputError : Error {
    explicit OddInputError(const std::string& what = "analytic lift requires an even element") : Error(what) {}
};

/// A parity constraint was violated (odd value in an even slot or vice versa).
struct ParityError : Error {
    explicit ParityError(const std::string& what) : Error(what) {}
};

/// A matrix or point does not have the required block layout.
struct LayoutError : Error {
    explicit LayoutError(const std::string& what) : Error(what) {}
};

/// Orthosymplectic membership (or a determinant condition) failed on construction.
struct CertificationError : Error {
    explicit CertificationError(const std::string& what) : Error(what) {}
};

/// Degenerate geometric input (coincident points, isotropic differences,
/// singular normalization, degenerate tetrahedron).
struct DegenerateInputError : Error {
    explicit DegenerateInputError(const std::string& what) : Error(what) {}
};

/// Numerical failure: quadrature non-convergence, fit failure, solver failure.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Malformed serialized input.
struct SerializationError : Error {
    explicit SerializationError(const std::string& what) : Error(what) {}
};

} // namespace superhyp
