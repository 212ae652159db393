#ifndef LICHI_LINALG_HPP
#define LICHI_LINALG_HPP

#include <Eigen/Dense>

#include "lichi/image.hpp"

namespace lichi {

using Matrix = Eigen::MatrixXd;

/// Factorization failed; the caller must fall back (e.g. SURE -> Nr2N).
struct SingularMatrixError : Error {
    using Error::Error;
};

/// A'A, symmetrized as (M + M')/2 so downstream Cholesky sees an exactly
/// symmetric matrix.
Matrix gram(const Matrix& a);

/// Solves (M + lambda*I) X = B with M symmetric, via Cholesky.
/// Throws SingularMatrixError when M + lambda*I is not positive definite;
/// never falls back to a pseudo-inverse.
Matrix solve_spd(const Matrix& m, double lambda, const Matrix& b);

}  // namespace lichi

#endif
