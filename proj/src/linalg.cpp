#include "lichi/linalg.hpp"

#include <Eigen/Cholesky>

namespace lichi {

Matrix gram(const Matrix& a) {
    Matrix g = a.transpose() * a;
    g = 0.5 * (g + g.transpose()).eval();
    return g;
}

Matrix solve_spd(const Matrix& m, double lambda, const Matrix& b) {
    if (m.rows() != m.cols())
        throw ConfigError("solve_spd: matrix must be square");
    if (lambda < 0.0) throw ConfigError("solve_spd: lambda must be >= 0");
    Matrix shifted = m;
    shifted.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError(
            "solve_spd: Cholesky factorization failed (matrix not positive "
            "definite)");
    // Guard against semi-definite matrices that slip through the
    // factorization with a vanishing pivot. Pivots are square roots of the
    // Schur complements, so rank deficiency shows up near sqrt(eps).
    const auto diag = llt.matrixLLT().diagonal();
    const double dmax = diag.maxCoeff();
    const double dmin = diag.minCoeff();
    if (!(dmin > 0.0) || dmin < 1e-7 * dmax)
        throw SingularMatrixError("solve_spd: matrix is numerically singular");
    return llt.solve(b);
}

}  // namespace lichi
