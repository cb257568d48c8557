#ifndef SPT_TRIDIAG_HPP
#define SPT_TRIDIAG_HPP

#include <cstddef>
#include <vector>

namespace spt {

// Solve a general tridiagonal system in place (Thomas algorithm, no
// pivoting; intended for diagonally dominant systems such as the Poisson
// matrix). lower/upper have size n-1.
std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs);

// Symmetric tridiagonal eigenproblem, lowest eigenpairs.
// diag has size n, off size n-1 (off[i] couples i and i+1).
struct TridiagEigen {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // unit 2-norm, deterministic sign
};

// Sturm-sequence bisection for the k lowest eigenvalues plus inverse
// iteration (tridiagonal LU with partial pivoting) for the vectors.
// Near-degenerate vectors are re-orthogonalized. Throws ConvergenceError
// if inverse iteration fails to settle.
TridiagEigen lowest_eigenpairs(const std::vector<double>& diag,
                               const std::vector<double>& off, std::size_t k);

// Number of eigenvalues strictly below x (exposed for tests).
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                        double x);

}  // namespace spt

#endif
