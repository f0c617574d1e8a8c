#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace graphpde {

// Row-major dense matrix. Everything in this library is desk-scale, so a plain
// contiguous buffer beats any sparse machinery.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<const double> row(int i) const {
    return {a_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LU with partial pivoting. Factor once, solve many.
struct LuFactor {
  Matrix lu;
  std::vector<int> perm;
};

LuFactor lu_factor(Matrix a);
std::vector<double> lu_solve(const LuFactor& f, std::span<const double> rhs);
std::vector<double> solve_dense(Matrix a, std::span<const double> rhs);

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& a);
double off_diagonal_frobenius(const Matrix& a);

// Cyclic Jacobi for symmetric matrices: eigenvalues ascending, eigenvectors as
// orthonormal columns of `vectors`. Stops once the off-diagonal Frobenius norm
// drops below off_tol; throws EigenConvergenceError past max_sweeps.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

SymmetricEigen jacobi_eigensystem(Matrix a, int max_sweeps = 100, double off_tol = 1e-13);

}  // namespace graphpde
