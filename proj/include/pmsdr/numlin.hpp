#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace pmsdr {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// Zero-row matrices are representable so that projecting an empty batch is
/// a vacuous operation rather than an error; every numeric routine that needs
/// data checks its own shape preconditions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);

/// A^T A without forming the transpose.
Matrix gram(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm_inf(std::span<const double> a);

/// Eigenvalues sorted non-increasing; `vectors` holds the matching unit
/// eigenvectors as columns. In each column the entry of largest magnitude is
/// positive (lowest index wins a tie).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
/// Throws ContractError for non-square input or asymmetry beyond 1e-10
/// relative to the largest entry.
EigenDecomposition sym_eigen(const Matrix& a);

/// Cholesky factor L (lower triangular, A = L L^T) of a symmetric positive
/// definite matrix. Throws SingularMatrixError on a non-positive pivot.
Matrix cholesky(const Matrix& a);

/// Solves L L^T x = b given the Cholesky factor.
Vector cholesky_solve(const Matrix& l, std::span<const double> b);

/// Solves A x = b for symmetric positive definite A.
Vector solve_spd(const Matrix& a, std::span<const double> b);

/// Solves A x = b for a general square A by LU with partial pivoting.
/// Throws SingularMatrixError when a pivot vanishes.
Vector solve_lu(const Matrix& a, std::span<const double> b);

/// Subtracts column means. Requires at least two rows.
std::pair<Matrix, Vector> center_columns(const Matrix& x);

/// (1/n) Z^T Z for a column-centered Z.
Matrix sample_cov(const Matrix& z);

}  // namespace pmsdr
