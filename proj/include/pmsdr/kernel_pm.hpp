#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "pmsdr/linear_pm.hpp"
#include "pmsdr/numlin.hpp"

namespace pmsdr {

/// exp(-gamma * |u - v|^2).
double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma);

/// 1 / median of the pairwise squared distances between rows of x.
double median_heuristic_gamma(const Matrix& x);

/// Frozen eigenbasis of the centered RBF kernel matrix on the training rows.
///
/// psi_j(x) = (k(x) - col_means)^T q_j / lam_j where k(x) holds K(x, x_i)
/// for every training row. `features` caches psi_j(x_i) - psi_bar_j for the
/// training rows; its columns sum to zero.
struct KernelBasis {
  Matrix train_x;
  double gamma = 0.0;
  Matrix q;            // n x b
  Vector lam;          // b leading eigenvalues, all positive
  Vector psi_bar;      // b
  Vector col_means;    // n
  Matrix features;     // n x b

  std::size_t size() const noexcept { return lam.size(); }
};

/// b = 0 selects floor(n/3); gamma defaults to the median heuristic.
/// Components with eigenvalue <= 1e-10 times the largest are dropped, so the
/// returned basis may be smaller than requested.
KernelBasis build_basis(const Matrix& x, std::size_t b = 0,
                        std::optional<double> gamma = std::nullopt);

/// psi_j(newx_i) - psi_bar_j for every row of newx.
Matrix feature_map(const KernelBasis& basis, const Matrix& newx);

struct NpmFit {
  KernelBasis basis;
  PmFit inner;  // linear fit on the b feature coordinates
};

NpmFit fit_kernel(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                  std::size_t h = 10, const SolveConfig& cfg = {}, std::size_t b = 0,
                  std::optional<double> gamma = std::nullopt);

/// Nonlinear sufficient predictors: feature_map(newx) times the leading d
/// eigenvectors of the inner working matrix.
Matrix project_nonlinear(const NpmFit& fit, const Matrix& newx, std::size_t d = 2);

}  // namespace pmsdr
