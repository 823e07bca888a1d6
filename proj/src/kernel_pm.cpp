#include "pmsdr/kernel_pm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmsdr/error.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "kernel-pm";
constexpr double kDropRatio = 1e-10;

double squared_distance(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = u[j] - v[j];
    s += d * d;
  }
  return s;
}

}  // namespace

double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma) {
  return std::exp(-gamma * squared_distance(u, v));
}

double median_heuristic_gamma(const Matrix& x) {
  if (x.rows() < 2) throw InputError(kModule, "median heuristic needs two or more rows");
  Vector d;
  d.reserve(x.rows() * (x.rows() - 1) / 2);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = i + 1; j < x.rows(); ++j) d.push_back(squared_distance(x.row(i), x.row(j)));
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
  if (med > 0.0) return 1.0 / med;
  // More than half the pairs coincide; fall back to the largest distance.
  const double far = *std::max_element(d.begin(), d.end());
  return far > 0.0 ? 1.0 / far : 1.0;
}

KernelBasis build_basis(const Matrix& x, std::size_t b, std::optional<double> gamma) {
  const std::size_t n = x.rows();
  if (n < 3) throw InputError(kModule, "kernel basis needs at least three observations");
  if (b == 0) b = n / 3;
  if (b > n) throw InputError(kModule, "basis size b=" + std::to_string(b) +
                                           " exceeds n=" + std::to_string(n));
  if (gamma && !(*gamma > 0.0)) throw InputError(kModule, "gamma must be positive");
  for (double v : x.data())
    if (!std::isfinite(v)) throw InputError(kModule, "predictors contain non-finite values");

  KernelBasis basis;
  basis.train_x = x;
  basis.gamma = gamma ? *gamma : median_heuristic_gamma(x);

  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j)
      k(i, j) = k(j, i) = rbf_kernel(x.row(i), x.row(j), basis.gamma);
  }
  basis.col_means.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) basis.col_means[j] += k(i, j);
  double grand = 0.0;
  for (double& m : basis.col_means) {
    m /= static_cast<double>(n);
    grand += m;
  }
  grand /= static_cast<double>(n);

  Matrix centered(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      centered(i, j) = k(i, j) - basis.col_means[i] - basis.col_means[j] + grand;

  const EigenDecomposition eig = sym_eigen(centered);
  const double top = eig.values.front();
  if (!(top > 1e-12))
    throw NumericError(kModule, "centered kernel matrix is numerically zero; the basis is degenerate");
  std::size_t kept = 0;
  while (kept < b && eig.values[kept] > kDropRatio * top) ++kept;

  basis.lam.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(kept));
  basis.q = Matrix(n, kept);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < kept; ++j) basis.q(i, j) = eig.vectors(i, j);

  // Raw psi_j(x_i) from the column-centered kernel rows.
  basis.psi_bar.assign(kept, 0.0);
  basis.features = Matrix(n, kept);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kept; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += (k(i, l) - basis.col_means[l]) * basis.q(l, j);
      basis.features(i, j) = s / basis.lam[j];
      basis.psi_bar[j] += basis.features(i, j);
    }
  }
  for (double& m : basis.psi_bar) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < kept; ++j) basis.features(i, j) -= basis.psi_bar[j];
  return basis;
}

Matrix feature_map(const KernelBasis& basis, const Matrix& newx) {
  const std::size_t b = basis.size();
  if (newx.rows() == 0) return Matrix(0, b);
  if (newx.cols() != basis.train_x.cols())
    throw ContractError(kModule, "new data has " + std::to_string(newx.cols()) +
                                     " columns, basis expects " +
                                     std::to_string(basis.train_x.cols()));
  const std::size_t n = basis.train_x.rows();
  Matrix out(newx.rows(), b);
  Vector kx(n);
  for (std::size_t i = 0; i < newx.rows(); ++i) {
    for (std::size_t l = 0; l < n; ++l)
      kx[l] = rbf_kernel(newx.row(i), basis.train_x.row(l), basis.gamma) - basis.col_means[l];
    for (std::size_t j = 0; j < b; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += kx[l] * basis.q(l, j);
      out(i, j) = s / basis.lam[j] - basis.psi_bar[j];
    }
  }
  return out;
}

NpmFit fit_kernel(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                  std::size_t h, const SolveConfig& cfg, std::size_t b,
                  std::optional<double> gamma) {
  if (y.size() != x.rows()) throw InputError(kModule, "response length does not match rows");
  NpmFit fit;
  fit.basis = build_basis(x, b, gamma);
  fit.inner = detail::fit_coordinates(fit.basis.features, y, loss,
                                      make_slices(y, loss.family, h), cfg);
  return fit;
}

Matrix project_nonlinear(const NpmFit& fit, const Matrix& newx, std::size_t d) {
  const std::size_t b = fit.basis.size();
  if (d < 1 || d > b)
    throw ContractError(kModule, "projection dimension d=" + std::to_string(d) +
                                     " must be between 1 and b=" + std::to_string(b));
  const Matrix features = feature_map(fit.basis, newx);
  Matrix out(features.rows(), d);
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < b; ++j) s += features(i, j) * fit.inner.evectors(j, c);
      out(i, c) = s;
    }
  return out;
}

}  // namespace pmsdr
