#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmsdr/cgd.hpp"
#include "pmsdr/losses.hpp"
#include "pmsdr/numlin.hpp"
#include "pmsdr/slicing.hpp"

namespace pmsdr {

/// Result of a principal-machine fit.
struct PmFit {
  Vector evalues;                      // descending eigenvalues of M
  Matrix evectors;                     // p x p, columns aligned with evalues
  std::vector<SliceSolution> slices;   // one per retained slice
  Vector mu;                           // predictor means used for centering
  SliceScheme scheme;                  // retained slices only
  LossSpec loss;
  SolveConfig config;
  std::size_t n = 0;

  std::size_t dim() const noexcept { return mu.size(); }
};

/// M = sum_k beta_k beta_k^T.
Matrix working_matrix(std::span<const SliceSolution> slices);

/// Center, slice, solve every slice by CGD and eigendecompose the working
/// matrix. Requires n >= 2 and p >= 2.
PmFit fit_linear(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                 std::size_t h = 10, const SolveConfig& cfg = {});

/// Same pipeline with a caller-supplied slice scheme (for example cutpoints
/// frozen from an earlier sample). Response slices that are one-sided on
/// this data are dropped.
PmFit fit_linear(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                 const SliceScheme& scheme, const SolveConfig& cfg = {});

namespace detail {
// fit_linear without the p >= 2 requirement; kernel fits reuse it on their
// feature coordinates, which may be one-dimensional.
PmFit fit_coordinates(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                      const SliceScheme& scheme, const SolveConfig& cfg);
}  // namespace detail

struct DimensionEstimate {
  Vector criterion;   // G(d) for d = 1..p_max
  std::size_t d_hat;  // 1-based
  double rho;
};

/// G(d) = sum_{j<=d} v_j - rho * d * log(n) / sqrt(n) * v_1, maximized over
/// d = 1..p_max (p_max = 0 means all eigenvalues). Ties go to the smaller d.
DimensionEstimate bic_dimension(std::span<const double> evalues, std::size_t n, double rho,
                                std::size_t p_max = 0);
DimensionEstimate bic_dimension(const PmFit& fit, double rho, std::size_t p_max = 0);

/// (newx - mu) V_d.
Matrix project(const PmFit& fit, const Matrix& newx, std::size_t d = 1);

}  // namespace pmsdr
