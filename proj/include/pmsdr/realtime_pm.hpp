#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmsdr/numlin.hpp"

namespace pmsdr {

/// Per-slice accumulators of the streamed least-squares machine. With
/// xt = (1, x) and slice weights w (1 for continuous responses, pi_k(y) for
/// binary ones):
///   s = sum w * ytilde * xt
///   A = Diag{0, n * Sigma} + lambda * sum w * xt xt^T
///   A r = lambda * s
struct StreamSlice {
  double cutpoint = 0.0;  // response threshold, or weight level c_k when binary
  Vector s;
  Matrix a;
  Vector r;  // (intercept on uncentered x, beta)
};

/// Everything needed to keep updating the fit; no observation rows are kept,
/// so the size is O(h p^2) regardless of how many rows were seen.
struct StreamState {
  std::size_t n = 0;
  Vector sum_x;
  Matrix sum_xx;
  std::size_t h = 10;
  double lambda = 1.0;
  bool binary_mode = false;
  std::vector<StreamSlice> slices;

  std::size_t dim() const noexcept { return sum_x.size(); }
};

enum class UpdateMethod {
  Woodbury,     // r_W = {I - A_O^{-1} B_N (I + A_O^{-1} B_N)^{-1}} (r_O + A_O^{-1} c_N)
  DirectSolve,  // A_W r_W = c_W
};

/// Starts a stream from its first batch. Cutpoints are computed here and
/// frozen for the rest of the stream. A response coded entirely as -1/+1
/// switches to the weighted machine with levels k/(h+1).
StreamState stream_init(const Matrix& x, std::span<const double> y, std::size_t h = 10,
                        double lambda = 1.0);

/// Folds a new batch into the state without touching earlier rows.
StreamState stream_update(StreamState state, const Matrix& x_new, std::span<const double> y_new,
                          UpdateMethod method = UpdateMethod::Woodbury);

struct StreamResult {
  Vector evalues;
  Matrix evectors;
  std::vector<Vector> r;
  std::vector<Matrix> a;
  std::size_t n = 0;
};

/// Eigendecomposition of sum_k beta_k beta_k^T plus the per-slice systems.
StreamResult stream_result(const StreamState& state);

}  // namespace pmsdr
