#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmsdr/losses.hpp"
#include "pmsdr/numlin.hpp"

namespace pmsdr {

enum class SliceKind {
  Response,        // one loss, pseudo-responses thresholded at quantile cutpoints
  LossWeighted,    // response fixed in {-1,+1}, class weights pi_k(y) vary
  LossParametric,  // response fixed and real, quantile/expectile level varies
};

struct SliceScheme {
  SliceKind kind = SliceKind::Response;
  std::size_t requested = 0;  // h as asked for
  // Retained cutpoints, strictly increasing. Response scale for Response
  // schemes; levels k/(h+1) in (0,1) otherwise.
  Vector cutpoints;
  std::size_t dropped = 0;  // duplicate or one-sided slices removed
  bool binary_response = false;

  std::size_t size() const noexcept { return cutpoints.size(); }
};

/// True when every entry of y is exactly -1 or +1 and both occur.
bool is_binary_response(std::span<const double> y);

/// Type-7 (linear interpolation) empirical quantile of `sorted` at level q.
double quantile_type7(std::span<const double> sorted, double q);

/// Builds the slice sequence for `family`. Custom losses slice like the
/// response-based families.
SliceScheme make_slices(std::span<const double> y, LossFamily family, std::size_t h);

/// Pseudo-response for slice k (0-based): +1 where y >= c_k, -1 otherwise for
/// Response schemes; y unchanged for loss-based schemes.
Vector pseudo_labels(const SliceScheme& scheme, std::span<const double> y, std::size_t k);

/// Loss for slice k: `base` with theta set to c_k for loss-based schemes.
LossSpec slice_loss(const SliceScheme& scheme, const LossSpec& base, std::size_t k);

/// A +/-1 label vector is usable only if both labels are present.
bool has_both_labels(std::span<const double> labels);

}  // namespace pmsdr
