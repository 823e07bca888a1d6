#include "pmsdr/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmsdr/error.hpp"

namespace pmsdr {

namespace {
constexpr const char* kModule = "slicing";
}

bool is_binary_response(std::span<const double> y) {
  bool pos = false, neg = false;
  for (double v : y) {
    if (v == 1.0) pos = true;
    else if (v == -1.0) neg = true;
    else return false;
  }
  return pos && neg;
}

double quantile_type7(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ContractError(kModule, "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

bool has_both_labels(std::span<const double> labels) {
  bool pos = false, neg = false;
  for (double v : labels) (v > 0.0 ? pos : neg) = true;
  return pos && neg;
}

SliceScheme make_slices(std::span<const double> y, LossFamily family, std::size_t h) {
  if (h < 1) throw InputError(kModule, "number of slices h must be at least 1");
  {
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (y.size() < 2 || *mn == *mx)
      throw InputError(kModule, "response needs at least two distinct values");
  }

  SliceScheme scheme;
  scheme.requested = h;
  scheme.binary_response = is_binary_response(y);

  if (is_loss_based(family)) {
    if (is_weighted(family) && !scheme.binary_response)
      throw InputError(kModule, std::string(family_name(family)) +
                                    " requires a binary response coded as -1/+1");
    scheme.kind = is_weighted(family) ? SliceKind::LossWeighted : SliceKind::LossParametric;
    scheme.cutpoints.resize(h);
    for (std::size_t k = 0; k < h; ++k)
      scheme.cutpoints[k] = static_cast<double>(k + 1) / static_cast<double>(h + 1);
    return scheme;
  }

  scheme.kind = SliceKind::Response;
  if (scheme.binary_response) {
    if (h > 1)
      throw InputError(kModule,
                       "response-based losses cannot recover more than one direction "
                       "from a binary response; use h = 1 or a weighted loss "
                       "(wsvm, wlogit, wl2svm, wlssvm)");
    // Threshold between the two classes so that the pseudo-response is y.
    scheme.cutpoints = {0.0};
    return scheme;
  }

  Vector sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  Vector candidates;
  for (std::size_t k = 1; k <= h; ++k) {
    const double c = quantile_type7(sorted, static_cast<double>(k) / static_cast<double>(h + 1));
    if (!candidates.empty() && c <= candidates.back()) continue;
    candidates.push_back(c);
  }
  // y >= c for every observation when c does not exceed the minimum.
  for (double c : candidates)
    if (c > sorted.front()) scheme.cutpoints.push_back(c);
  scheme.dropped = h - scheme.cutpoints.size();
  return scheme;
}

Vector pseudo_labels(const SliceScheme& scheme, std::span<const double> y, std::size_t k) {
  if (k >= scheme.size())
    throw ContractError(kModule, "slice index " + std::to_string(k) + " out of range");
  if (scheme.kind != SliceKind::Response) return Vector(y.begin(), y.end());
  const double c = scheme.cutpoints[k];
  Vector labels(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) labels[i] = y[i] >= c ? 1.0 : -1.0;
  return labels;
}

LossSpec slice_loss(const SliceScheme& scheme, const LossSpec& base, std::size_t k) {
  if (k >= scheme.size())
    throw ContractError(kModule, "slice index " + std::to_string(k) + " out of range");
  LossSpec spec = base;
  if (scheme.kind != SliceKind::Response) spec.theta = scheme.cutpoints[k];
  return spec;
}

}  // namespace pmsdr
