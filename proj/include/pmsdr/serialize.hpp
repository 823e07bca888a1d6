#pragma once

#include <json.hpp>

#include "pmsdr/kernel_pm.hpp"
#include "pmsdr/linear_pm.hpp"
#include "pmsdr/realtime_pm.hpp"

namespace pmsdr {

// JSON encodings of fits and stream snapshots. Doubles are written in their
// shortest round-trip form, so decoding reproduces every value bit for bit.
// Matrices are arrays of rows.

inline constexpr int kFitSchemaVersion = 1;
inline constexpr int kStreamSchemaVersion = 1;

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Linear-fit fields: evalues, evectors, mu, n, loss, config, slicing, slices.
nlohmann::json to_json(const PmFit& fit);
/// Custom losses come back with family Custom and no function attached.
PmFit pm_fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KernelBasis& basis);
/// Recomputes the cached training features from the stored basis.
KernelBasis kernel_basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StreamState& state);
StreamState stream_state_from_json(const nlohmann::json& j);

}  // namespace pmsdr
