#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmsdr {

enum class LossFamily {
  Svm,
  Logit,
  L2Svm,
  LsSvm,
  WSvm,
  WLogit,
  WL2Svm,
  WLsSvm,
  Quantile,
  AsymLs,
  Custom,
};

/// Whether the loss consumes the margin y*f or the residual y-f.
enum class MarginType { Margin, Residual };

struct LossSpec {
  LossFamily family = LossFamily::Svm;
  MarginType mtype = MarginType::Margin;
  // Slice parameter c_k in (0,1) for the weighted, quantile and asymmetric
  // families. Ignored by the others.
  double theta = 0.5;
  // Scalar loss u -> L(u) for LossFamily::Custom; must be convex and re-entrant.
  std::function<double(double)> custom;
};

/// Short name ("svm", "logit", ..., "asls") of a built-in family, or
/// "custom".
std::string_view family_name(LossFamily family);

/// Parses a built-in family name; std::nullopt for anything else.
std::optional<LossFamily> parse_family(std::string_view name);

/// All ten built-in names in table order.
const std::vector<std::string>& builtin_loss_names();

bool is_weighted(LossFamily family);        // wsvm, wlogit, wl2svm, wlssvm
bool is_loss_based(LossFamily family);      // weighted families plus qr, asls
MarginType natural_mtype(LossFamily family);

/// Built-in spec with the family's own margin type.
LossSpec make_loss(LossFamily family, double theta = 0.5);

/// Custom loss; `mtype` defaults to margin.
LossSpec make_custom_loss(std::function<double(double)> fn,
                          MarginType mtype = MarginType::Margin);

/// Validates family/mtype consistency and the theta range.
void validate(const LossSpec& spec);

/// L(u) where u is the margin or residual. `y` is the (pseudo-)response; the
/// weighted families require y in {-1,+1} and use pi(y) = theta for y = +1,
/// 1 - theta otherwise.
double loss_value(const LossSpec& spec, double u, double y);

/// dL/du. Analytic for built-ins (flat-side value 0 at hinge kinks, right
/// derivative theta at the check-loss kink); central difference with step
/// 1e-6*max(1,|u|) for custom losses.
double loss_derivative(const LossSpec& spec, double u, double y);

}  // namespace pmsdr
