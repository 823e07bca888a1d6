#include "pmsdr/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pmsdr/error.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "losses";

struct FamilyInfo {
  LossFamily family;
  const char* name;
};

constexpr std::array<FamilyInfo, 10> kBuiltins{{
    {LossFamily::Svm, "svm"},
    {LossFamily::Logit, "logit"},
    {LossFamily::L2Svm, "l2svm"},
    {LossFamily::LsSvm, "lssvm"},
    {LossFamily::WSvm, "wsvm"},
    {LossFamily::WLogit, "wlogit"},
    {LossFamily::WL2Svm, "wl2svm"},
    {LossFamily::WLsSvm, "wlssvm"},
    {LossFamily::Quantile, "qr"},
    {LossFamily::AsymLs, "asls"},
}};

double hinge(double u) { return u < 1.0 ? 1.0 - u : 0.0; }

// log(1 + exp(-u)) without overflow for large |u|.
double logistic(double u) {
  return u > 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
}

double logistic_derivative(double u) {
  if (u >= 0.0) {
    const double e = std::exp(-u);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(u));
}

double class_weight(const LossSpec& spec, double y) {
  if (y == 1.0) return spec.theta;
  if (y == -1.0) return 1.0 - spec.theta;
  throw InputError(kModule, std::string(family_name(spec.family)) +
                                " requires a response coded as -1/+1");
}

// Unweighted margin losses, indexed by the weighted family's base.
double margin_value(LossFamily base, double u) {
  switch (base) {
    case LossFamily::Svm: return hinge(u);
    case LossFamily::Logit: return logistic(u);
    case LossFamily::L2Svm: { const double h = hinge(u); return h * h; }
    case LossFamily::LsSvm: return (1.0 - u) * (1.0 - u);
    default: break;
  }
  return 0.0;
}

double margin_derivative(LossFamily base, double u) {
  switch (base) {
    case LossFamily::Svm: return u < 1.0 ? -1.0 : 0.0;
    case LossFamily::Logit: return logistic_derivative(u);
    case LossFamily::L2Svm: return -2.0 * hinge(u);
    case LossFamily::LsSvm: return -2.0 * (1.0 - u);
    default: break;
  }
  return 0.0;
}

LossFamily unweighted(LossFamily family) {
  switch (family) {
    case LossFamily::WSvm: return LossFamily::Svm;
    case LossFamily::WLogit: return LossFamily::Logit;
    case LossFamily::WL2Svm: return LossFamily::L2Svm;
    case LossFamily::WLsSvm: return LossFamily::LsSvm;
    default: return family;
  }
}

double checked(double v) {
  if (!std::isfinite(v)) throw NumericError(kModule, "custom loss returned a non-finite value");
  return v;
}

}  // namespace

std::string_view family_name(LossFamily family) {
  for (const auto& info : kBuiltins)
    if (info.family == family) return info.name;
  return "custom";
}

std::optional<LossFamily> parse_family(std::string_view name) {
  for (const auto& info : kBuiltins)
    if (name == info.name) return info.family;
  return std::nullopt;
}

const std::vector<std::string>& builtin_loss_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& info : kBuiltins) out.emplace_back(info.name);
    return out;
  }();
  return names;
}

bool is_weighted(LossFamily family) {
  return family == LossFamily::WSvm || family == LossFamily::WLogit ||
         family == LossFamily::WL2Svm || family == LossFamily::WLsSvm;
}

bool is_loss_based(LossFamily family) {
  return is_weighted(family) || family == LossFamily::Quantile ||
         family == LossFamily::AsymLs;
}

MarginType natural_mtype(LossFamily family) {
  return family == LossFamily::Quantile || family == LossFamily::AsymLs
             ? MarginType::Residual
             : MarginType::Margin;
}

LossSpec make_loss(LossFamily family, double theta) {
  LossSpec spec;
  spec.family = family;
  spec.mtype = natural_mtype(family);
  spec.theta = theta;
  validate(spec);
  return spec;
}

LossSpec make_custom_loss(std::function<double(double)> fn, MarginType mtype) {
  LossSpec spec;
  spec.family = LossFamily::Custom;
  spec.mtype = mtype;
  spec.custom = std::move(fn);
  validate(spec);
  return spec;
}

void validate(const LossSpec& spec) {
  if (spec.family == LossFamily::Custom) {
    if (!spec.custom) throw InputError(kModule, "custom loss requires a function");
    return;
  }
  if (spec.mtype != natural_mtype(spec.family))
    throw InputError(kModule, std::string(family_name(spec.family)) +
                                  " has a fixed margin type");
  if (is_loss_based(spec.family) && !(spec.theta > 0.0 && spec.theta < 1.0))
    throw InputError(kModule, "slice parameter must lie in (0,1)");
}

double loss_value(const LossSpec& spec, double u, double y) {
  switch (spec.family) {
    case LossFamily::Svm:
    case LossFamily::Logit:
    case LossFamily::L2Svm:
    case LossFamily::LsSvm:
      return margin_value(spec.family, u);
    case LossFamily::WSvm:
    case LossFamily::WLogit:
    case LossFamily::WL2Svm:
    case LossFamily::WLsSvm:
      return class_weight(spec, y) * margin_value(unweighted(spec.family), u);
    case LossFamily::Quantile:
      return u * (spec.theta - (u < 0.0 ? 1.0 : 0.0));
    case LossFamily::AsymLs:
      return u * u * std::abs(spec.theta - (u < 0.0 ? 1.0 : 0.0));
    case LossFamily::Custom:
      return checked(spec.custom(u));
  }
  return 0.0;
}

double loss_derivative(const LossSpec& spec, double u, double y) {
  switch (spec.family) {
    case LossFamily::Svm:
    case LossFamily::Logit:
    case LossFamily::L2Svm:
    case LossFamily::LsSvm:
      return margin_derivative(spec.family, u);
    case LossFamily::WSvm:
    case LossFamily::WLogit:
    case LossFamily::WL2Svm:
    case LossFamily::WLsSvm:
      return class_weight(spec, y) * margin_derivative(unweighted(spec.family), u);
    case LossFamily::Quantile:
      return u < 0.0 ? spec.theta - 1.0 : spec.theta;
    case LossFamily::AsymLs:
      return 2.0 * u * (u < 0.0 ? 1.0 - spec.theta : spec.theta);
    case LossFamily::Custom: {
      const double delta = 1e-6 * std::max(1.0, std::abs(u));
      return checked((checked(spec.custom(u + delta)) - checked(spec.custom(u - delta))) /
                     (2.0 * delta));
    }
  }
  return 0.0;
}

}  // namespace pmsdr
