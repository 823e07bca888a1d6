#include "pmsdr/simulate.hpp"

#include <cmath>
#include <numbers>

#include "pmsdr/error.hpp"

namespace pmsdr {

double NormalSource::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double NormalSource::operator()() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::optional<SimModel> parse_model(std::string_view name) {
  if (name == "12") return SimModel::Model12;
  if (name == "14") return SimModel::Model14;
  if (name == "binary12") return SimModel::Binary12;
  return std::nullopt;
}

SimData simulate(SimModel model, std::size_t n, std::size_t p, std::uint64_t seed) {
  if (n < 10) throw InputError("cli", "generator needs n >= 10");
  if (p < 2) throw InputError("cli", "generator needs p >= 2");
  NormalSource draw(seed);
  SimData d{Matrix(n, p), Vector(n), Vector(n)};
  for (double& v : d.x.data()) v = draw();
  for (double& v : d.noise) v = draw();
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = d.x(i, 0);
    const double x2 = d.x(i, 1);
    switch (model) {
      case SimModel::Model12:
      case SimModel::Binary12: {
        const double y = x1 / (0.5 + (x2 + 1.0) * (x2 + 1.0)) + 0.2 * d.noise[i];
        d.y[i] = model == SimModel::Model12 ? y : (y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0));
        break;
      }
      case SimModel::Model14: {
        const double r2 = x1 * x1 + x2 * x2;
        d.y[i] = 0.5 * std::sqrt(r2) * std::log(r2) + 0.2 * d.noise[i];
        break;
      }
    }
  }
  return d;
}

}  // namespace pmsdr
