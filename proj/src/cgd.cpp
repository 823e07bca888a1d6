#include "pmsdr/cgd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmsdr/error.hpp"
#include "pmsdr/slicing.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "cgd";
constexpr double kIncreaseTolerance = 1e-12;
constexpr std::size_t kMaxHalvings = 20;

void check_shapes(std::size_t beta_len, const Matrix& z_aug, const Matrix& sigma,
                  std::span<const double> ytilde) {
  if (z_aug.cols() < 1 || sigma.rows() != z_aug.cols() - 1 || sigma.cols() != sigma.rows() ||
      ytilde.size() != z_aug.rows() || beta_len != z_aug.cols() || z_aug.rows() == 0)
    throw ContractError(kModule, "dimension mismatch between beta, Z_aug, Sigma and ytilde");
}

inline double loss_argument(MarginType mtype, double y, double f) {
  return mtype == MarginType::Margin ? y * f : y - f;
}

// d u / d f for the loss argument.
inline double argument_slope(MarginType mtype, double y) {
  return mtype == MarginType::Margin ? y : -1.0;
}

double penalty(std::span<const double> beta_aug, const Matrix& sigma) {
  const std::size_t p = sigma.rows();
  double s = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < p; ++b) row += sigma(a, b) * beta_aug[b + 1];
    s += beta_aug[a + 1] * row;
  }
  return s;
}

double data_term(std::span<const double> fitted, std::span<const double> ytilde,
                 const LossSpec& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i)
    s += loss_value(spec, loss_argument(spec.mtype, ytilde[i], fitted[i]), ytilde[i]);
  return s;
}

}  // namespace

void validate(const SolveConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw InputError(kModule, "lambda must be positive");
  if (!(cfg.eta > 0.0)) throw InputError(kModule, "eta must be positive");
  if (!(cfg.eps > 0.0)) throw InputError(kModule, "eps must be positive");
  if (cfg.max_iter < 1) throw InputError(kModule, "max_iter must be at least 1");
}

Matrix augment(const Matrix& z) {
  Matrix out(z.rows(), z.cols() + 1);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    out(i, 0) = 1.0;
    auto src = z.row(i);
    std::copy(src.begin(), src.end(), out.row(i).begin() + 1);
  }
  return out;
}

double objective(std::span<const double> beta_aug, const Matrix& z_aug, const Matrix& sigma,
                 std::span<const double> ytilde, const LossSpec& spec, const SolveConfig& cfg) {
  check_shapes(beta_aug.size(), z_aug, sigma, ytilde);
  const Vector fitted = z_aug * beta_aug;
  const double n = static_cast<double>(z_aug.rows());
  return penalty(beta_aug, sigma) + cfg.lambda / n * data_term(fitted, ytilde, spec);
}

Vector gradient(std::span<const double> beta_aug, const Matrix& z_aug, const Matrix& sigma,
                std::span<const double> ytilde, const LossSpec& spec, const SolveConfig& cfg) {
  check_shapes(beta_aug.size(), z_aug, sigma, ytilde);
  const std::size_t n = z_aug.rows();
  const std::size_t p1 = z_aug.cols();
  const Vector fitted = z_aug * beta_aug;
  Vector g(p1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = loss_argument(spec.mtype, ytilde[i], fitted[i]);
    const double chain = argument_slope(spec.mtype, ytilde[i]) * loss_derivative(spec, u, ytilde[i]);
    auto zi = z_aug.row(i);
    for (std::size_t j = 0; j < p1; ++j) g[j] += chain * zi[j];
  }
  const double scale = cfg.lambda / static_cast<double>(n);
  for (double& v : g) v *= scale;
  for (std::size_t a = 0; a + 1 < p1; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b + 1 < p1; ++b) row += sigma(a, b) * beta_aug[b + 1];
    g[a + 1] += 2.0 * row;
  }
  return g;
}

SliceSolution solve_slice(const Matrix& z_aug, const Matrix& sigma,
                          std::span<const double> ytilde, const LossSpec& spec,
                          const SolveConfig& cfg, std::span<const double> init) {
  validate(cfg);
  const std::size_t n = z_aug.rows();
  const std::size_t p1 = z_aug.cols();
  Vector beta(p1, 0.0);
  if (!init.empty()) {
    if (init.size() != p1) throw ContractError(kModule, "initial value has the wrong length");
    beta.assign(init.begin(), init.end());
  }
  check_shapes(beta.size(), z_aug, sigma, ytilde);
  if (spec.mtype == MarginType::Margin && !has_both_labels(ytilde))
    throw InputError(kModule, "margin-type slice needs both +1 and -1 pseudo-labels");

  // Column-major copy so each coordinate's partial derivative is a contiguous pass.
  const Matrix cols = z_aug.transpose();
  Vector fitted = z_aug * beta;
  const double scale = cfg.lambda / static_cast<double>(n);
  auto current_objective = [&] {
    return penalty(beta, sigma) + scale * data_term(fitted, ytilde, spec);
  };

  SliceSolution sol;
  double eta = cfg.eta;
  double obj = current_objective();
  sol.objective_trace.push_back(obj);
  Vector saved_beta, saved_fitted;

  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    saved_beta = beta;
    saved_fitted = fitted;
    double step = 0.0;
    for (std::size_t j = 0; j < p1; ++j) {
      auto zj = cols.row(j);
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = loss_argument(spec.mtype, ytilde[i], fitted[i]);
        g += argument_slope(spec.mtype, ytilde[i]) * loss_derivative(spec, u, ytilde[i]) * zj[i];
      }
      g *= scale;
      if (j > 0) {
        double row = 0.0;
        for (std::size_t b = 0; b + 1 < p1; ++b) row += sigma(j - 1, b) * beta[b + 1];
        g += 2.0 * row;
      }
      const double delta = -eta * g;
      if (!std::isfinite(delta)) throw DivergenceError(kModule, eta);
      if (delta != 0.0) {
        beta[j] += delta;
        for (std::size_t i = 0; i < n; ++i) fitted[i] += delta * zj[i];
      }
      step = std::max(step, std::abs(delta));
    }
    const double next = current_objective();
    if (!std::isfinite(next)) throw DivergenceError(kModule, eta);
    sol.iterations = iter + 1;
    sol.final_step = step;

    if (next > obj + kIncreaseTolerance * std::max(1.0, std::abs(obj)) &&
        sol.step_halvings < kMaxHalvings) {
      beta.swap(saved_beta);
      fitted.swap(saved_fitted);
      eta *= 0.5;
      ++sol.step_halvings;
      sol.objective_trace.push_back(obj);
      if (step < cfg.eps) {
        sol.converged = true;
        break;
      }
      continue;
    }
    obj = next;
    sol.objective_trace.push_back(obj);
    if (step < cfg.eps) {
      sol.converged = true;
      break;
    }
  }

  sol.final_eta = eta;
  sol.alpha = beta[0];
  sol.beta.assign(beta.begin() + 1, beta.end());
  return sol;
}

}  // namespace pmsdr
