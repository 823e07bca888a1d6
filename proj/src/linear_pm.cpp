#include "pmsdr/linear_pm.hpp"

#include <cmath>
#include <string>

#include "pmsdr/error.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "linear-pm";

void require_finite(const Matrix& x, std::span<const double> y) {
  for (double v : x.data())
    if (!std::isfinite(v)) throw InputError(kModule, "predictors contain non-finite values");
  for (double v : y)
    if (!std::isfinite(v)) throw InputError(kModule, "response contains non-finite values");
}

}  // namespace

Matrix working_matrix(std::span<const SliceSolution> slices) {
  if (slices.empty()) throw ContractError(kModule, "working matrix of zero slices");
  const std::size_t p = slices.front().beta.size();
  Matrix m(p, p);
  for (const auto& s : slices)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) m(a, b) += s.beta[a] * s.beta[b];
  return m;
}

namespace detail {

PmFit fit_coordinates(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                      const SliceScheme& scheme, const SolveConfig& cfg) {
  validate(cfg);
  validate(loss);
  if (x.rows() < 2) throw InputError(kModule, "need at least two observations");
  if (x.cols() < 1) throw InputError(kModule, "need at least one predictor");
  if (y.size() != x.rows())
    throw InputError(kModule, "response length " + std::to_string(y.size()) +
                                  " does not match " + std::to_string(x.rows()) + " rows");
  require_finite(x, y);

  auto [z, mu] = center_columns(x);
  const Matrix sigma = sample_cov(z);
  const Matrix z_aug = augment(z);

  PmFit fit;
  fit.mu = std::move(mu);
  fit.loss = loss;
  fit.config = cfg;
  fit.n = x.rows();
  fit.scheme = scheme;
  fit.scheme.cutpoints.clear();

  Vector warm;
  for (std::size_t k = 0; k < scheme.size(); ++k) {
    const Vector labels = pseudo_labels(scheme, y, k);
    if (scheme.kind == SliceKind::Response && !has_both_labels(labels)) {
      ++fit.scheme.dropped;
      continue;
    }
    const LossSpec spec = slice_loss(scheme, loss, k);
    SliceSolution sol = solve_slice(z_aug, sigma, labels, spec, cfg, warm);
    if (cfg.warm_start) {
      warm.assign(1, sol.alpha);
      warm.insert(warm.end(), sol.beta.begin(), sol.beta.end());
    }
    fit.slices.push_back(std::move(sol));
    fit.scheme.cutpoints.push_back(scheme.cutpoints[k]);
  }
  if (fit.slices.empty())
    throw InputError(kModule, "every slice is degenerate; no working matrix can be formed");

  EigenDecomposition eig = sym_eigen(working_matrix(fit.slices));
  fit.evalues = std::move(eig.values);
  fit.evectors = std::move(eig.vectors);
  return fit;
}

}  // namespace detail

PmFit fit_linear(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                 const SliceScheme& scheme, const SolveConfig& cfg) {
  if (x.cols() < 2) throw InputError(kModule, "x must have two or more columns");
  return detail::fit_coordinates(x, y, loss, scheme, cfg);
}

PmFit fit_linear(const Matrix& x, std::span<const double> y, const LossSpec& loss,
                 std::size_t h, const SolveConfig& cfg) {
  if (x.cols() < 2) throw InputError(kModule, "x must have two or more columns");
  if (y.size() != x.rows()) throw InputError(kModule, "response length does not match rows");
  return detail::fit_coordinates(x, y, loss, make_slices(y, loss.family, h), cfg);
}

DimensionEstimate bic_dimension(std::span<const double> evalues, std::size_t n, double rho,
                                std::size_t p_max) {
  if (!(rho > 0.0)) throw InputError(kModule, "rho must be positive");
  if (evalues.empty()) throw InputError(kModule, "no eigenvalues");
  if (n < 2) throw InputError(kModule, "sample size must be at least 2");
  if (p_max == 0 || p_max > evalues.size()) p_max = evalues.size();

  const double nn = static_cast<double>(n);
  const double unit = rho * std::log(nn) / std::sqrt(nn) * evalues[0];
  DimensionEstimate est{Vector(p_max), 1, rho};
  double cumulative = 0.0;
  for (std::size_t d = 1; d <= p_max; ++d) {
    cumulative += evalues[d - 1];
    est.criterion[d - 1] = cumulative - unit * static_cast<double>(d);
    if (est.criterion[d - 1] > est.criterion[est.d_hat - 1]) est.d_hat = d;
  }
  return est;
}

DimensionEstimate bic_dimension(const PmFit& fit, double rho, std::size_t p_max) {
  return bic_dimension(fit.evalues, fit.n, rho, p_max);
}

Matrix project(const PmFit& fit, const Matrix& newx, std::size_t d) {
  const std::size_t p = fit.dim();
  if (newx.cols() != p && !(newx.rows() == 0))
    throw ContractError(kModule, "new data has " + std::to_string(newx.cols()) +
                                     " columns, fit expects " + std::to_string(p));
  if (d < 1 || d > p) throw ContractError(kModule, "projection dimension out of range");
  Matrix out(newx.rows(), d);
  Vector centered(p);
  for (std::size_t i = 0; i < newx.rows(); ++i) {
    auto r = newx.row(i);
    for (std::size_t j = 0; j < p; ++j) centered[j] = r[j] - fit.mu[j];
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) s += centered[j] * fit.evectors(j, c);
      out(i, c) = s;
    }
  }
  return out;
}

}  // namespace pmsdr
