#pragma once

#include <cstddef>
#include <span>

#include "pmsdr/losses.hpp"
#include "pmsdr/numlin.hpp"

namespace pmsdr {

struct SolveConfig {
  double lambda = 1.0;       // cost parameter
  double eta = 0.1;          // learning rate
  double eps = 1e-5;         // stop when a sweep moves no coordinate by eps or more
  std::size_t max_iter = 100;
  bool warm_start = true;    // start slice k+1 from slice k's solution
};

void validate(const SolveConfig& cfg);

struct SliceSolution {
  double alpha = 0.0;
  Vector beta;
  std::size_t iterations = 0;
  bool converged = false;
  double final_step = 0.0;       // max |coordinate change| in the last sweep
  std::size_t step_halvings = 0;
  double final_eta = 0.0;
  Vector objective_trace;        // objective at the start and after every sweep
};

/// [1, z] for every row of z.
Matrix augment(const Matrix& z);

/// beta^T Diag{0, Sigma} beta + (lambda/n) sum_i L(u_i) with u_i the margin
/// ytilde_i * f_i or the residual ytilde_i - f_i, f = Z_aug beta.
double objective(std::span<const double> beta_aug, const Matrix& z_aug,
                 const Matrix& sigma, std::span<const double> ytilde,
                 const LossSpec& spec, const SolveConfig& cfg);

/// Full gradient of `objective` at beta_aug.
Vector gradient(std::span<const double> beta_aug, const Matrix& z_aug,
                const Matrix& sigma, std::span<const double> ytilde,
                const LossSpec& spec, const SolveConfig& cfg);

/// Coordinatewise gradient descent. Each sweep visits j = 0..p and updates
/// beta_j -= eta * dL/dbeta_j with the partial derivative evaluated at the
/// freshest iterate. A sweep that raises the objective by more than 1e-12 is
/// undone and eta halved, at most 20 times; after that sweeps are accepted
/// as they come.
///
/// `init` defaults to zeros. Throws DivergenceError if the iterate stops
/// being finite.
SliceSolution solve_slice(const Matrix& z_aug, const Matrix& sigma,
                          std::span<const double> ytilde, const LossSpec& spec,
                          const SolveConfig& cfg, std::span<const double> init = {});

}  // namespace pmsdr
