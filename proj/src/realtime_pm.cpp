#include "pmsdr/realtime_pm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmsdr/error.hpp"
#include "pmsdr/slicing.hpp"

namespace pmsdr {

namespace {

constexpr const char* kModule = "realtime-pm";

struct BatchSums {
  std::vector<Matrix> g;  // lambda-free weighted cross products per slice
  std::vector<Vector> s;
};

void check_batch(const Matrix& x, std::span<const double> y, std::size_t p) {
  if (x.rows() < 1) throw InputError(kModule, "batch has no rows");
  if (x.cols() != p)
    throw InputError(kModule, "batch has " + std::to_string(x.cols()) +
                                  " columns, stream expects " + std::to_string(p));
  if (y.size() != x.rows()) throw InputError(kModule, "response length does not match rows");
  for (double v : x.data())
    if (!std::isfinite(v)) throw InputError(kModule, "batch contains non-finite predictors");
  for (double v : y)
    if (!std::isfinite(v)) throw InputError(kModule, "batch contains non-finite responses");
}

BatchSums batch_sums(const StreamState& st, const Matrix& x, std::span<const double> y) {
  const std::size_t p = x.cols();
  BatchSums out;
  Vector xt(p + 1);
  for (const auto& slice : st.slices) {
    Matrix g(p + 1, p + 1);
    Vector s(p + 1, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double label, w;
      if (st.binary_mode) {
        label = y[i];
        w = y[i] == 1.0 ? slice.cutpoint : 1.0 - slice.cutpoint;
      } else {
        label = y[i] >= slice.cutpoint ? 1.0 : -1.0;
        w = 1.0;
      }
      xt[0] = 1.0;
      auto r = x.row(i);
      std::copy(r.begin(), r.end(), xt.begin() + 1);
      for (std::size_t a = 0; a <= p; ++a) {
        s[a] += w * label * xt[a];
        for (std::size_t b = a; b <= p; ++b) g(a, b) += w * xt[a] * xt[b];
      }
    }
    for (std::size_t a = 0; a <= p; ++a)
      for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    out.g.push_back(std::move(g));
    out.s.push_back(std::move(s));
  }
  return out;
}

void accumulate_moments(StreamState& st, const Matrix& x) {
  const std::size_t p = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      st.sum_x[a] += r[a];
      for (std::size_t b = 0; b < p; ++b) st.sum_xx(a, b) += r[a] * r[b];
    }
  }
  st.n += x.rows();
}

// n * Sigma = sum_xx - sum_x sum_x^T / n.
Matrix scatter(const Vector& sum_x, const Matrix& sum_xx, std::size_t n) {
  Matrix out = sum_xx;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < sum_x.size(); ++a)
    for (std::size_t b = 0; b < sum_x.size(); ++b) out(a, b) -= sum_x[a] * sum_x[b] * inv;
  return out;
}

void add_covariance_block(Matrix& a, const Matrix& block) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) a(i + 1, j + 1) += block(i, j);
}

Vector scaled(const Vector& v, double c) {
  Vector out = v;
  for (double& e : out) e *= c;
  return out;
}

Vector solve_system(const Matrix& a, const Vector& rhs) {
  try {
    return solve_spd(a, rhs);
  } catch (const SingularMatrixError& e) {
    throw NumericError(kModule, std::string("normal equations are numerically singular (") +
                                    e.what() + "); use a larger lambda or batch");
  }
}

Vector woodbury_update(const Matrix& a_old, const Vector& r_old, const Matrix& b_new,
                       const Vector& c_new) {
  const std::size_t m = a_old.rows();
  Matrix l;
  try {
    l = cholesky(a_old);
  } catch (const SingularMatrixError& e) {
    throw NumericError(kModule, std::string("previous system is singular (") + e.what() + ")");
  }
  Vector t = cholesky_solve(l, c_new);
  for (std::size_t i = 0; i < m; ++i) t[i] += r_old[i];

  // M = A_O^{-1} B_N, one column at a time.
  Matrix mm(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const Vector col = cholesky_solve(l, b_new.col(j));
    for (std::size_t i = 0; i < m; ++i) mm(i, j) = col[i];
  }
  Matrix i_plus_m = mm;
  for (std::size_t i = 0; i < m; ++i) i_plus_m(i, i) += 1.0;
  Vector u;
  try {
    u = solve_lu(i_plus_m, t);
  } catch (const SingularMatrixError& e) {
    throw NumericError(kModule, std::string("updated system is singular (") + e.what() +
                                    "); use a larger lambda or batch");
  }
  const Vector mu = mm * u;
  for (std::size_t i = 0; i < m; ++i) t[i] -= mu[i];
  return t;
}

}  // namespace

StreamState stream_init(const Matrix& x, std::span<const double> y, std::size_t h,
                        double lambda) {
  if (x.cols() < 1) throw InputError(kModule, "need at least one predictor");
  check_batch(x, y, x.cols());
  if (!(lambda > 0.0)) throw InputError(kModule, "lambda must be positive");
  const std::size_t p = x.cols();

  const bool binary = is_binary_response(y);
  const SliceScheme scheme = make_slices(y, binary ? LossFamily::WLsSvm : LossFamily::LsSvm, h);
  if (scheme.dropped > 0 || scheme.size() != h)
    throw InputError(kModule, "first batch leaves " + std::to_string(scheme.dropped) +
                                  " slice(s) with a single label; start the stream with a "
                                  "larger first batch");

  StreamState st;
  st.h = h;
  st.lambda = lambda;
  st.binary_mode = binary;
  st.sum_x.assign(p, 0.0);
  st.sum_xx = Matrix(p, p);
  for (double c : scheme.cutpoints) st.slices.push_back(StreamSlice{c, {}, {}, {}});

  accumulate_moments(st, x);
  const Matrix cov_block = scatter(st.sum_x, st.sum_xx, st.n);
  BatchSums sums = batch_sums(st, x, y);
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    auto& slice = st.slices[k];
    slice.s = std::move(sums.s[k]);
    slice.a = sums.g[k];
    for (double& v : slice.a.data()) v *= lambda;
    add_covariance_block(slice.a, cov_block);
    slice.r = solve_system(slice.a, scaled(slice.s, lambda));
  }
  return st;
}

StreamState stream_update(StreamState st, const Matrix& x_new, std::span<const double> y_new,
                          UpdateMethod method) {
  if (st.slices.empty()) throw InputError(kModule, "stream state is not initialized");
  check_batch(x_new, y_new, st.dim());
  if (st.binary_mode) {
    for (double v : y_new)
      if (v != 1.0 && v != -1.0)
        throw InputError(kModule, "stream started with a binary response; batch is not -1/+1");
  } else if (is_binary_response(y_new)) {
    throw InputError(kModule, "stream started with a continuous response; batch is -1/+1 coded");
  }

  const std::size_t n_old = st.n;
  const Matrix old_scatter = scatter(st.sum_x, st.sum_xx, n_old);
  BatchSums sums = batch_sums(st, x_new, y_new);
  accumulate_moments(st, x_new);
  const Matrix delta = scatter(st.sum_x, st.sum_xx, st.n) - old_scatter;

  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    auto& slice = st.slices[k];
    Matrix b_new = sums.g[k];
    for (double& v : b_new.data()) v *= st.lambda;
    add_covariance_block(b_new, delta);
    const Vector c_new = scaled(sums.s[k], st.lambda);

    Vector r = method == UpdateMethod::Woodbury
                   ? woodbury_update(slice.a, slice.r, b_new, c_new)
                   : Vector{};
    slice.a = slice.a + b_new;
    for (std::size_t i = 0; i < slice.s.size(); ++i) slice.s[i] += sums.s[k][i];
    if (method == UpdateMethod::DirectSolve) r = solve_system(slice.a, scaled(slice.s, st.lambda));
    for (double v : r)
      if (!std::isfinite(v)) throw NumericError(kModule, "update produced a non-finite solution");
    slice.r = std::move(r);
  }
  return st;
}

StreamResult stream_result(const StreamState& st) {
  if (st.slices.empty()) throw InputError(kModule, "stream state is not initialized");
  const std::size_t p = st.dim();
  Matrix m(p, p);
  StreamResult out;
  for (const auto& slice : st.slices) {
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) m(a, b) += slice.r[a + 1] * slice.r[b + 1];
    out.r.push_back(slice.r);
    out.a.push_back(slice.a);
  }
  EigenDecomposition eig = sym_eigen(m);
  out.evalues = std::move(eig.values);
  out.evectors = std::move(eig.vectors);
  out.n = st.n;
  return out;
}

}  // namespace pmsdr
