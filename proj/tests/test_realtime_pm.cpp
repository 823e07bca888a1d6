#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pmsdr/error.hpp"
#include "pmsdr/linear_pm.hpp"
#include "pmsdr/realtime_pm.hpp"
#include "pmsdr/simulate.hpp"
#include "support.hpp"

using namespace pmsdr;
using pmsdr::testing::max_abs_diff;

namespace {

Matrix rows(const Matrix& x, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, x.cols());
  for (std::size_t i = begin; i < end; ++i)
    std::copy(x.row(i).begin(), x.row(i).end(), out.row(i - begin).begin());
  return out;
}

Vector slice_of(const Vector& y, std::size_t begin, std::size_t end) {
  return Vector(y.begin() + static_cast<std::ptrdiff_t>(begin), y.begin() + static_cast<std::ptrdiff_t>(end));
}

// Whole-data normal equations A r = lambda s from scratch, with the given cutpoint.
Vector direct_solution(const Matrix& x, const Vector& y, double cutpoint, double lambda,
                       bool binary) {
  const std::size_t n = x.rows(), p = x.cols();
  const auto [z, mu] = center_columns(x);
  Matrix a(p + 1, p + 1);
  Vector s(p + 1, 0.0);
  const Matrix cov = sample_cov(z);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a(i + 1, j + 1) = static_cast<double>(n) * cov(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    const double label = binary ? y[i] : (y[i] >= cutpoint ? 1.0 : -1.0);
    const double w = binary ? (y[i] == 1.0 ? cutpoint : 1.0 - cutpoint) : 1.0;
    Vector xt{1.0};
    xt.insert(xt.end(), x.row(i).begin(), x.row(i).end());
    for (std::size_t u = 0; u <= p; ++u) {
      s[u] += lambda * w * label * xt[u];
      for (std::size_t v = 0; v <= p; ++v) a(u, v) += lambda * w * xt[u] * xt[v];
    }
  }
  return solve_spd(a, s);
}

}  // namespace

TEST(StreamInit, Defaults) {
  const SimData sim = simulate(SimModel::Model12, 200, 3, 1);
  const StreamState st = stream_init(sim.x, sim.y);
  EXPECT_EQ(st.h, 10u);
  EXPECT_EQ(st.lambda, 1.0);
  EXPECT_EQ(st.slices.size(), 10u);
  EXPECT_FALSE(st.binary_mode);
}

TEST(StreamInit, HandInstanceSatisfiesNormalEquations) {
  const Matrix x{{0.5, 1.0}, {-1.0, 0.2}, {2.0, -0.3}, {0.1, 0.4}};
  const Vector y{1.0, -2.0, 3.0, 0.0};
  const StreamState st = stream_init(x, y, 1, 0.5);
  const StreamSlice& s = st.slices[0];
  const Vector lhs = s.a * s.r;
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(lhs[i], 0.5 * s.s[i], 1e-10);
  EXPECT_LE(max_abs_diff(s.r, direct_solution(x, y, s.cutpoint, 0.5, false)), 1e-10);
}

TEST(StreamInit, AgreesWithBatchSquaredLossFit) {
  const SimData sim = simulate(SimModel::Model12, 400, 5, 2);
  const StreamState st = stream_init(sim.x, sim.y, 5, 1.0);
  const StreamResult res = stream_result(st);

  SliceScheme scheme = make_slices(sim.y, LossFamily::LsSvm, 5);
  for (std::size_t k = 0; k < 5; ++k) scheme.cutpoints[k] = st.slices[k].cutpoint;
  SolveConfig cfg;
  cfg.eps = 1e-12;
  cfg.max_iter = 20000;
  const PmFit fit = fit_linear(sim.x, sim.y, make_loss(LossFamily::LsSvm), scheme, cfg);
  const double c = std::abs(dot(res.evectors.col(0), fit.evectors.col(0)));
  EXPECT_LE(std::acos(std::min(1.0, c)), 1e-4);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(st.slices[k].r[j + 1], fit.slices[k].beta[j], 1e-6);
}

TEST(StreamInit, SmallFirstBatchIsRejected) {
  const Matrix x{{0.1, 0.2}, {0.3, 0.1}, {0.5, -0.2}};
  const Vector y{1.0, 1.0, 2.0};
  EXPECT_THROW(stream_init(x, y, 10), InputError);
}

TEST(StreamUpdate, BatchesMatchConcatenatedSolve) {
  const SimData sim = simulate(SimModel::Model12, 1500, 4, 3);
  StreamState st = stream_init(rows(sim.x, 0, 500), slice_of(sim.y, 0, 500), 6, 1.0);
  st = stream_update(std::move(st), rows(sim.x, 500, 800), slice_of(sim.y, 500, 800));
  st = stream_update(std::move(st), rows(sim.x, 800, 1500), slice_of(sim.y, 800, 1500));
  EXPECT_EQ(st.n, 1500u);
  for (const auto& slice : st.slices)
    EXPECT_LE(max_abs_diff(slice.r, direct_solution(sim.x, sim.y, slice.cutpoint, 1.0, false)), 1e-6);
}

TEST(StreamUpdate, WoodburyMatchesDirectSolve) {
  const SimData sim = simulate(SimModel::Model12, 1000, 5, 4);
  StreamState w = stream_init(rows(sim.x, 0, 200), slice_of(sim.y, 0, 200));
  StreamState d = w;
  for (std::size_t b = 200; b < 1000; b += 200) {
    w = stream_update(std::move(w), rows(sim.x, b, b + 200), slice_of(sim.y, b, b + 200),
                      UpdateMethod::Woodbury);
    d = stream_update(std::move(d), rows(sim.x, b, b + 200), slice_of(sim.y, b, b + 200),
                      UpdateMethod::DirectSolve);
  }
  for (std::size_t k = 0; k < w.slices.size(); ++k)
    EXPECT_LE(max_abs_diff(w.slices[k].r, d.slices[k].r), 1e-8);
}

TEST(StreamUpdate, BinaryResponseUsesWeightedSquaredLoss) {
  const SimData sim = simulate(SimModel::Binary12, 600, 4, 5);
  StreamState st = stream_init(rows(sim.x, 0, 300), slice_of(sim.y, 0, 300), 4, 1.0);
  EXPECT_TRUE(st.binary_mode);
  st = stream_update(std::move(st), rows(sim.x, 300, 600), slice_of(sim.y, 300, 600));
  for (const auto& slice : st.slices)
    EXPECT_LE(max_abs_diff(slice.r, direct_solution(sim.x, sim.y, slice.cutpoint, 1.0, true)), 1e-6);

  const Matrix extra = rows(sim.x, 0, 2);
  EXPECT_THROW(stream_update(st, extra, Vector{0.5, 1.0}), InputError);
}

TEST(StreamUpdate, ModeAndShapeMismatches) {
  const SimData sim = simulate(SimModel::Model12, 300, 3, 6);
  const StreamState st = stream_init(sim.x, sim.y, 5);
  EXPECT_THROW(stream_update(st, Matrix{{1, 2}}, Vector{1.0}), InputError);
  EXPECT_THROW(stream_update(st, rows(sim.x, 0, 2), Vector{1.0, -1.0}), InputError);
  EXPECT_THROW(stream_update(st, Matrix(0, 3), Vector{}), InputError);
}

TEST(StreamUpdate, OneSidedBatchStillUpdates) {
  const SimData sim = simulate(SimModel::Model12, 400, 3, 7);
  StreamState st = stream_init(rows(sim.x, 0, 300), slice_of(sim.y, 0, 300), 5);
  const Matrix a_before = st.slices[0].a;
  const Vector huge(100, 1e6);
  st = stream_update(std::move(st), rows(sim.x, 300, 400), huge);
  EXPECT_EQ(st.n, 400u);
  EXPECT_NE(st.slices[0].a(0, 0), a_before(0, 0));
  for (const auto& slice : st.slices)
    for (double v : slice.r) EXPECT_TRUE(std::isfinite(v));
}

TEST(StreamResult, OrthonormalAndSymmetric) {
  const SimData sim = simulate(SimModel::Model12, 500, 5, 8);
  const StreamResult res = stream_result(stream_init(sim.x, sim.y));
  const Matrix vtv = res.evectors.transpose() * res.evectors;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(vtv(i, j), i == j ? 1.0 : 0.0, 1e-8);
  for (const auto& a : res.a)
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) EXPECT_NEAR(a(i, j), a(j, i), 1e-10);
}

TEST(StreamUpdate, CostDoesNotGrowWithHistory) {
  const SimData sim = simulate(SimModel::Model12, 22000, 5, 9);
  const Matrix batch = rows(sim.x, 21500, 22000);
  const Vector yb = slice_of(sim.y, 21500, 22000);
  auto timed_update = [&](std::size_t history) {
    const StreamState st = stream_init(rows(sim.x, 0, history), slice_of(sim.y, 0, history));
    double best = 1e9;
    for (int rep = 0; rep < 15; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const StreamState next = stream_update(st, batch, yb);
      const auto t1 = std::chrono::steady_clock::now();
      EXPECT_EQ(next.n, history + 500);
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
  };
  const double small = timed_update(2000);
  const double large = timed_update(20000);
  EXPECT_LE(large, 2.0 * small) << "small " << small << "s, large " << large << "s";
}
