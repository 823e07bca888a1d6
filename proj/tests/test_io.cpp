#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "pmsdr/csv.hpp"
#include "pmsdr/error.hpp"
#include "pmsdr/expression.hpp"
#include "pmsdr/serialize.hpp"
#include "pmsdr/simulate.hpp"

using namespace pmsdr;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Csv, ReadsHeaderAndRows) {
  std::istringstream in("a, \"b\",y\n1,2,3\r\n4.5,-6e-1,+7\n");
  const CsvTable t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "y"}));
  ASSERT_EQ(t.values.rows(), 2u);
  EXPECT_EQ(t.values(1, 1), -0.6);
  EXPECT_EQ(t.values(1, 2), 7.0);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), InputError);
  std::istringstream text("a,b\n1,x\n");
  EXPECT_THROW(read_csv(text), InputError);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), InputError);
}

TEST(Csv, ChunkReaderSplitsOnBlankLines) {
  std::istringstream in("x,y\n1,2\n3,4\n\nx,y\n5,6\n\n\n7,8\n");
  CsvChunkReader reader(in);
  std::vector<std::size_t> sizes;
  while (auto c = reader.next()) sizes.push_back(c->values.rows());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 1, 1}));
}

TEST(Csv, SplitResponseByNameAndIndex) {
  std::istringstream in("x1,resp,x2\n1,10,2\n3,30,4\n");
  const CsvTable t = read_csv(in);
  const Dataset byname = split_response(t, "resp");
  EXPECT_EQ(byname.y, (Vector{10, 30}));
  EXPECT_EQ(byname.predictors, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(byname.x(1, 1), 4.0);
  const Dataset byindex = split_response(t, "2");
  EXPECT_EQ(byindex.y, byname.y);
  EXPECT_THROW(split_response(t, "nope"), InputError);
  EXPECT_THROW(split_response(t, "9"), InputError);
}

TEST(Csv, WriteReadRoundTripIsExact) {
  const SimData sim = simulate(SimModel::Model12, 50, 3, 4);
  std::ostringstream out;
  write_csv(out, {"a", "b", "c"}, sim.x);
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  for (std::size_t i = 0; i < sim.x.data().size(); ++i)
    EXPECT_TRUE(bit_equal(t.values.data()[i], sim.x.data()[i]));
}

TEST(Serialize, LinearFitRoundTrip) {
  const SimData sim = simulate(SimModel::Model12, 100, 4, 5);
  const PmFit fit = fit_linear(sim.x, sim.y, make_loss(LossFamily::Svm), 5);
  const PmFit back = pm_fit_from_json(nlohmann::json::parse(to_json(fit).dump()));
  EXPECT_EQ(back.n, fit.n);
  EXPECT_EQ(back.loss.family, LossFamily::Svm);
  EXPECT_EQ(back.scheme.cutpoints, fit.scheme.cutpoints);
  EXPECT_EQ(back.evalues, fit.evalues);
  for (std::size_t i = 0; i < fit.evectors.data().size(); ++i)
    EXPECT_TRUE(bit_equal(back.evectors.data()[i], fit.evectors.data()[i]));
  EXPECT_EQ(back.mu, fit.mu);
  ASSERT_EQ(back.slices.size(), fit.slices.size());
  EXPECT_EQ(back.slices[2].beta, fit.slices[2].beta);
}

TEST(Serialize, KernelBasisRoundTripRecomputesFeatures) {
  const SimData sim = simulate(SimModel::Model14, 40, 3, 6);
  const KernelBasis basis = build_basis(sim.x, 8);
  const KernelBasis back = kernel_basis_from_json(nlohmann::json::parse(to_json(basis).dump()));
  EXPECT_TRUE(bit_equal(back.gamma, basis.gamma));
  ASSERT_EQ(back.features.rows(), basis.features.rows());
  for (std::size_t i = 0; i < basis.features.data().size(); ++i)
    EXPECT_NEAR(back.features.data()[i], basis.features.data()[i], 1e-12);
}

TEST(Serialize, StreamStateRoundTripIsBitExact) {
  const SimData sim = simulate(SimModel::Model12, 300, 4, 7);
  const StreamState st = stream_init(sim.x, sim.y, 5, 0.7);
  const nlohmann::json doc = to_json(st);
  EXPECT_EQ(doc.at("format"), "pmsdr-stream-state");
  EXPECT_EQ(doc.at("schema_version"), kStreamSchemaVersion);
  const StreamState back = stream_state_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.n, st.n);
  EXPECT_EQ(back.h, st.h);
  EXPECT_EQ(back.binary_mode, st.binary_mode);
  EXPECT_TRUE(bit_equal(back.lambda, st.lambda));
  for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(bit_equal(back.sum_x[j], st.sum_x[j]));
  for (std::size_t i = 0; i < st.sum_xx.data().size(); ++i)
    EXPECT_TRUE(bit_equal(back.sum_xx.data()[i], st.sum_xx.data()[i]));
  ASSERT_EQ(back.slices.size(), st.slices.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    EXPECT_TRUE(bit_equal(back.slices[k].cutpoint, st.slices[k].cutpoint));
    for (std::size_t i = 0; i < st.slices[k].r.size(); ++i) {
      EXPECT_TRUE(bit_equal(back.slices[k].r[i], st.slices[k].r[i]));
      EXPECT_TRUE(bit_equal(back.slices[k].s[i], st.slices[k].s[i]));
    }
    for (std::size_t i = 0; i < st.slices[k].a.data().size(); ++i)
      EXPECT_TRUE(bit_equal(back.slices[k].a.data()[i], st.slices[k].a.data()[i]));
  }
}

TEST(Serialize, RejectsForeignDocuments) {
  EXPECT_THROW(stream_state_from_json(nlohmann::json{{"format", "other"}}), InputError);
  nlohmann::json doc = to_json(stream_init(simulate(SimModel::Model12, 100, 2, 1).x,
                                           simulate(SimModel::Model12, 100, 2, 1).y, 3));
  doc["schema_version"] = 99;
  EXPECT_THROW(stream_state_from_json(doc), InputError);
}

TEST(Expression, EvaluatesArithmetic) {
  EXPECT_NEAR(Expression::parse("log(1+exp(-u))")(0.0), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0.0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-u^2")(3.0), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("max(0, 1 - u)")(0.25), 0.75);
  EXPECT_DOUBLE_EQ(Expression::parse("pow(abs(u), 1.5) / 2")(-4.0), 4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("min(u, sqrt(u)) + log1p(0) * pi")(4.0), 2.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1e-1 * 10")(0.0), 1.0);
}

TEST(Expression, RejectsMalformedText) {
  for (const char* bad : {"", "1 +", "foo(u)", "(u", "u u", "max(1)", "x"})
    EXPECT_THROW(Expression::parse(bad), InputError) << bad;
}

TEST(Simulate, DeterministicAndModelsRecomputable) {
  const SimData a = simulate(SimModel::Model14, 100, 5, 42);
  const SimData b = simulate(SimModel::Model14, 100, 5, 42);
  EXPECT_EQ(a.y, b.y);
  for (std::size_t i = 0; i < 100; ++i) {
    const double r2 = a.x(i, 0) * a.x(i, 0) + a.x(i, 1) * a.x(i, 1);
    EXPECT_NEAR(a.y[i], 0.5 * std::sqrt(r2) * std::log(r2) + 0.2 * a.noise[i], 1e-12);
  }
  const SimData c = simulate(SimModel::Model12, 100, 5, 42);
  for (std::size_t i = 0; i < 100; ++i) {
    const double d = 0.5 + (c.x(i, 1) + 1.0) * (c.x(i, 1) + 1.0);
    EXPECT_NEAR(c.y[i], c.x(i, 0) / d + 0.2 * c.noise[i], 1e-12);
  }
  const SimData s = simulate(SimModel::Binary12, 100, 5, 42);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_TRUE(s.y[i] == 1.0 || s.y[i] == -1.0);
    EXPECT_EQ(s.y[i], c.y[i] > 0.0 ? 1.0 : -1.0);
  }
  EXPECT_THROW(simulate(SimModel::Model12, 5, 5, 1), InputError);
  EXPECT_THROW(simulate(SimModel::Model12, 50, 1, 1), InputError);
}

TEST(Simulate, NormalSourceMoments) {
  NormalSource src(3);
  double s = 0.0, ss = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = src();
    s += v;
    ss += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(ss / n, 1.0, 0.01);
}
