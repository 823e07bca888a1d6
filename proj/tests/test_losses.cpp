#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pmsdr/error.hpp"
#include "pmsdr/losses.hpp"

using namespace pmsdr;

TEST(LossValue, Examples) {
  EXPECT_EQ(loss_value(make_loss(LossFamily::Svm), 1.0, 1.0), 0.0);
  EXPECT_NEAR(loss_value(make_loss(LossFamily::Logit), 0.0, 1.0), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(loss_value(make_loss(LossFamily::Quantile, 0.5), -2.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(loss_value(make_loss(LossFamily::WSvm, 0.3), 0.0, -1.0), 0.7);
  EXPECT_DOUBLE_EQ(loss_value(make_loss(LossFamily::WSvm, 0.3), 0.0, 1.0), 0.3);
}

TEST(LossValue, LogitIsStableForLargeMargins) {
  const LossSpec logit = make_loss(LossFamily::Logit);
  EXPECT_NEAR(loss_value(logit, -800.0, 1.0), 800.0, 1e-9);
  EXPECT_GE(loss_value(logit, 800.0, 1.0), 0.0);
  EXPECT_LT(loss_value(logit, 800.0, 1.0), 1e-300);
  EXPECT_NEAR(loss_value(logit, 30.0, 1.0), std::exp(-30.0), 1e-25);
  EXPECT_NEAR(loss_derivative(logit, -800.0, 1.0), -1.0, 1e-15);
}

TEST(LossValue, AsymmetricSquaredAndCheckLoss) {
  const LossSpec asls = make_loss(LossFamily::AsymLs, 0.2);
  EXPECT_DOUBLE_EQ(loss_value(asls, 2.0, 0.0), 4.0 * 0.2);
  EXPECT_DOUBLE_EQ(loss_value(asls, -2.0, 0.0), 4.0 * 0.8);
  const LossSpec qr = make_loss(LossFamily::Quantile, 0.2);
  EXPECT_DOUBLE_EQ(loss_value(qr, 3.0, 0.0), 0.6);
  EXPECT_DOUBLE_EQ(loss_value(qr, -3.0, 0.0), 3.0 * 0.8);
}

TEST(LossDerivative, Examples) {
  const LossSpec svm = make_loss(LossFamily::Svm);
  EXPECT_EQ(loss_derivative(svm, 0.0, 1.0), -1.0);
  EXPECT_EQ(loss_derivative(svm, 2.0, 1.0), 0.0);
  EXPECT_EQ(loss_derivative(svm, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(loss_derivative(make_loss(LossFamily::LsSvm), 0.5, 1.0), -1.0);
  const LossSpec sq = make_custom_loss([](double u) { return u * u; });
  EXPECT_NEAR(loss_derivative(sq, 3.0, 1.0), 6.0, 1e-5);
  EXPECT_DOUBLE_EQ(loss_derivative(make_loss(LossFamily::Quantile, 0.3), 0.0, 0.0), 0.3);
}

TEST(LossDerivative, MatchesCentralDifferenceAwayFromKinks) {
  const double us[] = {-2.3, -0.7, 0.2, 0.6, 1.7, 3.1};
  for (LossFamily f : {LossFamily::Logit, LossFamily::L2Svm, LossFamily::LsSvm,
                       LossFamily::WLogit, LossFamily::WLsSvm, LossFamily::AsymLs,
                       LossFamily::Svm, LossFamily::Quantile}) {
    const LossSpec spec = make_loss(f, 0.35);
    for (double y : {-1.0, 1.0})
      for (double u : us) {
        const double d = 1e-6;
        const double fd = (loss_value(spec, u + d, y) - loss_value(spec, u - d, y)) / (2 * d);
        EXPECT_NEAR(loss_derivative(spec, u, y), fd, 1e-6) << family_name(f) << " u=" << u;
      }
  }
}

TEST(LossValue, BuiltinsAreConvex) {
  for (const auto& name : builtin_loss_names()) {
    const LossSpec spec = make_loss(*parse_family(name), 0.4);
    for (double y : {-1.0, 1.0})
      for (double u = -4.0; u <= 4.0; u += 0.37) {
        const double a = loss_value(spec, u - 0.5, y);
        const double b = loss_value(spec, u + 0.5, y);
        EXPECT_LE(loss_value(spec, u, y), 0.5 * (a + b) + 1e-12) << name;
      }
  }
}

TEST(LossValue, WeightedEqualsWeightTimesBase) {
  const std::pair<LossFamily, LossFamily> pairs[] = {
      {LossFamily::WSvm, LossFamily::Svm},
      {LossFamily::WLogit, LossFamily::Logit},
      {LossFamily::WL2Svm, LossFamily::L2Svm},
      {LossFamily::WLsSvm, LossFamily::LsSvm}};
  for (auto [w, base] : pairs)
    for (double u : {-1.5, 0.0, 0.8, 2.0}) {
      EXPECT_DOUBLE_EQ(loss_value(make_loss(w, 0.25), u, 1.0),
                       0.25 * loss_value(make_loss(base), u, 1.0));
      EXPECT_DOUBLE_EQ(loss_value(make_loss(w, 0.25), u, -1.0),
                       0.75 * loss_value(make_loss(base), u, -1.0));
    }
}

TEST(LossValue, WeightedFamiliesRequireSignLabels) {
  EXPECT_THROW(loss_value(make_loss(LossFamily::WSvm, 0.5), 0.0, 0.5), InputError);
}

TEST(LossValue, CustomNonFiniteIsNumericError) {
  const LossSpec bad = make_custom_loss([](double u) { return std::log(u); });
  EXPECT_THROW(loss_value(bad, -1.0, 1.0), NumericError);
}

TEST(LossNames, RoundTripAndMarginTypes) {
  ASSERT_EQ(builtin_loss_names().size(), 10u);
  for (const auto& name : builtin_loss_names()) {
    const auto f = parse_family(name);
    ASSERT_TRUE(f.has_value()) << name;
    EXPECT_EQ(family_name(*f), name);
  }
  EXPECT_FALSE(parse_family("nosuch").has_value());
  EXPECT_EQ(natural_mtype(LossFamily::Quantile), MarginType::Residual);
  EXPECT_EQ(natural_mtype(LossFamily::AsymLs), MarginType::Residual);
  EXPECT_EQ(natural_mtype(LossFamily::WSvm), MarginType::Margin);
}

TEST(Validate, RejectsBadSpecs) {
  LossSpec s = make_loss(LossFamily::Svm);
  s.mtype = MarginType::Residual;
  EXPECT_THROW(validate(s), InputError);
  EXPECT_THROW(validate(make_loss(LossFamily::Quantile, 1.0)), InputError);
  LossSpec c;
  c.family = LossFamily::Custom;
  EXPECT_THROW(validate(c), InputError);
  EXPECT_NO_THROW(validate(make_custom_loss([](double u) { return u * u; }, MarginType::Residual)));
}
