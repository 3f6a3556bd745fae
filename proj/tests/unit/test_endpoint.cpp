#include <gtest/gtest.h>

#include "selfadj/endpoint.hpp"

using namespace selfadj;

namespace {

ClassificationControls numerical() {
  ClassificationControls c;
  c.force_numerical = true;
  return c;
}

}  // namespace

TEST(Classify, InverseSquareExamples) {
  EXPECT_EQ(classify_endpoint(Potential::inverse_square(0.5), 0.0, Endpoint::Left).verdict, Verdict::LCC);
  const auto r = classify_endpoint(Potential::inverse_square(1.5), 0.0, Endpoint::Right);
  EXPECT_EQ(r.verdict, Verdict::LPC);
  EXPECT_EQ(r.method, ClassificationMethod::Analytic);
}

TEST(Classify, ConstantOnUnitIntervalIsLimitCircle) {
  const auto r = classify_endpoint(Potential::constant(0.0, Interval(0.0, 1.0)), 0.0, Endpoint::Left);
  EXPECT_EQ(r.verdict, Verdict::LCC);
  EXPECT_EQ(r.method, ClassificationMethod::Numerical);
  EXPECT_FALSE(r.diagnostics.edges.empty());
  EXPECT_EQ(r.diagnostics.mass_f1.size(), r.diagnostics.mass_f2.size());
}

TEST(Classify, ConstantOnHalfLineIsLimitPointAtInfinity) {
  EXPECT_EQ(classify_endpoint(Potential::constant(0.0), 0.0, Endpoint::Right).verdict, Verdict::LPC);
  EXPECT_EQ(classify_endpoint(Potential::constant(1.0), 0.0, Endpoint::Right).verdict, Verdict::LPC);
}

TEST(Classify, NumericalAgreesWithAnalytic) {
  for (double kappa : {0.0, 0.25, 0.5, 0.75, 0.99, 1.0, 1.25}) {
    const auto q = Potential::inverse_square(kappa);
    for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
      const auto an = classify_endpoint(q, 0.0, e);
      const auto nu = classify_endpoint(q, 0.0, e, numerical());
      EXPECT_EQ(an.method, ClassificationMethod::Analytic);
      EXPECT_EQ(nu.method, ClassificationMethod::Numerical);
      EXPECT_EQ(an.verdict, nu.verdict) << "kappa=" << kappa << " " << to_string(e);
    }
  }
}

TEST(Classify, AnchorRescalingInvariance) {
  for (double kappa : {0.3, 0.9, 1.1, 2.0}) {
    auto c1 = numerical(), c2 = numerical();
    c1.anchor = 0.5;
    c2.anchor = 3.0;
    const auto q = Potential::inverse_square(kappa);
    EXPECT_EQ(classify_endpoint(q, 0.0, Endpoint::Left, c1).verdict, classify_endpoint(q, 0.0, Endpoint::Left, c2).verdict);
  }
}

TEST(Classify, SymmetricInKappa) {
  for (double kappa : {0.2, 0.6, 0.99, 1.0, 1.7})
    EXPECT_EQ(classify_endpoint(Potential::inverse_square(kappa), 0.0, Endpoint::Left, numerical()).verdict,
              classify_endpoint(Potential::inverse_square(-kappa), 0.0, Endpoint::Left, numerical()).verdict);
}

TEST(Classify, SumWithConstantKeepsSingularBehaviour) {
  const auto is = Potential::inverse_square(0.3);
  const auto q = Potential::sum({is, Potential::constant(2.0, is.domain())});
  EXPECT_EQ(classify_endpoint(q, 0.0, Endpoint::Left).verdict, Verdict::LCC);
  EXPECT_EQ(classify_endpoint(q, 0.0, Endpoint::Right).verdict, Verdict::LPC);
}

TEST(Classify, InconclusiveEvidenceIsAnError) {
  auto c = numerical();
  c.max_windows = c.min_windows;
  c.cauchy_tol = 1e-300;
  try {
    classify_endpoint(Potential::inverse_square(0.5), 0.0, Endpoint::Left, c);
    FAIL() << "expected a classification error";
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Classification);
    EXPECT_FALSE(e.diagnostics().mass_f1.empty());
  }
}

TEST(ExtensionStructure, Examples) {
  EXPECT_EQ(extension_structure(Potential::inverse_square(2.5)).kind, ExtensionKind::EssentiallySelfAdjoint);
  EXPECT_EQ(extension_structure(Potential::inverse_square(0.0)).kind, ExtensionKind::OneParameterFamily);
  EXPECT_EQ(extension_structure(Potential::inverse_square(-0.99)).kind, ExtensionKind::OneParameterFamily);
}

TEST(ExtensionStructure, RightLimitCircleUnsupported) {
  try {
    extension_structure(Potential::constant(0.0, Interval(0.0, 1.0)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(DefaultAnchor, Choices) {
  EXPECT_EQ(default_anchor(Interval(0.0, kInfinity)), 1.0);
  EXPECT_EQ(default_anchor(Interval(0.0, 4.0)), 2.0);
  EXPECT_EQ(default_anchor(Interval(2.0, kInfinity)), 3.0);
  EXPECT_EQ(default_anchor(Interval(-kInfinity, 2.0)), 1.0);
}
