#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "selfadj/report_json.hpp"

using namespace selfadj;
using report::Json;

TEST(ReportDump, SeventeenDigitsAndNullForNonFinite) {
  Json j{{"a", 0.1}, {"b", std::nan("")}, {"c", 3}, {"d", "x\"y"}, {"e", Json::array()}, {"f", 1e-300}};
  const std::string s = report::dump(j);
  EXPECT_NE(s.find("\"a\": 0.10000000000000001"), std::string::npos);
  EXPECT_NE(s.find("\"b\": null"), std::string::npos);
  EXPECT_NE(s.find("\"c\": 3"), std::string::npos);
  EXPECT_NE(s.find("\"d\": \"x\\\"y\""), std::string::npos);
  EXPECT_NE(s.find("\"e\": []"), std::string::npos);
  EXPECT_NE(s.find("\"f\": 1e-300"), std::string::npos);
}

TEST(ReportDump, RoundTripsDoublesExactly) {
  const double values[] = {std::numbers::pi, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0};
  Json arr = Json::array();
  for (double v : values) arr.push_back(v);
  const Json back = Json::parse(report::dump(arr));
  for (std::size_t i = 0; i < std::size(values); ++i) EXPECT_EQ(back[i].get<double>(), values[i]);
}

TEST(ReportDump, KeepsInsertionOrder) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  const std::string s = report::dump(j);
  EXPECT_LT(s.find("zeta"), s.find("alpha"));
}

TEST(ReportJson, Envelope) {
  const Json e = report::envelope("eigen", Json{{"kappa", "0.5"}}, Json{{"x", 1}});
  EXPECT_EQ(e["schema_version"], report::kSchemaVersion);
  EXPECT_EQ(e["command"], "eigen");
  EXPECT_EQ(e.begin().key(), "schema_version");
}

TEST(ReportJson, Potentials) {
  const auto is = Potential::inverse_square(0.5);
  const Json j = report::to_json(Potential::sum({is, Potential::constant(1.0, is.domain())}));
  EXPECT_EQ(j["type"], "sum");
  EXPECT_EQ(j["terms"][0]["type"], "inverse-square");
  EXPECT_EQ(j["terms"][1]["c"], 1.0);
  EXPECT_TRUE(j["domain"]["b"].is_number());
  EXPECT_NE(report::dump(j).find("\"b\": null"), std::string::npos);
}

TEST(ReportJson, SpectrumCsvMatchesJson) {
  const ABFamilySpec spec{FluxParameter::from_value(0.5),
                         {TauSpec::constant(0.75 * std::numbers::pi), TauSpec::constant(0.0)}};
  const auto r = ab_spectrum(spec, {0.0, 1.0}, {-1e4, -1e-8});
  const std::string csv = report::spectrum_csv(r);
  const Json j = report::to_json(r);
  EXPECT_EQ(csv.substr(0, 11), "m,p,E,kind\n");
  const double e = j["curves"][0]["points"][1]["energies"][0].get<double>();
  EXPECT_NE(csv.find("0,1," + report::format_double(e) + ",bound"), std::string::npos);
  EXPECT_NE(csv.find(",1,1,essential_bottom"), std::string::npos);
}
