#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "chaoslab/errors.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/sequences.hpp"
#include "chaoslab/stats.hpp"

namespace chaoslab {
namespace {

namespace fs = std::filesystem;

FamilySpec spec_of(Family family, int n, double theta = 0.5) {
  FamilySpec s;
  s.family = family;
  s.n = n;
  s.theta = theta;
  return s;
}

TEST(Family, Names) {
  for (Family f : {Family::disjoint, Family::vanishing_overlap, Family::persistent_overlap,
                   Family::mixed_orders}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_THROW(parse_family("wobbly"), ContractViolation);
}

TEST(Generate, ValidatesSpec) {
  EXPECT_THROW(generate(spec_of(Family::vanishing_overlap, 4, 1.5)), ContractViolation);
  EXPECT_THROW(generate(spec_of(Family::vanishing_overlap, 4, -0.1)), ContractViolation);
  EXPECT_THROW(generate(spec_of(Family::persistent_overlap, 4, 0.0)), ContractViolation);
  EXPECT_THROW(generate(spec_of(Family::mixed_orders, 4)), ContractViolation);
  FamilySpec bad = spec_of(Family::disjoint, 0);
  EXPECT_THROW(generate(bad), ContractViolation);
}

TEST(Generate, LayoutGrowth) {
  EXPECT_EQ(family_layout(spec_of(Family::vanishing_overlap, 16)).dimension, 35);
  EXPECT_EQ(family_layout(spec_of(Family::disjoint, 16)).dimension, 35);
  EXPECT_EQ(family_layout(spec_of(Family::persistent_overlap, 16)).dimension, 5);
  EXPECT_EQ(family_layout(spec_of(Family::persistent_overlap, 1000)).dimension, 5);
}

TEST(Generate, AllElementsStandardized) {
  for (Family f : {Family::disjoint, Family::vanishing_overlap, Family::persistent_overlap}) {
    for (int n : {1, 2, 7}) {
      FamilySpec s = spec_of(f, n);
      s.orders = {3, 2, 1};
      s.group_sizes = {2, 1, 2};
      const ChaosVector v = generate(s);
      EXPECT_EQ(v.element_count(), 5u);
      for (const ChaosElement& e : v.elements()) EXPECT_TRUE(e.standardized());
    }
  }
}

TEST(Generate, DisjointIsExactlyZero) {
  const ChaosVector v = generate(spec_of(Family::disjoint, 5));
  const SquaredCovMatrix m = squared_cov_matrix(v);
  EXPECT_EQ(m.at(0, 1), 0.0);
  for (const PairContractions& p : contraction_table(v)) {
    for (double x : p.norms) EXPECT_EQ(x, 0.0);
  }
}

TEST(Generate, VanishingOverlapQuarterRatio) {
  for (int n : {16, 32, 64}) {
    const double a = squared_cov_matrix(generate(spec_of(Family::vanishing_overlap, n, 1.0))).at(0, 1);
    const double b =
        squared_cov_matrix(generate(spec_of(Family::vanishing_overlap, 4 * n, 1.0))).at(0, 1);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(b / a, 0.25, 0.05);
  }
}

TEST(Generate, VanishingOverlapMatchesIsserlisAtSmallN) {
  // q = 1 keeps the oracle inside its size guard: N = 2(n+1)+1 <= 6 for n <= 1.
  FamilySpec s = spec_of(Family::vanishing_overlap, 1, 0.8);
  s.orders = {1, 1};
  const ChaosVector v = generate(s);
  const auto& el = v.elements();
  const std::vector<ChaosElement> ffgg{el[0], el[0], el[1], el[1]};
  EXPECT_NEAR(cov_squares(el[0], el[1]), isserlis_moment(ffgg) - 1.0, 1e-12);
}

TEST(Generate, PersistentStableInN) {
  const double kappa = squared_cov_matrix(generate(spec_of(Family::persistent_overlap, 1))).at(0, 1);
  EXPECT_GT(kappa, 0.0);
  for (int n : {2, 10, 100}) {
    EXPECT_NEAR(squared_cov_matrix(generate(spec_of(Family::persistent_overlap, n))).at(0, 1), kappa,
                1e-9);
  }
}

TEST(Generate, ContractionWitnessSlope) {
  std::vector<double> ns, w;
  for (int n : {4, 16, 64, 256}) {
    ns.push_back(n);
    w.push_back(criterion_check(generate(spec_of(Family::vanishing_overlap, n))).contraction_witness);
  }
  EXPECT_NEAR(loglog_slope(ns, w), -0.5, 0.1);
}

TEST(Generate, MixedOrdersUsesBothContractions) {
  FamilySpec s = spec_of(Family::mixed_orders, 4);
  s.orders = {3, 2};
  const ChaosVector v = generate(s);
  EXPECT_EQ(v.groups()[0].order, 3);
  const auto table = contraction_table(v);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table[0].norms.size(), 2u);
  EXPECT_GT(table[0].cov2, 0.0);
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chaoslab_seq_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(ManifestTest, DisjointRankOne) {
  write("a.json", R"({"dimension": 2, "order": 1, "entries": [{"index": [1], "value": 1}]})");
  write("b.json", R"({"dimension": 2, "order": 1, "entries": [{"index": [2], "value": 1}]})");
  const fs::path m = write("m.json", R"({"groups": [{"order": 1, "elements": ["a.json"]},
                                                    {"order": 1, "elements": ["b.json"]}]})");
  const CriterionVerdict c = criterion_check(load_vector(m));
  EXPECT_EQ(c.covariance_witness, 0.0);
  EXPECT_EQ(c.contraction_witness, 0.0);
}

TEST_F(ManifestTest, UnsortedEntryNamed) {
  write("bad.json", R"({"dimension": 2, "order": 2, "entries": [{"index": [1, 1], "value": 1},
                                                               {"index": [2, 1], "value": 1}]})");
  const fs::path m = write("m.json", R"({"groups": [{"order": 2, "elements": ["bad.json"]},
                                                    {"order": 2, "elements": ["bad.json"]}]})");
  try {
    load_vector(m);
    FAIL() << "expected IngestionError";
  } catch (const IngestionError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("entry #2"), std::string::npos) << what;
    EXPECT_NE(what.find("[2,1]"), std::string::npos) << what;
  }
}

TEST_F(ManifestTest, RejectsOrderMismatchAndZeroKernel) {
  const fs::path m1 = write("m1.json", R"({"groups": [
      {"order": 2, "elements": [{"dimension": 2, "order": 1, "entries": [{"index": [1], "value": 1}]}]},
      {"order": 1, "elements": [{"dimension": 2, "order": 1, "entries": [{"index": [2], "value": 1}]}]}]})");
  EXPECT_THROW(load_vector(m1), IngestionError);
  const fs::path m2 = write("m2.json", R"({"groups": [
      {"order": 1, "elements": [{"dimension": 2, "order": 1, "entries": []}]},
      {"order": 1, "elements": [{"dimension": 2, "order": 1, "entries": [{"index": [2], "value": 1}]}]}]})");
  EXPECT_THROW(load_vector(m2), IngestionError);
  EXPECT_THROW(load_vector(dir_ / "missing.json"), IngestionError);
  EXPECT_THROW(parse_vector("{", "inline"), IngestionError);
}

TEST_F(ManifestTest, RescaleWarning) {
  const fs::path m = write("m.json", R"({"groups": [
      {"order": 1, "elements": [{"dimension": 2, "order": 1, "entries": [{"index": [1], "value": 2}]}]},
      {"order": 1, "elements": [{"dimension": 2, "order": 1, "entries": [{"index": [2], "value": 1}]}]}]})");
  std::vector<std::string> warnings;
  const ChaosVector v = load_vector(m, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("element #1"), std::string::npos);
  EXPECT_EQ(v.elements()[0].kernel().at({1}), 1.0);
}

TEST_F(ManifestTest, RoundTripBitExact) {
  FamilySpec s = spec_of(Family::vanishing_overlap, 3, 0.7);
  s.orders = {3, 2};
  s.group_sizes = {2, 1};
  const ChaosVector v = generate(s);
  const fs::path m = write("rt.json", vector_to_text(v, {{"note", "round trip"}}));
  const ChaosVector back = load_vector(m);
  const SquaredCovMatrix a = squared_cov_matrix(v);
  const SquaredCovMatrix b = squared_cov_matrix(back);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(vector_to_text(back), vector_to_text(v));
}

}  // namespace
}  // namespace chaoslab
