#include "equiflow/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace equiflow {
namespace {

// One origin, one destination, one always-compliant mode.
Scenario SingleOriginScenario() {
  Scenario s;
  s.graph = Graph({{0}, {1}}, {{0, 1, 5.0, 1e6}});
  s.modes = {{"bus", 0.5, 0.8, 30.0, 1.0, ComplianceClass::kAlwaysCompliant}};
  s.service_types = {{"market", 1.0}};
  s.profiles = {{0, 1000.0, 1.0, std::nullopt}, {1, 0.0, 1.0, std::nullopt}};
  s.catalog = ServiceCatalog(1);
  s.catalog.set_count(1, 0, 3);
  s.trips = {{0, 1}};
  s.demand = {{100.0}};
  return s;
}

// Two origins in perfectly symmetric positions feeding one destination.
Scenario SymmetricTwoOriginScenario() {
  Scenario s;
  s.graph = Graph({{0}, {1}, {2}}, {{0, 2, 6.0, 1000.0}, {1, 2, 6.0, 1000.0}});
  s.modes = {{"bus", 0.5, 0.8, 30.0, 1.0, ComplianceClass::kAlwaysCompliant}};
  s.service_types = {{"market", 1.0}};
  s.profiles = {{0, 1000.0, 2.0, std::nullopt},
                {1, 4000.0, 2.0, std::nullopt},
                {2, 0.0, 2.0, std::nullopt}};
  s.catalog = ServiceCatalog(1);
  s.catalog.set_count(2, 0, 3);
  s.trips = {{0, 2}, {1, 2}};
  s.demand = {{150.0}, {150.0}};
  return s;
}

TEST(EvaluatePipeline, SingleOriginIsTriviallyEquitable) {
  const auto result = evaluate_pipeline(SingleOriginScenario(), {1.0});
  EXPECT_DOUBLE_EQ(result.report.mem_value, 1.0);
  EXPECT_FALSE(result.delta_pv.has_value());
  ASSERT_EQ(result.report.mi.size(), 1u);
  EXPECT_GT(result.report.mi[0], 0.0);
}

TEST(EvaluatePipeline, SymmetricOriginsAreEquitable) {
  const auto result = evaluate_pipeline(SymmetricTwoOriginScenario(), {1.0});
  EXPECT_NEAR(result.report.mem_value, 1.0, 1e-12);
  EXPECT_NEAR(result.report.mi[0], result.report.mi[1], 1e-12);
}

// Four-node fixture with unique uncongested routes; every quantity below is
// recomputed here by straight-line arithmetic.
TEST(EvaluatePipeline, MatchesHandEvaluatedFixture) {
  Scenario s;
  s.graph = Graph({{0}, {1}, {2}, {3}}, {{0, 2, 4.0, 1e6},
                                         {0, 3, 12.0, 1e6},
                                         {1, 2, 9.0, 1e6},
                                         {1, 3, 6.0, 1e6}});
  s.modes = {{"bus", 0.5, 0.8, 8.0, 1.0, ComplianceClass::kAlwaysCompliant}};
  s.service_types = {{"clinic", 0.6}, {"grocer", 0.4}};
  s.profiles = {{0, 1000.0, 2.0, std::nullopt},
                {1, 3000.0, 1.0, std::nullopt},
                {2, 0.0, 0.0, std::nullopt},
                {3, 0.0, 0.0, std::nullopt}};
  s.catalog = ServiceCatalog(2);
  s.catalog.set_count(2, 0, 4);
  s.catalog.set_count(3, 0, 2);
  s.catalog.set_count(3, 1, 5);
  s.trips = {{0, 2}, {1, 3}};
  s.demand = {{100.0}, {100.0}};
  s.smoothing = SmoothingSpec::Sigmoid(0.5);

  const auto result = evaluate_pipeline(s, {1.0});

  const auto ind = [](double t) { return 1.0 / (1.0 + std::exp(0.5 * (t - 8.0))); };
  const double sigma_a0 = 4.0 * ind(4.0) + 2.0 * ind(12.0);
  const double sigma_a1 = 4.0 * ind(9.0) + 2.0 * ind(6.0);
  const double sigma_b0 = 5.0 * ind(12.0);
  const double sigma_b1 = 5.0 * ind(6.0);
  const double na0 = sigma_a0 / std::max(sigma_a0, sigma_a1);
  const double na1 = sigma_a1 / std::max(sigma_a0, sigma_a1);
  const double nb0 = sigma_b0 / std::max(sigma_b0, sigma_b1);
  const double nb1 = sigma_b1 / std::max(sigma_b0, sigma_b1);
  const double mi0 = std::exp(-2.0 * 0.5) * (0.6 * na0 + 0.4 * nb0);
  const double mi1 = std::exp(-1.0 * 0.5) * (0.6 * na1 + 0.4 * nb1);
  const double p0 = 1000.0, p1 = 3000.0;
  const double expected_mem =
      1.0 - (2.0 * p0 * p1 * std::abs(mi0 - mi1)) /
                (2.0 * (p0 + p1) * (p0 * mi0 + p1 * mi1));

  EXPECT_NEAR(result.report.mi[0], mi0, 1e-9);
  EXPECT_NEAR(result.report.mi[1], mi1, 1e-9);
  EXPECT_NEAR(result.report.mem_value, expected_mem, 1e-9);
}

TEST(MaximizeMem, SingleModeGridHasOnePoint) {
  const auto result =
      maximize_mem(SingleOriginScenario(), WeightGrid{5}, kInfiniteTime);
  ASSERT_EQ(result.table.size(), 1u);
  EXPECT_DOUBLE_EQ(result.best_weights[0], 1.0);
  EXPECT_DOUBLE_EQ(result.best_mem, 1.0);
}

TEST(MaximizeMem, MatchesExhaustiveReEvaluation) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  const WeightGrid grid{11};
  const auto result = maximize_mem(s, grid, kInfiniteTime);
  ASSERT_EQ(result.table.size(), 11u);

  double best_mem = -1.0;
  std::vector<double> best_weights;
  for (const auto& weights : simplex_grid(2, grid.resolution)) {
    const double value = evaluate_pipeline(s, weights).report.mem_value;
    if (value > best_mem) {
      best_mem = value;
      best_weights = weights;
    }
  }
  EXPECT_DOUBLE_EQ(result.best_mem, best_mem);
  EXPECT_GE(result.best_mem, result.table.front().mem);
}

TEST(MaximizeMem, InfeasibleLambdaNamesSmallestGap) {
  Scenario s = generate_synthetic(1, 3, 1.0);
  s.rho = 0.5;
  try {
    maximize_mem(s, WeightGrid{3}, 1e-300);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("delta_pv"), std::string::npos);
  }
}

TEST(MaximizeMem, DeterministicAcrossRunsAndWorkerCounts) {
  const Scenario s = generate_synthetic(2, 3, 1.0);
  const auto a = maximize_mem(s, WeightGrid{5}, kInfiniteTime, 1);
  const auto b = maximize_mem(s, WeightGrid{5}, kInfiniteTime, 1);
  const auto c = maximize_mem(s, WeightGrid{5}, kInfiniteTime, 4);
  ASSERT_EQ(a.table.size(), b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    EXPECT_EQ(a.table[i].mem, b.table[i].mem);
    EXPECT_EQ(a.table[i].mem, c.table[i].mem);
    EXPECT_EQ(a.table[i].delta_pv, c.table[i].delta_pv);
  }
  EXPECT_EQ(a.best_weights, c.best_weights);
}

// Resolution 3 ticks {0, 1/2, 1} are a subset of resolution 5 ticks.
TEST(MaximizeMem, GridRefinementDoesNotLoseMem) {
  const Scenario s = generate_synthetic(1, 3, 1.2);
  const auto coarse = maximize_mem(s, WeightGrid{3}, kInfiniteTime);
  const auto fine = maximize_mem(s, WeightGrid{5}, kInfiniteTime);
  EXPECT_GE(fine.best_mem, coarse.best_mem);
}

TEST(SweepWeights, CoversEndpointsInOrder) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  const auto table = sweep_weights(s, 5);
  ASSERT_EQ(table.rows.size(), 5u);
  EXPECT_DOUBLE_EQ(table.rows.front().parameter, 0.0);
  EXPECT_DOUBLE_EQ(table.rows.back().parameter, 1.0);
  for (const auto& row : table.rows) {
    EXPECT_GE(row.mem, 0.0);
    EXPECT_LE(row.mem, 1.0);
  }
}

TEST(SweepWeights, RequiresTwoModes) {
  EXPECT_THROW(sweep_weights(SingleOriginScenario(), 3), std::invalid_argument);
}

TEST(SweepCompliance, BoundaryRatesHaveNoGap) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  const auto table = sweep_compliance(s, {0.0, 0.5, 1.0});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_FALSE(table.rows[0].delta_pv.has_value());  // no compliant private class
  EXPECT_TRUE(table.rows[1].delta_pv.has_value());
  EXPECT_FALSE(table.rows[2].delta_pv.has_value());  // no non-compliant class
  EXPECT_FALSE(table.rows[0].t_compliant_private.has_value());
  EXPECT_FALSE(table.rows[2].t_noncompliant.has_value());
}

TEST(SweepCompliance, RejectsOutOfRangeRates) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  EXPECT_THROW(sweep_compliance(s, {0.5, 1.2}), std::invalid_argument);
}

TEST(SweepDemandScale, RejectsDuplicateScales) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  EXPECT_THROW(sweep_demand_scale(s, {1.0, 1.0}, {0.75}), std::invalid_argument);
  EXPECT_THROW(sweep_demand_scale(s, {2.0, 1.0}, {0.75}), std::invalid_argument);
}

TEST(SweepDemandScale, VanishingDemandGivesNoImprovement) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  const auto table = sweep_demand_scale(s, {0.01}, {0.75}, WeightGrid{5});
  ASSERT_EQ(table.rows.size(), 1u);
  ASSERT_TRUE(table.rows[0].improvement.has_value());
  EXPECT_GE(*table.rows[0].improvement, -1e-12);
  EXPECT_LT(*table.rows[0].improvement, 1e-6);
}

TEST(SweepHierarchyDepth, SingleDepthMatchesDirectEvaluation) {
  Scenario s = generate_synthetic(1, 3, 1.0);
  s.rho = 0.6;
  const auto table = sweep_hierarchy_depth(s, {2});
  ASSERT_EQ(table.rows.size(), 1u);
  ASSERT_TRUE(table.rows[0].wardrop_distance.has_value());

  Scenario direct = s;
  direct.hierarchy_levels = 2;
  std::vector<double> weights;
  for (const ModeSpec& m : s.modes) weights.push_back(m.weight);
  EXPECT_DOUBLE_EQ(table.rows[0].mem, evaluate_pipeline(direct, weights).report.mem_value);
}

TEST(SweepHierarchyDepth, RejectsNonIncreasingDepths) {
  const Scenario s = generate_synthetic(1, 3, 1.0);
  EXPECT_THROW(sweep_hierarchy_depth(s, {5, 2}), std::invalid_argument);
  EXPECT_THROW(sweep_hierarchy_depth(s, {-1}), std::invalid_argument);
}

TEST(SimplexGrid, TwoModeGridIsUniform) {
  const auto points = simplex_grid(2, 5);
  ASSERT_EQ(points.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(points[i][0], i / 4.0);
    EXPECT_NEAR(points[i][0] + points[i][1], 1.0, 1e-15);
  }
}

TEST(SimplexGrid, ThreeModeGridSumsToOne) {
  const auto points = simplex_grid(3, 4);
  EXPECT_EQ(points.size(), 10u);  // compositions of 3 into 3 parts
  for (const auto& w : points) {
    double sum = 0.0;
    for (double v : w) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace equiflow
