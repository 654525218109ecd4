#include "pdecol/error.hpp"
#include "pdecol/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pdecol;

TEST(Burgers, Definition)
{
  const ProblemDefinition p = burgers_problem();
  EXPECT_EQ(p.name, "burgers");
  EXPECT_EQ(p.tf, 1.0);
  EXPECT_EQ(p.control_lower, -0.015);
  EXPECT_EQ(p.control_upper, 0.015);
  EXPECT_EQ(p.objective.control_weight, 0.01);
  EXPECT_EQ(p.n_controls(), 2);
  EXPECT_DOUBLE_EQ(p.convection.value(0.4), 0.08);
  EXPECT_DOUBLE_EQ(p.diffusion.d1(3.0), 0.1);
  EXPECT_DOUBLE_EQ(p.initial_state(0.5), 0.0625);
  EXPECT_EQ(p.initial_state(0.0), 0.0);
  EXPECT_EQ(p.initial_state(1.0), 0.0);
  EXPECT_EQ(p.objective.target(0.3, 0.7), 0.035);
  EXPECT_FALSE(p.source);
}

TEST(Heat, Definition)
{
  const ProblemDefinition p = heat_problem(false);
  EXPECT_EQ(p.tf, 0.5);
  EXPECT_EQ(p.n_controls(), 1);
  EXPECT_EQ(p.left.kind, BoundaryCondition::Kind::Robin);
  EXPECT_EQ(p.objective.kind, TrackingObjective::Kind::RightBoundary);
  EXPECT_DOUBLE_EQ(p.capacity.d1(1.0), 5.0);
  EXPECT_DOUBLE_EQ(p.diffusion.d1(1.0), 3.0);
  // The target starts where the initial profile ends.
  EXPECT_NEAR(p.initial_state(1.0), p.objective.target(1.0, 0.0), 1e-15);
  EXPECT_FALSE(p.control_upper_profile);
  const ProblemDefinition c = heat_problem(true);
  EXPECT_NEAR(c.control_upper_profile(0.0), 0.1, 1e-15);
  EXPECT_NEAR(c.control_upper_profile(0.25), 0.0, 1e-15);
  EXPECT_NEAR(c.control_upper_profile(0.5), 0.1, 1e-15);
}

TEST(Heat, ManufacturedSourceSolvesThePde)
{
  // q = C'(y) y_t - B'(y) y_xx - B''(y) y_x^2 for y = 2 + e^{-t} cos(pi x).
  const ProblemDefinition p = heat_problem(false);
  const double pi = std::numbers::pi;
  for (double x : {0.0, 0.2, 0.5, 0.93, 1.0}) {
    for (double t : {0.0, 0.1, 0.37, 0.5}) {
      const double e = std::exp(-t);
      const double y = 2 + e * std::cos(pi * x);
      const double yt = -e * std::cos(pi * x);
      const double yx = -pi * e * std::sin(pi * x);
      const double yxx = -pi * pi * e * std::cos(pi * x);
      const double q = p.capacity.d1(y) * yt - p.diffusion.d1(y) * yxx - p.diffusion.d2(y) * yx * yx;
      EXPECT_NEAR(p.source(x, t), q, 1e-12) << x << " " << t;
      const double h = 1e-6;
      EXPECT_NEAR(p.source_dt(x, t), (p.source(x, t + h) - p.source(x, t - h)) / (2 * h), 1e-7);
      EXPECT_NEAR(p.objective.target_dt(x, t), (p.objective.target(x, t + h) - p.objective.target(x, t - h)) / (2 * h),
                  1e-8);
    }
  }
}

TEST(Problems, ByName)
{
  EXPECT_EQ(problem_by_name("heat-constrained").name, "heat-constrained");
  EXPECT_THROW(problem_by_name("wave"), InvalidConfig);
}

TEST(Problems, ReferenceTable)
{
  int burgers = 0, heat = 0, constrained = 0;
  for (const auto& r : kReferenceObjectives) {
    const std::string name = r.problem;
    burgers += name == "burgers";
    heat += name == "heat";
    constrained += name == "heat-constrained";
    EXPECT_GT(r.objective, 2.8e-5);
    EXPECT_LT(r.objective, 3.9e-5);
  }
  EXPECT_EQ(burgers, 4);
  EXPECT_EQ(heat, 4);
  EXPECT_EQ(constrained, 2);
}

TEST(Radau, StandardFamilyLeavesFinalControlsUnconstrained)
{
  MeshConfig m;
  m.points_per_interval = 3;
  m.intervals = 2;
  m.n_nodes = 5;
  const RadauComparison r = compare_radau(burgers_problem(), m);
  EXPECT_EQ(r.columns_flipped, r.columns_standard);
  EXPECT_EQ(r.columns_flipped, 7 * 5 + 12 + 2);
  EXPECT_TRUE(r.empty_columns_flipped.empty());
  ASSERT_EQ(r.empty_columns_standard.size(), 2u);
  EXPECT_EQ(r.empty_labels_standard[0], "u1[5]");
  EXPECT_EQ(r.empty_labels_standard[1], "u2[5]");
}

TEST(Labels, VariableLabels)
{
  MeshConfig m;
  m.points_per_interval = 2;
  m.intervals = 1;
  m.n_nodes = 4;
  const auto tr = build_transcription(burgers_problem(), m);
  const DecisionLayout& l = tr->layout();
  EXPECT_EQ(variable_label(l, l.state(1, 2)), "y[1,2]");
  EXPECT_EQ(variable_label(l, l.u1(1)), "u1[1]");
  EXPECT_EQ(variable_label(l, l.u2(0)), "u2[0]");
  EXPECT_EQ(variable_label(l, l.tf()), "tf");
}

TEST(Build, RejectsBadMeshes)
{
  MeshConfig m;
  m.intervals = 0;
  EXPECT_THROW(build_transcription(burgers_problem(), m), InvalidConfig);
  m = MeshConfig{};
  m.degree = 2;
  m.n_nodes = 35;
  EXPECT_THROW(build_transcription(burgers_problem(), m, Backend::Fd), InvalidConfig);
}
