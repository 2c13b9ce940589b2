#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "prony/experiment.hpp"
#include "prony/forward.hpp"
#include "prony/io.hpp"
#include "prony/stability.hpp"

namespace {

using prony::Complex;
using prony::ExperimentRow;
using prony::ExperimentTable;
using prony::make_model;
using prony::Method;

TEST(MatchParameters, Permutation) {
  const auto truth = make_model({1.0, -1.0}, {{2.0}, {3.0}});
  const auto recovered = make_model({-1.0 + 1e-9, 1.0 + 1e-9}, {{3.0}, {2.0}});
  const auto e = prony::match_parameters(truth, recovered);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_NEAR(e.values[1], 1e-9, 1e-15);
  EXPECT_NEAR(e.values[3], 1e-9, 1e-15);
  EXPECT_EQ(e.values[0], 0.0);
  EXPECT_EQ(e.values[2], 0.0);
  EXPECT_EQ(e.labels[1], "xi[1]");
}

TEST(MatchParameters, IdenticalIsZero) {
  const auto model = make_model({0.1, Complex(0.2, 0.3)}, {{1.0, 2.0}, {3.0}});
  for (double v : prony::match_parameters(model, model).values) EXPECT_EQ(v, 0.0);
}

TEST(MatchParameters, MultiplicityConstrained) {
  // Cheapest node assignment would swap, but only equal multiplicities may pair.
  const auto truth = make_model({0.0, 1.0}, {{1.0, 1.0}, {1.0}});
  const auto recovered = make_model({1.0, 0.0}, {{1.0}, {1.0, 1.0}});
  for (double v : prony::match_parameters(truth, recovered).values) EXPECT_EQ(v, 0.0);
  const auto wrong = make_model({0.0, 1.0}, {{1.0}, {1.0}});
  EXPECT_THROW(prony::match_parameters(truth, wrong), prony::InputError);
}

ExperimentTable synthetic(const std::vector<double>& grid, auto error) {
  ExperimentTable t;
  for (double v : grid) {
    for (int trial = 0; trial < 3; ++trial) {
      t.rows.push_back({v, trial, Method::kLsq, "xi[1]", error(v, trial), 1.0});
    }
  }
  return t;
}

TEST(Slope, ExactPowerLaw) {
  const auto grid = prony::parse_grid("0.01:10:7");
  const auto t = synthetic(grid, [](double v, int) { return 3.0 * v * v; });
  EXPECT_NEAR(prony::slope_estimate(t, Method::kLsq, "xi[1]"), 2.0, 1e-9);
}

TEST(Slope, Constant) {
  const auto t = synthetic(prony::parse_grid("1:100:5"), [](double, int) { return 0.25; });
  EXPECT_NEAR(prony::slope_estimate(t, Method::kLsq, "xi[1]"), 0.0, 1e-12);
}

TEST(Slope, MedianIgnoresOutliersAndInfinity) {
  const auto t = synthetic(prony::parse_grid("1:1000:4"), [](double v, int trial) {
    if (trial == 0) return std::numeric_limits<double>::infinity();
    return trial == 1 ? v : v;
  });
  EXPECT_NEAR(prony::slope_estimate(t, Method::kLsq, "xi[1]"), 1.0, 1e-12);
  EXPECT_EQ(prony::failure_count(t, Method::kLsq), 4);
  const auto med = prony::median_errors(t, Method::kLsq, "xi[1]");
  ASSERT_EQ(med.size(), 4u);
}

TEST(Slope, NoDataThrows) {
  const auto t = synthetic(prony::parse_grid("1:1000:4"),
                           [](double, int) { return std::numeric_limits<double>::infinity(); });
  EXPECT_THROW(prony::slope_estimate(t, Method::kLsq, "xi[1]"), prony::NumericalError);
  const auto two = synthetic({1.0, 2.0}, [](double v, int) { return v; });
  EXPECT_THROW(prony::slope_estimate(two, Method::kLsq, "xi[1]"), prony::NumericalError);
}

TEST(Grid, Parsing) {
  const auto g = prony::parse_grid("1e-12:1e-6:7");
  ASSERT_EQ(g.size(), 7u);
  EXPECT_EQ(g.front(), 1e-12);
  EXPECT_EQ(g.back(), 1e-6);
  EXPECT_NEAR(g[3], 1e-9, 1e-22);
  const auto lin = prony::parse_grid("1:3:3");
  EXPECT_NEAR(lin[1], std::sqrt(3.0), 1e-15);
  const auto forced = prony::parse_grid("1:3:3:lin");
  EXPECT_EQ(forced[1], 2.0);
  EXPECT_EQ(prony::parse_grid("1:3:3", true)[1], 2.0);
  EXPECT_THROW(prony::parse_grid("0:1:3"), prony::InputError);
  EXPECT_THROW(prony::parse_grid("1:2"), prony::InputError);
  EXPECT_THROW(prony::parse_grid("1:2:x"), prony::InputError);
  EXPECT_THROW(prony::parse_grid("1:2:3:cubic"), prony::InputError);
}

TEST(Sweep, KindNames) {
  for (const char* name : {"highest-coeff", "prev-coeff", "epsilon", "order", "separation"}) {
    EXPECT_STREQ(prony::sweep_kind_name(prony::parse_sweep_kind(name)), name);
  }
  EXPECT_THROW(prony::parse_sweep_kind("noise"), prony::InputError);
}

TEST(Sweep, DefaultBaseModel) {
  const auto model = prony::default_base_model(2, 5);
  ASSERT_EQ(model.num_nodes(), 2);
  EXPECT_EQ(model.nodes[0], Complex(1.0 / 3.0));
  EXPECT_EQ(model.nodes[1], Complex(2.0 / 3.0));
  EXPECT_EQ(model.multiplicities, (std::vector<int>{2, 2}));
  for (const auto& row : model.magnitudes) {
    for (Complex a : row) {
      EXPECT_EQ(a.imag(), 0.0);
      EXPECT_LE(std::abs(a), 1.0);
    }
    EXPECT_GE(std::abs(row.back()), 0.2);
  }
  EXPECT_EQ(model, prony::default_base_model(2, 5));
  EXPECT_NE(model, prony::default_base_model(2, 6));
}

TEST(Sweep, PointMutations) {
  prony::SweepSpec spec;
  spec.base_model = make_model({0.2, 0.7}, {{0.5, Complex(-0.6, 0.0)}, {0.3, 0.9}});
  spec.epsilon = 1e-10;

  spec.kind = prony::SweepKind::kHighestCoeff;
  auto [m1, e1] = prony::sweep_point(spec, 4.0);
  EXPECT_EQ(m1.magnitudes[0][1], Complex(-4.0));
  EXPECT_EQ(e1, 1e-10);

  spec.kind = prony::SweepKind::kPrevCoeff;
  auto [m2, e2] = prony::sweep_point(spec, 3.0);
  EXPECT_EQ(m2.magnitudes[0][0], Complex(3.0));
  EXPECT_EQ(m2.magnitudes[0][1], Complex(-0.6));

  spec.kind = prony::SweepKind::kEpsilon;
  auto [m3, e3] = prony::sweep_point(spec, 1e-7);
  EXPECT_EQ(m3, spec.base_model);
  EXPECT_EQ(e3, 1e-7);

  spec.kind = prony::SweepKind::kSeparation;
  auto [m4, e4] = prony::sweep_point(spec, 0.05);
  EXPECT_EQ(m4.nodes[1], Complex(0.25));

  spec.kind = prony::SweepKind::kOrder;
  auto [m5, e5] = prony::sweep_point(spec, 3.0);
  EXPECT_EQ(m5.multiplicities, (std::vector<int>{3, 3}));
  EXPECT_EQ(m5.nodes, spec.base_model.nodes);
  EXPECT_EQ(prony::sweep_point(spec, 3.0).first, m5);

  spec.kind = prony::SweepKind::kPrevCoeff;
  spec.base_model = make_model({0.2, 0.7}, {{0.5}, {0.3}});
  EXPECT_THROW(prony::sweep_point(spec, 3.0), prony::InputError);
}

TEST(Sweep, MeasurementPolicy) {
  const auto model = prony::default_base_model(2, 1);
  prony::SweepSpec spec;
  EXPECT_EQ(prony::measurements_for(Method::kLsq, model, spec), 6);
  EXPECT_EQ(prony::measurements_for(Method::kProny, model, spec), 8);
  EXPECT_EQ(prony::measurements_for(Method::kEsprit, model, spec), 8);
  spec.measurements[Method::kProny] = 11;
  EXPECT_EQ(prony::measurements_for(Method::kProny, model, spec), 11);
}

prony::SweepSpec small_spec() {
  prony::SweepSpec spec;
  spec.kind = prony::SweepKind::kEpsilon;
  spec.grid = prony::parse_grid("1e-11:1e-8:4");
  spec.trials = 3;
  spec.seed = 17;
  spec.base_model = prony::default_base_model(2, 17);
  return spec;
}

TEST(Sweep, TableShapeAndDeterminism) {
  const auto spec = small_spec();
  const auto table = prony::run_sweep(spec);
  const std::size_t R = spec.base_model.num_params();
  EXPECT_EQ(table.rows.size(), spec.grid.size() * 3 * 3 * R);
  for (const auto& row : table.rows) {
    EXPECT_GE(row.abs_error, 0.0);
    EXPECT_GT(row.predicted_bound, 0.0);
  }
  EXPECT_EQ(table, prony::run_sweep(spec));
  bool has_seed = false;
  for (const auto& [k, v] : table.metadata) has_seed = has_seed || (k == "seed" && v == "17");
  EXPECT_TRUE(has_seed);
}

TEST(Sweep, LsqWithinThreeTimesBound) {
  const auto table = prony::run_sweep(small_spec());
  for (const auto& row : table.rows) {
    if (row.method != Method::kLsq) continue;
    EXPECT_LE(row.abs_error, 3.0 * row.predicted_bound) << row.param << " " << row.sweep_value;
  }
}

TEST(Sweep, CriticalPointsSkipped) {
  prony::SweepSpec spec = small_spec();
  spec.kind = prony::SweepKind::kSeparation;
  spec.grid = {0.0, 0.1, 0.2};
  spec.methods = {Method::kLsq};
  const auto table = prony::run_sweep(spec);
  for (const auto& row : table.rows) EXPECT_NE(row.sweep_value, 0.0);
  bool recorded = false;
  for (const auto& [k, v] : table.metadata) recorded = recorded || (k == "skipped_points" && v != "");
  EXPECT_TRUE(recorded);
}

TEST(Sweep, InvalidSpec) {
  auto spec = small_spec();
  spec.trials = 0;
  EXPECT_THROW(prony::run_sweep(spec), prony::InputError);
  spec = small_spec();
  spec.grid = {1e-9, 1e-10};
  EXPECT_NO_THROW(prony::run_sweep(spec));
  spec.grid = {1e-9, 1e-9};
  EXPECT_THROW(prony::run_sweep(spec), prony::InputError);
  spec.grid.clear();
  EXPECT_THROW(prony::run_sweep(spec), prony::InputError);
}

TEST(Sweep, EpsilonSlopeNearOne) {
  auto spec = small_spec();
  spec.grid = prony::parse_grid("1e-12:1e-6:7");
  spec.trials = 10;
  spec.methods = {Method::kLsq};
  const auto table = prony::run_sweep(spec);
  for (const auto& label : prony::parameter_labels(spec.base_model.multiplicities)) {
    const double s = prony::slope_estimate(table, Method::kLsq, label);
    EXPECT_GE(s, 0.9) << label;
    EXPECT_LE(s, 1.1) << label;
  }
}

TEST(Io, ModelJsonRoundTrip) {
  const auto model = make_model({Complex(0.1, -0.2), 0.7}, {{1.0, Complex(0.0, 2.5)}, {-3.0}});
  EXPECT_EQ(prony::model_from_json(prony::model_to_json(model)), model);
}

TEST(Io, ModelJsonErrors) {
  EXPECT_THROW(prony::model_from_json("{"), prony::InputError);
  EXPECT_THROW(prony::model_from_json(R"({"nodes":[[0,0]]})"), prony::InputError);
  EXPECT_THROW(prony::model_from_json(
                   R"({"nodes":[[0,0]],"multiplicities":[2],"magnitudes":[[[1,0]]]})"),
               prony::InputError);
  EXPECT_THROW(prony::model_from_json(
                   R"({"nodes":[[0]],"multiplicities":[1],"magnitudes":[[[1,0]]]})"),
               prony::InputError);
}

TEST(Io, MeasurementCsvRoundTrip) {
  prony::MeasurementVector m(3);
  m << Complex(0.1, -1e-300), Complex(1.0 / 3.0, 2.0), Complex(-7e10, 0.0);
  std::stringstream s;
  prony::write_measurements_csv(s, m);
  EXPECT_EQ(s.str().substr(0, 8), "k,re,im\n");
  EXPECT_EQ(prony::read_measurements_csv(s), m);
}

TEST(Io, MeasurementCsvErrors) {
  std::stringstream bad_order("k,re,im\n1,0,0\n");
  EXPECT_THROW(prony::read_measurements_csv(bad_order), prony::InputError);
  std::stringstream bad_field("0,x,0\n");
  EXPECT_THROW(prony::read_measurements_csv(bad_field), prony::InputError);
  std::stringstream empty("k,re,im\n");
  EXPECT_THROW(prony::read_measurements_csv(empty), prony::InputError);
  std::stringstream comments("# note\n0,1,2\n1,3,4\n");
  EXPECT_EQ(prony::read_measurements_csv(comments).size(), 2);
}

TEST(Io, BoundsCsv) {
  std::stringstream s;
  prony::write_bounds_csv(s, prony::local_accuracy(make_model({0.0}, {{2.0}}), 0.01));
  EXPECT_EQ(s.str(),
            "param,acc_loc,row_l1,c1,epsilon\n"
            "a[1][0],0.01,1,1,0.01\n"
            "xi[1],0.0050000000000000001,0.5,1,0.01\n");
}

TEST(Io, TableCsvRoundTrip) {
  const auto table = prony::run_sweep(small_spec());
  std::stringstream s;
  prony::write_table_csv(s, table);
  EXPECT_EQ(prony::read_table_csv(s), table);

  ExperimentTable special;
  special.metadata = {{"kind", "epsilon"}, {"note", "a: b"}};
  special.rows.push_back({0.1, 0, Method::kEsprit, "a[1][0]",
                          std::numeric_limits<double>::infinity(), 1e-300});
  std::stringstream t;
  prony::write_table_csv(t, special);
  EXPECT_EQ(prony::read_table_csv(t), special);
}

TEST(Io, TableCsvErrors) {
  std::stringstream no_header("1,0,lsq,xi[1],0,0\n");
  EXPECT_THROW(prony::read_table_csv(no_header), prony::InputError);
  std::stringstream short_row(
      "sweep_value,trial,method,param,abs_error,predicted_bound\n1,0,lsq\n");
  EXPECT_THROW(prony::read_table_csv(short_row), prony::InputError);
}

TEST(Io, SolveReportJson) {
  prony::SolveReport report;
  report.recovered = make_model({0.5}, {{2.0}});
  report.method = Method::kEsprit;
  report.diagnostics["gap"] = std::numeric_limits<double>::infinity();
  report.diagnostics["residual"] = 1e-17;
  const auto j = nlohmann::json::parse(prony::solve_report_to_json(report));
  EXPECT_EQ(j["method"], "esprit");
  EXPECT_EQ(j["diagnostics"]["gap"], "inf");
  EXPECT_EQ(j["diagnostics"]["residual"], 1e-17);
  EXPECT_EQ(prony::model_from_json(j["model"].dump()), report.recovered);
}

TEST(Io, SummaryJson) {
  const auto spec = small_spec();
  const auto table = prony::run_sweep(spec);
  const auto j = nlohmann::json::parse(prony::sweep_summary_json(spec, table));
  EXPECT_EQ(j["kind"], "epsilon");
  EXPECT_EQ(j["seed"], 17);
  EXPECT_TRUE(j["slopes"]["lsq"]["xi[1]"].is_number());
  EXPECT_EQ(j["failures"]["prony"], 0);
}

}  // namespace
