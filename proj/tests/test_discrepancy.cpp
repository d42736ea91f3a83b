#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "menuabc/discrepancy.hpp"

using namespace menuabc;

namespace {

BehaviorSummary stats(double all_mean, double all_std, double abs_mean = 0.0,
                      double abs_std = 0.0, double pre_mean = 0.0, double pre_std = 0.0) {
  BehaviorSummary s;
  ConditionStats all;
  all.tct_mean_ms = all_mean;
  all.tct_std_ms = all_std;
  s.all = all;
  ConditionStats ab;
  ab.tct_mean_ms = abs_mean;
  ab.tct_std_ms = abs_std;
  s.abs = ab;
  ConditionStats pre;
  pre.tct_mean_ms = pre_mean;
  pre.tct_std_ms = pre_std;
  s.pre = pre;
  return s;
}

}  // namespace

TEST_CASE("identical statistics give zero discrepancy") {
  const auto obs = stats(920.0, 380.0);
  DiscrepancyConfig cfg;
  CHECK(tct_discrepancy(obs, obs, cfg, Condition::kAll).value == 0.0);
  CHECK(split_condition_discrepancy(obs, obs, cfg).value == 0.0);
}

TEST_CASE("hand-evaluated formula: 920/930 means, 380/400 stds") {
  const auto obs = stats(920.0, 380.0);
  const auto sim = stats(930.0, 400.0);
  DiscrepancyConfig cfg;  // a = b = 1e-6
  const double d = tct_discrepancy(obs, sim, cfg, Condition::kAll).value;
  CHECK(std::abs(d - 1.2e-4) < 1e-12);
}

TEST_CASE("doubling a doubles the mean term when std terms match") {
  const auto obs = stats(920.0, 380.0);
  const auto sim = stats(930.0, 380.0);
  DiscrepancyConfig cfg;
  const double d1 = tct_discrepancy(obs, sim, cfg, Condition::kAll).value;
  cfg.a *= 2.0;
  const double d2 = tct_discrepancy(obs, sim, cfg, Condition::kAll).value;
  CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-12));
}

TEST_CASE("split mode averages the two condition discrepancies") {
  // d_pre = 2e-4 and d_abs = 4e-4 -> 3e-4; realized via the mean terms.
  const auto obs = stats(0, 0, 1000.0, 100.0, 1000.0, 100.0);
  const auto sim_pre = stats(0, 0, 1020.0, 100.0, 1000.0 + std::sqrt(200.0), 100.0);
  DiscrepancyConfig cfg;
  const double d_abs = tct_discrepancy(obs, sim_pre, cfg, Condition::kAbs).value;
  const double d_pre = tct_discrepancy(obs, sim_pre, cfg, Condition::kPre).value;
  CHECK(d_abs == doctest::Approx(4e-4).epsilon(1e-9));
  CHECK(d_pre == doctest::Approx(2e-4).epsilon(1e-9));
  CHECK(split_condition_discrepancy(obs, sim_pre, cfg).value ==
        doctest::Approx(3e-4).epsilon(1e-9));
}

TEST_CASE("split mode is symmetric in which condition differs") {
  const auto obs = stats(0, 0, 1000.0, 100.0, 1000.0, 100.0);
  const auto diff_abs = stats(0, 0, 1050.0, 100.0, 1000.0, 100.0);
  const auto diff_pre = stats(0, 0, 1000.0, 100.0, 1050.0, 100.0);
  DiscrepancyConfig cfg;
  CHECK(split_condition_discrepancy(obs, diff_abs, cfg).value ==
        doctest::Approx(split_condition_discrepancy(obs, diff_pre, cfg).value)
            .epsilon(1e-12));
}

TEST_CASE("split equals aggregate when every condition is identical") {
  const auto obs = stats(900.0, 300.0, 900.0, 300.0, 900.0, 300.0);
  DiscrepancyConfig cfg;
  cfg.mode = DiscrepancyMode::kSplitConditions;
  CHECK(discrepancy(obs, obs, cfg).value == 0.0);
  cfg.mode = DiscrepancyMode::kAggregate;
  CHECK(discrepancy(obs, obs, cfg).value == 0.0);

  // Still holds when obs and sim differ, as long as each summary's own
  // conditions carry the same statistics.
  const auto sim = stats(950.0, 320.0, 950.0, 320.0, 950.0, 320.0);
  cfg.mode = DiscrepancyMode::kSplitConditions;
  const double split = discrepancy(obs, sim, cfg).value;
  cfg.mode = DiscrepancyMode::kAggregate;
  CHECK(split == doctest::Approx(discrepancy(obs, sim, cfg).value).epsilon(1e-12));
}

TEST_CASE("non-negativity on random statistics") {
  DiscrepancyConfig cfg;
  menuabc::Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = stats(u(rng), u(rng));
    const auto b = stats(u(rng), u(rng));
    CHECK(tct_discrepancy(a, b, cfg, Condition::kAll).value >= 0.0);
  }
}

TEST_CASE("missing condition is an error, not a zero") {
  BehaviorSummary missing;  // no conditions at all
  const auto obs = stats(900.0, 300.0);
  DiscrepancyConfig cfg;
  CHECK_THROWS(tct_discrepancy(obs, missing, cfg, Condition::kAll));
  CHECK_THROWS(split_condition_discrepancy(obs, missing, cfg));
}

TEST_CASE("negative weights are rejected") {
  DiscrepancyConfig cfg;
  cfg.a = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
