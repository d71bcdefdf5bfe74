#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vkoga/errors.hpp"
#include "vkoga/greedy.hpp"

namespace vkoga {
namespace {

using testing::line;

Dataset line_data(std::initializer_list<double> xs, std::initializer_list<double> ys) {
  Dataset data;
  data.inputs = line(xs);
  data.outputs = Eigen::Map<const Eigen::VectorXd>(std::data(ys), static_cast<Index>(ys.size()));
  return data;
}

TEST(InitState, PowerIsOneAndResidualIsData) {
  std::mt19937_64 rng(1);
  const Dataset data = testing::random_dataset(rng, 30, 2, 3);
  for (const auto family : {KernelFamily::Gaussian, KernelFamily::LinearMatern}) {
    const GreedyState state(Kernel(family, 1.3), data);
    EXPECT_TRUE((state.power_sq().array() == 1.0).all());
    EXPECT_EQ(state.residual(), data.outputs);
    EXPECT_EQ(state.selected_count(), 0u);
    EXPECT_TRUE(state.trace().empty());
  }
}

TEST(InitState, EmptyDatasetIsInputError) {
  EXPECT_THROW(GreedyState(Kernel(KernelFamily::Gaussian, 1.0), Dataset{}), InputError);
}

TEST(Indicator, AtZeroPointsEqualsOutputNorm) {
  std::mt19937_64 rng(2);
  const Dataset data = testing::random_dataset(rng, 20, 2, 3);
  const GreedyState state(Kernel(KernelFamily::LinearMatern, 1.0), data);
  const Eigen::VectorXd norms = data.outputs.rowwise().norm();
  EXPECT_TRUE(indicator(state, SelectionCriterion::FGreedy).isApprox(norms, 1e-15));
  EXPECT_TRUE(indicator(state, SelectionCriterion::FOverPGreedy).isApprox(norms, 1e-15));
  EXPECT_TRUE((indicator(state, SelectionCriterion::PGreedy).array() == 1.0).all());
}

TEST(Indicator, ZeroAtSelectedIndex) {
  std::mt19937_64 rng(3);
  const Dataset data = testing::random_dataset(rng, 20, 2, 2);
  GreedyState state(Kernel(KernelFamily::Gaussian, 2.0), data);
  state.extend(7);
  for (const auto c : {SelectionCriterion::FGreedy, SelectionCriterion::PGreedy,
                       SelectionCriterion::FOverPGreedy}) {
    EXPECT_EQ(indicator(state, c)[7], 0.0);
  }
}

TEST(ArgmaxRestricted, EnumeratedExample) {
  const Eigen::VectorXd power = (Eigen::VectorXd(3) << 0.9, 0.5, 0.3).finished();
  const Eigen::VectorXd eta = (Eigen::VectorXd(3) << 0.1, 0.7, 2.0).finished();
  const std::vector<bool> eligible(3, true);
  const std::vector<double> p(power.data(), power.data() + 3);
  const std::vector<double> e(eta.data(), eta.data() + 3);
  // gamma = 0.5: threshold 0.45 keeps {0, 1}.
  EXPECT_EQ(testing::brute_force_restricted_argmax(p, e, eligible, 0.5), 1);
  EXPECT_EQ(argmax_restricted(power, eta, eligible, 0.5), 1);
  // gamma = 0: unrestricted.
  EXPECT_EQ(testing::brute_force_restricted_argmax(p, e, eligible, 0.0), 2);
  EXPECT_EQ(argmax_restricted(power, eta, eligible, 0.0), 2);
  // gamma = 1: only the power maximizer survives.
  EXPECT_EQ(argmax_restricted(power, eta, eligible, 1.0), 0);
}

TEST(ArgmaxRestricted, TiesGoToSmallestIndexAndIneligibleSkipped) {
  const Eigen::VectorXd power = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd eta = (Eigen::VectorXd(4) << 2.0, 1.0, 2.0, 2.0).finished();
  EXPECT_EQ(argmax_restricted(power, eta, {true, true, true, true}, 0.3), 0);
  EXPECT_EQ(argmax_restricted(power, eta, {false, true, true, true}, 0.3), 2);
  EXPECT_EQ(argmax_restricted(power, eta, {false, false, false, false}, 0.3), -1);
}

TEST(ArgmaxRestricted, AgreesWithBruteForceOnRandomValues) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + rng() % 30;
    std::vector<double> p(m), e(m);
    std::vector<bool> eligible(m);
    for (std::size_t i = 0; i < m; ++i) {
      // Coarse values so ties occur.
      p[i] = std::round(u(rng) * 8) / 8;
      e[i] = std::round(u(rng) * 8) / 8;
      eligible[i] = u(rng) < 0.8;
    }
    const double gamma = std::round(u(rng) * 10) / 10;
    const Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Index>(m));
    const Eigen::Map<const Eigen::VectorXd> ev(e.data(), static_cast<Index>(m));
    EXPECT_EQ(argmax_restricted(pv, ev, eligible, gamma),
              testing::brute_force_restricted_argmax(p, e, eligible, gamma));
  }
}

TEST(Extend, GaussianTwoPointPowerMatchesClosedForm) {
  const Dataset data = line_data({0.0, 1.0}, {1.0, -1.0});
  const Kernel k(KernelFamily::Gaussian, 1.0);
  GreedyState state(k, data);
  state.extend(0);
  const double expected = oracle_power(k, line({0.0}), line({1.0}).row(0));
  EXPECT_NEAR(expected, std::sqrt(1.0 - std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(std::sqrt(state.power_sq()[1]), expected, 1e-15);
  EXPECT_NEAR(std::sqrt(state.power_sq()[1]), 0.9298, 1e-4);
}

TEST(Extend, InterpolatesAtNewPoint) {
  std::mt19937_64 rng(5);
  const Dataset data = testing::random_dataset(rng, 25, 2, 3);
  GreedyState state(Kernel(KernelFamily::LinearMatern, 2.0), data);
  for (const Index i : {3, 17, 0, 24}) {
    const double before = state.max_power();
    state.extend(i);
    EXPECT_EQ(state.power_sq()[i], 0.0);
    EXPECT_LE(state.residual().row(i).norm(), 1e-8);
    EXPECT_LE(state.max_power(), before);
  }
}

TEST(Extend, Errors) {
  const Dataset data = line_data({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0});
  GreedyState state(Kernel(KernelFamily::Gaussian, 1.0), data);
  EXPECT_THROW(state.extend(-1), InputError);
  EXPECT_THROW(state.extend(3), InputError);
  state.extend(0);
  EXPECT_THROW(state.extend(0), InputError);
  // Candidate 1 duplicates candidate 0.
  EXPECT_THROW(state.extend(1), StabilityError);
}

TEST(Extend, TraceRecordsStep) {
  const Dataset data = line_data({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  GreedyState state(Kernel(KernelFamily::LinearMatern, 1.0), data);
  state.extend(2);
  ASSERT_EQ(state.trace().size(), 1u);
  const TraceRecord& r = state.trace().front();
  EXPECT_EQ(r.iteration, 1u);
  EXPECT_EQ(r.chosen_index, 2);
  EXPECT_EQ(r.power_at_chosen, 1.0);
  EXPECT_DOUBLE_EQ(r.max_residual_norm, state.max_residual_norm());
  EXPECT_DOUBLE_EQ(r.rmse, state.residual_rmse());
  EXPECT_DOUBLE_EQ(r.max_power, state.max_power());
}

TEST(OraclePower, Basics) {
  const Kernel k(KernelFamily::Gaussian, 1.0);
  EXPECT_EQ(oracle_power(k, Points(0, 1), line({0.3}).row(0)), 1.0);
  EXPECT_EQ(oracle_power(k, line({0.0, 0.5}), line({0.5}).row(0)), 0.0);
  EXPECT_NEAR(oracle_power(k, line({0.0}), line({1.0}).row(0)), std::sqrt(1.0 - std::exp(-2.0)),
              1e-15);
  EXPECT_THROW((void)oracle_power(k, line({0.2, 0.2}), line({1.0}).row(0)), InputError);
}

// Incremental Newton-basis power vs. the dense closed form, random orders.
TEST(GreedyProperties, IncrementalPowerMatchesOracle) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> eps_dist(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + trial % 3;
    const Index m = 5 + static_cast<Index>(rng() % 36);
    const Dataset data = testing::random_dataset(rng, m, d, 2);
    const auto family = trial % 2 ? KernelFamily::Gaussian : KernelFamily::LinearMatern;
    const Kernel k(family, eps_dist(rng));
    GreedyState state(k, data);
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (const Index next : order) {
      if (std::sqrt(state.power_sq()[next]) < 1e-3) continue;
      state.extend(next);
      const Points centers = select_rows(data.inputs, state.selected());
      for (Index i = 0; i < m; ++i) {
        ASSERT_NEAR(std::sqrt(state.power_sq()[i]), oracle_power(k, centers, data.inputs.row(i)),
                    1e-8)
            << "trial " << trial << " N=" << state.selected_count() << " i=" << i;
      }
    }
  }
}

TEST(GreedyProperties, GammaOneReducesToPGreedy) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const Dataset data = testing::random_dataset(rng, 80, 2, 3);
    const Kernel k(KernelFamily::LinearMatern, 2.0);
    const auto reference =
        run(k, data, GreedyConfig{SelectionCriterion::PGreedy, 0.0, 1e-7, 1e-3, 0}).selected();
    for (const auto c : {SelectionCriterion::FGreedy, SelectionCriterion::PGreedy,
                         SelectionCriterion::FOverPGreedy}) {
      EXPECT_EQ(run(k, data, GreedyConfig{c, 1.0, 1e-7, 1e-3, 0}).selected(), reference);
    }
  }
}

TEST(GreedyProperties, GammaZeroIsPlainArgmax) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset data = testing::random_dataset(rng, 30, 2, 2);
    GreedyState state(Kernel(KernelFamily::Gaussian, 1.5), data);
    const auto steps = rng() % 10;
    for (std::size_t s = 0; s < steps; ++s) {
      state.extend(restricted_argmax(state, GreedyConfig{SelectionCriterion::PGreedy, 0.0}));
    }
    for (const auto c : {SelectionCriterion::FGreedy, SelectionCriterion::PGreedy,
                         SelectionCriterion::FOverPGreedy}) {
      Eigen::VectorXd eta = indicator(state, c);
      for (const Index i : state.selected()) eta[i] = -1.0;
      Index expected = 0;
      eta.maxCoeff(&expected);  // first maximizer
      EXPECT_EQ(restricted_argmax(state, GreedyConfig{c, 0.0}), expected);
    }
  }
}

TEST(GreedyProperties, RestrictedSetsAreNested) {
  std::mt19937_64 rng(9);
  const Dataset data = testing::random_dataset(rng, 60, 2, 1);
  GreedyState state(Kernel(KernelFamily::LinearMatern, 3.0), data);
  for (int step = 0; step < 15; ++step) {
    std::vector<Index> previous = restricted_set(state, 0.0);
    EXPECT_EQ(previous.size(), static_cast<std::size_t>(60 - step));
    for (double gamma = 0.1; gamma <= 1.0; gamma += 0.1) {
      const auto current = restricted_set(state, gamma);
      EXPECT_TRUE(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
      EXPECT_FALSE(current.empty());
      previous = current;
    }
    state.extend(restricted_argmax(state, GreedyConfig{SelectionCriterion::FGreedy, 0.5}));
  }
}

TEST(GreedyProperties, RunInvariants) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 12; ++trial) {
    const Dataset data = testing::random_dataset(rng, 100, 1 + trial % 3, 2);
    const auto c = static_cast<SelectionCriterion>(trial % 3);
    const GreedyConfig config{c, 0.25 * (trial % 5), 1e-7, 1e-3, 0};
    const GreedyResult result = run(Kernel(KernelFamily::LinearMatern, 1.0), data, config);
    const auto& selected = result.selected();
    std::vector<Index> sorted = selected;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end()) << "re-selection";
    for (const Index i : selected) {
      EXPECT_EQ(result.state.power_sq()[i], 0.0);
      EXPECT_LE(result.state.residual().row(i).norm(), 1e-8);
    }
    double previous = 1.0;
    for (const auto& r : result.trace()) {
      EXPECT_LE(r.max_power, previous);
      EXPECT_GE(r.power_at_chosen, config.tau_p);
      previous = r.max_power;
    }
  }
}

TEST(Run, ZeroTargetStopsImmediately) {
  const Dataset data = synth(SynthGenerator::Zero, 40, 2, 3, 0);
  const GreedyResult result = run(Kernel(KernelFamily::LinearMatern, 1.0), data, GreedyConfig{});
  EXPECT_TRUE(result.selected().empty());
  EXPECT_EQ(result.stop_reason, StopReason::ResidualTolerance);
}

TEST(Run, PGreedyOnSymmetricGridStartsAtIndexZero) {
  const Dataset data = line_data({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 1.0, 2.0, 1.0, 0.0});
  const GreedyResult result = run(Kernel(KernelFamily::Gaussian, 1.0), data,
                                  GreedyConfig{SelectionCriterion::PGreedy, 0.0, 1e-7, 1e-3, 1});
  ASSERT_EQ(result.selected().size(), 1u);
  EXPECT_EQ(result.selected().front(), 0);
  EXPECT_EQ(result.stop_reason, StopReason::MaxPoints);
}

TEST(Run, FGreedyStartsAtLargestOutput) {
  std::mt19937_64 rng(11);
  const Dataset data = testing::random_dataset(rng, 50, 3, 3);
  Index expected = 0;
  data.outputs.rowwise().norm().maxCoeff(&expected);
  const GreedyResult result = run(Kernel(KernelFamily::LinearMatern, 1.0), data,
                                  GreedyConfig{SelectionCriterion::FGreedy, 0.0, 1e-7, 1e-3, 1});
  EXPECT_EQ(result.selected().front(), expected);
}

TEST(Run, PowerToleranceRejectsDuplicate) {
  // Two copies of one input with different outputs: after one is chosen the
  // other has zero power and f-greedy still wants it.
  const Dataset data = line_data({0.0, 0.0, 3.0}, {0.0, 5.0, 0.1});
  const GreedyResult result = run(Kernel(KernelFamily::LinearMatern, 1.0), data,
                                  GreedyConfig{SelectionCriterion::FGreedy, 0.0, 1e-7, 1e-3, 0});
  EXPECT_EQ(result.stop_reason, StopReason::PowerTolerance);
  EXPECT_EQ(result.selected().front(), 1);
}

TEST(Run, SelectsEverythingWhenTolerancesAreLoose) {
  const Dataset data = line_data({0.0, 1.0, 2.0, 3.0}, {1.0, -1.0, 1.0, -1.0});
  const GreedyResult result = run(Kernel(KernelFamily::LinearMatern, 2.0), data, GreedyConfig{});
  EXPECT_EQ(result.selected().size(), 4u);
  EXPECT_EQ(result.stop_reason, StopReason::AllSelected);
}

TEST(Run, ConfigValidation) {
  const Dataset data = line_data({0.0}, {1.0});
  const Kernel k(KernelFamily::Gaussian, 1.0);
  EXPECT_THROW((void)run(k, data, GreedyConfig{SelectionCriterion::FGreedy, 1.5}), InputError);
  EXPECT_THROW((void)run(k, data, GreedyConfig{SelectionCriterion::FGreedy, -0.1}), InputError);
  EXPECT_THROW((void)run(k, data, GreedyConfig{SelectionCriterion::FGreedy, 0.0, 0.0}),
               InputError);
  EXPECT_THROW((void)run(k, data, GreedyConfig{SelectionCriterion::FGreedy, 0.0, 1e-7, 0.0}),
               InputError);
}

TEST(Run, CriterionNamesRoundTrip) {
  for (const auto c : {SelectionCriterion::FGreedy, SelectionCriterion::PGreedy,
                       SelectionCriterion::FOverPGreedy}) {
    EXPECT_EQ(parse_criterion(to_string(c)), c);
  }
  EXPECT_THROW((void)parse_criterion("fpp"), InputError);
}

}  // namespace
}  // namespace vkoga
