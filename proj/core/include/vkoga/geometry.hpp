#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vkoga/dataset.hpp"
#include "vkoga/greedy.hpp"
#include "vkoga/kernels.hpp"

namespace vkoga {

/// max over candidates of the distance to the nearest selected point.
[[nodiscard]] double fill_distance(const Points& selected, const Points& candidates);

/// Smallest pairwise distance; 0 if the set has duplicates.
[[nodiscard]] double separation_distance(const Points& selected);

/// Smallest eigenvalue of the kernel matrix on the given points.
[[nodiscard]] double smallest_eigenvalue(const Kernel& kernel, const Points& selected);

/// Least-squares slope of log(value) against log(N).
[[nodiscard]] double decay_slope(std::span<const std::pair<double, double>> series);

struct GeometryReport {
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;
  double lambda_min = 0.0;
};

[[nodiscard]] GeometryReport geometry_report(const Kernel& kernel, const Points& selected,
                                             const Points& candidates);

/// Tensor grid with per_axis points per coordinate on [lo, hi]^dim.
[[nodiscard]] Points uniform_grid(Index per_axis, Index dim, double lo = -1.0, double hi = 1.0);

struct TheorySample {
  std::size_t n;
  double power_max;
  double lambda_min;
  double fill;
  double separation;
  double rho;
};

struct TheorySchedule {
  std::size_t n_min = 20;
  std::size_t n_max = 200;
  std::size_t n_step = 10;
};

struct TheoryReport {
  std::vector<TheorySample> samples;
  StopReason stop_reason = StopReason::MaxPoints;
  double power_slope = 0.0;
  double lambda_slope = 0.0;
  double rho_max = 0.0;
  /// Present when a Sobolev smoothness tau of the native space was supplied:
  /// the rates 1/2 - tau/d and 1 - 2 tau/d.
  std::optional<double> smoothness;
  std::optional<double> expected_power_slope;
  std::optional<double> expected_lambda_slope;
};

/// Runs greedy selection on the candidate set and records the max power value,
/// lambda_min, h, q and h/q at N = n_min, n_min + n_step, ..., n_max, then fits
/// log-log decay slopes. max_points in config is overridden by n_max.
[[nodiscard]] TheoryReport theory_check(const Kernel& kernel, const Dataset& candidates,
                                        GreedyConfig config, const TheorySchedule& schedule,
                                        std::optional<double> smoothness = std::nullopt);

}  // namespace vkoga
