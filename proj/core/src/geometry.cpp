#include "vkoga/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "vkoga/errors.hpp"

namespace vkoga {

namespace {

double distance(PointRef a, PointRef b) { return (a - b).norm(); }

}  // namespace

double fill_distance(const Points& selected, const Points& candidates) {
  if (selected.rows() == 0) throw InputError("fill_distance: empty selected set");
  if (candidates.rows() > 0 && candidates.cols() != selected.cols()) {
    throw InputError("fill_distance: dimension mismatch");
  }
  double h = 0.0;
  for (Index i = 0; i < candidates.rows(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < selected.rows(); ++j) {
      nearest = std::min(nearest, distance(candidates.row(i), selected.row(j)));
    }
    h = std::max(h, nearest);
  }
  return h;
}

double separation_distance(const Points& selected) {
  if (selected.rows() < 2) throw InputError("separation_distance: need at least 2 points");
  double q = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < selected.rows(); ++i) {
    for (Index j = i + 1; j < selected.rows(); ++j) {
      q = std::min(q, distance(selected.row(i), selected.row(j)));
    }
  }
  return q;
}

double smallest_eigenvalue(const Kernel& kernel, const Points& selected) {
  if (selected.rows() == 0) throw InputError("smallest_eigenvalue: empty point set");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel_matrix(kernel, selected),
                                                              Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double decay_slope(std::span<const std::pair<double, double>> series) {
  if (series.size() < 3) throw InputError("decay_slope: need at least 3 samples");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [n, value] : series) {
    if (!(n > 0.0) || !(value > 0.0)) {
      throw InputError("decay_slope: N and values must be positive");
    }
    mean_x += std::log(n);
    mean_y += std::log(value);
  }
  const auto count = static_cast<double>(series.size());
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [n, value] : series) {
    const double dx = std::log(n) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(value) - mean_y);
  }
  if (sxx == 0.0) throw InputError("decay_slope: all N identical");
  return sxy / sxx;
}

GeometryReport geometry_report(const Kernel& kernel, const Points& selected,
                               const Points& candidates) {
  GeometryReport report;
  report.h = fill_distance(selected, candidates);
  report.q = selected.rows() >= 2 ? separation_distance(selected)
                                  : std::numeric_limits<double>::infinity();
  report.rho = report.q > 0.0 ? report.h / report.q : std::numeric_limits<double>::infinity();
  report.lambda_min = smallest_eigenvalue(kernel, selected);
  return report;
}

Points uniform_grid(Index per_axis, Index dim, double lo, double hi) {
  if (per_axis < 2 || dim < 1) throw InputError("uniform_grid: need per_axis >= 2, dim >= 1");
  Index total = 1;
  for (Index k = 0; k < dim; ++k) total *= per_axis;
  Points grid(total, dim);
  const double step = (hi - lo) / static_cast<double>(per_axis - 1);
  for (Index i = 0; i < total; ++i) {
    Index rest = i;
    // Last coordinate varies fastest.
    for (Index k = dim - 1; k >= 0; --k) {
      grid(i, k) = lo + step * static_cast<double>(rest % per_axis);
      rest /= per_axis;
    }
  }
  return grid;
}

TheoryReport theory_check(const Kernel& kernel, const Dataset& candidates, GreedyConfig config,
                          const TheorySchedule& schedule, std::optional<double> smoothness) {
  if (schedule.n_min < 2 || schedule.n_step < 1 || schedule.n_max < schedule.n_min) {
    throw InputError("theory_check: need 2 <= n_min <= n_max and n_step >= 1");
  }
  config.max_points = schedule.n_max;

  TheoryReport report;
  std::size_t next_sample = schedule.n_min;
  auto observer = [&](const GreedyState& state) {
    const std::size_t n = state.selected_count();
    if (n != next_sample) return;
    next_sample += schedule.n_step;
    const Points selected = select_rows(state.candidates(), state.selected());
    const GeometryReport geometry = geometry_report(kernel, selected, state.candidates());
    report.samples.push_back(TheorySample{n, state.max_power(), geometry.lambda_min, geometry.h,
                                          geometry.q, geometry.rho});
  };
  const GreedyResult result = run(kernel, candidates, config, observer);
  report.stop_reason = result.stop_reason;

  if (report.samples.size() >= 3) {
    std::vector<std::pair<double, double>> power_series;
    std::vector<std::pair<double, double>> lambda_series;
    for (const auto& s : report.samples) {
      power_series.emplace_back(static_cast<double>(s.n), s.power_max);
      if (s.lambda_min > 0.0) lambda_series.emplace_back(static_cast<double>(s.n), s.lambda_min);
    }
    report.power_slope = decay_slope(power_series);
    report.lambda_slope = lambda_series.size() >= 3 ? decay_slope(lambda_series)
                                                    : std::numeric_limits<double>::quiet_NaN();
  } else {
    report.power_slope = std::numeric_limits<double>::quiet_NaN();
    report.lambda_slope = std::numeric_limits<double>::quiet_NaN();
  }
  for (const auto& s : report.samples) report.rho_max = std::max(report.rho_max, s.rho);

  if (smoothness) {
    const auto d = static_cast<double>(candidates.input_dim());
    report.smoothness = smoothness;
    report.expected_power_slope = 0.5 - *smoothness / d;
    report.expected_lambda_slope = 1.0 - 2.0 * *smoothness / d;
  }
  return report;
}

}  // namespace vkoga
