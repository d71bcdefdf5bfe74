#include "vkoga/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "vkoga/errors.hpp"

namespace vkoga {

std::string_view to_string(SelectionCriterion criterion) {
  switch (criterion) {
    case SelectionCriterion::FGreedy:
      return "f";
    case SelectionCriterion::PGreedy:
      return "p";
    case SelectionCriterion::FOverPGreedy:
      return "fp";
  }
  return "unknown";
}

SelectionCriterion parse_criterion(std::string_view name) {
  if (name == "f") return SelectionCriterion::FGreedy;
  if (name == "p") return SelectionCriterion::PGreedy;
  if (name == "fp") return SelectionCriterion::FOverPGreedy;
  throw InputError("unknown selection criterion '" + std::string(name) +
                   "' (expected f, p or fp)");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::AllSelected:
      return "all_selected";
    case StopReason::ResidualTolerance:
      return "residual_tolerance";
    case StopReason::PowerTolerance:
      return "power_tolerance";
    case StopReason::MaxPoints:
      return "max_points";
    case StopReason::Stability:
      return "stability";
  }
  return "unknown";
}

void GreedyConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InputError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  if (!(tau_f > 0.0) || !std::isfinite(tau_f)) throw InputError("tau_f must be positive");
  if (!(tau_p > 0.0) || !std::isfinite(tau_p)) throw InputError("tau_p must be positive");
}

GreedyState::GreedyState(Kernel kernel, const Dataset& data)
    : kernel_(kernel), inputs_(data.inputs) {
  data.validate();
  const Index m = inputs_.rows();
  is_selected_.assign(static_cast<std::size_t>(m), false);
  newton_.resize(m, std::min<Index>(m, 32));
  power_sq_.resize(m);
  for (Index i = 0; i < m; ++i) power_sq_[i] = kernel_(inputs_.row(i), inputs_.row(i));
  residual_ = data.outputs;
}

double GreedyState::max_power() const { return std::sqrt(power_sq_.maxCoeff()); }

double GreedyState::max_residual_norm() const {
  if (residual_.cols() == 0) return 0.0;
  return residual_.rowwise().norm().maxCoeff();
}

double GreedyState::residual_rmse() const {
  return std::sqrt(residual_.squaredNorm() / static_cast<double>(residual_.rows()));
}

void GreedyState::extend(Index new_index) {
  const Index m = candidate_count();
  if (new_index < 0 || new_index >= m) {
    throw InputError("extend: candidate index " + std::to_string(new_index) + " out of range");
  }
  if (is_selected(new_index)) {
    throw InputError("extend: candidate " + std::to_string(new_index) + " already selected");
  }
  const double pivot_sq = power_sq_[new_index];
  if (!(pivot_sq > 0.0)) {
    throw StabilityError("extend: candidate " + std::to_string(new_index) +
                             " is numerically dependent on the selected centers",
                         pivot_sq);
  }
  const double pivot = std::sqrt(pivot_sq);
  const auto n = static_cast<Index>(selected_.size());

  if (n == newton_.cols()) {
    newton_.conservativeResize(Eigen::NoChange, std::min<Index>(m, std::max<Index>(1, 2 * n)));
  }
  auto column = newton_.col(n);
  kernel_column(kernel_, inputs_, inputs_.row(new_index), column);
  if (n > 0) {
    column.noalias() -= newton_.leftCols(n) * newton_.row(new_index).head(n).transpose();
  }
  column /= pivot;

  power_sq_ = (power_sq_.array() - column.array().square()).max(0.0);
  power_sq_[new_index] = 0.0;

  const Eigen::RowVectorXd coefficient = residual_.row(new_index) / pivot;
  residual_.noalias() -= column * coefficient;

  selected_.push_back(new_index);
  is_selected_[static_cast<std::size_t>(new_index)] = true;
  trace_.push_back(TraceRecord{selected_.size(), new_index, pivot, max_residual_norm(),
                               residual_rmse(), max_power()});
}

Eigen::VectorXd indicator(const GreedyState& state, SelectionCriterion criterion) {
  const Index m = state.candidate_count();
  Eigen::VectorXd eta(m);
  const auto& power_sq = state.power_sq();
  const auto& residual = state.residual();
  for (Index i = 0; i < m; ++i) {
    if (state.is_selected(i)) {
      eta[i] = 0.0;
      continue;
    }
    switch (criterion) {
      case SelectionCriterion::FGreedy:
        eta[i] = residual.row(i).norm();
        break;
      case SelectionCriterion::PGreedy:
        eta[i] = std::sqrt(power_sq[i]);
        break;
      case SelectionCriterion::FOverPGreedy:
        eta[i] = power_sq[i] > 0.0 ? residual.row(i).norm() / std::sqrt(power_sq[i]) : 0.0;
        break;
    }
  }
  return eta;
}

Index argmax_restricted(const Eigen::Ref<const Eigen::VectorXd>& power,
                        const Eigen::Ref<const Eigen::VectorXd>& eta,
                        const std::vector<bool>& eligible, double gamma) {
  const double threshold = gamma * power.maxCoeff();
  Index best = -1;
  for (Index i = 0; i < power.size(); ++i) {
    if (!eligible[static_cast<std::size_t>(i)] || power[i] < threshold) continue;
    if (best < 0 || eta[i] > eta[best]) best = i;
  }
  return best;
}

std::vector<Index> restricted_set(const GreedyState& state, double gamma) {
  const Eigen::VectorXd power = state.power_sq().cwiseSqrt();
  const double threshold = gamma * power.maxCoeff();
  std::vector<Index> members;
  for (Index i = 0; i < state.candidate_count(); ++i) {
    if (!state.is_selected(i) && power[i] >= threshold) members.push_back(i);
  }
  return members;
}

Index restricted_argmax(const GreedyState& state, const GreedyConfig& config) {
  // On the level set of the power maximum every criterion reduces to P-greedy.
  const auto criterion =
      config.gamma >= 1.0 ? SelectionCriterion::PGreedy : config.criterion;
  std::vector<bool> eligible(state.selected_mask().size());
  std::transform(state.selected_mask().begin(), state.selected_mask().end(), eligible.begin(),
                 [](bool selected) { return !selected; });
  const Index best = argmax_restricted(state.power_sq().cwiseSqrt(),
                                       indicator(state, criterion), eligible, config.gamma);
  if (best < 0) {
    throw std::logic_error("restricted_argmax: every candidate is already selected");
  }
  return best;
}

GreedyResult run(const Kernel& kernel, const Dataset& data, const GreedyConfig& config,
                 const GreedyObserver& observer) {
  config.validate();
  GreedyResult result{GreedyState(kernel, data), StopReason::AllSelected};
  auto& state = result.state;
  const auto m = static_cast<std::size_t>(state.candidate_count());
  const std::size_t limit = config.max_points == 0 ? m : std::min(config.max_points, m);

  while (true) {
    if (state.selected_count() == m) {
      result.stop_reason = StopReason::AllSelected;
      break;
    }
    if (state.max_residual_norm() < config.tau_f) {
      result.stop_reason = StopReason::ResidualTolerance;
      break;
    }
    if (state.selected_count() >= limit) {
      result.stop_reason = StopReason::MaxPoints;
      break;
    }
    const Index next = restricted_argmax(state, config);
    if (std::sqrt(state.power_sq()[next]) < config.tau_p) {
      result.stop_reason = StopReason::PowerTolerance;
      break;
    }
    try {
      state.extend(next);
    } catch (const StabilityError&) {
      result.stop_reason = StopReason::Stability;
      break;
    }
    if (observer) observer(state);
  }
  return result;
}

double oracle_power(const Kernel& kernel, const Points& selected_points, PointRef x) {
  using Real = long double;
  using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  const Index n = selected_points.rows();
  const Real diag = static_cast<Real>(eval(kernel, x, x));
  if (n == 0) return static_cast<double>(std::sqrt(diag));
  if (selected_points.cols() != x.size()) {
    throw InputError("oracle_power: dimension mismatch");
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (selected_points.row(i) == selected_points.row(j)) {
        throw InputError("oracle_power: duplicate centers make the kernel matrix singular");
      }
    }
    if (selected_points.row(i) == x) return 0.0;
  }

  MatrixR A(n, n);
  VectorR v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = static_cast<Real>(kernel(x, selected_points.row(i)));
    for (Index j = 0; j < n; ++j) {
      A(i, j) = static_cast<Real>(kernel(selected_points.row(i), selected_points.row(j)));
    }
  }
  Eigen::LLT<MatrixR> llt(A);
  if (llt.info() != Eigen::Success) {
    throw InputError("oracle_power: kernel matrix is numerically singular");
  }
  const VectorR w = llt.matrixL().solve(v);
  const Real p_sq = diag - w.squaredNorm();
  return static_cast<double>(std::sqrt(std::max<Real>(0, p_sq)));
}

}  // namespace vkoga
