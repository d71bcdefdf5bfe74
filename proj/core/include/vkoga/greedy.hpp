#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vkoga/dataset.hpp"
#include "vkoga/kernels.hpp"

namespace vkoga {

enum class SelectionCriterion { FGreedy, PGreedy, FOverPGreedy };

[[nodiscard]] std::string_view to_string(SelectionCriterion criterion);
/// Accepts "f", "p" and "fp".
[[nodiscard]] SelectionCriterion parse_criterion(std::string_view name);

enum class StopReason { AllSelected, ResidualTolerance, PowerTolerance, MaxPoints, Stability };

[[nodiscard]] std::string_view to_string(StopReason reason);

struct GreedyConfig {
  SelectionCriterion criterion = SelectionCriterion::FGreedy;
  /// Restriction parameter. 0 is the unrestricted selection, 1 is P-greedy.
  double gamma = 0.0;
  /// Stop once max_i |residual_i| < tau_f.
  double tau_f = 1e-7;
  /// Stop (without adding it) once the chosen point has power < tau_p.
  double tau_p = 1e-3;
  /// 0 means "all candidates".
  std::size_t max_points = 0;

  void validate() const;
};

struct TraceRecord {
  std::size_t iteration;   // number of selected points after this step
  Index chosen_index;
  double power_at_chosen;  // P_{N-1}(x_N), i.e. the pivot of this step
  double max_residual_norm;
  double rmse;             // residual RMSE over all candidates
  double max_power;        // max_i P_N(x_i) after this step
};

/// Incremental greedy state over a fixed candidate set.
///
/// The Newton basis v_1, ..., v_N of span{k(., x_j) : j selected} is kept as
/// its values on all candidates (column j holds v_{j+1}). It is orthonormal in
/// the native space, so P_N(x)^2 = k(x, x) - sum_j v_j(x)^2 and the residual
/// after projecting onto the selected centers is updated by one rank-one
/// correction per step.
class GreedyState {
 public:
  GreedyState(Kernel kernel, const Dataset& data);

  [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Points& candidates() const noexcept { return inputs_; }
  [[nodiscard]] Index candidate_count() const noexcept { return inputs_.rows(); }
  [[nodiscard]] std::size_t selected_count() const noexcept { return selected_.size(); }
  [[nodiscard]] const std::vector<Index>& selected() const noexcept { return selected_; }
  [[nodiscard]] bool is_selected(Index i) const { return is_selected_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<bool>& selected_mask() const noexcept { return is_selected_; }

  /// P_N(x_i)^2 per candidate, clamped at 0. Exactly 0 at selected candidates.
  [[nodiscard]] const Eigen::VectorXd& power_sq() const noexcept { return power_sq_; }
  /// f(x_i) - (projection of f onto the selected centers)(x_i), M x q.
  [[nodiscard]] const Eigen::MatrixXd& residual() const noexcept { return residual_; }
  /// M x N block; entry (i, j) is the (j+1)-th Newton basis function at candidate i.
  [[nodiscard]] auto newton_values() const { return newton_.leftCols(static_cast<Index>(selected_.size())); }
  [[nodiscard]] const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

  [[nodiscard]] double max_power() const;
  [[nodiscard]] double max_residual_norm() const;
  [[nodiscard]] double residual_rmse() const;

  /// Adds candidate new_index to the selected set. Throws InputError for a bad
  /// or already selected index and StabilityError if its power is not positive.
  void extend(Index new_index);

 private:
  Kernel kernel_;
  Points inputs_;
  std::vector<Index> selected_;
  std::vector<bool> is_selected_;
  Eigen::MatrixXd newton_;  // M x capacity
  Eigen::VectorXd power_sq_;
  Eigen::MatrixXd residual_;
  std::vector<TraceRecord> trace_;
};

/// Per-candidate selection indicator; 0 at selected candidates.
///   FGreedy:      |r_i|
///   PGreedy:      P(x_i)
///   FOverPGreedy: |r_i| / P(x_i), and 0 where P(x_i) = 0
[[nodiscard]] Eigen::VectorXd indicator(const GreedyState& state, SelectionCriterion criterion);

/// Restricted selection on raw per-candidate values: the smallest index i with
/// eligible[i] and power[i] >= gamma * max_j power[j] that maximizes eta[i].
/// Returns -1 if no candidate is eligible.
[[nodiscard]] Index argmax_restricted(const Eigen::Ref<const Eigen::VectorXd>& power,
                                      const Eigen::Ref<const Eigen::VectorXd>& eta,
                                      const std::vector<bool>& eligible, double gamma);

/// Unselected candidates with P(x_i) >= gamma * max_j P(x_j), ascending.
[[nodiscard]] std::vector<Index> restricted_set(const GreedyState& state, double gamma);

/// Smallest index maximizing the configured indicator over the restricted set.
/// For gamma >= 1 the restricted set is the level set of the power maximum and
/// the choice is the P-greedy one, whatever the criterion.
/// Throws std::logic_error if every candidate is already selected.
[[nodiscard]] Index restricted_argmax(const GreedyState& state, const GreedyConfig& config);

struct GreedyResult {
  GreedyState state;
  StopReason stop_reason;

  [[nodiscard]] const std::vector<Index>& selected() const noexcept { return state.selected(); }
  [[nodiscard]] const std::vector<TraceRecord>& trace() const noexcept { return state.trace(); }
};

/// Invoked after every successful extend.
using GreedyObserver = std::function<void(const GreedyState&)>;

/// Runs greedy selection until all candidates are taken, the residual drops
/// below tau_f, the next point's power drops below tau_p, or max_points is hit.
/// Stopping conditions are checked at the top of each iteration.
[[nodiscard]] GreedyResult run(const Kernel& kernel, const Dataset& data,
                               const GreedyConfig& config,
                               const GreedyObserver& observer = {});

/// Power function from the closed form P(x)^2 = k(x, x) - v^T A^{-1} v with a
/// direct dense solve in extended precision. Verification oracle for the
/// incremental update; O(N^3) per call. Throws InputError on duplicate centers.
[[nodiscard]] double oracle_power(const Kernel& kernel, const Points& selected_points, PointRef x);

}  // namespace vkoga
