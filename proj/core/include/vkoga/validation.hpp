#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vkoga/dataset.hpp"
#include "vkoga/greedy.hpp"
#include "vkoga/kernels.hpp"
#include "vkoga/model.hpp"

namespace vkoga {

using Folds = std::vector<std::vector<Index>>;

/// Seeded shuffle of 0..n-1 dealt round-robin into k folds, each sorted
/// ascending. Fold sizes differ by at most one.
[[nodiscard]] Folds kfold_split(Index n, Index k, std::uint64_t seed);

/// n values from lo to hi with a constant ratio; endpoints are exact.
[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t n);
/// n equally spaced values from lo to hi; endpoints are exact.
[[nodiscard]] std::vector<double> linear_grid(double lo, double hi, std::size_t n);

struct SearchConfig {
  KernelFamily kernel = KernelFamily::LinearMatern;
  std::size_t k_folds = 5;
  std::vector<double> eps_grid = log_grid(1e-2, 1e1, 20);
  std::vector<double> gamma_grid = linear_grid(0.0, 1.0, 11);
  std::vector<double> lambda_grid = log_grid(1e-16, 1e3, 20);
  SelectionCriterion criterion = SelectionCriterion::FGreedy;
  std::uint64_t seed = 0;
  double tau_f = 1e-7;
  double tau_p = 1e-3;
  std::size_t max_points = 0;

  void validate() const;
  [[nodiscard]] GreedyConfig greedy_config(double gamma) const;
};

struct CvScore {
  double mean_rmse = 0.0;
  double mean_selected = 0.0;
  std::vector<double> fold_rmse;
  std::vector<std::size_t> fold_selected;
  /// Folds whose selection stopped with no centers and were scored with s = 0.
  std::vector<bool> fold_zero_model;
};

/// For every fold: greedy selection on the remaining folds, fit with lambda,
/// RMSE on the held-out fold.
[[nodiscard]] CvScore cv_score(const Kernel& kernel, const GreedyConfig& config, double lambda,
                               const Dataset& data, const Folds& folds);

enum class SearchMode { Base, Stabilized };

[[nodiscard]] std::string_view to_string(SearchMode mode);

struct CvRow {
  std::string step;        // "<mode>-<param>", e.g. "base-eps"
  std::string param_name;  // "eps", "gamma" or "lambda"
  double param_value;
  std::size_t fold;
  double e_rmse;
  std::size_t n_selected;
};

struct SearchResult {
  SearchMode mode;
  double best_eps;
  double best_gamma;
  double best_lambda;
  std::vector<CvRow> cv_table;
  std::size_t n_selected_final;
  StopReason final_stop_reason;
  Surrogate final_model;
};

/// Two-step cross-validated hyperparameter search.
///
/// Base: CV over eps_grid with gamma = 0, then CV over lambda_grid at the best
/// eps. Stabilized: eps fixed to eps_override, CV over gamma_grid, then over
/// lambda_grid. The first step fits without regularization. "Best" is the
/// minimum mean validation RMSE, ties going to the smaller grid value. The
/// same folds are used for every grid cell. The final model is refit on all
/// of data.
[[nodiscard]] SearchResult two_step_search(const Dataset& data, const SearchConfig& config,
                                           SearchMode mode,
                                           std::optional<double> eps_override = std::nullopt);

}  // namespace vkoga
