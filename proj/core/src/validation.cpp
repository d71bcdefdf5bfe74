#include "vkoga/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vkoga/errors.hpp"

namespace vkoga {

Folds kfold_split(Index n, Index k, std::uint64_t seed) {
  if (k < 2) throw InputError("kfold_split: need k >= 2");
  if (n < k) {
    throw InputError("kfold_split: cannot split " + std::to_string(n) + " samples into " +
                     std::to_string(k) + " folds");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  Folds folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < order.size(); ++i) {
    folds[i % folds.size()].push_back(order[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi) || n < 2) {
    throw InputError("log_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  const double log_lo = std::log10(lo);
  const double log_hi = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = std::pow(10.0, log_lo + t * (log_hi - log_lo));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi) || n < 2) {
    throw InputError("linear_grid: need lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = hi;
  return grid;
}

void SearchConfig::validate() const {
  if (k_folds < 2) throw InputError("k_folds must be >= 2");
  auto check_grid = [](const std::vector<double>& grid, const char* name, double min_value,
                       bool strict) {
    if (grid.empty()) throw InputError(std::string(name) + " is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) {
      throw InputError(std::string(name) + " must be sorted ascending");
    }
    for (const double v : grid) {
      if (!std::isfinite(v) || (strict ? !(v > min_value) : !(v >= min_value))) {
        throw InputError(std::string(name) + " contains an out-of-range value");
      }
    }
  };
  check_grid(eps_grid, "eps_grid", 0.0, true);
  check_grid(gamma_grid, "gamma_grid", 0.0, false);
  check_grid(lambda_grid, "lambda_grid", 0.0, false);
  if (gamma_grid.back() > 1.0) throw InputError("gamma_grid values must lie in [0, 1]");
  greedy_config(0.0).validate();
}

GreedyConfig SearchConfig::greedy_config(double gamma) const {
  return GreedyConfig{criterion, gamma, tau_f, tau_p, max_points};
}

namespace {

std::vector<Index> complement(Index n, const std::vector<Index>& fold) {
  std::vector<Index> rest;
  rest.reserve(static_cast<std::size_t>(n) - fold.size());
  std::size_t f = 0;
  for (Index i = 0; i < n; ++i) {
    if (f < fold.size() && fold[f] == i) {
      ++f;
    } else {
      rest.push_back(i);
    }
  }
  return rest;
}

// Greedy selection on each training portion; reused across lambda values.
struct FoldSelection {
  Dataset train;
  Dataset held_out;
  std::vector<Index> selected;
};

std::vector<FoldSelection> select_per_fold(const Kernel& kernel, const GreedyConfig& config,
                                           const Dataset& data, const Folds& folds) {
  std::vector<FoldSelection> out;
  out.reserve(folds.size());
  for (const auto& fold : folds) {
    const auto train_rows = complement(data.size(), fold);
    FoldSelection fs{data.subset(train_rows), data.subset(fold), {}};
    fs.selected = run(kernel, fs.train, config).selected();
    out.push_back(std::move(fs));
  }
  return out;
}

CvScore score_selections(const Kernel& kernel, const std::vector<FoldSelection>& selections,
                         double lambda) {
  CvScore score;
  for (const auto& fs : selections) {
    const Surrogate model = fit(kernel, fs.train, fs.selected, lambda);
    score.fold_rmse.push_back(metrics(model, fs.held_out).e_rmse);
    score.fold_selected.push_back(fs.selected.size());
    score.fold_zero_model.push_back(fs.selected.empty());
  }
  const auto k = static_cast<double>(selections.size());
  score.mean_rmse = std::accumulate(score.fold_rmse.begin(), score.fold_rmse.end(), 0.0) / k;
  score.mean_selected =
      static_cast<double>(std::accumulate(score.fold_selected.begin(), score.fold_selected.end(),
                                          std::size_t{0})) /
      k;
  return score;
}

void validate_folds(Index n, const Folds& folds) {
  if (folds.size() < 2) throw InputError("cross validation needs at least 2 folds");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& fold : folds) {
    if (fold.empty()) throw InputError("cross validation fold is empty");
    if (!std::is_sorted(fold.begin(), fold.end())) {
      throw InputError("cross validation fold indices must be sorted");
    }
    for (const Index i : fold) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
        throw InputError("cross validation folds must be disjoint index sets within range");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
}

void append_rows(std::vector<CvRow>& table, SearchMode mode, const char* param, double value,
                 const CvScore& score) {
  const std::string step = std::string(to_string(mode)) + "-" + param;
  for (std::size_t f = 0; f < score.fold_rmse.size(); ++f) {
    table.push_back(CvRow{step, param, value, f, score.fold_rmse[f], score.fold_selected[f]});
  }
}

// Index of the smallest mean RMSE; strict comparison keeps the first (smallest) grid value on ties.
std::size_t best_cell(const std::vector<CvScore>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].mean_rmse < scores[best].mean_rmse) best = i;
  }
  return best;
}

}  // namespace

CvScore cv_score(const Kernel& kernel, const GreedyConfig& config, double lambda,
                 const Dataset& data, const Folds& folds) {
  data.validate();
  config.validate();
  validate_folds(data.size(), folds);
  return score_selections(kernel, select_per_fold(kernel, config, data, folds), lambda);
}

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::Base ? "base" : "stabilized";
}

SearchResult two_step_search(const Dataset& data, const SearchConfig& config, SearchMode mode,
                             std::optional<double> eps_override) {
  data.validate();
  config.validate();
  if (mode == SearchMode::Stabilized && !eps_override) {
    throw InputError("stabilized search requires the base model's eps");
  }
  const Folds folds = kfold_split(data.size(), static_cast<Index>(config.k_folds), config.seed);
  std::vector<CvRow> table;

  double best_eps = 0.0;
  double best_gamma = 0.0;
  if (mode == SearchMode::Base) {
    std::vector<CvScore> scores;
    for (const double eps : config.eps_grid) {
      const Kernel kernel(config.kernel, eps);
      scores.push_back(cv_score(kernel, config.greedy_config(0.0), 0.0, data, folds));
      append_rows(table, mode, "eps", eps, scores.back());
    }
    best_eps = config.eps_grid[best_cell(scores)];
  } else {
    best_eps = *eps_override;
    const Kernel kernel(config.kernel, best_eps);
    std::vector<CvScore> scores;
    for (const double gamma : config.gamma_grid) {
      scores.push_back(cv_score(kernel, config.greedy_config(gamma), 0.0, data, folds));
      append_rows(table, mode, "gamma", gamma, scores.back());
    }
    best_gamma = config.gamma_grid[best_cell(scores)];
  }

  const Kernel kernel(config.kernel, best_eps);
  const GreedyConfig greedy = config.greedy_config(best_gamma);
  const auto selections = select_per_fold(kernel, greedy, data, folds);
  std::vector<CvScore> lambda_scores;
  for (const double lambda : config.lambda_grid) {
    lambda_scores.push_back(score_selections(kernel, selections, lambda));
    append_rows(table, mode, "lambda", lambda, lambda_scores.back());
  }
  const double best_lambda = config.lambda_grid[best_cell(lambda_scores)];

  const GreedyResult final_run = run(kernel, data, greedy);
  Surrogate final_model = fit(kernel, data, final_run.selected(), best_lambda);
  return SearchResult{mode,
                      best_eps,
                      best_gamma,
                      best_lambda,
                      std::move(table),
                      final_run.selected().size(),
                      final_run.stop_reason,
                      std::move(final_model)};
}

}  // namespace vkoga
