#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "vkoga/dataset.hpp"
#include "vkoga/kernels.hpp"

namespace vkoga {

/// Kernel expansion s(x) = sum_i alpha_i k(x, c_i) with vector-valued
/// coefficients alpha_i in R^q. Immutable once built.
class Surrogate {
 public:
  /// coefficients is N x q for N centers; an N = 0 surrogate predicts zeros.
  Surrogate(Kernel kernel, Points centers, Eigen::MatrixXd coefficients, double lambda);

  [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const Points& centers() const noexcept { return centers_; }
  [[nodiscard]] const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] Index center_count() const noexcept { return centers_.rows(); }
  [[nodiscard]] Index input_dim() const noexcept { return centers_.cols(); }
  [[nodiscard]] Index output_dim() const noexcept { return coefficients_.cols(); }

 private:
  Kernel kernel_;
  Points centers_;
  Eigen::MatrixXd coefficients_;
  double lambda_;
};

/// Solves (A + lambda I) alpha = Y on the selected centers with one Cholesky
/// factorization shared by all q output columns. Throws StabilityError (with
/// the smallest pivot) if the system is numerically singular.
[[nodiscard]] Surrogate fit(const Kernel& kernel, const Dataset& data,
                            std::span<const Index> selected, double lambda);

/// M x q matrix of s(x_i).
[[nodiscard]] Eigen::MatrixXd predict(const Surrogate& model, const Points& X);

struct MetricsReport {
  double e_max = 0.0;
  double e_rmse = 0.0;
  /// Unset when every target has zero norm.
  std::optional<double> e_max_rel;
  std::optional<double> e_rmse_rel;
  std::size_t n_points_evaluated = 0;
  /// Targets with |y_i| = 0 left out of the relative metrics.
  std::size_t n_relative_skipped = 0;
};

/// Absolute and relative max / RMSE errors of predictions against targets:
///   e_max      = max_i |s_i - y_i|
///   e_rmse     = sqrt(mean_i |s_i - y_i|^2)
///   e_max_rel  = max_i |s_i - y_i| / |y_i|
///   e_rmse_rel = sqrt(mean_i |s_i - y_i|^2 / |y_i|^2)
[[nodiscard]] MetricsReport error_metrics(const Eigen::MatrixXd& predictions,
                                          const Eigen::MatrixXd& targets);

[[nodiscard]] MetricsReport metrics(const Surrogate& model, const Dataset& data);

}  // namespace vkoga
