#include "vkoga/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "vkoga/errors.hpp"

namespace vkoga {

Surrogate::Surrogate(Kernel kernel, Points centers, Eigen::MatrixXd coefficients, double lambda)
    : kernel_(kernel),
      centers_(std::move(centers)),
      coefficients_(std::move(coefficients)),
      lambda_(lambda) {
  if (centers_.rows() != coefficients_.rows()) {
    throw InputError("surrogate: center and coefficient counts differ");
  }
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw InputError("surrogate: lambda must be nonnegative and finite");
  }
}

Surrogate fit(const Kernel& kernel, const Dataset& data, std::span<const Index> selected,
              double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("fit: lambda must be nonnegative and finite");
  }
  const Dataset centers = data.subset(selected);
  const Index n = centers.size();
  if (n == 0) {
    return Surrogate(kernel, Points(0, data.input_dim()),
                     Eigen::MatrixXd(0, data.output_dim()), lambda);
  }

  Eigen::MatrixXd A = kernel_matrix(kernel, centers.inputs);
  A.diagonal().array() += lambda;
  const double scale = A.diagonal().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  if (llt.info() != Eigen::Success) {
    const double pivot = Eigen::LDLT<Eigen::MatrixXd>(A).vectorD().minCoeff();
    throw StabilityError("fit: kernel system is not positive definite (smallest pivot " +
                             std::to_string(pivot) + ")",
                         pivot);
  }
  const double pivot = llt.matrixLLT().diagonal().array().square().minCoeff();
  if (pivot <= threshold) {
    throw StabilityError("fit: kernel system is numerically singular (smallest pivot " +
                             std::to_string(pivot) + ")",
                         pivot);
  }
  Eigen::MatrixXd alpha = llt.solve(centers.outputs);
  return Surrogate(kernel, centers.inputs, std::move(alpha), lambda);
}

Eigen::MatrixXd predict(const Surrogate& model, const Points& X) {
  if (model.center_count() == 0) {
    return Eigen::MatrixXd::Zero(X.rows(), model.output_dim());
  }
  if (X.cols() != model.input_dim()) {
    throw InputError("predict: expected " + std::to_string(model.input_dim()) +
                     "-dimensional points, got " + std::to_string(X.cols()));
  }
  return cross_matrix(model.kernel(), X, model.centers()) * model.coefficients();
}

MetricsReport error_metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw InputError("metrics: prediction and target shapes differ");
  }
  const Index m = targets.rows();
  if (m == 0) throw InputError("metrics: empty evaluation set");

  MetricsReport report;
  report.n_points_evaluated = static_cast<std::size_t>(m);
  double sum_sq = 0.0;
  double sum_rel_sq = 0.0;
  double max_rel = 0.0;
  std::size_t n_rel = 0;
  for (Index i = 0; i < m; ++i) {
    const double err_sq = (predictions.row(i) - targets.row(i)).squaredNorm();
    const double target_sq = targets.row(i).squaredNorm();
    sum_sq += err_sq;
    report.e_max = std::max(report.e_max, std::sqrt(err_sq));
    if (target_sq > 0.0) {
      sum_rel_sq += err_sq / target_sq;
      max_rel = std::max(max_rel, std::sqrt(err_sq) / std::sqrt(target_sq));
      ++n_rel;
    } else {
      ++report.n_relative_skipped;
    }
  }
  report.e_rmse = std::sqrt(sum_sq / static_cast<double>(m));
  if (n_rel > 0) {
    report.e_max_rel = max_rel;
    report.e_rmse_rel = std::sqrt(sum_rel_sq / static_cast<double>(n_rel));
  }
  return report;
}

MetricsReport metrics(const Surrogate& model, const Dataset& data) {
  if (data.output_dim() != model.output_dim()) {
    throw InputError("metrics: model has " + std::to_string(model.output_dim()) +
                     " outputs, data has " + std::to_string(data.output_dim()));
  }
  return error_metrics(predict(model, data.inputs), data.outputs);
}

}  // namespace vkoga
