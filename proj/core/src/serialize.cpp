#include "vkoga/serialize.hpp"

#include <cmath>

#include "vkoga/errors.hpp"

namespace vkoga {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

// NaN and infinities have no JSON spelling; they are written as null.
json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

template <typename Matrix>
json row_major(const Matrix& m) {
  json flat = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  }
  return flat;
}

template <typename T>
T require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("model json: missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("model json: field '") + key + "': " + e.what());
  }
}

}  // namespace

json model_to_json(const Surrogate& model) {
  return json{{"kernel", std::string(to_string(model.kernel().family()))},
              {"eps", model.kernel().epsilon()},
              {"lambda", model.lambda()},
              {"input_dim", model.input_dim()},
              {"output_dim", model.output_dim()},
              {"n_centers", model.center_count()},
              {"centers", row_major(model.centers())},
              {"coefficients", row_major(model.coefficients())}};
}

Surrogate model_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("model json: expected an object");
  const Kernel kernel(parse_kernel_family(require<std::string>(doc, "kernel")),
                      require<double>(doc, "eps"));
  const auto lambda = require<double>(doc, "lambda");
  const auto d = require<Index>(doc, "input_dim");
  const auto q = require<Index>(doc, "output_dim");
  const auto n = require<Index>(doc, "n_centers");
  const auto centers = require<std::vector<double>>(doc, "centers");
  const auto coefficients = require<std::vector<double>>(doc, "coefficients");
  if (d < 1 || q < 0 || n < 0 || static_cast<Index>(centers.size()) != n * d ||
      static_cast<Index>(coefficients.size()) != n * q) {
    throw InputError("model json: array sizes do not match the stated dimensions");
  }
  Points c(n, d);
  Eigen::MatrixXd alpha(n, q);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) c(i, k) = centers[static_cast<std::size_t>(i * d + k)];
    for (Index k = 0; k < q; ++k) alpha(i, k) = coefficients[static_cast<std::size_t>(i * q + k)];
  }
  return Surrogate(kernel, std::move(c), std::move(alpha), lambda);
}

json metrics_to_json(const MetricsReport& report) {
  return json{{"e_max", report.e_max},
              {"e_rmse", report.e_rmse},
              {"e_max_rel", optional_number(report.e_max_rel)},
              {"e_rmse_rel", optional_number(report.e_rmse_rel)},
              {"n_points_evaluated", report.n_points_evaluated},
              {"n_relative_skipped", report.n_relative_skipped}};
}

json geometry_to_json(const GeometryReport& report) {
  return json{{"h", number(report.h)},
              {"q", number(report.q)},
              {"rho", number(report.rho)},
              {"lambda_min", number(report.lambda_min)}};
}

json theory_to_json(const TheoryReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back(json{{"n", s.n},
                           {"power_max", number(s.power_max)},
                           {"lambda_min", number(s.lambda_min)},
                           {"h", number(s.fill)},
                           {"q", number(s.separation)},
                           {"rho", number(s.rho)}});
  }
  return json{{"samples", samples},
              {"stop_reason", std::string(to_string(report.stop_reason))},
              {"power_slope", number(report.power_slope)},
              {"lambda_slope", number(report.lambda_slope)},
              {"rho_max", number(report.rho_max)},
              {"smoothness", optional_number(report.smoothness)},
              {"expected_power_slope", optional_number(report.expected_power_slope)},
              {"expected_lambda_slope", optional_number(report.expected_lambda_slope)}};
}

json search_result_to_json(const SearchResult& result) {
  return json{{"mode", std::string(to_string(result.mode))},
              {"best_eps", result.best_eps},
              {"best_gamma", result.best_gamma},
              {"best_lambda", result.best_lambda},
              {"n_selected", result.n_selected_final},
              {"stop_reason", std::string(to_string(result.final_stop_reason))},
              {"model", model_to_json(result.final_model)}};
}

json search_config_to_json(const SearchConfig& config) {
  return json{{"kernel", std::string(to_string(config.kernel))},
              {"k_folds", config.k_folds},
              {"eps_grid", config.eps_grid},
              {"gamma_grid", config.gamma_grid},
              {"lambda_grid", config.lambda_grid},
              {"criterion", std::string(to_string(config.criterion))},
              {"seed", config.seed},
              {"tau_f", config.tau_f},
              {"tau_p", config.tau_p},
              {"max_points", config.max_points}};
}

std::string trace_to_csv(std::span<const TraceRecord> trace) {
  std::string out = "iteration,chosen_index,power_at_chosen,max_residual_norm,rmse\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iteration) + ',' + std::to_string(r.chosen_index) + ',' +
           format_double(r.power_at_chosen) + ',' + format_double(r.max_residual_norm) + ',' +
           format_double(r.rmse) + '\n';
  }
  return out;
}

std::string cv_table_to_csv(std::span<const CvRow> rows) {
  std::string out = "step,param_name,param_value,fold,e_rmse,n_selected\n";
  for (const auto& r : rows) {
    out += r.step + ',' + r.param_name + ',' + format_double(r.param_value) + ',' +
           std::to_string(r.fold) + ',' + format_double(r.e_rmse) + ',' +
           std::to_string(r.n_selected) + '\n';
  }
  return out;
}

}  // namespace vkoga
