#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "vkoga/geometry.hpp"
#include "vkoga/greedy.hpp"
#include "vkoga/model.hpp"
#include "vkoga/validation.hpp"

namespace vkoga {

/// {"kernel", "eps", "lambda", "input_dim", "output_dim", "n_centers",
///  "centers": row-major, "coefficients": row-major}
[[nodiscard]] nlohmann::json model_to_json(const Surrogate& model);
[[nodiscard]] Surrogate model_from_json(const nlohmann::json& doc);

/// Relative metrics are null when undefined.
[[nodiscard]] nlohmann::json metrics_to_json(const MetricsReport& report);
[[nodiscard]] nlohmann::json geometry_to_json(const GeometryReport& report);
[[nodiscard]] nlohmann::json theory_to_json(const TheoryReport& report);
[[nodiscard]] nlohmann::json search_result_to_json(const SearchResult& result);
[[nodiscard]] nlohmann::json search_config_to_json(const SearchConfig& config);

/// iteration,chosen_index,power_at_chosen,max_residual_norm,rmse
[[nodiscard]] std::string trace_to_csv(std::span<const TraceRecord> trace);
/// step,param_name,param_value,fold,e_rmse,n_selected
[[nodiscard]] std::string cv_table_to_csv(std::span<const CvRow> rows);

}  // namespace vkoga
