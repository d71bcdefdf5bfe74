#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "vkoga/errors.hpp"
#include "vkoga/greedy.hpp"
#include "vkoga/serialize.hpp"

namespace vkoga {
namespace {

using nlohmann::json;

Surrogate trained_model(std::uint64_t seed) {
  const Dataset data = synth(SynthGenerator::FrankeVec, 150, 3, 3, seed);
  const Kernel k(KernelFamily::LinearMatern, 1.3);
  const auto selected =
      run(k, data, GreedyConfig{SelectionCriterion::FOverPGreedy, 0.2, 1e-7, 1e-3, 50}).selected();
  return fit(k, data, selected, 1e-9);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(ModelJson, RoundTripPredictsBitIdentically) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Surrogate model = trained_model(seed);
    // Through text, as written to disk.
    const Surrogate back = model_from_json(json::parse(model_to_json(model).dump()));
    EXPECT_EQ(back.kernel().family(), model.kernel().family());
    EXPECT_EQ(back.kernel().epsilon(), model.kernel().epsilon());
    EXPECT_EQ(back.lambda(), model.lambda());
    EXPECT_EQ(back.centers(), model.centers());
    EXPECT_EQ(back.coefficients(), model.coefficients());
    std::mt19937_64 rng(seed);
    const Points X = testing::random_points(rng, 40, 3);
    EXPECT_EQ(predict(back, X), predict(model, X));
  }
}

TEST(ModelJson, Fields) {
  const Surrogate model(Kernel(KernelFamily::Gaussian, 2.0), testing::line({0.0, 1.0}),
                        (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished(), 0.5);
  const json doc = model_to_json(model);
  EXPECT_EQ(doc["kernel"], "gaussian");
  EXPECT_EQ(doc["eps"], 2.0);
  EXPECT_EQ(doc["lambda"], 0.5);
  EXPECT_EQ(doc["input_dim"], 1);
  EXPECT_EQ(doc["output_dim"], 2);
  EXPECT_EQ(doc["n_centers"], 2);
  EXPECT_EQ(doc["centers"], json::parse("[0.0, 1.0]"));
  EXPECT_EQ(doc["coefficients"], json::parse("[1.0, 2.0, 3.0, 4.0]"));
}

TEST(ModelJson, EmptyModelRoundTrips) {
  const Surrogate model(Kernel(KernelFamily::LinearMatern, 1.0), Points(0, 2),
                        Eigen::MatrixXd(0, 3), 0.0);
  const Surrogate back = model_from_json(model_to_json(model));
  EXPECT_EQ(back.center_count(), 0);
  EXPECT_EQ(back.input_dim(), 2);
  EXPECT_EQ(back.output_dim(), 3);
}

TEST(ModelJson, MalformedDocumentsAreInputErrors) {
  json doc = model_to_json(trained_model(1));
  json missing = doc;
  missing.erase("coefficients");
  EXPECT_THROW((void)model_from_json(missing), InputError);
  json wrong_size = doc;
  wrong_size["n_centers"] = doc["n_centers"].get<int>() + 1;
  EXPECT_THROW((void)model_from_json(wrong_size), InputError);
  json bad_kernel = doc;
  bad_kernel["kernel"] = "cubic";
  EXPECT_THROW((void)model_from_json(bad_kernel), InputError);
  json bad_type = doc;
  bad_type["eps"] = "one";
  EXPECT_THROW((void)model_from_json(bad_type), InputError);
  EXPECT_THROW((void)model_from_json(json::array()), InputError);
}

TEST(MetricsJson, NullRelativeMetrics) {
  const json doc =
      metrics_to_json(error_metrics(Eigen::MatrixXd::Ones(2, 1), Eigen::MatrixXd::Zero(2, 1)));
  EXPECT_EQ(doc["e_max"], 1.0);
  EXPECT_EQ(doc["e_rmse"], 1.0);
  EXPECT_TRUE(doc["e_max_rel"].is_null());
  EXPECT_TRUE(doc["e_rmse_rel"].is_null());
  EXPECT_EQ(doc["n_relative_skipped"], 2);
  EXPECT_EQ(doc["n_points_evaluated"], 2);
}

TEST(TraceCsv, HeaderAndRows) {
  const Dataset data = synth(SynthGenerator::FrankeVec, 30, 2, 1, 0);
  const GreedyResult r = run(Kernel(KernelFamily::Gaussian, 1.0), data,
                             GreedyConfig{SelectionCriterion::PGreedy, 0.0, 1e-7, 1e-3, 5});
  const auto rows = lines(trace_to_csv(r.trace()));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "iteration,chosen_index,power_at_chosen,max_residual_norm,rmse");
  EXPECT_EQ(rows[1].rfind("1,", 0), 0u);
}

TEST(CvTableCsv, HeaderAndRows) {
  const std::vector<CvRow> table{{"base-eps", "eps", 0.5, 0, 0.25, 7},
                                 {"base-lambda", "lambda", 1e-16, 4, 0.125, 3}};
  const auto rows = lines(cv_table_to_csv(table));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "step,param_name,param_value,fold,e_rmse,n_selected");
  EXPECT_EQ(rows[1], "base-eps,eps,0.5,0,0.25,7");
  EXPECT_EQ(rows[2], "base-lambda,lambda,1e-16,4,0.125,3");
}

TEST(TheoryJson, NanSlopesAreNull) {
  TheoryReport r;
  r.power_slope = std::numeric_limits<double>::quiet_NaN();
  r.lambda_slope = -1.5;
  const json doc = theory_to_json(r);
  EXPECT_TRUE(doc["power_slope"].is_null());
  EXPECT_EQ(doc["lambda_slope"], -1.5);
  EXPECT_TRUE(doc["smoothness"].is_null());
}

}  // namespace
}  // namespace vkoga
