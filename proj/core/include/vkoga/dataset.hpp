#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vkoga/kernels.hpp"

namespace vkoga {

/// Paired samples (x_i, y_i) with x_i in R^d and y_i in R^q. The inputs double
/// as the discrete candidate set for greedy selection.
struct Dataset {
  Points inputs;            // M x d
  Eigen::MatrixXd outputs;  // M x q

  [[nodiscard]] Index size() const noexcept { return inputs.rows(); }
  [[nodiscard]] Index input_dim() const noexcept { return inputs.cols(); }
  [[nodiscard]] Index output_dim() const noexcept { return outputs.cols(); }

  /// Rows picked by index, in the given order.
  [[nodiscard]] Dataset subset(std::span<const Index> rows) const;

  /// Throws InputError unless M >= 1, row counts agree and every entry is finite.
  void validate() const;
};

/// Rows picked by index, in the given order.
[[nodiscard]] Points select_rows(const Points& points, std::span<const Index> rows);

/// Shortest decimal string that parses back to exactly the same double.
[[nodiscard]] std::string format_double(double value);

/// Parses CSV text whose header names columns x0..x{d-1} and y0..y{q-1} in
/// any order. No scaling or normalization is applied. With
/// allow_missing_outputs, a header without y-columns yields q = 0.
[[nodiscard]] Dataset parse_csv(std::string_view text, bool allow_missing_outputs = false);
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path,
                               bool allow_missing_outputs = false);

[[nodiscard]] std::string to_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

enum class SynthGenerator { FrankeVec, StiffnessLike, Zero };

[[nodiscard]] std::string_view to_string(SynthGenerator generator);
/// Accepts "franke-vec", "stiffness-like" and "zero".
[[nodiscard]] SynthGenerator parse_generator(std::string_view name);

/// Evaluates a synthetic vectorial target at the given inputs (q outputs).
[[nodiscard]] Eigen::MatrixXd synth_targets(SynthGenerator generator, const Points& inputs,
                                            Index q);

/// n points uniform in [-1, 1]^d with targets from the generator. Deterministic in seed.
[[nodiscard]] Dataset synth(SynthGenerator generator, Index n, Index d, Index q,
                            std::uint64_t seed);

/// Seeded shuffle, then the first round(train_fraction * M) rows train and the
/// rest test. train_fraction in (0, 1]; the test set is empty for 1.
[[nodiscard]] std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                                        double train_fraction,
                                                        std::uint64_t seed);

}  // namespace vkoga
