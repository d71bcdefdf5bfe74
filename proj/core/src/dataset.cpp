#include "vkoga/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "vkoga/errors.hpp"

namespace vkoga {

Dataset Dataset::subset(std::span<const Index> rows) const {
  Dataset out;
  out.inputs.resize(static_cast<Index>(rows.size()), input_dim());
  out.outputs.resize(static_cast<Index>(rows.size()), output_dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index src = rows[r];
    if (src < 0 || src >= size()) {
      throw InputError("dataset subset: row index " + std::to_string(src) + " out of range");
    }
    out.inputs.row(static_cast<Index>(r)) = inputs.row(src);
    out.outputs.row(static_cast<Index>(r)) = outputs.row(src);
  }
  return out;
}

Points select_rows(const Points& points, std::span<const Index> rows) {
  Points out(static_cast<Index>(rows.size()), points.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= points.rows()) {
      throw InputError("select_rows: row index " + std::to_string(rows[r]) + " out of range");
    }
    out.row(static_cast<Index>(r)) = points.row(rows[r]);
  }
  return out;
}

void Dataset::validate() const {
  if (inputs.rows() < 1) throw InputError("dataset is empty");
  if (inputs.cols() < 1) throw InputError("dataset has no input columns");
  if (inputs.rows() != outputs.rows()) {
    throw InputError("dataset: input and output row counts differ");
  }
  if (!inputs.allFinite() || !outputs.allFinite()) {
    throw InputError("dataset contains non-finite values");
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

// "x3" -> ('x', 3)
std::optional<std::pair<char, Index>> column_role(std::string_view name) {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) return std::nullopt;
  Index idx = 0;
  const auto* begin = name.data() + 1;
  const auto* end = name.data() + name.size();
  const auto [ptr, ec] = std::from_chars(begin, end, idx);
  if (ec != std::errc{} || ptr != end || idx < 0) return std::nullopt;
  if (name.size() > 2 && name[1] == '0') return std::nullopt;
  return std::make_pair(name[0], idx);
}

}  // namespace

Dataset parse_csv(std::string_view text, bool allow_missing_outputs) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  // Drop blank lines but remember original line numbers for diagnostics.
  std::vector<std::pair<std::size_t, std::string_view>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!trim(lines[i]).empty()) rows.emplace_back(i + 1, lines[i]);
  }
  if (rows.empty()) throw InputError("csv: empty file");

  const auto header = split_row(rows.front().second);
  std::map<Index, std::size_t> x_cols;
  std::map<Index, std::size_t> y_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto role = column_role(header[c]);
    if (!role) {
      throw InputError("csv: line 1: unrecognized column name '" + std::string(header[c]) +
                       "' (expected x<i> or y<j>)");
    }
    auto& cols = role->first == 'x' ? x_cols : y_cols;
    if (!cols.emplace(role->second, c).second) {
      throw InputError("csv: line 1: duplicate column '" + std::string(header[c]) + "'");
    }
  }
  auto check_contiguous = [](const std::map<Index, std::size_t>& cols, char prefix) {
    Index expected = 0;
    for (const auto& [idx, col] : cols) {
      if (idx != expected) {
        throw InputError(std::string("csv: line 1: missing column ") + prefix +
                         std::to_string(expected));
      }
      ++expected;
    }
  };
  check_contiguous(x_cols, 'x');
  check_contiguous(y_cols, 'y');
  if (x_cols.empty()) throw InputError("csv: line 1: missing column x0");
  if (y_cols.empty() && !allow_missing_outputs) {
    throw InputError("csv: line 1: missing column y0");
  }

  const auto d = static_cast<Index>(x_cols.size());
  const auto q = static_cast<Index>(y_cols.size());
  const auto m = static_cast<Index>(rows.size() - 1);
  if (m == 0) throw InputError("csv: no data rows");

  Dataset data;
  data.inputs.resize(m, d);
  data.outputs.resize(m, q);
  for (Index r = 0; r < m; ++r) {
    const auto& [line_no, line] = rows[static_cast<std::size_t>(r) + 1];
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InputError("csv: line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    auto parse_cell = [&](std::size_t col) {
      const auto cell = cells[col];
      double value = 0.0;
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
      if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw InputError("csv: line " + std::to_string(line_no) + ", column '" +
                         std::string(header[col]) + "': invalid or non-finite value '" +
                         std::string(cell) + "'");
      }
      return value;
    };
    for (const auto& [idx, col] : x_cols) data.inputs(r, idx) = parse_cell(col);
    for (const auto& [idx, col] : y_cols) data.outputs(r, idx) = parse_cell(col);
  }
  return data;
}

Dataset load_csv(const std::filesystem::path& path, bool allow_missing_outputs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), allow_missing_outputs);
}

std::string to_csv(const Dataset& data) {
  std::string out;
  for (Index k = 0; k < data.input_dim(); ++k) {
    if (k > 0) out += ',';
    out += 'x' + std::to_string(k);
  }
  for (Index k = 0; k < data.output_dim(); ++k) {
    out += ",y" + std::to_string(k);
  }
  out += '\n';
  for (Index r = 0; r < data.size(); ++r) {
    for (Index k = 0; k < data.input_dim(); ++k) {
      if (k > 0) out += ',';
      out += format_double(data.inputs(r, k));
    }
    for (Index k = 0; k < data.output_dim(); ++k) {
      out += ',';
      out += format_double(data.outputs(r, k));
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << to_csv(data);
}

std::string_view to_string(SynthGenerator generator) {
  switch (generator) {
    case SynthGenerator::FrankeVec:
      return "franke-vec";
    case SynthGenerator::StiffnessLike:
      return "stiffness-like";
    case SynthGenerator::Zero:
      return "zero";
  }
  return "unknown";
}

SynthGenerator parse_generator(std::string_view name) {
  if (name == "franke-vec") return SynthGenerator::FrankeVec;
  if (name == "stiffness-like") return SynthGenerator::StiffnessLike;
  if (name == "zero") return SynthGenerator::Zero;
  throw InputError("unknown generator '" + std::string(name) +
                   "' (expected franke-vec, stiffness-like or zero)");
}

namespace {

// Franke's bivariate test function on [0, 1]^2.
double franke(double u, double v) {
  const double t1 = 0.75 * std::exp(-((9 * u - 2) * (9 * u - 2) + (9 * v - 2) * (9 * v - 2)) / 4);
  const double t2 = 0.75 * std::exp(-((9 * u + 1) * (9 * u + 1)) / 49 - (9 * v + 1) / 10);
  const double t3 = 0.5 * std::exp(-((9 * u - 7) * (9 * u - 7) + (9 * v - 3) * (9 * v - 3)) / 4);
  const double t4 = 0.2 * std::exp(-(9 * u - 4) * (9 * u - 4) - (9 * v - 7) * (9 * v - 7));
  return t1 + t2 + t3 - t4;
}

}  // namespace

Eigen::MatrixXd synth_targets(SynthGenerator generator, const Points& inputs, Index q) {
  if (q < 1) throw InputError("synth: output dimension must be >= 1");
  const Index n = inputs.rows();
  const Index d = inputs.cols();
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, q);
  if (generator == SynthGenerator::Zero) return Y;

  for (Index i = 0; i < n; ++i) {
    const auto x = inputs.row(i);
    for (Index j = 0; j < q; ++j) {
      const Index a = j % d;
      const Index b = (j + 1) % d;
      if (generator == SynthGenerator::FrankeVec) {
        // Franke on a rotating coordinate pair plus an oscillating ridge
        // along the diagonal, so every component depends on every input.
        const double u = 0.5 * (x[a] + 1.0);
        const double v = 0.5 * (x[b] + 1.0);
        const double mean = x.mean();
        Y(i, j) = franke(u, v) +
                  0.25 * std::cos(std::numbers::pi * static_cast<double>(j + 2) * mean);
      } else {
        // Monotone in x_a with steep growth towards the faces x_a = +-1,
        // plus a weaker cubic coupling to x_b.
        const double steep = std::sinh(4.0 * x[a]) / std::sinh(4.0);
        Y(i, j) = static_cast<double>(j + 1) * (steep + 0.2 * x[a]) + 0.1 * std::pow(x[b], 3);
      }
    }
  }
  return Y;
}

Dataset synth(SynthGenerator generator, Index n, Index d, Index q, std::uint64_t seed) {
  if (n < 1) throw InputError("synth: n must be >= 1");
  if (d < 1) throw InputError("synth: d must be >= 1");
  if (q < 1) throw InputError("synth: q must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Dataset data;
  data.inputs.resize(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) data.inputs(i, k) = uniform(rng);
  }
  data.outputs = synth_targets(generator, data.inputs, q);
  return data;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                          std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw InputError("train fraction must lie in (0, 1]");
  }
  const Index m = data.size();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  if (train_fraction == 1.0) return {data, data.subset({})};

  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_train = static_cast<Index>(std::lround(train_fraction * static_cast<double>(m)));
  n_train = std::clamp<Index>(n_train, 1, m);
  std::vector<Index> train(order.begin(), order.begin() + n_train);
  std::vector<Index> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.subset(train), data.subset(test)};
}

}  // namespace vkoga
