#include "cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vkoga/vkoga.hpp"

namespace vkoga::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class ValueType { Text, Real, Integer, RealList };

struct Field {
  const char* key;
  ValueType type;
  const char* help;
};

// Every field a config file may set; each is also a flag --<key> (with
// underscores written as dashes).
constexpr Field kFields[] = {
    {"data", ValueType::Text, "input CSV (columns x0.., y0..)"},
    {"generator", ValueType::Text, "synthetic target: franke-vec | stiffness-like | zero"},
    {"n", ValueType::Integer, "synthetic sample count"},
    {"d", ValueType::Integer, "input dimension"},
    {"q", ValueType::Integer, "output dimension"},
    {"split", ValueType::Real, "train fraction in (0, 1]"},
    {"kernel", ValueType::Text, "gaussian | linmatern"},
    {"eps", ValueType::Real, "kernel shape parameter"},
    {"criterion", ValueType::Text, "f | p | fp"},
    {"gamma", ValueType::Real, "restriction parameter in [0, 1]"},
    {"lambda", ValueType::Real, "regularization parameter"},
    {"tau_f", ValueType::Real, "residual tolerance"},
    {"tau_p", ValueType::Real, "power-function tolerance"},
    {"max_points", ValueType::Integer, "maximum number of centers (0 = all)"},
    {"seed", ValueType::Integer, "random seed"},
    {"k_folds", ValueType::Integer, "number of cross-validation folds"},
    {"eps_grid", ValueType::RealList, "comma-separated eps grid"},
    {"gamma_grid", ValueType::RealList, "comma-separated gamma grid"},
    {"lambda_grid", ValueType::RealList, "comma-separated lambda grid"},
    {"model", ValueType::Text, "model JSON written by fit"},
    {"grid", ValueType::Integer, "grid points per axis"},
    {"n_min", ValueType::Integer, "first sampled center count"},
    {"n_max", ValueType::Integer, "last sampled center count"},
    {"n_step", ValueType::Integer, "sampling step in center count"},
    {"smoothness", ValueType::Real, "Sobolev smoothness of the native space"},
};

const Field* find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

double parse_real(const std::string& key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw InputError("--" + key + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

json convert(const Field& field, const std::string& text) {
  const std::string key = field.key;
  switch (field.type) {
    case ValueType::Text:
      return text;
    case ValueType::Real:
      return parse_real(key, text);
    case ValueType::Integer: {
      std::uint64_t value = 0;
      const auto* end = text.data() + text.size();
      const auto [ptr, ec] = std::from_chars(text.data(), end, value);
      if (text.empty() || ec != std::errc{} || ptr != end) {
        throw InputError("--" + key + ": not a nonnegative integer: '" + text + "'");
      }
      return value;
    }
    case ValueType::RealList: {
      json list = json::array();
      std::size_t start = 0;
      while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        list.push_back(parse_real(key, std::string_view(text).substr(start, comma - start)));
        start = comma + 1;
      }
      return list;
    }
  }
  return nullptr;
}

/// Merged view over defaults, the config file and command-line flags.
class Settings {
 public:
  explicit Settings(json values) : values_(std::move(values)) {}

  [[nodiscard]] bool has(const char* key) const {
    return values_.contains(key) && !values_.at(key).is_null();
  }

  template <typename T>
  [[nodiscard]] T get(const char* key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return values_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InputError(std::string("setting '") + key + "': " + e.what());
    }
  }

  template <typename T>
  [[nodiscard]] T require(const char* key) const {
    if (!has(key)) throw InputError(std::string("missing required setting '") + key + "'");
    return get<T>(key, T{});
  }

 private:
  json values_;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

json load_config(const std::string& path) {
  const json doc = read_json_file(path);
  if (!doc.is_object()) throw InputError("config '" + path + "' must be a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    const Field* field = find_field(key);
    if (field == nullptr) throw InputError("config '" + path + "': unknown field '" + key + "'");
    if (value.is_object()) {
      throw InputError("config '" + path + "': field '" + key + "' must not be nested");
    }
  }
  return doc;
}

/// Collects output files and removes them again unless committed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& path : written_) fs::remove(path, ec);
  }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path path = dir_ / name;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw InputError("failed writing '" + path.string() + "'");
  }

  void write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

Dataset acquire_dataset(const Settings& s) {
  if (s.has("data") && s.has("generator")) {
    throw InputError("give either --data or --generator, not both");
  }
  if (s.has("data")) {
    Dataset data = load_csv(s.require<std::string>("data"));
    data.validate();
    return data;
  }
  if (s.has("generator")) {
    return synth(parse_generator(s.require<std::string>("generator")), s.get<Index>("n", 1238),
                 s.get<Index>("d", 3), s.get<Index>("q", 3), s.get<std::uint64_t>("seed", 0));
  }
  throw InputError("no data: pass --data <csv> or --generator <name>");
}

Kernel kernel_from(const Settings& s, double default_eps = 1.0) {
  return Kernel(parse_kernel_family(s.get<std::string>("kernel", "linmatern")),
                s.get<double>("eps", default_eps));
}

GreedyConfig greedy_from(const Settings& s, SelectionCriterion default_criterion) {
  GreedyConfig config;
  config.criterion = s.has("criterion") ? parse_criterion(s.require<std::string>("criterion"))
                                        : default_criterion;
  config.gamma = s.get<double>("gamma", 0.0);
  config.tau_f = s.get<double>("tau_f", 1e-7);
  config.tau_p = s.get<double>("tau_p", 1e-3);
  config.max_points = s.get<std::size_t>("max_points", 0);
  config.validate();
  return config;
}

int cmd_synth(const Settings& s, OutputSet& outputs, std::ostream& out) {
  const Dataset data =
      synth(parse_generator(s.get<std::string>("generator", "franke-vec")),
            s.get<Index>("n", 1238), s.get<Index>("d", 3), s.get<Index>("q", 3),
            s.get<std::uint64_t>("seed", 0));
  outputs.write("data.csv", to_csv(data));
  out << "wrote " << data.size() << " samples (d=" << data.input_dim()
      << ", q=" << data.output_dim() << ")\n";
  return kSuccess;
}

int cmd_fit(const Settings& s, OutputSet& outputs, std::ostream& out) {
  const Dataset all = acquire_dataset(s);
  const auto [train, test] =
      split_dataset(all, s.get<double>("split", 1.0), s.get<std::uint64_t>("seed", 0));
  const Kernel kernel = kernel_from(s);
  const GreedyConfig config = greedy_from(s, SelectionCriterion::FGreedy);
  const GreedyResult selection = run(kernel, train, config);
  const Surrogate model = fit(kernel, train, selection.selected(), s.get<double>("lambda", 0.0));

  json report{{"n_selected", selection.selected().size()},
              {"stop_reason", std::string(to_string(selection.stop_reason))},
              {"train", metrics_to_json(metrics(model, train))}};
  if (test.size() > 0) report["test"] = metrics_to_json(metrics(model, test));

  outputs.write_json("model.json", model_to_json(model));
  outputs.write("trace.csv", trace_to_csv(selection.trace()));
  outputs.write_json("metrics.json", report);
  out << "selected " << selection.selected().size() << " of " << train.size()
      << " candidates (stop: " << to_string(selection.stop_reason) << ")\n";
  return kSuccess;
}

int cmd_predict(const Settings& s, OutputSet& outputs, std::ostream& out) {
  const Surrogate model = model_from_json(read_json_file(s.require<std::string>("model")));
  Dataset data = load_csv(s.require<std::string>("data"), /*allow_missing_outputs=*/true);
  Dataset predicted{data.inputs, predict(model, data.inputs)};
  outputs.write("predictions.csv", to_csv(predicted));
  if (data.output_dim() > 0) {
    outputs.write_json("metrics.json", metrics_to_json(metrics(model, data)));
  }
  out << "predicted " << data.size() << " points\n";
  return kSuccess;
}

SearchConfig search_config_from(const Settings& s) {
  SearchConfig config;
  config.kernel = parse_kernel_family(s.get<std::string>("kernel", "linmatern"));
  config.k_folds = s.get<std::size_t>("k_folds", config.k_folds);
  config.eps_grid = s.get<std::vector<double>>("eps_grid", config.eps_grid);
  config.gamma_grid = s.get<std::vector<double>>("gamma_grid", config.gamma_grid);
  config.lambda_grid = s.get<std::vector<double>>("lambda_grid", config.lambda_grid);
  if (s.has("criterion")) config.criterion = parse_criterion(s.require<std::string>("criterion"));
  config.seed = s.get<std::uint64_t>("seed", config.seed);
  config.tau_f = s.get<double>("tau_f", config.tau_f);
  config.tau_p = s.get<double>("tau_p", config.tau_p);
  config.max_points = s.get<std::size_t>("max_points", config.max_points);
  config.validate();
  return config;
}

int cmd_cv(const Settings& s, OutputSet& outputs, std::ostream& out) {
  const Dataset all = acquire_dataset(s);
  const auto [train, test] =
      split_dataset(all, s.get<double>("split", 1.0), s.get<std::uint64_t>("seed", 0));
  const SearchConfig config = search_config_from(s);

  const SearchResult base = two_step_search(train, config, SearchMode::Base);
  const SearchResult stabilized =
      two_step_search(train, config, SearchMode::Stabilized, base.best_eps);

  json doc{{"config", search_config_to_json(config)}};
  std::vector<CvRow> table;
  for (const SearchResult* result : {&base, &stabilized}) {
    json entry = search_result_to_json(*result);
    entry["train"] = metrics_to_json(metrics(result->final_model, train));
    if (test.size() > 0) entry["test"] = metrics_to_json(metrics(result->final_model, test));
    doc[std::string(to_string(result->mode))] = entry;
    table.insert(table.end(), result->cv_table.begin(), result->cv_table.end());
    out << to_string(result->mode) << ": eps=" << format_double(result->best_eps)
        << " gamma=" << format_double(result->best_gamma)
        << " lambda=" << format_double(result->best_lambda) << " n=" << result->n_selected_final
        << "\n";
  }
  outputs.write_json("search_result.json", doc);
  outputs.write("cv_table.csv", cv_table_to_csv(table));
  return kSuccess;
}

int cmd_theory(const Settings& s, OutputSet& outputs, std::ostream& out) {
  const Kernel kernel = kernel_from(s);
  const auto d = s.get<Index>("d", 2);
  const Points grid = uniform_grid(s.get<Index>("grid", 40), d);
  const auto generator = parse_generator(s.get<std::string>("generator", "franke-vec"));
  const Dataset candidates{grid, synth_targets(generator, grid, s.get<Index>("q", 1))};

  TheorySchedule schedule;
  schedule.n_min = s.get<std::size_t>("n_min", schedule.n_min);
  schedule.n_max = s.get<std::size_t>("n_max", schedule.n_max);
  schedule.n_step = s.get<std::size_t>("n_step", schedule.n_step);
  std::optional<double> smoothness;
  if (s.has("smoothness")) smoothness = s.require<double>("smoothness");

  const GreedyConfig config = greedy_from(s, SelectionCriterion::PGreedy);
  const TheoryReport report = theory_check(kernel, candidates, config, schedule, smoothness);
  json doc = theory_to_json(report);
  doc["kernel"] = std::string(to_string(kernel.family()));
  doc["eps"] = kernel.epsilon();
  doc["criterion"] = std::string(to_string(config.criterion));
  doc["gamma"] = config.gamma;
  doc["candidates"] = candidates.size();
  outputs.write_json("theory_report.json", doc);
  out << "power slope " << format_double(report.power_slope) << ", lambda_min slope "
      << format_double(report.lambda_slope) << ", max rho " << format_double(report.rho_max)
      << "\n";
  return kSuccess;
}

using Handler = int (*)(const Settings&, OutputSet&, std::ostream&);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stabilized vectorial greedy kernel approximation", "vkoga"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::map<std::string, std::string> raw;
  std::vector<std::pair<CLI::Option*, const Field*>> bound;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"fit", "select centers greedily and fit a surrogate"},
      {"predict", "evaluate a fitted surrogate"},
      {"cv", "two-step cross-validated search, base and stabilized"},
      {"theory", "empirical decay and uniformity checks on a grid"},
      {"synth", "write a synthetic dataset"},
  };
  std::map<std::string, Handler> handlers = {{"fit", cmd_fit},
                                             {"predict", cmd_predict},
                                             {"cv", cmd_cv},
                                             {"theory", cmd_theory},
                                             {"synth", cmd_synth}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "flat JSON config; flags override its fields");
    sub->add_option("--out", out_dir, "output directory");
    for (const auto& field : kFields) {
      std::string key = field.key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      std::string names = "--" + dashed;
      if (dashed != key) names += ",--" + key;
      bound.emplace_back(sub->add_option(names, raw[key], field.help), &field);
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    json merged = config_path.empty() ? json::object() : load_config(config_path);
    for (const auto& [option, field] : bound) {
      if (option->count() > 0) merged[field->key] = convert(*field, raw[field->key]);
    }
    const Settings settings(std::move(merged));
    const CLI::App* chosen = app.get_subcommands().front();
    OutputSet outputs{fs::path(out_dir)};
    const int code = handlers.at(chosen->get_name())(settings, outputs, out);
    outputs.commit();
    return code;
  } catch (const StabilityError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace vkoga::cli
