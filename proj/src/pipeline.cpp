#include "qsanfis/pipeline.hpp"

#include "qsanfis/text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsanfis {

namespace {

int parse_int(const std::string& key, const std::string& value) {
  const auto text = trim(value);
  int out = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("config '" + key + "': not an integer: '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("config '" + key + "': not a number: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config '" + key + "': not a boolean: '" + value + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_text(path, buffer.str());
}

std::string sweep_dir_name(double sigma) { return "sigma_" + format_double(sigma); }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "data", "target", "inputs", "missing-token", "sigma", "ra", "rb", "min-separation", "order",
      "epochs", "lr", "ridge", "swap-split", "clustering", "gd-steps", "gd-eta", "out"};
  return keys;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "data") data = value;
  else if (key == "target") target = value;
  else if (key == "inputs") {
    inputs.clear();
    if (!trim(value).empty())
      for (auto& f : split_fields(value)) inputs.push_back(f);
  } else if (key == "missing-token") missing_token = value;
  else if (key == "sigma") sigma = parse_real(key, value);
  else if (key == "ra") r_a = parse_real(key, value);
  else if (key == "rb") r_b = value == "auto" ? std::nullopt : std::optional<double>(parse_real(key, value));
  else if (key == "min-separation") min_separation = parse_real(key, value);
  else if (key == "order") order = parse_rule_order(value);
  else if (key == "epochs") epochs = parse_int(key, value);
  else if (key == "lr") learning_rate = parse_real(key, value);
  else if (key == "ridge") ridge = parse_real(key, value);
  else if (key == "swap-split") swap_split = parse_bool(key, value);
  else if (key == "clustering") {
    if (value == "qsc") clustering = Clustering::QuantumSubtractive;
    else if (value == "gd-qc") clustering = Clustering::GradientDescentQc;
    else throw std::invalid_argument("config 'clustering': expected qsc or gd-qc, got '" + value + "'");
  } else if (key == "gd-steps") gd_steps = parse_int(key, value);
  else if (key == "gd-eta") gd_eta = value == "auto" ? std::nullopt : std::optional<double>(parse_real(key, value));
  else if (key == "out") out = value;
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

void PipelineConfig::validate() const {
  if (data.empty()) throw std::invalid_argument("no data file given (--data)");
  if (target.empty()) throw std::invalid_argument("no target column given (--target)");
  KernelConfig{sigma}.validate();
  subtractive().validate();
  training().validate();
  if (min_separation < 0.0) throw std::invalid_argument("min-separation must be non-negative");
  gradient_descent().validate();
}

SubtractiveConfig PipelineConfig::subtractive() const { return SubtractiveConfig(r_a, r_b); }

TrainConfig PipelineConfig::training() const { return {epochs, learning_rate, ridge, order}; }

GradientDescentConfig PipelineConfig::gradient_descent() const {
  auto gd = GradientDescentConfig::defaults_for(sigma, gd_steps);
  if (gd_eta) gd.eta = *gd_eta;
  return gd;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      base.set(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "data = " << cfg.data.string() << '\n'
      << "target = " << cfg.target << '\n'
      << "inputs = " << join(cfg.inputs) << '\n'
      << "missing-token = " << cfg.missing_token << '\n'
      << "sigma = " << format_double(cfg.sigma) << '\n'
      << "ra = " << format_double(cfg.r_a) << '\n'
      << "rb = " << (cfg.r_b ? format_double(*cfg.r_b) : "auto") << '\n'
      << "min-separation = " << format_double(cfg.min_separation) << '\n'
      << "order = " << to_string(cfg.order) << '\n'
      << "epochs = " << cfg.epochs << '\n'
      << "lr = " << format_double(cfg.learning_rate) << '\n'
      << "ridge = " << format_double(cfg.ridge) << '\n'
      << "swap-split = " << (cfg.swap_split ? "true" : "false") << '\n'
      << "clustering = " << (cfg.clustering == Clustering::QuantumSubtractive ? "qsc" : "gd-qc") << '\n'
      << "gd-steps = " << cfg.gd_steps << '\n'
      << "gd-eta = " << (cfg.gd_eta ? format_double(*cfg.gd_eta) : "auto") << '\n'
      << "out = " << cfg.out.string() << '\n';
  return out.str();
}

PreparedData prepare_data(const PipelineConfig& cfg) {
  const auto raw = load_csv(cfg.data, cfg.target, cfg.missing_token, cfg.inputs);
  auto [normalized, norm] = normalize_minmax(raw);
  auto split = split_even_odd(normalized, cfg.swap_split ? SplitParity::TrainOdd : SplitParity::TrainEven);
  return {std::move(normalized), std::move(norm), std::move(split)};
}

ClusterRun run_clustering(const PipelineConfig& cfg, const Dataset& train) {
  if (train.empty()) throw std::invalid_argument("cannot cluster an empty training split");
  ClusterRun run;
  run.count = select_center_count(train.inputs(), cfg.subtractive());
  run.field = potential_field(train.inputs(), cfg.sigma);
  if (cfg.clustering == Clustering::QuantumSubtractive) {
    run.clusters = potential_sort_cluster(train.inputs(), cfg.sigma, run.count.k, cfg.min_separation, cfg.r_a);
  } else {
    run.clusters = gradient_descent_cluster(train.inputs(), cfg.sigma, run.count.k, cfg.gradient_descent());
    run.clusters.r_a = cfg.r_a;
  }
  return run;
}

ClusterSummary cmd_cluster(const PipelineConfig& cfg) {
  cfg.validate();
  const auto data = prepare_data(cfg);
  // A one-record file has nothing in the default training parity; cluster
  // whatever is there rather than fail.
  const Dataset& train = data.split.train.empty() ? data.normalized : data.split.train;
  const auto run = run_clustering(cfg, train);

  OutputSet outputs(cfg.out);
  write_file(outputs.add("clusters.txt"), [&](std::ostream& o) { write_cluster_model(o, run.clusters); });
  write_file(outputs.add("potential.csv"), [&](std::ostream& o) { write_potential_table(o, run.field); });
  write_file(outputs.add("subtractive_trace.csv"), [&](std::ostream& o) { write_trace(o, run.count); });
  write_text(outputs.add("effective_config.cfg"), format_config(cfg));
  outputs.commit();
  return {run.clusters.k(), data.split.warnings};
}

std::string TrainSummary::line() const {
  return "rules=" + std::to_string(rule_count) + " avg_test_rmse=" + format_double(avg_test_rmse) +
         " final_test_rmse=" + format_double(final_test_rmse) + " final_train_rmse=" + format_double(final_train_rmse);
}

TrainSummary cmd_train(const PipelineConfig& cfg) {
  cfg.validate();
  const auto data = prepare_data(cfg);
  const auto run = run_clustering(cfg, data.split.train);
  auto initial = build_from_clusters(run.clusters, cfg.order);
  initial.input_names = data.normalized.input_names();
  initial.target_name = data.normalized.target_name();
  auto [model, report] = train_hybrid(std::move(initial), data.split.train, data.split.test, cfg.training());

  TrainSummary summary;
  summary.rule_count = report.rule_count;
  summary.avg_test_rmse = report.avg_test_rmse;
  summary.final_test_rmse = report.final_test_rmse();
  summary.final_train_rmse = report.train_rmse.back();
  summary.warnings = data.split.warnings;

  OutputSet outputs(cfg.out);
  write_file(outputs.add("model.txt"), [&](std::ostream& o) { save_model(o, model); });
  write_file(outputs.add("epochs.csv"), [&](std::ostream& o) { write_epoch_csv(o, report); });
  write_file(outputs.add("predictions.csv"), [&](std::ostream& o) { write_prediction_csv(o, report); });
  write_file(outputs.add("clusters.txt"), [&](std::ostream& o) { write_cluster_model(o, run.clusters); });
  write_norm_params(outputs.add("norm_params.csv"), data.norm);
  write_csv(outputs.add("train.csv"), data.split.train);
  write_csv(outputs.add("test.csv"), data.split.test);
  write_text(outputs.add("summary.txt"), summary.line() + '\n');
  write_text(outputs.add("effective_config.cfg"), format_config(cfg));
  outputs.commit();
  return summary;
}

std::size_t cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& csv_path,
                        const std::filesystem::path& out_path, const std::optional<std::filesystem::path>& norm_params,
                        const std::string& missing_token) {
  std::ifstream model_in(model_path);
  if (!model_in) throw std::runtime_error("cannot open model file: " + model_path.string());
  const auto model = load_model(model_in);
  if (model.input_names.empty()) throw std::runtime_error(model_path.string() + ": model carries no input names");

  Dataset data;
  try {
    data = load_inputs_csv(csv_path, model.input_names, missing_token);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("schema mismatch between model and data: ") + e.what());
  }
  std::optional<NormParams> params;
  if (norm_params) {
    params = read_norm_params(*norm_params);
    std::vector<std::string> expected = model.input_names;
    expected.push_back(model.target_name);
    if (params->names != expected)
      throw std::runtime_error("normalization parameters do not match the model's columns");
    Eigen::MatrixXd x = data.inputs();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = params->normalize(static_cast<std::size_t>(j), x(i, j));
    data = Dataset(data.input_names(), data.target_name(), std::move(x), data.targets(), data.record_ids());
  }

  Eigen::VectorXd predicted = predict_batch(model, data);
  if (params)
    for (Eigen::Index i = 0; i < predicted.size(); ++i) predicted(i) = params->denormalize_target(predicted(i));

  const auto parent = out_path.has_parent_path() ? out_path.parent_path() : std::filesystem::path(".");
  OutputSet outputs(parent);
  write_file(outputs.add(out_path.filename().string()), [&](std::ostream& o) {
    o << "index,prediction\n";
    for (Eigen::Index i = 0; i < predicted.size(); ++i) o << i << ',' << format_double(predicted(i)) << '\n';
  });
  outputs.commit();
  return static_cast<std::size_t>(predicted.size());
}

std::vector<SigmaSweepRow> cmd_sweep_sigma(const PipelineConfig& cfg, const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw std::invalid_argument("sigma sweep needs at least one value");
  std::vector<SigmaSweepRow> rows;
  std::vector<std::filesystem::path> created;
  try {
    for (double sigma : sigmas) {
      auto run_cfg = cfg;
      run_cfg.sigma = sigma;
      run_cfg.out = cfg.out / sweep_dir_name(sigma);
      if (!std::filesystem::exists(run_cfg.out)) created.push_back(run_cfg.out);
      const auto summary = cmd_train(run_cfg);
      rows.push_back({sigma, summary.rule_count, summary.avg_test_rmse, summary.final_test_rmse});
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& dir : created) std::filesystem::remove_all(dir, ec);
    throw;
  }
  OutputSet outputs(cfg.out);
  write_file(outputs.add("sweep_sigma.csv"), [&](std::ostream& o) {
    o << "sigma,k,avg_test_rmse,final_test_rmse\n";
    for (const auto& r : rows)
      o << format_double(r.sigma) << ',' << r.k << ',' << format_double(r.avg_test_rmse) << ','
        << format_double(r.final_test_rmse) << '\n';
  });
  outputs.commit();
  return rows;
}

std::vector<RadiusSweepRow> cmd_sweep_ra(const PipelineConfig& cfg, const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("r_a sweep needs at least one value");
  const auto data = prepare_data(cfg);
  std::vector<RadiusSweepRow> rows;
  for (double r_a : radii) {
    const SubtractiveConfig sc(r_a, cfg.r_b);
    rows.push_back({r_a, select_center_count(data.split.train.inputs(), sc).k});
  }
  OutputSet outputs(cfg.out);
  write_file(outputs.add("sweep_ra.csv"), [&](std::ostream& o) {
    o << "ra,k\n";
    for (const auto& r : rows) o << format_double(r.r_a) << ',' << r.k << '\n';
  });
  outputs.commit();
  return rows;
}

}  // namespace qsanfis
