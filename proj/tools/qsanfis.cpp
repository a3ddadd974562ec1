// qsanfis: quantum-subtractive clustering + TSK neuro-fuzzy regression.
//
//   qsanfis train --config configs/mpg.cfg --out runs/mpg
//   qsanfis cluster --data d.csv --target y --ra 0.3
//   qsanfis predict --model runs/mpg/model.txt --csv runs/mpg/test.csv --out p.csv
//   qsanfis sweep-sigma --config configs/mpg.cfg --sigmas 0.1,0.15,0.2
//   qsanfis sweep-ra --config configs/mpg.cfg --radii 0.24,0.25,0.26

#include "qsanfis/pipeline.hpp"
#include "qsanfis/text_io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

struct PipelineArgs {
  std::string config_file;
  std::map<std::string, std::string> values;
  CLI::App* app = nullptr;
  bool swap_split = false;
};

void add_pipeline_options(CLI::App* sub, PipelineArgs& args) {
  args.app = sub;
  sub->add_option("--config", args.config_file, "key = value file; flags override its entries");
  for (const auto& key : qsanfis::config_keys()) {
    if (key == "swap-split") {
      sub->add_flag("--swap-split", args.swap_split, "train on odd record positions instead of even");
      continue;
    }
    sub->add_option("--" + key, args.values[key]);
  }
}

qsanfis::PipelineConfig resolve(const PipelineArgs& args) {
  qsanfis::PipelineConfig cfg;
  if (!args.config_file.empty()) cfg = qsanfis::load_config(args.config_file, cfg);
  for (const auto& [key, value] : args.values)
    if (args.app->count("--" + key) > 0) cfg.set(key, value);
  if (args.app->count("--swap-split") > 0) cfg.swap_split = args.swap_split;
  return cfg;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& field : qsanfis::split_fields(text)) values.push_back(qsanfis::parse_double(field));
  return values;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-subtractive clustering ANFIS"};
  app.require_subcommand(1);

  PipelineArgs cluster_args, train_args, sigma_args, ra_args;
  auto* cluster = app.add_subcommand("cluster", "select cluster centres and write the potential table");
  add_pipeline_options(cluster, cluster_args);
  auto* train = app.add_subcommand("train", "cluster, build and train the network, write all artifacts");
  add_pipeline_options(train, train_args);

  auto* sweep_sigma = app.add_subcommand("sweep-sigma", "train once per kernel width");
  add_pipeline_options(sweep_sigma, sigma_args);
  std::string sigmas = "0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5";
  sweep_sigma->add_option("--sigmas", sigmas, "comma-separated kernel widths")->capture_default_str();

  auto* sweep_ra = app.add_subcommand("sweep-ra", "subtractive cluster count per neighbourhood radius");
  add_pipeline_options(sweep_ra, ra_args);
  std::string radii = "0.2,0.22,0.24,0.25,0.26,0.27,0.28,0.3,0.35,0.4,0.5";
  sweep_ra->add_option("--radii", radii, "comma-separated radii")->capture_default_str();

  auto* predict = app.add_subcommand("predict", "apply a saved model to a CSV");
  std::string model_path, csv_path, out_path = "predictions.csv", norm_path, missing = "?";
  predict->add_option("--model", model_path, "model file written by train")->required();
  predict->add_option("--csv", csv_path, "input CSV with the model's input columns")->required();
  predict->add_option("--out", out_path, "output CSV")->capture_default_str();
  predict->add_option("--norm-params", norm_path, "norm_params.csv: input is raw, output in raw target units");
  predict->add_option("--missing-token", missing)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) {
      const auto summary = qsanfis::cmd_cluster(resolve(cluster_args));
      print_warnings(summary.warnings);
      std::cout << "clusters=" << summary.k << '\n';
    } else if (*train) {
      const auto summary = qsanfis::cmd_train(resolve(train_args));
      print_warnings(summary.warnings);
      std::cout << summary.line() << '\n';
    } else if (*sweep_sigma) {
      std::cout << "sigma,k,avg_test_rmse,final_test_rmse\n";
      for (const auto& row : qsanfis::cmd_sweep_sigma(resolve(sigma_args), parse_list(sigmas)))
        std::cout << qsanfis::format_double(row.sigma) << ',' << row.k << ','
                  << qsanfis::format_double(row.avg_test_rmse) << ',' << qsanfis::format_double(row.final_test_rmse)
                  << '\n';
    } else if (*sweep_ra) {
      std::cout << "ra,k\n";
      for (const auto& row : qsanfis::cmd_sweep_ra(resolve(ra_args), parse_list(radii)))
        std::cout << qsanfis::format_double(row.r_a) << ',' << row.k << '\n';
    } else if (*predict) {
      std::optional<std::filesystem::path> norm;
      if (!norm_path.empty()) norm = norm_path;
      const auto n = qsanfis::cmd_predict(model_path, csv_path, out_path, norm, missing);
      std::cout << "predictions=" << n << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
