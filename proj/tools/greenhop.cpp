// greenhop: train, evaluate and inspect single-hop point-cloud classifiers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "greenhop/greenhop.hpp"

namespace gh = greenhop;

namespace {

using ReportLines = std::vector<std::pair<std::string, std::string>>;

void write_report(const std::string& path, const ReportLines& lines) {
  std::ofstream out(path);
  if (!out) throw gh::DataError("cannot write report '" + path + "'");
  for (const auto& [key, value] : lines) out << key << "\t" << value << "\n";
  if (!out) throw gh::DataError("failed writing report '" + path + "'");
}

gh::PipelineConfig resolve_config(const std::string& config_path,
                                  const std::vector<std::string>& overrides) {
  gh::PipelineConfig config;
  if (!config_path.empty()) config = gh::parse_config_file(config_path);
  for (const std::string& spec : overrides) gh::apply_override(config, spec);
  config.validate();
  return config;
}

ReportLines config_report_lines(const gh::PipelineConfig& config) {
  ReportLines lines;
  for (const std::string& key : gh::config_keys())
    lines.emplace_back("config." + key, gh::get_config_value(config, key));
  return lines;
}

std::string join_class_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out;
}

ReportLines eval_report_lines(const gh::PipelineModel& model, const gh::EvalReport& report,
                              std::size_t n_samples) {
  ReportLines lines;
  lines.emplace_back("samples", std::to_string(n_samples));
  lines.emplace_back("classes", std::to_string(model.n_classes()));
  lines.emplace_back("overall_accuracy", gh::format_double(report.overall_accuracy));
  lines.emplace_back("class_avg_accuracy", gh::format_double(report.class_avg_accuracy));
  for (int c = 0; c < model.n_classes(); ++c)
    lines.emplace_back("per_class_accuracy." + model.class_names[static_cast<std::size_t>(c)],
                       gh::format_double(report.per_class_accuracy[static_cast<std::size_t>(c)]));
  for (int t = 0; t < model.n_classes(); ++t) {
    std::string row;
    for (int p = 0; p < model.n_classes(); ++p)
      row += (p ? "," : "") + std::to_string(report.confusion(t, p));
    lines.emplace_back("confusion." + model.class_names[static_cast<std::size_t>(t)], row);
  }
  return lines;
}

void print_eval_summary(const gh::PipelineModel& model, const gh::EvalReport& report,
                        std::size_t n_samples) {
  std::printf("samples            %zu\n", n_samples);
  std::printf("overall accuracy   %.4f\n", report.overall_accuracy);
  std::printf("class-avg accuracy %.4f\n", report.class_avg_accuracy);
  for (int c = 0; c < model.n_classes(); ++c) {
    const double acc = report.per_class_accuracy[static_cast<std::size_t>(c)];
    if (std::isnan(acc))
      std::printf("  %-24s n/a (no samples)\n",
                  model.class_names[static_cast<std::size_t>(c)].c_str());
    else
      std::printf("  %-24s %.4f\n", model.class_names[static_cast<std::size_t>(c)].c_str(),
                  acc);
  }
}

int run_train(const std::string& data_path, const std::string& model_path,
              const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& report_path) {
  const gh::PipelineConfig config = resolve_config(config_path, overrides);
  gh::DatasetManifest data = gh::load_manifest(data_path);
  data.split = "train";

  const auto start = std::chrono::steady_clock::now();
  const gh::PipelineModel model = gh::train_pipeline(data, config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  gh::save_model(model, model_path);

  const gh::ParameterCounts params = gh::count_parameters(model);
  std::printf("trained %d-class model on %zu samples\n", model.n_classes(), data.size());
  std::printf("feature dim %zu, selected %zu\n", model.full_feature_dim(),
              model.selected.size());
  std::printf("parameters: filter %llu, classifier %llu, total %llu\n",
              static_cast<unsigned long long>(params.filter),
              static_cast<unsigned long long>(params.classifier),
              static_cast<unsigned long long>(params.total));
  std::printf("train time %.1f s\n", seconds);
  std::printf("saved model to %s\n", model_path.c_str());

  if (!report_path.empty()) {
    ReportLines lines;
    lines.emplace_back("samples", std::to_string(data.size()));
    lines.emplace_back("classes", std::to_string(model.n_classes()));
    lines.emplace_back("class_names", join_class_names(model.class_names));
    lines.emplace_back("feature_dim_full", std::to_string(model.full_feature_dim()));
    lines.emplace_back("feature_dim_selected", std::to_string(model.selected.size()));
    lines.emplace_back("params_filter", std::to_string(params.filter));
    lines.emplace_back("params_classifier", std::to_string(params.classifier));
    lines.emplace_back("params_total", std::to_string(params.total));
    for (auto& kv : config_report_lines(model.config)) lines.push_back(std::move(kv));
    write_report(report_path, lines);
  }
  return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path,
             const std::string& report_path) {
  const gh::PipelineModel model = gh::load_model(model_path);
  gh::DatasetManifest data = gh::load_manifest(data_path);
  data.split = "test";
  const gh::EvalReport report = gh::evaluate(model, data);
  print_eval_summary(model, report, data.size());
  if (!report_path.empty())
    write_report(report_path, eval_report_lines(model, report, data.size()));
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& paths_path, const std::string& output_path) {
  const gh::PipelineModel model = gh::load_model(model_path);

  struct Input {
    std::string shown;
    std::string resolved;
    std::string truth;  // empty when unlabeled
  };
  std::vector<Input> inputs;
  if (!data_path.empty()) {
    const gh::DatasetManifest data = gh::load_manifest(data_path);
    for (const gh::DatasetEntry& entry : data.entries)
      inputs.push_back(Input{entry.path, entry.resolved, entry.class_name});
  } else {
    std::ifstream in(paths_path);
    if (!in) throw gh::DataError("cannot open path list '" + paths_path + "'");
    std::string line;
    while (std::getline(in, line)) {
      const std::string stripped(gh::trim(line));
      if (stripped.empty() || stripped[0] == '#') continue;
      inputs.push_back(Input{stripped, stripped, ""});
    }
  }
  const bool labeled = !data_path.empty();

  std::vector<gh::Prediction> predictions(inputs.size());
  gh::parallel_for(inputs.size(), [&](std::size_t i) {
    predictions[i] = gh::classify(model, gh::load_points(inputs[i].resolved));
  });

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) throw gh::DataError("cannot write output '" + output_path + "'");
    out = &file;
  }
  *out << "path\tpredicted";
  if (labeled) *out << "\ttruth\tcorrect";
  for (const std::string& name : model.class_names) *out << "\tscore_" << name;
  *out << "\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string& predicted =
        model.class_names[static_cast<std::size_t>(predictions[i].class_id)];
    *out << inputs[i].shown << "\t" << predicted;
    if (labeled)
      *out << "\t" << inputs[i].truth << "\t" << (predicted == inputs[i].truth ? "1" : "0");
    for (Eigen::Index c = 0; c < predictions[i].scores.size(); ++c)
      *out << "\t" << gh::format_double(predictions[i].scores(c));
    *out << "\n";
  }
  if (!*out) throw gh::DataError("failed writing predictions");
  return 0;
}

struct AblationCell {
  std::string sweep;
  std::string cell;
  gh::PipelineConfig config;
  std::vector<gh::Region> regions;
};

std::vector<gh::Region> region_combo(const gh::PipelineConfig& config, const std::string& combo) {
  const std::vector<gh::Region> all = gh::make_regions(
      gh::deg_to_rad(config.theta1_deg), gh::deg_to_rad(config.theta2_deg), config.delta);
  std::vector<gh::Region> out;
  if (combo.find('G') != std::string::npos) out.push_back(all[0]);
  if (combo.find('C') != std::string::npos)
    out.insert(out.end(), all.begin() + 1, all.begin() + 4);
  if (combo.find('I') != std::string::npos) out.insert(out.end(), all.begin() + 4, all.end());
  return out;
}

std::vector<AblationCell> build_cells(const gh::PipelineConfig& base, const std::string& sweep) {
  std::vector<AblationCell> cells;
  auto base_regions = [&](const gh::PipelineConfig& c) {
    return gh::make_regions(gh::deg_to_rad(c.theta1_deg), gh::deg_to_rad(c.theta2_deg),
                            c.delta);
  };

  if (sweep == "regions" || sweep == "all") {
    for (const char* combo : {"G", "C", "I", "GC", "GI", "CI", "GCI"})
      cells.push_back(AblationCell{"regions", combo, base, region_combo(base, combo)});
  }
  if (sweep == "k" || sweep == "all") {
    for (int k : {16, 32, 64}) {
      gh::PipelineConfig c = base;
      c.k_neighbors = k;
      cells.push_back(AblationCell{"k", std::to_string(k), c, base_regions(c)});
    }
  }
  if (sweep == "aggregators" || sweep == "all") {
    const std::vector<std::string> subsets = {
        "max",
        "mean",
        "max,mean",
        "max,mean,l1,l2",
        "max,mean,l1,l2,min",
        "max,mean,l1,l2,std",
        "max,mean,l1,l2,var",
        "max,mean,l1,l2,std,var,min"};
    for (const std::string& subset : subsets) {
      gh::PipelineConfig c = base;
      c.aggregators = gh::aggregators_from_string(subset);
      cells.push_back(AblationCell{"aggregators", subset, c, base_regions(c)});
    }
  }
  if (sweep == "points" || sweep == "all") {
    for (int n : {256, 512, 768, 1024}) {
      gh::PipelineConfig c = base;
      c.num_points = n;
      if (c.k_neighbors >= c.num_points) c.k_neighbors = c.num_points - 1;
      cells.push_back(AblationCell{"points", std::to_string(n), c, base_regions(c)});
    }
  }
  if (cells.empty())
    throw gh::ConfigError("unknown sweep '" + sweep +
                          "' (expected regions|k|aggregators|points|all)");
  return cells;
}

int run_ablate(const std::string& data_path, const std::string& test_path,
               const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& sweep, const std::string& out_path) {
  const gh::PipelineConfig base = resolve_config(config_path, overrides);
  gh::DatasetManifest train_data = gh::load_manifest(data_path);
  train_data.split = "train";
  gh::DatasetManifest test_data = gh::load_manifest(test_path);
  test_data.split = "test";

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw gh::DataError("cannot write report '" + out_path + "'");
    out = &file;
  }
  *out << "sweep\tcell\tk_neighbors\tnum_points\taggregators\tn_regions\tfeature_dim\t"
          "n_selected\toverall_accuracy\tclass_avg_accuracy\n";

  for (AblationCell& cell : build_cells(base, sweep)) {
    // An explicit n_features tuned for the full region set can exceed a
    // smaller cell's feature length; clamp per cell so sweeps stay runnable.
    const std::size_t cell_dim =
        gh::feature_length(cell.regions.size(), cell.config.aggregators.size());
    if (cell.config.n_features && *cell.config.n_features > cell_dim)
      cell.config.n_features = cell_dim;
    const gh::PipelineModel model = gh::train_pipeline(train_data, cell.config, cell.regions);
    const gh::EvalReport report = gh::evaluate(model, test_data);
    *out << cell.sweep << "\t" << cell.cell << "\t" << cell.config.k_neighbors << "\t"
         << cell.config.num_points << "\t" << gh::aggregators_to_string(cell.config.aggregators)
         << "\t" << cell.regions.size() << "\t" << model.full_feature_dim() << "\t"
         << model.selected.size() << "\t" << gh::format_double(report.overall_accuracy) << "\t"
         << gh::format_double(report.class_avg_accuracy) << "\n";
    out->flush();
  }
  if (!*out) throw gh::DataError("failed writing ablation report");
  return 0;
}

int run_flops(const std::string& model_path, const std::string& config_path,
              const std::vector<std::string>& overrides, int points, int classes,
              std::int64_t features, const std::string& report_path) {
  gh::FlopsEstimate estimate;
  if (!model_path.empty()) {
    const gh::PipelineModel model = gh::load_model(model_path);
    estimate = gh::estimate_flops(model);
  } else {
    const gh::PipelineConfig config = resolve_config(config_path, overrides);
    const int n_points = points > 0 ? points : config.num_points;
    std::uint64_t n_selected;
    if (features >= 0) {
      n_selected = static_cast<std::uint64_t>(features);
    } else if (config.n_features) {
      n_selected = *config.n_features;
    } else {
      n_selected = gh::feature_length(10, config.aggregators.size());
    }
    estimate = gh::estimate_flops(config, n_points, n_selected, classes);
  }

  const ReportLines lines = gh::flops_report_lines(estimate);
  for (const auto& [key, value] : lines) std::printf("%-22s %s\n", key.c_str(), value.c_str());
  if (!report_path.empty()) write_report(report_path, lines);
  return 0;
}

int run_convert(const std::string& src, const std::string& dst, const std::string& format) {
  if (format != "tree")
    throw gh::ConfigError("unknown convert format '" + format + "' (expected: tree)");
  const std::string manifest = gh::convert_tree(src, dst);
  std::printf("wrote %s\n", manifest.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-hop point-cloud object classification"};
  app.require_subcommand(1);

  std::string data_path, test_path, model_path, config_path, report_path, output_path;
  std::string paths_path, sweep = "all", format = "tree", src, dst;
  std::vector<std::string> overrides;
  int points = 0, classes = 40;
  std::int64_t features = -1;

  CLI::App* train = app.add_subcommand("train", "fit a model on a labeled manifest");
  train->add_option("--data", data_path, "training manifest")->required();
  train->add_option("--model", model_path, "output model path")->required();
  train->add_option("--config", config_path, "config file");
  train->add_option("--override", overrides, "key=value config override");
  train->add_option("--report", report_path, "machine-readable training report");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a model on a labeled manifest");
  eval->add_option("--model", model_path, "model path")->required();
  eval->add_option("--data", data_path, "test manifest")->required();
  eval->add_option("--report", report_path, "machine-readable evaluation report");

  CLI::App* predict = app.add_subcommand("predict", "per-sample predictions as TSV");
  predict->add_option("--model", model_path, "model path")->required();
  CLI::Option* predict_data = predict->add_option("--data", data_path, "labeled manifest");
  predict->add_option("--paths", paths_path, "file listing point files, one per line")
      ->excludes(predict_data);
  predict->add_option("--output", output_path, "output TSV path (default: stdout)");

  CLI::App* ablate = app.add_subcommand("ablate", "sweep config grids, train and evaluate");
  ablate->add_option("--data", data_path, "training manifest")->required();
  ablate->add_option("--test", test_path, "test manifest")->required();
  ablate->add_option("--config", config_path, "base config file");
  ablate->add_option("--override", overrides, "key=value config override");
  ablate->add_option("--sweep", sweep, "regions|k|aggregators|points|all");
  ablate->add_option("--out", report_path, "report TSV path (default: stdout)");

  CLI::App* flops = app.add_subcommand("flops", "closed-form inference cost report");
  flops->add_option("--model", model_path, "derive stage sizes from a trained model");
  flops->add_option("--config", config_path, "config file");
  flops->add_option("--override", overrides, "key=value config override");
  flops->add_option("--points", points, "points per cloud (default: config num_points)");
  flops->add_option("--classes", classes, "class count (default: 40)");
  flops->add_option("--features", features, "selected feature count");
  flops->add_option("--report", report_path, "machine-readable report path");

  CLI::App* convert = app.add_subcommand("convert", "convert a class-folder tree");
  convert->add_option("--src", src, "source directory")->required();
  convert->add_option("--dst", dst, "destination directory")->required();
  convert->add_option("--format", format, "source layout (tree)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed())
      return run_train(data_path, model_path, config_path, overrides, report_path);
    if (eval->parsed()) return run_eval(model_path, data_path, report_path);
    if (predict->parsed()) {
      if (data_path.empty() && paths_path.empty())
        throw gh::ConfigError("predict needs --data or --paths");
      return run_predict(model_path, data_path, paths_path, output_path);
    }
    if (ablate->parsed())
      return run_ablate(data_path, test_path, config_path, overrides, sweep, report_path);
    if (flops->parsed())
      return run_flops(model_path, config_path, overrides, points, classes, features,
                       report_path);
    if (convert->parsed()) return run_convert(src, dst, format);
  } catch (const gh::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const gh::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const gh::Error& e) {  // data, model-io, invalid-input
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
