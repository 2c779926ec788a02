#include "cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "accelsel/config.hpp"
#include "accelsel/errors.hpp"
#include "accelsel/evaluation.hpp"
#include "accelsel/io.hpp"
#include "accelsel/numfmt.hpp"
#include "accelsel/predictor.hpp"
#include "accelsel/selector.hpp"
#include "accelsel/simlab.hpp"

namespace accelsel::cli {

namespace {

HarnessConfig config_or_default(const std::string& path) {
  if (path.empty()) return HarnessConfig{};
  return load_config(path);
}

int cmd_gen(const std::string& config_path, const std::string& out_path, std::ostream& out) {
  const HarnessConfig config = config_or_default(config_path);
  config.validate();
  const History h = generate_history(config.fleet, config.train_workload(), config.ground_truth, config.noise());
  write_history(out_path, h.tasks, h.tensor, config_digest(config));
  out << "wrote " << h.tensor.size() << " measurements for " << h.tasks.size() << " tasks to " << out_path << "\n";
  return kOk;
}

int cmd_train(const std::string& history_path, const std::string& config_path, const std::string& out_path,
              std::ostream& out) {
  const HarnessConfig config = config_or_default(config_path);
  config.validate();
  const HistoryFile history = read_history(history_path);
  const auto methods = all_method_descriptors();
  const TrainingSet training =
      build_training_set(history.tensor, history.tasks, methods, config.fleet, Embedder(config.embedding));
  const TrainedPredictor predictor = train_meta_learner(training, config.predictor);
  save_model(predictor, out_path);
  out << "trained " << to_string(config.predictor.model_kind) << " on " << training.size() << " rows; wrote "
      << out_path << "\n";
  return kOk;
}

int cmd_select(const std::string& model_path, const std::string& task_path, const std::string& hw_path,
               const std::string& catalog_path, double budget, std::ostream& out) {
  const TrainedPredictor predictor = load_model(model_path);
  SelectionRequest request;
  request.task = task_from_text(read_file(task_path));
  request.budget = budget;
  if (!catalog_path.empty()) {
    request.hardware = catalog_from_text(read_file(catalog_path));
  } else if (!hw_path.empty()) {
    request.hardware = hardware_from_text(read_file(hw_path));
  } else {
    throw ConfigError("select needs --hardware or --joint");
  }
  out << decision_to_text(select(predictor, request));
  return kOk;
}

int cmd_eval(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const HarnessConfig config = config_or_default(config_path);
  const EvalReport report = run_evaluation(config);
  write_report(report, out_dir);
  for (const auto& s : report.summaries) {
    out << to_string(s.policy) << ": mean_regret=" << format_sig9(s.mean_regret)
        << " top1=" << format_sig9(s.top1_accuracy) << " scored=" << s.tasks_scored << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learned selection of inference-acceleration methods under a cost budget"};
  app.name(args.empty() ? "accelsel" : args.front());
  app.require_subcommand(1);

  std::string config_path, out_path, history_path, model_path, task_path, hw_path, catalog_path;
  double budget = 0.0;
  bool print_defaults = false;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic performance history");
  gen->add_option("--config", config_path, "Harness config (JSON); defaults when omitted");
  gen->add_option("--out", out_path, "Output history (.jsonl)")->required();

  auto* train = app.add_subcommand("train", "Train the meta-learner on a history");
  train->add_option("--history", history_path, "History file (.jsonl)")->required();
  train->add_option("--config", config_path, "Harness config (JSON); defaults when omitted");
  train->add_option("--out", out_path, "Output model file")->required();

  auto* sel = app.add_subcommand("select", "Pick a method (and hardware) for a new task within a budget");
  sel->add_option("--model", model_path, "Trained model file")->required();
  sel->add_option("--task", task_path, "Task descriptor (JSON)")->required();
  sel->add_option("--hardware", hw_path, "Hardware profile (JSON) for fixed-hardware selection");
  sel->add_option("--budget", budget, "Cost budget in currency units")->required();
  sel->add_option("--joint", catalog_path, "Hardware catalog (JSON array); selects method and hardware jointly");

  auto* eval = app.add_subcommand("eval", "Run the train/select evaluation and write a report");
  eval->add_option("--config", config_path, "Harness config (JSON); defaults when omitted");
  eval->add_option("--out", out_path, "Report directory")->required();

  auto* params = app.add_subcommand("params", "Show configuration defaults");
  params->add_flag("--print-defaults", print_defaults, "Print the default harness config");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kConfigError;
  }

  try {
    if (*gen) return cmd_gen(config_path, out_path, out);
    if (*train) return cmd_train(history_path, config_path, out_path, out);
    if (*sel) return cmd_select(model_path, task_path, hw_path, catalog_path, budget, out);
    if (*eval) return cmd_eval(config_path, out_path, out);
    if (*params) {
      if (!print_defaults) {
        err << "params: nothing to do (use --print-defaults)\n";
        return kConfigError;
      }
      out << config_to_text(HarnessConfig{});
      return kOk;
    }
  } catch (const NoFeasibleMethod& e) {
    err << "no feasible method: minimum estimated cost " << format_sig9(e.min_cost()) << " exceeds budget "
        << format_sig9(e.budget()) << "\n";
    return kNoFeasible;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kIoError;
  } catch (const VersionError& e) {
    err << "version error: " << e.what() << "\n";
    return kIoError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace accelsel::cli
