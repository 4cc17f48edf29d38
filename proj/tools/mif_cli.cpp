// Copyright 2026 The mif-wlstm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_common(CLI::App* sub, mif::cli::CommonArgs& common) {
  sub->add_option("--seed", common.seed, "RNG seed");
  sub->add_option("--config", common.config, "JSON config file");
  sub->add_option("--out", common.out, "Output directory (default: $MIF_OUT_DIR or ./mif_out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutable intention filter and warp model toolkit for pedestrian trajectories"};
  app.require_subcommand(1);

  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    command_line += (i ? " " : "") + std::string(argv[i]);
  }

  mif::cli::SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trajectory corpus");
  add_common(synth_cmd, synth.common);
  synth_cmd->add_option("--map", synth.map, "Goal-map JSON overriding the config's map");
  synth_cmd->add_option("--split", synth.split, "Also write a train/test split at this train fraction")
      ->check(CLI::Range(0.0, 1.0));

  mif::cli::TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the observed-percentage model bank");
  add_common(train_cmd, train.common);
  train_cmd->add_option("--corpus", train.corpus, "Normalized trajectory CSV")->required();
  train_cmd->add_option("--labels", train.labels, "Label sidecar CSV (default: <corpus>.labels.csv)");
  train_cmd->add_option("--map", train.map, "Goal-map JSON")->required();
  train_cmd->add_option("--buckets", train.buckets, "Subset of 0 25 50 75")->delimiter(',');
  train_cmd->add_option("--epochs", train.epochs, "Override the configured epoch count");

  mif::cli::RunFilterArgs run;
  auto* run_cmd = app.add_subcommand("run-filter", "Run the intention filter on every trajectory");
  add_common(run_cmd, run.common);
  run_cmd->add_option("--corpus", run.corpus, "Normalized trajectory CSV")->required();
  run_cmd->add_option("--labels", run.labels, "Label sidecar CSV (default: <corpus>.labels.csv)");
  run_cmd->add_option("--map", run.map, "Goal-map JSON")->required();
  run_cmd->add_option("--model", run.model, "Motion model: ilm or wlstm");
  run_cmd->add_option("--bank", run.bank, "Model bank directory for --model wlstm");
  run_cmd->add_option("--tau", run.tau, "Weight-update temperature");
  run_cmd->add_option("--p-mutation", run.p_mutation, "Intention mutation probability");
  run_cmd->add_option("--particles", run.particles, "Number of particles");
  run_cmd->add_option("--observed", run.observed,
                      "Frames to observe (default: trajectory length minus lookback)");
  run_cmd->add_flag("--log-endpoints", run.log_endpoints, "Log sample endpoints every iteration");
  run_cmd->add_flag("--log-all-samples", run.log_all_samples, "Log full samples every iteration");

  mif::cli::EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score run logs against the corpus");
  add_common(eval_cmd, eval.common);
  eval_cmd->add_option("--logs", eval.logs, "Run-log directory or file")->required();
  eval_cmd->add_option("--corpus", eval.corpus, "Normalized trajectory CSV")->required();
  eval_cmd->add_option("--labels", eval.labels, "Label sidecar CSV (default: <corpus>.labels.csv)");
  eval_cmd->add_option("--map", eval.map, "Goal-map JSON")->required();
  eval_cmd->add_option("--nti", eval.nti, "Top-intention counts (default: 1,3,m)")->delimiter(',');

  mif::cli::PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG figures from run logs or a report");
  add_common(plot_cmd, plot.common);
  plot_cmd->add_option("--log", plot.logs, "Run-log file(s) or directory");
  plot_cmd->add_option("--report", plot.report, "Report JSON from eval");
  plot_cmd->add_option("--map", plot.map, "Goal-map JSON for region outlines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mif::cli::kUsageError;
  }
  for (auto* common : {&synth.common, &train.common, &run.common, &eval.common, &plot.common}) {
    common->command_line = command_line;
  }
  if (*synth_cmd) return mif::cli::cmd_synth(synth);
  if (*train_cmd) return mif::cli::cmd_train(train);
  if (*run_cmd) return mif::cli::cmd_run_filter(run);
  if (*eval_cmd) return mif::cli::cmd_eval(eval);
  return mif::cli::cmd_plot(plot);
}
