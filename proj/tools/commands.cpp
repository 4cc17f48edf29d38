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

#include "mif/data.hpp"
#include "mif/filter.hpp"
#include "mif/io.hpp"
#include "mif/metrics.hpp"
#include "mif/plot.hpp"
#include "mif/run_log.hpp"
#include "mif/training.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

namespace mif::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Input problem reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path output_dir(const CommonArgs& common) {
  if (!common.out.empty()) {
    return common.out;
  }
  if (const char* env = std::getenv("MIF_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "mif_out";
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

std::string short_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

IntentionMap load_map(const fs::path& path) {
  if (path.empty()) {
    throw UsageError("--map is required");
  }
  return map_from_json(read_json(path));
}

fs::path sidecar_labels(const fs::path& corpus) {
  fs::path p = corpus;
  p.replace_extension(".labels.csv");
  return p;
}

std::vector<TrajectoryRecord> load_corpus(const fs::path& corpus, const fs::path& labels,
                                          const IntentionMap& map) {
  if (corpus.empty()) {
    throw UsageError("--corpus is required");
  }
  std::istringstream in(read_text(corpus));
  LoadOptions options;
  options.map = &map;
  auto records = load_trajectories(in, TrajectoryFormat::kNormalizedCsv, options);
  const fs::path label_path = labels.empty() ? sidecar_labels(corpus) : labels;
  if (!labels.empty() || fs::exists(label_path)) {
    std::istringstream lin(read_text(label_path));
    apply_labels_csv(lin, records);
  }
  return records;
}

void write_corpus(const fs::path& dir, const std::string& stem,
                  const std::vector<TrajectoryRecord>& records) {
  std::ostringstream csv;
  save_normalized_csv(csv, records);
  write_text_atomic(dir / (stem + ".csv"), csv.str());
  std::ostringstream labels;
  save_labels_csv(labels, records);
  write_text_atomic(dir / (stem + ".labels.csv"), labels.str());
}

template <typename F>
int guarded(const char* name, F&& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    std::cerr << name << ": diverged: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
  return guarded("synth", [&] {
    if (args.common.config.empty()) {
      throw UsageError("--config is required");
    }
    const json raw = read_json(args.common.config);
    std::optional<IntentionMap> map;
    if (!args.map.empty()) {
      map = load_map(args.map);
    }
    SynthConfig cfg = synth_config_from_json(raw, map);
    if (args.common.seed) {
      cfg.rng_seed = *args.common.seed;
    }
    const auto records = generate_synthetic(cfg);
    const fs::path out = output_dir(args.common);
    write_corpus(out, "corpus", records);
    write_text_atomic(out / "map.json", map_to_json(cfg.map).dump(2) + "\n");

    json manifest = {{"kind", "synthetic-corpus"},
                     {"config", synth_config_to_json(cfg)},
                     {"map", "map.json"},
                     {"num_records", records.size()},
                     {"records", {"corpus.csv", "corpus.labels.csv"}},
                     {"command", args.common.command_line}};
    if (args.split) {
      const auto [train, test] = split_corpus(records, *args.split, cfg.rng_seed);
      write_corpus(out, "train", train);
      write_corpus(out, "test", test);
      manifest["split"] = {{"train_fraction", *args.split},
                           {"train", {"train.csv", "train.labels.csv"}},
                           {"test", {"test.csv", "test.labels.csv"}},
                           {"num_train", train.size()},
                           {"num_test", test.size()}};
    }
    write_text_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << records.size() << " trajectories to " << out.string() << "\n";
    return kOk;
  });
}

int cmd_train(const TrainArgs& args) {
  return guarded("train", [&] {
    const IntentionMap map = load_map(args.map);
    auto records = load_corpus(args.corpus, args.labels, map);
    std::vector<TrajectoryRecord> labeled;
    std::vector<std::string> skipped;
    for (auto& r : records) {
      if (r.goal_region_id) {
        labeled.push_back(std::move(r));
      } else {
        skipped.push_back(r.pedestrian_id);
      }
    }
    if (!skipped.empty()) {
      std::cerr << "train: warning: skipping " << skipped.size() << " unlabeled records:";
      for (const auto& id : skipped) {
        std::cerr << " " << id;
      }
      std::cerr << "\n";
    }
    if (labeled.empty()) {
      throw UsageError("no labeled records to train on");
    }
    TrainConfig cfg;
    if (!args.common.config.empty()) {
      cfg = train_config_from_json(read_json(args.common.config));
    }
    if (args.common.seed) {
      cfg.rng_seed = *args.common.seed;
    }
    if (args.epochs) {
      cfg.epochs = *args.epochs;
    }
    cfg.validate();
    std::vector<int> buckets = args.buckets;
    if (buckets.empty()) {
      buckets.assign(kObservedBuckets.begin(), kObservedBuckets.end());
    }
    const fs::path out = output_dir(args.common);
    json files = json::array();
    for (int bucket : buckets) {
      if (std::find(kObservedBuckets.begin(), kObservedBuckets.end(), bucket) ==
          kObservedBuckets.end()) {
        throw UsageError("bucket must be one of 0, 25, 50, 75");
      }
      const auto result = train(labeled, bucket, cfg);
      save_checkpoint(out / checkpoint_file_name(bucket), Checkpoint{result.model, bucket, cfg});
      std::string curve = "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
        curve += std::to_string(e) + "," + short_number(result.loss_curve[e]) + "\n";
      }
      const std::string curve_name = "loss_p" + std::to_string(bucket) + ".csv";
      write_text_atomic(out / curve_name, curve);
      files.push_back({{"bucket", bucket},
                       {"checkpoint", checkpoint_file_name(bucket)},
                       {"loss_curve", curve_name},
                       {"initial_loss", result.loss_curve.front()},
                       {"final_loss", result.loss_curve.back()}});
      std::cout << "bucket " << bucket << ": loss " << result.loss_curve.front() << " -> "
                << result.loss_curve.back() << "\n";
    }
    json manifest = {{"kind", "model-bank"},
                     {"corpus", args.corpus.string()},
                     {"num_records", labeled.size()},
                     {"train_config", train_config_to_json(cfg)},
                     {"models", files},
                     {"command", args.common.command_line}};
    write_text_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    return kOk;
  });
}

int cmd_run_filter(const RunFilterArgs& args) {
  return guarded("run-filter", [&] {
    const IntentionMap map = load_map(args.map);
    const auto records = load_corpus(args.corpus, args.labels, map);
    FilterConfig cfg;
    if (!args.common.config.empty()) {
      cfg = filter_config_from_json(read_json(args.common.config));
    }
    if (args.tau) cfg.tau = *args.tau;
    if (args.p_mutation) cfg.p_mutation = *args.p_mutation;
    if (args.particles) cfg.num_particles = *args.particles;
    cfg.validate();

    std::unique_ptr<MotionModel> model;
    const std::string model_name = args.model;
    if (args.model == "ilm") {
      model = std::make_unique<LinearIntentionModel>();
    } else if (args.model == "wlstm") {
      if (args.bank.empty() || !fs::is_directory(args.bank)) {
        throw UsageError("--model wlstm needs --bank pointing at a model bank directory");
      }
      model = std::make_unique<WarpMotionModel>(load_model_bank(args.bank));
    } else {
      throw UsageError("--model must be 'ilm' or 'wlstm'");
    }
    const std::uint64_t seed = args.common.seed.value_or(0);
    const fs::path out = output_dir(args.common);
    RunOptions options;
    options.log_endpoints = args.log_endpoints;
    options.log_all_samples = args.log_all_samples;
    json logs = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      options.observed_frames =
          args.observed.value_or(static_cast<int>(rec.trajectory.rows()) - cfg.lookback);
      if (options.observed_frames < 2 || options.observed_frames > rec.trajectory.rows()) {
        std::cerr << "run-filter: warning: skipping " << rec.pedestrian_id
                  << " (too short for the lookahead window)\n";
        continue;
      }
      const RunLog log =
          run_filter(rec, map, *model, model_name, cfg, derive_seed(seed, i), options);
      const std::string name = rec.pedestrian_id + ".jsonl";
      write_text_atomic(out / name, run_log_to_jsonl(log));
      logs.push_back(name);
    }
    json manifest = {{"kind", "filter-run"},
                     {"corpus", args.corpus.string()},
                     {"map", args.map.string()},
                     {"motion_model", model_name},
                     {"bank", args.bank.string()},
                     {"seed", seed},
                     {"filter_config", filter_config_to_json(cfg)},
                     {"logs", logs},
                     {"command", args.common.command_line}};
    write_text_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << logs.size() << " run logs to " << out.string() << "\n";
    return kOk;
  });
}

namespace {

std::vector<RunLog> read_logs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.path().extension() == ".jsonl") {
          files.push_back(entry.path());
        }
      }
    } else if (fs::exists(in)) {
      files.push_back(in);
    } else {
      throw UsageError("no such log: " + in.string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunLog> logs;
  for (const auto& f : files) {
    std::istringstream ss(read_text(f));
    try {
      logs.push_back(run_log_from_jsonl(ss));
    } catch (const ParseError& e) {
      throw UsageError(f.string() + ": " + e.what());
    }
  }
  return logs;
}

}  // namespace

int cmd_eval(const EvalArgs& args) {
  return guarded("eval", [&] {
    const IntentionMap map = load_map(args.map);
    const auto records = load_corpus(args.corpus, args.labels, map);
    if (args.logs.empty()) {
      throw UsageError("--logs is required");
    }
    const auto logs = read_logs({args.logs});
    if (logs.empty()) {
      throw UsageError("no run logs in " + args.logs.string());
    }
    std::vector<int> ntis = args.nti;
    if (ntis.empty()) {
      ntis = {1, 3, map.size()};
    }
    for (int n : ntis) {
      if (n < 1 || n > map.size()) {
        throw UsageError("nti must be in [1, " + std::to_string(map.size()) + "]");
      }
    }
    std::sort(ntis.begin(), ntis.end());
    ntis.erase(std::unique(ntis.begin(), ntis.end()), ntis.end());

    std::map<std::tuple<std::string, double, double>, std::vector<RunLog>> groups;
    for (const auto& log : logs) {
      const auto& h = log.header;
      groups[{h.motion_model, h.config.tau, h.config.p_mutation}].push_back(log);
    }
    const fs::path out = output_dir(args.common);
    std::string summary = "motion_model," + report_csv_header() + "\n";
    std::vector<EvalReport> reports;
    for (const auto& [key, group] : groups) {
      const auto& [model, tau, pm] = key;
      for (int n : ntis) {
        EvalReport report;
        try {
          report = evaluate_run(group, records, map, n);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        const std::string stem = "report_" + model + "_tau" + short_number(tau) + "_pm" +
                                 short_number(pm) + "_nti" + std::to_string(n);
        json j = report_to_json(report);
        j["motion_model"] = model;
        write_text_atomic(out / (stem + ".json"), j.dump(2) + "\n");
        write_text_atomic(out / (stem + ".csv"),
                          report_csv_header() + "\n" + report_csv_row(report) + "\n");
        write_text_atomic(out / (stem + "_trajectories.csv"), report_breakdown_csv(report));
        summary += model + "," + report_csv_row(report) + "\n";
        reports.push_back(std::move(report));
      }
    }
    write_text_atomic(out / "summary.csv", summary);
    std::cout << summary;
    return kOk;
  });
}

int cmd_plot(const PlotArgs& args) {
  return guarded("plot", [&] {
    std::optional<IntentionMap> map;
    if (!args.map.empty()) {
      map = load_map(args.map);
    }
    const fs::path out = output_dir(args.common);
    int written = 0;
    if (!args.report.empty()) {
      const json j = read_json(args.report);
      std::vector<EvalReport> reports;
      for (const auto& r : j.is_array() ? j : json::array({j})) {
        EvalReport rep;
        rep.tau = r.at("tau").get<double>();
        rep.p_mutation = r.at("p_mutation").get<double>();
        rep.nti = r.at("nti").get<int>();
        rep.min_aoe = r.at("min_aoe").get<double>();
        rep.mean_aoe = r.at("mean_aoe").get<double>();
        rep.min_foe = r.at("min_foe").get<double>();
        rep.mean_foe = r.at("mean_foe").get<double>();
        reports.push_back(rep);
      }
      write_text_atomic(out / (args.report.stem().string() + ".svg"), render_report_svg(reports));
      ++written;
    }
    if (!args.logs.empty()) {
      for (const auto& log : read_logs(args.logs)) {
        if (log.iterations.empty()) {
          throw UsageError("run log for " + log.header.pedestrian_id + " has no iterations");
        }
        const std::string id = log.header.pedestrian_id;
        write_text_atomic(out / (id + "_samples.svg"),
                          render_sample_fan_svg(log, map ? &*map : nullptr));
        write_text_atomic(out / (id + "_belief.svg"), render_belief_timeline_svg(log));
        written += 2;
      }
    }
    if (written == 0) {
      throw UsageError("nothing to plot: pass --log or --report");
    }
    std::cout << "wrote " << written << " figures to " << out.string() << "\n";
    return kOk;
  });
}

}  // namespace mif::cli
