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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mif::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;

struct CommonArgs {
  std::optional<std::uint64_t> seed;
  std::filesystem::path config;
  std::filesystem::path out;
  std::string command_line;
};

struct SynthArgs {
  CommonArgs common;
  std::filesystem::path map;
  std::optional<double> split;
};

struct TrainArgs {
  CommonArgs common;
  std::filesystem::path corpus;
  std::filesystem::path labels;
  std::filesystem::path map;
  std::vector<int> buckets;
  std::optional<int> epochs;
};

struct RunFilterArgs {
  CommonArgs common;
  std::filesystem::path corpus;
  std::filesystem::path labels;
  std::filesystem::path map;
  std::string model = "ilm";
  std::filesystem::path bank;
  std::optional<double> tau;
  std::optional<double> p_mutation;
  std::optional<int> particles;
  std::optional<int> observed;
  bool log_endpoints = false;
  bool log_all_samples = false;
};

struct EvalArgs {
  CommonArgs common;
  std::filesystem::path logs;
  std::filesystem::path corpus;
  std::filesystem::path labels;
  std::filesystem::path map;
  std::vector<int> nti;
};

struct PlotArgs {
  CommonArgs common;
  std::vector<std::filesystem::path> logs;
  std::filesystem::path report;
  std::filesystem::path map;
};

int cmd_synth(const SynthArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_run_filter(const RunFilterArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_plot(const PlotArgs& args);

}  // namespace mif::cli
