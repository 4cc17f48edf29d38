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

#include "mif/metrics.hpp"
#include "mif/run_log.hpp"
#include "mif/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mif {

/// Observed trajectory with the final iteration's samples colored by
/// intention, over the goal regions when a map is given.
std::string render_sample_fan_svg(const RunLog& log, const IntentionMap* map = nullptr);

/// Stacked belief probabilities per iteration. Each step is a <g> element
/// carrying data-frame and data-belief attributes; switch frames are marked.
std::string render_belief_timeline_svg(const RunLog& log);

/// Grouped bars of min/mean AOE and FOE per report.
std::string render_report_svg(const std::vector<EvalReport>& reports);

}  // namespace mif
