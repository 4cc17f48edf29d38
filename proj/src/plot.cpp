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

#include "mif/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mif {
namespace {

std::string color_for(int intention, int count) {
  const double hue = count > 0 ? 360.0 * intention / count : 0.0;
  std::ostringstream ss;
  ss << "hsl(" << static_cast<int>(std::lround(hue)) << ",70%,45%)";
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x_min = std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();

  void include(double x, double y) {
    x_min = std::min(x_min, x);
    y_min = std::min(y_min, y);
    x_max = std::max(x_max, x);
    y_max = std::max(y_max, y);
  }
  void include(const Path& p) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      include(p(i, 0), p(i, 1));
    }
  }
};

constexpr double kCanvas = 600.0;
constexpr double kMargin = 20.0;

class WorldToCanvas {
 public:
  explicit WorldToCanvas(const Frame& f) : f_(f) {
    const double span = std::max({f.x_max - f.x_min, f.y_max - f.y_min, 1e-6});
    scale_ = (kCanvas - 2 * kMargin) / span;
  }
  double x(double wx) const { return kMargin + (wx - f_.x_min) * scale_; }
  // SVG y grows downward.
  double y(double wy) const { return kCanvas - kMargin - (wy - f_.y_min) * scale_; }
  double length(double w) const { return w * scale_; }

 private:
  Frame f_;
  double scale_ = 1.0;
};

std::string polyline(const Path& p, const WorldToCanvas& tf, const std::string& style) {
  std::ostringstream ss;
  ss.precision(6);
  ss << "<polyline fill=\"none\" " << style << " points=\"";
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    ss << (i ? " " : "") << tf.x(p(i, 0)) << "," << tf.y(p(i, 1));
  }
  ss << "\"/>\n";
  return ss.str();
}

}  // namespace

std::string render_sample_fan_svg(const RunLog& log, const IntentionMap* map) {
  const auto& h = log.header;
  Frame frame;
  frame.include(h.observation);
  const IterationRecord* last = log.iterations.empty() ? nullptr : &log.iterations.back();
  if (last != nullptr) {
    for (const auto& s : last->samples) {
      frame.include(s.points);
    }
  }
  if (map != nullptr) {
    const auto b = map->bounds();
    frame.include(b.x_min, b.y_min);
    frame.include(b.x_max, b.y_max);
  }
  const WorldToCanvas tf(frame);
  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
  svg << "<title>" << escape(h.pedestrian_id) << " prediction samples</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (map != nullptr) {
    svg << "<g class=\"regions\">\n";
    for (const auto& r : map->regions()) {
      svg << "<rect data-region=\"" << r.id << "\" x=\"" << tf.x(r.center.x() - r.half_width)
          << "\" y=\"" << tf.y(r.center.y() + r.half_width) << "\" width=\""
          << tf.length(2 * r.half_width) << "\" height=\"" << tf.length(2 * r.half_width)
          << "\" fill=\"" << color_for(r.id, map->size()) << "\" fill-opacity=\"0.25\" stroke=\"black\"/>\n";
    }
    svg << "</g>\n";
  }
  if (last != nullptr) {
    svg << "<g class=\"samples\" data-frame=\"" << last->frame << "\">\n";
    for (const auto& s : last->samples) {
      svg << polyline(s.points, tf,
                      "stroke=\"" + color_for(s.intention, h.num_intentions) +
                          "\" stroke-opacity=\"0.35\" stroke-width=\"1\" data-intention=\"" +
                          std::to_string(s.intention) + "\"");
    }
    svg << "</g>\n";
  }
  svg << "<g class=\"observation\">\n"
      << polyline(h.observation, tf, "stroke=\"black\" stroke-width=\"2.5\"") << "</g>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_belief_timeline_svg(const RunLog& log) {
  const auto& h = log.header;
  const double width = 800.0;
  const double height = 300.0;
  const double plot_w = width - 2 * kMargin;
  const double plot_h = height - 2 * kMargin;
  const int first = log.iterations.empty() ? 0 : log.iterations.front().frame;
  const int last = log.iterations.empty() ? 1 : log.iterations.back().frame;
  const double span = std::max(1, last - first + h.config.iterate_every);
  const double bar_w = plot_w * h.config.iterate_every / span;
  auto x_of = [&](int frame) { return kMargin + plot_w * (frame - first) / span; };

  std::ostringstream svg;
  svg.precision(17);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<title>" << escape(h.pedestrian_id) << " belief over time</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& it : log.iterations) {
    svg << "<g class=\"step\" data-frame=\"" << it.frame << "\" data-belief=\"";
    for (std::size_t j = 0; j < it.belief.size(); ++j) {
      svg << (j ? " " : "") << it.belief[j];
    }
    svg << "\">\n";
    double y = kMargin + plot_h;
    for (std::size_t j = 0; j < it.belief.size(); ++j) {
      if (it.belief[j] <= 0.0) {
        continue;
      }
      const double bar_h = plot_h * it.belief[j];
      y -= bar_h;
      svg << "<rect x=\"" << x_of(it.frame) << "\" y=\"" << y << "\" width=\"" << bar_w
          << "\" height=\"" << bar_h << "\" fill=\""
          << color_for(static_cast<int>(j), h.num_intentions) << "\" data-intention=\"" << j
          << "\"/>\n";
    }
    svg << "</g>\n";
  }
  if (h.switch_frame && *h.switch_frame >= first && *h.switch_frame <= last) {
    const double x = x_of(*h.switch_frame);
    svg << "<line class=\"switch\" data-frame=\"" << *h.switch_frame << "\" x1=\"" << x
        << "\" y1=\"" << kMargin << "\" x2=\"" << x << "\" y2=\"" << kMargin + plot_h
        << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_report_svg(const std::vector<EvalReport>& reports) {
  const double width = 120.0 + 160.0 * static_cast<double>(reports.size());
  const double height = 320.0;
  const double plot_h = height - 80.0;
  double top = 1e-9;
  for (const auto& r : reports) {
    top = std::max({top, r.min_aoe, r.mean_aoe, r.min_foe, r.mean_foe});
  }
  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const char* names[] = {"min_aoe", "mean_aoe", "min_foe", "mean_foe"};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double values[] = {r.min_aoe, r.mean_aoe, r.min_foe, r.mean_foe};
    const double x0 = 60.0 + 160.0 * static_cast<double>(i);
    svg << "<g class=\"report\" data-tau=\"" << r.tau << "\" data-p-mutation=\"" << r.p_mutation
        << "\" data-nti=\"" << r.nti << "\">\n";
    for (int k = 0; k < 4; ++k) {
      const double bar_h = plot_h * values[k] / top;
      svg << "<rect class=\"" << names[k] << "\" x=\"" << x0 + 30.0 * k << "\" y=\""
          << 20.0 + plot_h - bar_h << "\" width=\"26\" height=\"" << bar_h << "\" fill=\""
          << color_for(k, 4) << "\"/>\n";
    }
    svg << "<text x=\"" << x0 << "\" y=\"" << height - 30.0 << "\" font-size=\"11\">tau="
        << r.tau << " pm=" << r.p_mutation << " nti=" << r.nti << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mif
