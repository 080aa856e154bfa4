// Copyright 2026 The Scriptor Authors
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

#include "scriptor/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scriptor/core/error.hpp"

namespace scriptor::eval {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::string out = "tau,tp,fp,fn,tn,accuracy,f_score\n";
  for (const auto& p : points) {
    out += fmt("%.4f", p.tau);
    for (auto n : {p.confusion.tp, p.confusion.fp, p.confusion.fn, p.confusion.tn})
      out += "," + std::to_string(n);
    out += "," + fmt("%.6f", p.accuracy) + "," + fmt("%.6f", p.f_score) + "\n";
  }
  return out;
}

std::vector<SweepPoint> parse_sweep_csv(std::string_view text) {
  std::stringstream in{std::string(text)};
  std::string line;
  std::vector<SweepPoint> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("tau,", 0) == 0) continue;
    }
    auto f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorCode::MalformedLine, "sweep row needs 7 fields: " + line);
    try {
      Confusion c{std::stoll(f[1]), std::stoll(f[2]), std::stoll(f[3]), std::stoll(f[4])};
      out.push_back(make_point(std::stod(f[0]), c));
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedLine, "bad sweep row: " + line);
    }
  }
  return out;
}

std::string stats_csv(const StatsTable& table) {
  std::string out = "scribe,occurrences,columns,occ_per_column,mean_confidence\n";
  auto row = [&](const ScribeStats& s, const char* conf_fmt) {
    out += s.scribe + "," + std::to_string(s.occurrences) + "," + std::to_string(s.columns) + "," +
           fmt("%.2f", s.occ_per_column) + "," + fmt(conf_fmt, s.mean_confidence) + "\n";
  };
  for (const auto& s : table.rows) row(s, "%.4f");
  row(table.total, "%.2f");
  return out;
}

std::string sweep_svg(std::span<const SweepPoint> points, std::string_view title) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  double lo = 0.0, hi = 1.0;
  if (!points.empty()) {
    auto [mn, mx] = std::minmax_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.tau < b.tau; });
    lo = mn->tau;
    hi = mx->tau > lo ? mx->tau : lo + 1.0;
  }
  auto px = [&](double tau) { return L + (tau - lo) / (hi - lo) * (W - L - R); };
  auto py = [&](double v) { return H - B - v * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << escape_xml(title) << "</text>\n";
  // Axes and horizontal grid.
  for (int k = 0; k <= 10; ++k) {
    double y = py(k / 10.0);
    svg << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << L - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << k * 10
        << "</text>\n";
  }
  for (const auto& p : points)
    svg << "<text x=\"" << px(p.tau) << "\" y=\"" << H - B + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt("%.2f", p.tau) << "</text>\n";
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">confidence threshold"
      << "</text>\n";

  auto series = [&](auto value, const char* colour, const char* name, double legend_y) {
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : points) svg << px(p.tau) << "," << py(value(p)) << " ";
    svg << "\"/>\n";
    for (const auto& p : points)
      svg << "<circle cx=\"" << px(p.tau) << "\" cy=\"" << py(value(p)) << "\" r=\"3\" fill=\""
          << colour << "\"/>\n";
    svg << "<text x=\"" << W - R - 90 << "\" y=\"" << legend_y << "\" fill=\"" << colour
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
  };
  series([](const SweepPoint& p) { return p.accuracy; }, "#1f77b4", "accuracy", T + 14);
  series([](const SweepPoint& p) { return p.f_score; }, "#d62728", "F-score", T + 30);
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::string& path, std::string_view text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace scriptor::eval
