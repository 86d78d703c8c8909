// Copyright 2026 The spinlab Authors
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

// Locale-free number formatting, CSV/JSON writers, a minimal SVG line plot and
// the per-run manifest.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinlab/errors.hpp"

namespace spinlab::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest form is not used on purpose: 17 significant digits round-trip any double
/// and give the same text on every platform.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
  return {buf, res.ptr};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw ContractError("CsvTable: row width does not match header");
    rows_.push_back(values);
  }

  std::string str() const {
    std::string s;
    for (std::size_t c = 0; c < header_.size(); ++c) s += (c ? "," : "") + header_[c];
    s += "\n";
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + format_double(row[c]);
      s += "\n";
    }
    return s;
  }

  void write(const std::filesystem::path& path) const { write_text(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

struct Series {
  std::string label;
  std::string colour;
  std::vector<std::pair<double, double>> points;
};

/// Stacked panels sharing the x axis, each with its own y range. Pure SVG, no scripts
/// or external references.
struct SvgPanel {
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline std::string fixed(double v, int digits = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return {buf, res.ptr};
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

inline std::string svg_plot(const std::string& title, const std::string& x_label, const std::vector<SvgPanel>& panels) {
  constexpr double width = 720, left = 70, right = 20, top = 40, panel_h = 200, gap = 50;
  const double height = top + panels.size() * (panel_h + gap) + 10;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  for (const auto& p : panels)
    for (const auto& s : p.series)
      for (const auto& [x, y] : s.points) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
      }
  if (!(x_hi > x_lo)) {
    x_lo = 0;
    x_hi = 1;
  }
  const double plot_w = width - left - right;
  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fixed(width, 0) + "\" height=\"" +
                  detail::fixed(height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + detail::fixed(width / 2, 0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       detail::escape(title) + "</text>\n";

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& panel = panels[k];
    const double y0 = top + k * (panel_h + gap);
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    for (const auto& ser : panel.series)
      for (const auto& [x, y] : ser.points) {
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    if (!(y_hi > y_lo)) {
      y_lo -= 1;
      y_hi += 1;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    auto sy = [&](double y) { return y0 + panel_h - (y - y_lo) / (y_hi - y_lo) * panel_h; };

    s += "<rect x=\"" + detail::fixed(left) + "\" y=\"" + detail::fixed(y0) + "\" width=\"" + detail::fixed(plot_w) +
         "\" height=\"" + detail::fixed(panel_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double yv = y_lo + (y_hi - y_lo) * t / 4.0;
      const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
      s += "<text x=\"" + detail::fixed(left - 6) + "\" y=\"" + detail::fixed(sy(yv) + 4) +
           "\" text-anchor=\"end\">" + detail::fixed(yv, 3) + "</text>\n";
      s += "<text x=\"" + detail::fixed(sx(xv)) + "\" y=\"" + detail::fixed(y0 + panel_h + 16) +
           "\" text-anchor=\"middle\">" + detail::fixed(xv, 3) + "</text>\n";
    }
    s += "<text x=\"16\" y=\"" + detail::fixed(y0 + panel_h / 2) + "\" transform=\"rotate(-90 16 " +
         detail::fixed(y0 + panel_h / 2) + ")\" text-anchor=\"middle\">" + detail::escape(panel.y_label) + "</text>\n";
    double legend_y = y0 + 16;
    for (const auto& ser : panel.series) {
      s += "<polyline fill=\"none\" stroke=\"" + ser.colour + "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : ser.points) s += detail::fixed(sx(x)) + "," + detail::fixed(sy(y)) + " ";
      s += "\"/>\n";
      s += "<text x=\"" + detail::fixed(width - right - 8) + "\" y=\"" + detail::fixed(legend_y) +
           "\" text-anchor=\"end\" fill=\"" + ser.colour + "\">" + detail::escape(ser.label) + "</text>\n";
      legend_y += 15;
    }
    if (k + 1 == panels.size()) {
      s += "<text x=\"" + detail::fixed(left + plot_w / 2) + "\" y=\"" + detail::fixed(y0 + panel_h + 34) +
           "\" text-anchor=\"middle\">" + detail::escape(x_label) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

/// One per run: command, parameters, seed, version, outputs and timing.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::json parameters)
      : command_(std::move(command)), parameters_(std::move(parameters)), start_(std::chrono::steady_clock::now()) {}

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_output(const std::filesystem::path& p) { outputs_.push_back(p.string()); }
  void set_result(nlohmann::json r) { result_ = std::move(r); }

  nlohmann::json to_json() const {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    nlohmann::json j{{"command", command_},   {"parameters", parameters_}, {"tool", "spinlab"},
                     {"version", kToolVersion}, {"outputs", outputs_},       {"wall_seconds", elapsed},
                     {"finished_unix", static_cast<long long>(now)}};
    j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
    if (!result_.is_null()) j["result"] = result_;
    return j;
  }

  void write(const std::filesystem::path& dir) const { write_json(dir / "manifest.json", to_json()); }

 private:
  std::string command_;
  nlohmann::json parameters_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
  nlohmann::json result_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace spinlab::io
