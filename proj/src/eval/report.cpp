/* Copyright 2026 The ascnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>

#include <fmt/format.h>

#include "common/error.hpp"
#include "eval/eval.hpp"

namespace ascnet::eval {

namespace {

constexpr std::string_view kAverageRow = "Average Accuracy";

std::string percent(double fraction) { return fmt::format("{:.1f}", 100.0 * fraction); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table build_table(std::span<const ModelResult> results) {
  require(!results.empty(), ErrorCode::kArgument, "report: no evaluated models");
  Table t;
  t.header.push_back("Class");
  for (const auto& r : results) t.header.push_back(r.name);
  std::vector<std::array<std::optional<double>, kNumClasses>> acc;
  for (const auto& r : results) acc.push_back(class_accuracy(r.cm));
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<std::string> row{std::string(scene_title(static_cast<int>(c)))};
    for (const auto& a : acc) row.push_back(a[c] ? percent(*a[c]) : std::string());
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> avg{std::string(kAverageRow)};
  for (const auto& r : results) avg.push_back(percent(macro_accuracy(r.cm)));
  t.rows.push_back(std::move(avg));
  return t;
}

}  // namespace

std::string report_text(std::span<const ModelResult> results) {
  const Table t = build_table(results);
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = std::max<std::size_t>(t.header[i].size(), 5);
  for (const auto& row : t.rows) width[0] = std::max(width[0], row[0].size());
  std::string out = fmt::format("{:<{}}", t.header[0], width[0]);
  for (std::size_t i = 1; i < t.header.size(); ++i) out += fmt::format("  {:>{}}", t.header[i], width[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    out += fmt::format("{:<{}}", row[0], width[0]);
    for (std::size_t i = 1; i < row.size(); ++i) {
      out += fmt::format("  {:>{}}", row[i].empty() ? "-" : row[i], width[i]);
    }
    out += '\n';
  }
  return out;
}

std::string report_csv(std::span<const ModelResult> results) {
  const Table t = build_table(results);
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
  return out;
}

std::string confusion_text(const ConfusionMatrix& cm) {
  std::size_t label_w = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    label_w = std::max(label_w, scene_title(static_cast<int>(c)).size());
  }
  std::size_t cell_w = 3;
  for (const auto& row : cm.counts) {
    for (std::size_t v : row) cell_w = std::max(cell_w, fmt::formatted_size("{}", v));
  }
  std::string out = fmt::format("{:<{}}", "true \\ predicted", label_w + 4);
  for (std::size_t c = 0; c < kNumClasses; ++c) out += fmt::format(" {:>{}}", c, cell_w);
  out += '\n';
  for (std::size_t r = 0; r < kNumClasses; ++r) {
    out += fmt::format("{:>2}  {:<{}}", r, scene_title(static_cast<int>(r)), label_w);
    for (std::size_t c = 0; c < kNumClasses; ++c) out += fmt::format(" {:>{}}", cm.counts[r][c], cell_w);
    out += '\n';
  }
  return out;
}

}  // namespace ascnet::eval
