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

#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

#include "common/error.hpp"
#include "common/files.hpp"
#include "eval/eval.hpp"

namespace ascnet::eval {

std::vector<int> PredictionDump::truth() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.true_label);
  return out;
}

std::vector<Distribution> PredictionDump::predictions() const {
  std::vector<Distribution> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.probs);
  return out;
}

std::string encode_dump(const PredictionDump& dump) {
  std::string out;
  for (const PredictionRow& r : dump.rows) {
    require(r.clip_id.find_first_of(",\r\n") == std::string::npos && !r.clip_id.empty(),
            ErrorCode::kArgument, "prediction dump: invalid clip id '" + r.clip_id + "'");
    require(r.true_label >= 0 && static_cast<std::size_t>(r.true_label) < kNumClasses,
            ErrorCode::kArgument, "prediction dump: label out of range");
    out += r.clip_id;
    out += ',';
    out += kSceneLabels[static_cast<std::size_t>(r.true_label)];
    for (double p : r.probs) out += fmt::format(",{}", p);
    out += '\n';
  }
  return out;
}

PredictionDump parse_dump(std::string_view text, std::string name) {
  PredictionDump dump;
  dump.name = std::move(name);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto bad = [&](const std::string& what) {
      fail(ErrorCode::kParse, fmt::format("prediction dump '{}' line {}: {}", dump.name, line_no, what));
    };
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 2 + kNumClasses) {
      bad(fmt::format("expected {} fields, found {}", 2 + kNumClasses, fields.size()));
    }
    PredictionRow row;
    row.clip_id = std::string(fields[0]);
    if (row.clip_id.empty()) bad("empty clip id");
    const auto label = scene_index(fields[1]);
    if (!label) bad("unknown scene label '" + std::string(fields[1]) + "'");
    row.true_label = *label;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const std::string_view f = fields[2 + c];
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), row.probs[c]);
      if (ec != std::errc() || end != f.data() + f.size()) {
        bad("malformed probability '" + std::string(f) + "'");
      }
    }
    dump.rows.push_back(std::move(row));
  }
  return dump;
}

void save_dump(const std::filesystem::path& path, const PredictionDump& dump) {
  write_file_atomic(path, encode_dump(dump));
}

PredictionDump load_dump(const std::filesystem::path& path) {
  std::string name = path.stem().string();
  constexpr std::string_view kSuffix = ".predictions";
  if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
    name.resize(name.size() - kSuffix.size());
  }
  return parse_dump(read_file(path), std::move(name));
}

namespace {

std::string id_list(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += fmt::format(" (+{} more)", ids.size() - shown);
  return out;
}

}  // namespace

std::vector<PredictionDump> align_dumps(std::span<const PredictionDump> dumps) {
  std::vector<PredictionDump> out;
  if (dumps.empty()) return out;
  const PredictionDump& ref = dumps.front();
  std::unordered_map<std::string, std::size_t> ref_index;
  for (std::size_t i = 0; i < ref.rows.size(); ++i) {
    if (!ref_index.emplace(ref.rows[i].clip_id, i).second) {
      fail(ErrorCode::kAlignment,
           "dump '" + ref.name + "' lists clip '" + ref.rows[i].clip_id + "' twice");
    }
  }
  out.push_back(ref);
  for (std::size_t d = 1; d < dumps.size(); ++d) {
    const PredictionDump& cur = dumps[d];
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < cur.rows.size(); ++i) {
      if (!index.emplace(cur.rows[i].clip_id, i).second) {
        fail(ErrorCode::kAlignment,
             "dump '" + cur.name + "' lists clip '" + cur.rows[i].clip_id + "' twice");
      }
    }
    std::vector<std::string> missing, extra;
    for (const auto& r : ref.rows) {
      if (!index.contains(r.clip_id)) missing.push_back(r.clip_id);
    }
    for (const auto& r : cur.rows) {
      if (!ref_index.contains(r.clip_id)) extra.push_back(r.clip_id);
    }
    if (!missing.empty() || !extra.empty()) {
      std::string msg = "clip sets differ between '" + ref.name + "' and '" + cur.name + "'";
      if (!missing.empty()) msg += "; missing from '" + cur.name + "': " + id_list(missing);
      if (!extra.empty()) msg += "; missing from '" + ref.name + "': " + id_list(extra);
      fail(ErrorCode::kAlignment, msg);
    }
    PredictionDump aligned;
    aligned.name = cur.name;
    for (const auto& r : ref.rows) {
      const PredictionRow& row = cur.rows[index.at(r.clip_id)];
      if (row.true_label != r.true_label) {
        fail(ErrorCode::kAlignment, "clip '" + r.clip_id + "' has different true labels in '" +
                                        ref.name + "' and '" + cur.name + "'");
      }
      aligned.rows.push_back(row);
    }
    out.push_back(std::move(aligned));
  }
  return out;
}

}  // namespace ascnet::eval
