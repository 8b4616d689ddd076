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

#include <fmt/format.h>

#include "audio/audio_clip.hpp"
#include "common/error.hpp"
#include "common/files.hpp"
#include "pipeline/parallel.hpp"
#include "pipeline/pipeline.hpp"

namespace ascnet::pipeline {

namespace fs = std::filesystem;

unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

FeatureStore::FeatureStore(fs::path cache_dir, features::VariantId variant)
    : cache_dir_(std::move(cache_dir)), variant_(variant) {}

fs::path FeatureStore::cache_path(const fs::path& clip) const {
  require(!cache_dir_.empty(), ErrorCode::kState, "feature cache is disabled");
  const std::string_view vname = features::variant(variant_).name();
  const std::string key = fs::absolute(clip).lexically_normal().string() + "|" + std::string(vname);
  return cache_dir_ / fmt::format("{:016x}-{}.lmsf", fnv1a64(key), vname);
}

bool FeatureStore::up_to_date(const fs::path& clip) const {
  if (cache_dir_.empty()) return false;
  std::error_code ec;
  const fs::path cached = cache_path(clip);
  if (!fs::exists(cached, ec)) return false;
  if (!fs::exists(clip, ec)) return true;
  return fs::last_write_time(cached, ec) >= fs::last_write_time(clip, ec);
}

features::LogMelSpectrogram FeatureStore::load(const fs::path& clip, bool* extracted) const {
  if (extracted) *extracted = false;
  const features::FeatureVariant& v = features::variant(variant_);
  if (up_to_date(clip)) {
    try {
      features::LogMelSpectrogram s = features::load_lmsf(cache_path(clip));
      if (s.variant == variant_ && s.data.rows() == v.total_frames && s.data.cols() == v.n_mels) {
        return s;
      }
    } catch (const Error&) {
      // unreadable cache entry: fall through and rebuild it
    }
  }
  std::error_code ec;
  if (!fs::exists(clip, ec)) {
    fail(ErrorCode::kIo, "no cached " + std::string(v.name()) + " features for '" +
                             clip.string() +
                             "' and the audio file does not exist; check the manifest path or "
                             "point the cache directory at previously extracted features");
  }
  features::LogMelSpectrogram s = features::extract(audio::load_wav(clip), variant_);
  if (!cache_dir_.empty()) features::save_lmsf(cache_path(clip), s);
  if (extracted) *extracted = true;
  return s;
}

ExtractReport extract_all(const FeatureStore& store, std::span<const ManifestEntry> clips,
                          unsigned workers) {
  enum class Outcome { kCached, kExtracted, kFailed };
  std::vector<Outcome> outcome(clips.size(), Outcome::kFailed);
  std::vector<std::string> message(clips.size());
  parallel_for(clips.size(), resolve_workers(workers), [&](std::size_t i) {
    try {
      if (store.up_to_date(clips[i].path)) {
        outcome[i] = Outcome::kCached;
        return;
      }
      bool extracted = false;
      store.load(clips[i].path, &extracted);
      outcome[i] = extracted ? Outcome::kExtracted : Outcome::kCached;
    } catch (const std::exception& e) {
      message[i] = e.what();
    }
  });
  ExtractReport report;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::kCached: ++report.cached; break;
      case Outcome::kExtracted: ++report.extracted; break;
      case Outcome::kFailed: report.failures.push_back({clips[i].path, message[i]}); break;
    }
  }
  return report;
}

}  // namespace ascnet::pipeline
