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

#include "ascnet/ascnet.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <new>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "audio/audio_clip.hpp"
#include "common/error.hpp"
#include "common/files.hpp"
#include "common/scene_classes.hpp"
#include "eval/eval.hpp"
#include "features/features.hpp"
#include "models/model.hpp"
#include "pipeline/pipeline.hpp"

struct asc_model {
  ascnet::models::Model model;
  std::string name;
  std::string variant;
};

namespace {

namespace fs = std::filesystem;
using ascnet::Error;
using ascnet::ErrorCode;

thread_local std::string g_last_error;

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("ascnet");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  });
}

template <typename Fn>
asc_status guard(Fn&& fn) {
  try {
    init_logging();
    fn();
    g_last_error.clear();
    return ASC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<asc_status>(static_cast<int>(e.code()));
  } catch (const fs::filesystem_error& e) {
    g_last_error = e.what();
    return ASC_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ASC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ASC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ASC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) ascnet::fail(ErrorCode::kArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fs::path optional_path(const char* p) { return p ? fs::path(p) : fs::path(); }

std::vector<ascnet::eval::PredictionDump> load_dumps(const char* const* dumps, size_t count) {
  need(dumps, "dumps");
  std::vector<ascnet::eval::PredictionDump> out;
  for (size_t i = 0; i < count; ++i) {
    need(dumps[i], "dump path");
    out.push_back(ascnet::eval::load_dump(dumps[i]));
  }
  return out;
}

ascnet::eval::ConfusionMatrix dump_confusion(const ascnet::eval::PredictionDump& d) {
  return ascnet::eval::confusion(d.truth(), d.predictions());
}

std::string confusion_sections(std::span<const ascnet::eval::ModelResult> results) {
  std::string out;
  for (const auto& r : results) {
    out += "\nConfusion matrix: " + r.name + "\n";
    out += ascnet::eval::confusion_text(r.cm);
  }
  return out;
}

}  // namespace

extern "C" {

const char* asc_version(void) { return ASCNET_VERSION; }

const char* asc_status_name(asc_status status) {
  switch (status) {
    case ASC_OK: return "ok";
    case ASC_ERR_INTERNAL: return "internal error";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= 13) {
    return ascnet::error_code_name(static_cast<ErrorCode>(code)).data();
  }
  return "unknown status";
}

const char* asc_last_error(void) { return g_last_error.c_str(); }

const char* asc_class_label(int index) {
  if (index < 0 || index >= static_cast<int>(ascnet::kNumClasses)) return nullptr;
  return ascnet::kSceneLabels[static_cast<size_t>(index)].data();
}

void asc_free(void* ptr) { std::free(ptr); }

asc_status asc_set_log_level(const char* level) {
  return guard([&] {
    need(level, "level");
    const std::string l(level);
    spdlog::level::level_enum e;
    if (l == "debug") e = spdlog::level::debug;
    else if (l == "info") e = spdlog::level::info;
    else if (l == "warn") e = spdlog::level::warn;
    else if (l == "error") e = spdlog::level::err;
    else if (l == "off") e = spdlog::level::off;
    else ascnet::fail(ErrorCode::kUsage, "unknown log level '" + l + "'");
    spdlog::set_level(e);
  });
}

asc_status asc_extract(const char* manifest, const char* variant, const char* cache_dir,
                       unsigned workers, asc_extract_report* report) {
  return guard([&] {
    need(manifest, "manifest");
    need(variant, "variant");
    need(report, "report");
    *report = {};
    if (cache_dir == nullptr || *cache_dir == '\0') {
      ascnet::fail(ErrorCode::kArgument, "extract: a cache directory is required");
    }
    const auto id = ascnet::features::parse_variant(variant);
    const auto m = ascnet::pipeline::load_manifest(manifest);
    const ascnet::pipeline::FeatureStore store(cache_dir, id);
    const auto r = ascnet::pipeline::extract_all(store, m.entries, workers);
    report->extracted = r.extracted;
    report->cached = r.cached;
    report->failed = r.failures.size();
    if (!r.failures.empty()) {
      std::string lines;
      for (const auto& f : r.failures) lines += f.clip.string() + ": " + f.message + "\n";
      report->failures = dup_string(lines);
      ascnet::fail(ErrorCode::kIo, std::to_string(r.failures.size()) + " of " +
                                       std::to_string(m.entries.size()) +
                                       " clip(s) failed to extract");
    }
  });
}

asc_status asc_train(const char* config_path, asc_train_summary* summary) {
  return guard([&] {
    need(config_path, "config path");
    need(summary, "summary");
    *summary = {};
    const auto cfg = ascnet::pipeline::load_config(config_path);
    const auto run = ascnet::pipeline::run_training(cfg);
    const auto& best = run.record.epochs.at(static_cast<size_t>(run.record.best_epoch));
    summary->epochs = static_cast<int>(run.record.epochs.size());
    summary->best_epoch = run.record.best_epoch;
    summary->best_val_macro_acc = best.val_macro_acc;
    summary->checkpoint = dup_string(run.checkpoint.string());
    summary->history = dup_string(run.history.string());
  });
}

asc_status asc_model_load(const char* checkpoint, asc_model** model) {
  return guard([&] {
    need(checkpoint, "checkpoint");
    need(model, "model");
    *model = nullptr;
    auto m = ascnet::models::load_checkpoint(checkpoint);
    const std::string name = m.spec().name;
    const std::string variant(ascnet::features::variant(m.spec().variant).name());
    *model = new asc_model{std::move(m), name, variant};
  });
}

void asc_model_free(asc_model* model) { delete model; }

asc_status asc_model_get_info(const asc_model* model, asc_model_info* info) {
  return guard([&] {
    need(model, "model");
    need(info, "info");
    info->name = model->name.c_str();
    info->variant = model->variant.c_str();
    info->parameters = ascnet::models::param_count(model->model.spec());
    info->segments_per_clip = model->model.variant().n_segments;
  });
}

asc_status asc_model_spec(const asc_model* model, char** text) {
  return guard([&] {
    need(model, "model");
    need(text, "text");
    *text = dup_string(model->model.spec().to_text());
  });
}

asc_status asc_predict_wav(const asc_model* model, const char* wav_path,
                           asc_prediction* prediction) {
  return guard([&] {
    need(model, "model");
    need(wav_path, "wav path");
    need(prediction, "prediction");
    *prediction = {};
    const auto raw = ascnet::audio::load_wav(wav_path);
    prediction->duration_s = raw.duration_seconds();
    bool adjusted = false;
    const auto fitted = ascnet::audio::fit_length(
        raw, static_cast<size_t>(raw.sample_rate) * ascnet::features::kClipSeconds, &adjusted);
    prediction->length_adjusted = adjusted ? 1 : 0;
    const auto& m = model->model;
    const auto spec = ascnet::features::extract(fitted, m.spec().variant);
    const auto segments = ascnet::features::segment(spec, fs::path(wav_path).filename().string());
    const auto d = ascnet::eval::predict_clip(m, segments);
    for (size_t c = 0; c < ascnet::kNumClasses; ++c) prediction->probs[c] = d[c];
    prediction->label = ascnet::eval::argmax(d);
  });
}

asc_status asc_evaluate(const char* checkpoint, const char* manifest, const char* cache_dir,
                        const char* out_dir, unsigned workers, asc_evaluation* evaluation) {
  return guard([&] {
    need(checkpoint, "checkpoint");
    need(manifest, "manifest");
    need(out_dir, "output directory");
    need(evaluation, "evaluation");
    *evaluation = {};
    const auto ev = ascnet::pipeline::evaluate_checkpoint(checkpoint, manifest,
                                                          optional_path(cache_dir), workers);
    const std::string name = ev.dump.name;
    const fs::path out(out_dir);
    const fs::path dump_path = out / (name + ".predictions.csv");
    ascnet::eval::save_dump(dump_path, ev.dump);
    const ascnet::eval::ModelResult result{name, ev.cm};
    const std::span<const ascnet::eval::ModelResult> one(&result, 1);
    const std::string text = ascnet::eval::report_text(one);
    ascnet::write_file_atomic(out / (name + ".confusion.txt"), ascnet::eval::confusion_text(ev.cm));
    ascnet::write_file_atomic(out / (name + ".report.txt"), text + confusion_sections(one));
    ascnet::write_file_atomic(out / (name + ".report.csv"), ascnet::eval::report_csv(one));

    evaluation->clips = ev.dump.rows.size();
    evaluation->macro_acc = ascnet::eval::macro_accuracy(ev.cm);
    const auto acc = ascnet::eval::class_accuracy(ev.cm);
    for (size_t c = 0; c < ascnet::kNumClasses; ++c) {
      evaluation->class_present[c] = acc[c].has_value() ? 1 : 0;
      evaluation->class_acc[c] = acc[c].value_or(0.0);
      for (size_t p = 0; p < ascnet::kNumClasses; ++p) {
        evaluation->confusion[c][p] = ev.cm.counts[c][p];
      }
    }
    evaluation->dump_path = dup_string(dump_path.string());
    evaluation->report_text = dup_string(text);
  });
}

asc_status asc_ensemble(const char* const* dumps, size_t count, double baseline_percent,
                        size_t k, const char* out_dump, asc_ensemble_result* result) {
  return guard([&] {
    need(result, "result");
    *result = {};
    if (count < 2) ascnet::fail(ErrorCode::kArgument, "ensemble: at least two dumps required");
    const auto aligned = ascnet::eval::align_dumps(load_dumps(dumps, count));
    std::vector<ascnet::eval::Candidate> candidates;
    for (const auto& d : aligned) {
      candidates.push_back({d.name, d.predictions(), ascnet::eval::macro_accuracy(dump_confusion(d))});
    }
    const auto sel = ascnet::eval::select_ensemble(candidates, baseline_percent / 100.0, k);

    ascnet::eval::PredictionDump combined;
    combined.name = "ensemble";
    const auto& ref = aligned.front();
    for (size_t i = 0; i < ref.rows.size(); ++i) {
      std::vector<ascnet::eval::Distribution> members;
      for (size_t m : sel.members) members.push_back(aligned[m].rows[i].probs);
      combined.rows.push_back({ref.rows[i].clip_id, ref.rows[i].true_label,
                               ascnet::eval::ensemble_geomean(members)});
    }
    if (out_dump != nullptr && *out_dump != '\0') ascnet::eval::save_dump(out_dump, combined);

    std::vector<ascnet::eval::ModelResult> table;
    std::string names;
    for (size_t m : sel.members) {
      table.push_back({aligned[m].name, dump_confusion(aligned[m])});
      names += aligned[m].name + "\n";
    }
    const auto cm = dump_confusion(combined);
    table.push_back({"ensemble", cm});
    result->member_count = sel.members.size();
    result->diversity = sel.diversity;
    result->macro_acc = ascnet::eval::macro_accuracy(cm);
    result->members = dup_string(names);
    result->report_text = dup_string(ascnet::eval::report_text(table));
  });
}

asc_status asc_report(const char* const* dumps, size_t count, char** text, char** csv) {
  return guard([&] {
    if (text) *text = nullptr;
    if (csv) *csv = nullptr;
    if (count == 0) ascnet::fail(ErrorCode::kArgument, "report: at least one dump required");
    std::vector<ascnet::eval::ModelResult> results;
    for (const auto& d : load_dumps(dumps, count)) results.push_back({d.name, dump_confusion(d)});
    const std::string t = ascnet::eval::report_text(results) + confusion_sections(results);
    const std::string c = ascnet::eval::report_csv(results);
    if (text) *text = dup_string(t);
    if (csv) *csv = dup_string(c);
  });
}

}  // extern "C"
