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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ascnet/ascnet.h"

namespace {

namespace fs = std::filesystem;

constexpr const char* kCacheEnv = "ASCNET_CACHE_DIR";

int report_failure(asc_status status) {
  std::cerr << "error (" << asc_status_name(status) << "): " << asc_last_error() << "\n";
  return static_cast<int>(status);
}

std::string default_cache_dir() {
  const char* env = std::getenv(kCacheEnv);
  return env ? env : "";
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
  return buf;
}

bool write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

struct ExtractArgs {
  std::string manifest, variant, cache;
  unsigned workers = 0;
};

int run_extract(const ExtractArgs& a) {
  if (a.cache.empty()) {
    std::cerr << "error: no cache directory (pass --cache or set " << kCacheEnv << ")\n";
    return ASC_ERR_USAGE;
  }
  asc_extract_report r{};
  const asc_status s =
      asc_extract(a.manifest.c_str(), a.variant.c_str(), a.cache.c_str(), a.workers, &r);
  if (s == ASC_OK || r.failed > 0) {
    std::cout << "extracted " << r.extracted << ", up to date " << r.cached << ", failed "
              << r.failed << "\n";
  }
  if (r.failures) {
    std::cerr << r.failures;
    asc_free(r.failures);
  }
  return s == ASC_OK ? 0 : report_failure(s);
}

int run_train(const std::string& config) {
  asc_train_summary sum{};
  const asc_status s = asc_train(config.c_str(), &sum);
  if (s != ASC_OK) return report_failure(s);
  std::cout << "best epoch " << sum.best_epoch + 1 << " of " << sum.epochs
            << ", validation macro accuracy " << percent(sum.best_val_macro_acc) << "%\n"
            << "checkpoint: " << sum.checkpoint << "\n"
            << "history: " << sum.history << "\n";
  asc_free(sum.checkpoint);
  asc_free(sum.history);
  return 0;
}

struct EvaluateArgs {
  std::string checkpoint, manifest, out, cache;
  unsigned workers = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  asc_evaluation ev{};
  const asc_status s = asc_evaluate(a.checkpoint.c_str(), a.manifest.c_str(), a.cache.c_str(),
                                    a.out.c_str(), a.workers, &ev);
  if (s != ASC_OK) return report_failure(s);
  std::cout << ev.report_text << "macro accuracy: " << percent(ev.macro_acc) << "% over "
            << ev.clips << " clips\n"
            << "predictions: " << ev.dump_path << "\n";
  asc_free(ev.dump_path);
  asc_free(ev.report_text);
  return 0;
}

struct EnsembleArgs {
  std::vector<std::string> dumps;
  double baseline = 0.0;
  std::size_t k = 3;
  std::string out;
};

int run_ensemble(const EnsembleArgs& a) {
  const auto paths = c_strings(a.dumps);
  asc_ensemble_result r{};
  const asc_status s = asc_ensemble(paths.data(), paths.size(), a.baseline, a.k,
                                    a.out.empty() ? nullptr : a.out.c_str(), &r);
  if (s != ASC_OK) return report_failure(s);
  std::cout << "members (" << r.member_count << "):\n" << r.members
            << "mean pairwise disagreement: " << r.diversity << "\n\n"
            << r.report_text << "ensemble macro accuracy: " << percent(r.macro_acc) << "%\n";
  asc_free(r.members);
  asc_free(r.report_text);
  return 0;
}

int run_predict(const std::string& checkpoint, const std::string& wav) {
  asc_model* model = nullptr;
  asc_status s = asc_model_load(checkpoint.c_str(), &model);
  if (s != ASC_OK) return report_failure(s);
  asc_prediction p{};
  s = asc_predict_wav(model, wav.c_str(), &p);
  asc_model_free(model);
  if (s != ASC_OK) return report_failure(s);
  if (p.length_adjusted) {
    std::cerr << "warning: " << wav << " lasts " << p.duration_s << " s; "
              << (p.duration_s < 10.0 ? "repeated" : "truncated") << " to 10 s\n";
  }
  std::cout << "label: " << asc_class_label(p.label) << "\n";
  for (int c = 0; c < ASC_NUM_CLASSES; ++c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-18s %.6f\n", asc_class_label(c), p.probs[c]);
    std::cout << buf;
  }
  return 0;
}

int run_report(const std::vector<std::string>& dumps, const std::string& out) {
  const auto paths = c_strings(dumps);
  char* text = nullptr;
  char* csv = nullptr;
  const asc_status s = asc_report(paths.data(), paths.size(), &text, &csv);
  if (s != ASC_OK) return report_failure(s);
  const std::string t = text, c = csv;
  asc_free(text);
  asc_free(csv);
  fs::path text_path(out), csv_path(out);
  if (text_path.extension() == ".csv") {
    text_path.replace_extension(".txt");
  } else {
    csv_path.replace_extension(".csv");
  }
  if (!write_text(text_path, t) || !write_text(csv_path, c)) {
    std::cerr << "error: cannot write " << text_path << " / " << csv_path << "\n";
    return ASC_ERR_IO;
  }
  std::cout << t << "written: " << text_path.string() << ", " << csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic scene classification with log-mel CNNs"};
  app.set_version_flag("--version", std::string(asc_version()));
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn, error or off")
      ->capture_default_str();

  const std::string cache_default = default_cache_dir();
  int rc = 0;

  ExtractArgs ex;
  ex.cache = cache_default;
  auto* extract = app.add_subcommand("extract", "Cache log-mel features for a manifest");
  extract->add_option("--manifest", ex.manifest, "Clip manifest (path<TAB>label)")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--variant", ex.variant, "Feature variant")
      ->required()
      ->check(CLI::IsMember({"v1", "v2"}));
  extract->add_option("--cache", ex.cache, std::string("Cache directory (default $") + kCacheEnv + ")");
  extract->add_option("--workers", ex.workers, "Worker threads (0 = all cores)");
  extract->callback([&] { rc = run_extract(ex); });

  std::string config;
  auto* train = app.add_subcommand("train", "Train a model from a key=value config file");
  train->add_option("--config", config, "Training config")->required()->check(CLI::ExistingFile);
  train->callback([&] { rc = run_train(config); });

  EvaluateArgs ev;
  ev.cache = cache_default;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on a manifest");
  evaluate->add_option("--checkpoint", ev.checkpoint, "SPCK checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--manifest", ev.manifest, "Clip manifest")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev.out, "Output directory")->required();
  evaluate->add_option("--cache", ev.cache, std::string("Feature cache (default $") + kCacheEnv + ")");
  evaluate->add_option("--workers", ev.workers, "Worker threads (0 = all cores)");
  evaluate->callback([&] { rc = run_evaluate(ev); });

  EnsembleArgs en;
  auto* ensemble = app.add_subcommand("ensemble", "Select and combine models from prediction dumps");
  ensemble->add_option("--dumps", en.dumps, "Prediction dumps (comma separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  ensemble->add_option("--baseline", en.baseline, "Baseline macro accuracy in percent")
      ->required();
  ensemble->add_option("--k", en.k, "Ensemble size")->capture_default_str();
  ensemble->add_option("--out", en.out, "Write the combined prediction dump here");
  ensemble->callback([&] { rc = run_ensemble(en); });

  std::string checkpoint, wav;
  auto* predict = app.add_subcommand("predict", "Classify one WAV file");
  predict->add_option("--checkpoint", checkpoint, "SPCK checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--wav", wav, "Audio file")->required()->check(CLI::ExistingFile);
  predict->callback([&] { rc = run_predict(checkpoint, wav); });

  std::vector<std::string> report_dumps;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Class-wise accuracy table from prediction dumps");
  report->add_option("--dumps", report_dumps, "Prediction dumps (comma separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Output file (text; CSV written alongside)")->required();
  report->callback([&] { rc = run_report(report_dumps, report_out); });

  app.parse_complete_callback([&] {
    if (asc_set_log_level(log_level.c_str()) != ASC_OK) {
      throw CLI::ValidationError("--log-level", asc_last_error());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return rc;
}
