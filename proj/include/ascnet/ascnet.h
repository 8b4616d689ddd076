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

#ifndef ASCNET_ASCNET_H_
#define ASCNET_ASCNET_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(ASCNET_BUILDING_LIBRARY)
#define ASCNET_API __attribute__((visibility("default")))
#else
#define ASCNET_API
#endif

#define ASC_NUM_CLASSES 15

typedef enum asc_status {
  ASC_OK = 0,
  ASC_ERR_ARGUMENT = 1,
  ASC_ERR_DECODE = 2,
  ASC_ERR_UNSUPPORTED_FORMAT = 3,
  ASC_ERR_SHAPE = 4,
  ASC_ERR_STATE = 5,
  ASC_ERR_OPTIMIZER = 6,
  ASC_ERR_PARSE = 7,
  ASC_ERR_FORMAT = 8,
  ASC_ERR_SELECTION = 9,
  ASC_ERR_ALIGNMENT = 10,
  ASC_ERR_IO = 11,
  ASC_ERR_USAGE = 12,
  ASC_ERR_INVARIANT = 13,
  ASC_ERR_INTERNAL = 99
} asc_status;

ASCNET_API const char* asc_version(void);
ASCNET_API const char* asc_status_name(asc_status status);
/* Message for the last failed call on this thread; "" after success. */
ASCNET_API const char* asc_last_error(void);
/* Scene label for a class index, or NULL when out of range. */
ASCNET_API const char* asc_class_label(int index);
/* Releases strings returned through char** outputs. */
ASCNET_API void asc_free(void* ptr);
/* "debug", "info", "warn", "error" or "off". Logs go to stderr. */
ASCNET_API asc_status asc_set_log_level(const char* level);

/* ---- feature extraction ---- */

typedef struct asc_extract_report {
  size_t extracted;
  size_t cached;
  size_t failed;
  char* failures; /* "path: message" lines, NULL when none; asc_free */
} asc_extract_report;

/* Caches features for every manifest clip; workers == 0 uses every core.
   Returns ASC_ERR_IO when any clip failed (the report lists them). */
ASCNET_API asc_status asc_extract(const char* manifest, const char* variant,
                                  const char* cache_dir, unsigned workers,
                                  asc_extract_report* report);

/* ---- training ---- */

typedef struct asc_train_summary {
  char* checkpoint; /* asc_free */
  char* history;    /* asc_free */
  int epochs;
  int best_epoch;
  double best_val_macro_acc; /* fraction */
} asc_train_summary;

ASCNET_API asc_status asc_train(const char* config_path, asc_train_summary* summary);

/* ---- models ---- */

typedef struct asc_model asc_model;

typedef struct asc_model_info {
  const char* name;    /* owned by the model */
  const char* variant; /* "v1" or "v2" */
  size_t parameters;
  int segments_per_clip;
} asc_model_info;

ASCNET_API asc_status asc_model_load(const char* checkpoint, asc_model** model);
ASCNET_API void asc_model_free(asc_model* model);
ASCNET_API asc_status asc_model_get_info(const asc_model* model, asc_model_info* info);
/* Canonical model specification text; asc_free. */
ASCNET_API asc_status asc_model_spec(const asc_model* model, char** text);

typedef struct asc_prediction {
  int label;
  double probs[ASC_NUM_CLASSES];
  double duration_s;   /* of the input file */
  int length_adjusted; /* nonzero when repeated or truncated to 10 s */
} asc_prediction;

/* Full front end for the model's feature variant, then fused segment
   predictions. */
ASCNET_API asc_status asc_predict_wav(const asc_model* model, const char* wav_path,
                                      asc_prediction* prediction);

/* ---- evaluation ---- */

typedef struct asc_evaluation {
  size_t clips;
  double macro_acc; /* fraction */
  double class_acc[ASC_NUM_CLASSES];
  int class_present[ASC_NUM_CLASSES];
  size_t confusion[ASC_NUM_CLASSES][ASC_NUM_CLASSES];
  char* dump_path;   /* asc_free */
  char* report_text; /* asc_free */
} asc_evaluation;

/* Writes <out_dir>/<name>.predictions.csv, <name>.confusion.txt,
   <name>.report.txt and <name>.report.csv where name is the checkpoint
   file stem. cache_dir may be NULL or "" to extract without caching. */
ASCNET_API asc_status asc_evaluate(const char* checkpoint, const char* manifest,
                                   const char* cache_dir, const char* out_dir,
                                   unsigned workers, asc_evaluation* evaluation);

/* ---- ensembles and reports ---- */

typedef struct asc_ensemble_result {
  size_t member_count;
  char* members;     /* selected dump names, one per line; asc_free */
  double diversity;  /* mean pairwise argmax disagreement */
  double macro_acc;  /* fraction */
  char* report_text; /* members and ensemble, one column each; asc_free */
} asc_ensemble_result;

/* Selects up to k members among dumps whose macro accuracy exceeds
   baseline_percent and combines them by geometric mean. When out_dump is
   non-NULL the combined predictions are written there. */
ASCNET_API asc_status asc_ensemble(const char* const* dumps, size_t count,
                                   double baseline_percent, size_t k, const char* out_dump,
                                   asc_ensemble_result* result);

/* Class-wise accuracy table (text and CSV) and confusion grids for the
   given prediction dumps; each output may be NULL. */
ASCNET_API asc_status asc_report(const char* const* dumps, size_t count, char** text,
                                 char** csv);

#ifdef __cplusplus
}
#endif

#endif /* ASCNET_ASCNET_H_ */
