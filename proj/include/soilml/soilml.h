/*
 * Copyright (c) 2026, The soilml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the soilml library.
 *
 * Objects are opaque handles created by *_new / *_load and released by the
 * matching *_free. Every fallible call returns a soilml_status; on failure
 * soilml_last_error() describes the problem for the calling thread. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with soilml_string_free().
 */
#ifndef SOILML_SOILML_H
#define SOILML_SOILML_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SOILML_BUILDING_LIBRARY)
#    define SOILML_API __declspec(dllexport)
#  else
#    define SOILML_API __declspec(dllimport)
#  endif
#else
#  define SOILML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum soilml_status {
  SOILML_OK = 0,
  SOILML_ERR_INTERNAL = 1,
  SOILML_ERR_CONFIG = 2,
  SOILML_ERR_IO = 3,
  SOILML_ERR_TRAINING = 4,
  SOILML_ERR_ESTIMATION = 5
} soilml_status;

typedef struct soilml_config soilml_config;
typedef struct soilml_dataset soilml_dataset;
typedef struct soilml_model soilml_model;

SOILML_API const char* soilml_version(void);
/* Message of the last failed call on this thread; "" when none. */
SOILML_API const char* soilml_last_error(void);
/* Symbolic reason of the last failure, e.g. "NoQuiescentWindow". */
SOILML_API const char* soilml_last_error_code(void);
SOILML_API void soilml_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */
SOILML_API soilml_status soilml_config_new(soilml_config** out);
SOILML_API void soilml_config_free(soilml_config* cfg);
/* Reads `section.key = value` lines; later calls override earlier ones. */
SOILML_API soilml_status soilml_config_load(soilml_config* cfg, const char* path);
SOILML_API soilml_status soilml_config_set(soilml_config* cfg, const char* key, const char* value);
/* "section.key=value". */
SOILML_API soilml_status soilml_config_apply(soilml_config* cfg, const char* assignment);
SOILML_API soilml_status soilml_config_get(const soilml_config* cfg, const char* key, char** out);
/* Every key with its current value, one `key = value` per line. */
SOILML_API soilml_status soilml_config_dump(const soilml_config* cfg, char** out);

/* ---- datasets ----------------------------------------------------------- */
SOILML_API soilml_status soilml_dataset_load(const char* path, soilml_dataset** out);
SOILML_API void soilml_dataset_free(soilml_dataset* ds);
SOILML_API size_t soilml_dataset_rows(const soilml_dataset* ds);

/* ---- models ------------------------------------------------------------- */
SOILML_API soilml_status soilml_model_load(const char* path, soilml_model** out);
SOILML_API void soilml_model_free(soilml_model* m);
/* Short family tag: "svr", "rf", "gbr" or "mlp". Static storage. */
SOILML_API const char* soilml_model_family(const soilml_model* m);
/* Writes soilml_dataset_rows(ds) predictions into `out` (capacity `n`). */
SOILML_API soilml_status soilml_model_predict(const soilml_model* m, const soilml_dataset* ds,
                                              double* out, size_t n);

/* ---- commands ----------------------------------------------------------- *
 * Each writes its terminal report to *report (may be NULL to discard).
 * Optional path arguments accept NULL or "".
 */
SOILML_API soilml_status soilml_cmd_simulate(const soilml_config* cfg, const char* out_csv,
                                             char** report);
SOILML_API soilml_status soilml_cmd_train(const soilml_config* cfg, const char* data,
                                          const char* family, const char* features,
                                          int allow_partial, const char* model_out,
                                          char** report);
SOILML_API soilml_status soilml_cmd_predict(const soilml_config* cfg, const char* model_path,
                                            const char* data, const char* out_csv,
                                            char** report);
SOILML_API soilml_status soilml_cmd_crossval(const soilml_config* cfg, const char* data,
                                             const char* family, const char* features,
                                             int allow_partial, const char* predictions_out,
                                             char** report);
SOILML_API soilml_status soilml_cmd_fieldcap(const soilml_config* cfg, const char* data,
                                             const char* model_path, const char* rain_path,
                                             char** report);
SOILML_API soilml_status soilml_cmd_compare(const soilml_config* cfg, const char* data,
                                            const char* suite_path, const char* rain_path,
                                            const char* csv_out, const char* script_out,
                                            char** report);

#ifdef __cplusplus
}
#endif

#endif /* SOILML_SOILML_H */
