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

#include "soilml/soilml.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "soilml/config.hpp"
#include "soilml/error.hpp"
#include "soilml/pipeline.hpp"

struct soilml_config {
  soilml::RunConfig cfg;
};

struct soilml_dataset {
  soilml::Dataset ds;
};

struct soilml_model {
  soilml::FittedModel model;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_code;

soilml_status record(soilml::ErrorKind kind, std::string code, std::string message) {
  g_code = std::move(code);
  g_message = std::move(message);
  return static_cast<soilml_status>(static_cast<int>(kind));
}

template <class F>
soilml_status guarded(F&& body) {
  try {
    g_code.clear();
    g_message.clear();
    body();
    return SOILML_OK;
  } catch (const soilml::Error& e) {
    return record(e.kind(), soilml::to_string(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(soilml::ErrorKind::Internal, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return record(soilml::ErrorKind::Internal, "Internal", e.what());
  }
}

std::string opt(const char* s) { return s ? std::string(s) : std::string(); }

std::string req(const char* s, const char* what) {
  if (!s || !*s) {
    soilml::fail(soilml::ErrorCode::InvalidArgument, std::string(what) + " is required");
  }
  return s;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void emit(char** report, const std::string& text) {
  if (report) *report = dup(text);
}

template <class T>
void check_handle(const T* h, const char* what) {
  if (!h) soilml::fail(soilml::ErrorCode::InvalidArgument, std::string(what) + " handle is null");
}

}  // namespace

extern "C" {

const char* soilml_version(void) { return "1.0.0"; }
const char* soilml_last_error(void) { return g_message.c_str(); }
const char* soilml_last_error_code(void) { return g_code.c_str(); }
void soilml_string_free(char* s) { std::free(s); }

soilml_status soilml_config_new(soilml_config** out) {
  return guarded([&] {
    check_handle(out, "output");
    *out = new soilml_config{};
  });
}

void soilml_config_free(soilml_config* cfg) { delete cfg; }

soilml_status soilml_config_load(soilml_config* cfg, const char* path) {
  return guarded([&] {
    check_handle(cfg, "config");
    soilml::load_config_file(cfg->cfg, req(path, "config path"));
  });
}

soilml_status soilml_config_set(soilml_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    check_handle(cfg, "config");
    cfg->cfg.set(req(key, "key"), opt(value));
  });
}

soilml_status soilml_config_apply(soilml_config* cfg, const char* assignment) {
  return guarded([&] {
    check_handle(cfg, "config");
    cfg->cfg.apply_override(req(assignment, "assignment"));
  });
}

soilml_status soilml_config_get(const soilml_config* cfg, const char* key, char** out) {
  return guarded([&] {
    check_handle(cfg, "config");
    check_handle(out, "output");
    *out = dup(cfg->cfg.get(req(key, "key")));
  });
}

soilml_status soilml_config_dump(const soilml_config* cfg, char** out) {
  return guarded([&] {
    check_handle(cfg, "config");
    check_handle(out, "output");
    std::string s;
    for (const auto& [k, v] : cfg->cfg.entries()) s += k + " = " + v + "\n";
    *out = dup(s);
  });
}

soilml_status soilml_dataset_load(const char* path, soilml_dataset** out) {
  return guarded([&] {
    check_handle(out, "output");
    *out = new soilml_dataset{soilml::read_csv_file(req(path, "dataset path"))};
  });
}

void soilml_dataset_free(soilml_dataset* ds) { delete ds; }

size_t soilml_dataset_rows(const soilml_dataset* ds) { return ds ? ds->ds.size() : 0; }

soilml_status soilml_model_load(const char* path, soilml_model** out) {
  return guarded([&] {
    check_handle(out, "output");
    *out = new soilml_model{soilml::load_model_file(req(path, "model path"))};
  });
}

void soilml_model_free(soilml_model* m) { delete m; }

const char* soilml_model_family(const soilml_model* m) {
  return m ? soilml::family_name(m->model.family()).data() : "";
}

soilml_status soilml_model_predict(const soilml_model* m, const soilml_dataset* ds, double* out,
                                   size_t n) {
  return guarded([&] {
    check_handle(m, "model");
    check_handle(ds, "dataset");
    if (n < ds->ds.size() || (!out && ds->ds.size() > 0)) {
      soilml::fail(soilml::ErrorCode::InvalidArgument, "output buffer smaller than dataset");
    }
    const auto pred = m->model.predict(ds->ds);
    std::copy(pred.begin(), pred.end(), out);
  });
}

soilml_status soilml_cmd_simulate(const soilml_config* cfg, const char* out_csv, char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    emit(report, soilml::cmd_simulate(cfg->cfg, req(out_csv, "output path")));
  });
}

soilml_status soilml_cmd_train(const soilml_config* cfg, const char* data, const char* family,
                               const char* features, int allow_partial, const char* model_out,
                               char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    soilml::ModelChoice choice{req(family, "model family"),
                               features && *features ? features : "all", allow_partial != 0};
    emit(report, soilml::cmd_train(cfg->cfg, req(data, "dataset path"), choice,
                                   req(model_out, "model output path")));
  });
}

soilml_status soilml_cmd_predict(const soilml_config* cfg, const char* model_path,
                                 const char* data, const char* out_csv, char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    emit(report, soilml::cmd_predict(cfg->cfg, req(model_path, "model path"),
                                     req(data, "dataset path"), opt(out_csv)));
  });
}

soilml_status soilml_cmd_crossval(const soilml_config* cfg, const char* data, const char* family,
                                  const char* features, int allow_partial,
                                  const char* predictions_out, char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    soilml::ModelChoice choice{req(family, "model family"),
                               features && *features ? features : "all", allow_partial != 0};
    emit(report, soilml::cmd_crossval(cfg->cfg, req(data, "dataset path"), choice,
                                      opt(predictions_out)));
  });
}

soilml_status soilml_cmd_fieldcap(const soilml_config* cfg, const char* data,
                                  const char* model_path, const char* rain_path, char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    emit(report, soilml::cmd_fieldcap(cfg->cfg, req(data, "dataset path"), opt(model_path),
                                      opt(rain_path)));
  });
}

soilml_status soilml_cmd_compare(const soilml_config* cfg, const char* data,
                                 const char* suite_path, const char* rain_path,
                                 const char* csv_out, const char* script_out, char** report) {
  return guarded([&] {
    check_handle(cfg, "config");
    emit(report, soilml::cmd_compare(cfg->cfg, req(data, "dataset path"), opt(suite_path),
                                     opt(rain_path), {opt(csv_out), opt(script_out)}));
  });
}

}  // extern "C"
