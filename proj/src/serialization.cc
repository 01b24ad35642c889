// src/serialization.cc

// Copyright 2026 The Classroom Acoustics Authors.
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

// JSON encodings of models, configs, lecture records and correlation reports.

#include <cmath>
#include <cstdio>

#include "classroom/error.h"
#include "classroom/models.h"
#include "classroom/pipeline.h"
#include "json.hpp"

namespace classroom {

namespace {

using Json = nlohmann::ordered_json;

Json Parse(const std::string &text, const char *what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

// Runs `body`, turning JSON access errors into kParse.
template <typename F>
auto Decode(const char *what, F &&body) {
  try {
    return body();
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

std::string FormatFixed(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void DumpFixed(const Json &j, int indent, std::string *out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      *out += FormatFixed(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        *out += "[]";
        return;
      }
      *out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        *out += pad;
        DumpFixed(j[i], indent + 2, out);
        *out += i + 1 < j.size() ? ",\n" : "\n";
      }
      *out += close_pad + "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        *out += "{}";
        return;
      }
      *out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        *out += pad + Json(it.key()).dump() + ": ";
        DumpFixed(it.value(), indent + 2, out);
        *out += i + 1 < j.size() ? ",\n" : "\n";
      }
      *out += close_pad + "}";
      return;
    }
    default:
      *out += j.dump();
  }
}

std::string DumpFixed(const Json &j) {
  std::string out;
  DumpFixed(j, 0, &out);
  out += "\n";
  return out;
}

Json StandardizationJson(const Standardization &s) {
  return Json{{"means", s.means}, {"scales", s.scales}};
}

Standardization StandardizationFrom(const Json &j) {
  Standardization s;
  s.means = j.at("means").get<std::vector<double>>();
  s.scales = j.at("scales").get<std::vector<double>>();
  if (s.means.size() != s.scales.size()) {
    throw Error(ErrorCode::kParse, "standardization means and scales differ in length");
  }
  return s;
}

Json TableJson(const ContingencyTable &t) {
  return Json{{"rows", t.row_labels}, {"cols", t.col_labels}, {"counts", t.counts}};
}

Json TestJson(const AssociationTest &t) {
  Json j;
  j["table"] = TableJson(t.table);
  j["chi_square"] = Json{{"statistic", t.chi_square.statistic},
                         {"dof", t.chi_square.dof},
                         {"p_value", t.chi_square.p_value}};
  j["collapsed"] = TableJson(t.collapsed);
  j["proportion_difference"] = t.proportion_difference;
  return j;
}

Json ConfigJson(const AnalysisConfig &c) {
  return Json{{"frame_len_ms", c.frame_len_ms},
              {"overlap", c.overlap},
              {"calibration_offset_db", c.calibration_offset_db},
              {"knn_k", c.knn_k},
              {"gmm_components", c.gmm_components},
              {"seed", c.seed},
              {"speaker_delta_db", c.speaker_delta_db},
              {"level_bin_width_db", c.level_bin_width_db},
              {"low_level_threshold_db", c.low_level_threshold_db},
              {"high_level_threshold_db", c.high_level_threshold_db}};
}

}  // namespace

std::string GmmToJson(const GmmModel &model) {
  Json j;
  j["type"] = "gmm";
  j["M"] = model.components();
  j["weights"] = model.weights;
  j["means"] = model.means;
  j["variances"] = model.variances;
  j["standardization"] = StandardizationJson(model.standardization);
  return j.dump(2) + "\n";
}

GmmModel GmmFromJson(const std::string &text) {
  const Json j = Parse(text, "GMM model");
  GmmModel model = Decode("GMM model", [&] {
    GmmModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.means = j.at("means").get<Matrix>();
    m.variances = j.at("variances").get<Matrix>();
    m.standardization = StandardizationFrom(j.at("standardization"));
    if (j.at("M").get<std::size_t>() != m.weights.size()) {
      throw Error(ErrorCode::kParse, "GMM model: M does not match the weight count");
    }
    return m;
  });
  model.Validate();
  return model;
}

std::string KnnToJson(const KnnModel &model) {
  Json j;
  j["type"] = "knn";
  j["k"] = model.k;
  j["points"] = Json::array();
  for (const auto &p : model.points) j["points"].push_back({p[0], p[1]});
  j["labels"] = Json::array();
  for (NoiseLabel l : model.labels) j["labels"].push_back(std::string(ToString(l)));
  j["standardization"] = StandardizationJson(model.standardization);
  return j.dump(2) + "\n";
}

KnnModel KnnFromJson(const std::string &text) {
  const Json j = Parse(text, "k-NN model");
  KnnModel model = Decode("k-NN model", [&] {
    KnnModel m;
    m.k = j.at("k").get<int>();
    for (const auto &p : j.at("points")) {
      if (p.size() != 2) throw Error(ErrorCode::kParse, "k-NN model: points must be 2-dimensional");
      m.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    for (const auto &l : j.at("labels")) m.labels.push_back(ParseNoiseLabel(l.get<std::string>()));
    m.standardization = StandardizationFrom(j.at("standardization"));
    return m;
  });
  model.Validate();
  return model;
}

std::string ConfigToJson(const AnalysisConfig &config) { return ConfigJson(config).dump(2) + "\n"; }

AnalysisConfig ConfigFromJson(const std::string &text, AnalysisConfig c) {
  const Json j = Parse(text, "config");
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config: expected an object");
  Decode("config", [&] {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string &key = it.key();
      const Json &v = it.value();
      if (key == "frame_len_ms") c.frame_len_ms = v.get<double>();
      else if (key == "overlap") c.overlap = v.get<double>();
      else if (key == "calibration_offset_db") c.calibration_offset_db = v.get<double>();
      else if (key == "knn_k") c.knn_k = v.get<int>();
      else if (key == "gmm_components") c.gmm_components = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "speaker_delta_db") c.speaker_delta_db = v.get<double>();
      else if (key == "level_bin_width_db") c.level_bin_width_db = v.get<double>();
      else if (key == "low_level_threshold_db") c.low_level_threshold_db = v.get<double>();
      else if (key == "high_level_threshold_db") c.high_level_threshold_db = v.get<double>();
      else throw Error(ErrorCode::kUnknownValue, "config: unknown key '" + key + "'");
    }
    return 0;
  });
  c.Validate();
  return c;
}

std::string RecordToJson(const LectureRecord &record, const AnalysisConfig *config) {
  Json j;
  j["lecture_id"] = record.lecture_id;
  j["label"] = std::string(ToString(record.label));
  j["instructor_level_dba"] = record.instructor_level_dba;
  j["speech_level"] = std::string(ToString(record.speech_level));
  j["instructor_gender"] = std::string(ToString(record.instructor_gender));
  j["clips"] = Json::array();
  for (const ClipVerdict &v : record.clips) {
    j["clips"].push_back({{"clip_id", v.clip_id},
                          {"sequence_index", v.sequence_index},
                          {"position", std::string(ToString(v.position))},
                          {"noise_label", std::string(ToString(v.noise))},
                          {"spl_mean_dba", v.spl_fit.mean},
                          {"spl_std_dba", v.spl_fit.std},
                          {"mean_level_dba", v.mean_level_dba},
                          {"role", std::string(ToString(v.role))},
                          {"gender", std::string(ToString(v.gender))},
                          {"voiced_frames", v.voiced_frames}});
  }
  if (config) j["config"] = ConfigJson(*config);
  return DumpFixed(j);
}

LectureRecord RecordFromJson(const std::string &text) {
  const Json j = Parse(text, "lecture record");
  return Decode("lecture record", [&] {
    LectureRecord r;
    r.lecture_id = j.at("lecture_id").get<std::string>();
    r.label = ParseLectureLabel(j.at("label").get<std::string>());
    r.instructor_level_dba = j.at("instructor_level_dba").get<double>();
    r.speech_level = ParseSpeechLevel(j.at("speech_level").get<std::string>());
    r.instructor_gender = ParseGender(j.at("instructor_gender").get<std::string>());
    for (const Json &c : j.at("clips")) {
      ClipVerdict v;
      v.clip_id = c.at("clip_id").get<std::string>();
      v.sequence_index = c.at("sequence_index").get<int>();
      v.position = ParsePosition(c.at("position").get<std::string>());
      v.noise = ParseNoiseLabel(c.at("noise_label").get<std::string>());
      v.spl_fit.mean = c.at("spl_mean_dba").get<double>();
      v.spl_fit.std = c.at("spl_std_dba").get<double>();
      v.mean_level_dba = c.at("mean_level_dba").get<double>();
      v.role = ParseSpeakerRole(c.at("role").get<std::string>());
      v.gender = ParseGender(c.at("gender").get<std::string>());
      v.voiced_frames = c.at("voiced_frames").get<std::size_t>();
      r.clips.push_back(std::move(v));
    }
    return r;
  });
}

std::string ReportToJson(const CorrelationReport &report, const AnalysisConfig *config) {
  Json j;
  j["lectures"] = report.lectures;
  j["tie_lectures"] = report.tie_lectures;
  j["unknown_gender_lectures"] = report.unknown_gender_lectures;
  j["category_counts"] = Json::object();
  for (const auto &[name, count] : report.category_counts) j["category_counts"][name] = count;
  j["noise_vs_speech_level"] = TestJson(report.noise_vs_speech_level);
  j["noise_vs_gender"] = TestJson(report.noise_vs_gender);
  if (config) j["config"] = ConfigJson(*config);
  return DumpFixed(j);
}

}  // namespace classroom
