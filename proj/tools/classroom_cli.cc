// tools/classroom_cli.cc

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

// classroom: feature extraction, model training, lecture analysis, noise
// localization, corpus correlation and synthetic data generation.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "classroom/audio_io.h"
#include "classroom/error.h"
#include "classroom/features.h"
#include "classroom/models.h"
#include "classroom/pipeline.h"
#include "classroom/synth.h"
#include "json.hpp"

namespace classroom {
namespace {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
}

// Analysis flags shared by every subcommand. A --config file is applied
// first; flags given explicitly on the command line win.
struct ConfigFlags {
  std::string config_file;
  AnalysisConfig values;
  std::vector<std::pair<CLI::Option *, std::function<void(AnalysisConfig &)>>> bound;

  template <typename T>
  void Bind(CLI::App *app, const std::string &name, T AnalysisConfig::*field,
            const std::string &help) {
    T *slot = &(values.*field);
    CLI::Option *opt = app->add_option(name, *slot, help)->capture_default_str();
    bound.push_back({opt, [slot, field](AnalysisConfig &c) { c.*field = *slot; }});
  }

  void Attach(CLI::App *app) {
    app->add_option("--config", config_file, "JSON file with analysis settings")
        ->check(CLI::ExistingFile);
    Bind(app, "--frame-len-ms", &AnalysisConfig::frame_len_ms, "analysis frame length (ms)");
    Bind(app, "--overlap", &AnalysisConfig::overlap, "frame overlap fraction in [0, 1)");
    Bind(app, "--calibration-offset", &AnalysisConfig::calibration_offset_db,
         "dB added to full-scale levels");
    Bind(app, "--knn-k", &AnalysisConfig::knn_k, "neighbors for noise classification (odd)");
    Bind(app, "--gmm-components", &AnalysisConfig::gmm_components, "mixture components per gender");
    Bind(app, "--seed", &AnalysisConfig::seed, "seed for every randomized step");
    Bind(app, "--speaker-delta", &AnalysisConfig::speaker_delta_db,
         "max dB from the instructor level for a teacher clip");
    Bind(app, "--level-bin-width", &AnalysisConfig::level_bin_width_db,
         "histogram bin width for the instructor level (dB)");
    Bind(app, "--low-level", &AnalysisConfig::low_level_threshold_db,
         "instructor levels below this are low (dBA)");
    Bind(app, "--high-level", &AnalysisConfig::high_level_threshold_db,
         "instructor levels above this are high (dBA)");
  }

  AnalysisConfig Resolve() const {
    AnalysisConfig c;
    if (!config_file.empty()) c = ConfigFromJson(ReadText(config_file));
    for (const auto &[opt, apply] : bound) {
      if (opt->count() > 0) apply(c);
    }
    c.Validate();
    return c;
  }
};

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<LectureManifest> LoadManifests(const std::vector<std::string> &paths,
                                           const std::string &corpus_dir) {
  std::vector<std::string> all = paths;
  if (!corpus_dir.empty()) {
    std::vector<std::string> found;
    for (const auto &entry : fs::directory_iterator(corpus_dir)) {
      const fs::path m = entry.path() / "manifest.json";
      if (entry.is_directory() && fs::exists(m)) found.push_back(m.string());
    }
    std::sort(found.begin(), found.end());
    all.insert(all.end(), found.begin(), found.end());
  }
  if (all.empty()) throw UsageError("no manifests given (use --manifest or --corpus)");
  std::vector<LectureManifest> out;
  for (const std::string &p : all) out.push_back(LoadManifest(p));
  std::sort(out.begin(), out.end(), [](const LectureManifest &a, const LectureManifest &b) {
    return a.lecture_id < b.lecture_id;
  });
  return out;
}

// ---- features ---------------------------------------------------------------

struct FeaturesArgs {
  std::vector<std::string> inputs;
  std::string out;
  ConfigFlags flags;
};

int RunFeatures(const FeaturesArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  std::string csv = "kind,clip_id,frame_index,level_dba,pitch";
  for (int i = 0; i <= kPlpOrder; ++i) csv += ",c" + std::to_string(i);
  csv += "\n";
  const std::string empty_cepstra(kPlpOrder + 1, ',');
  for (const std::string &path : args.inputs) {
    const AudioClip clip = LoadWav(path);
    const FrameParams frames = config.Frames(clip.sample_rate());
    const SplSeries spl = ComputeSplSeries(clip, frames, config.calibration_offset_db);
    for (std::size_t f = 0; f < spl.levels.size(); ++f) {
      csv += "spl," + clip.id() + "," + std::to_string(f) + "," + Fixed(spl.levels[f]) + "," +
             empty_cepstra + "\n";
    }
    std::vector<std::size_t> index;
    const auto vectors = GenderFeatures(clip, frames, &index);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      csv += "gender," + clip.id() + "," + std::to_string(index[i]) + ",";
      for (double x : vectors[i]) csv += "," + Fixed(x);
      csv += "\n";
    }
  }
  Emit(args.out, csv);
  return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> manifests;
  std::string corpus;
  std::string truth;
  std::string out;
  std::string out_male;
  std::string out_female;
  int folds = 3;
  ConfigFlags flags;
};

int RunTrainGender(const TrainArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  if (args.out_male.empty() || args.out_female.empty()) {
    throw UsageError("train gender needs --out-male and --out-female");
  }
  std::vector<FeatureVector> male, female;
  for (const LectureManifest &m : LoadManifests(args.manifests, args.corpus)) {
    if (!m.instructor_label || *m.instructor_label == Gender::kUnknown) {
      throw Error(ErrorCode::kInsufficientData,
                  "manifest " + m.lecture_id + " has no instructor_label");
    }
    auto &sink = *m.instructor_label == Gender::kMale ? male : female;
    for (const ClipEntry &entry : m.clips) {
      const AudioClip clip = LoadWav(entry.path);
      const auto v = GenderFeatures(clip, config.Frames(clip.sample_rate()));
      sink.insert(sink.end(), v.begin(), v.end());
    }
  }
  GmmTrainOptions options;
  options.components = config.gmm_components;
  options.seed = config.seed;
  const std::size_t needed = 10 * static_cast<std::size_t>(config.gmm_components);
  for (const auto &[name, set] : {std::pair{"male", &male}, std::pair{"female", &female}}) {
    if (set->size() < needed) {
      throw Error(ErrorCode::kInsufficientData,
                  std::string("only ") + std::to_string(set->size()) + " voiced " + name +
                      " vectors; need at least " + std::to_string(needed));
    }
  }
  const GmmTrainResult m = TrainGmm(male, options);
  const GmmTrainResult f = TrainGmm(female, options);
  Emit(args.out_male, GmmToJson(m.model));
  Emit(args.out_female, GmmToJson(f.model));
  std::cerr << "male: " << male.size() << " vectors, " << m.log_likelihood.size()
            << " EM iterations; female: " << female.size() << " vectors, "
            << f.log_likelihood.size() << " EM iterations\n";
  return kOk;
}

int RunTrainNoise(const TrainArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  if (args.truth.empty()) throw UsageError("train noise needs --truth");
  if (args.out.empty()) throw UsageError("train noise needs --out");
  if (args.folds < 2) throw UsageError("--folds must be at least 2");

  std::map<std::pair<std::string, int>, NoiseLabel> truth;
  for (const LectureTruth &t : TruthFromJson(ReadText(args.truth))) {
    for (const ClipTruth &c : t.clips) truth[{t.lecture_id, c.sequence_index}] = c.noise;
  }
  std::vector<KnnPoint> points;
  std::vector<NoiseLabel> labels;
  for (const LectureManifest &m : LoadManifests(args.manifests, args.corpus)) {
    for (const ClipEntry &entry : m.clips) {
      const auto it = truth.find({m.lecture_id, entry.metadata.sequence_index});
      if (it == truth.end()) {
        throw Error(ErrorCode::kInsufficientData,
                    "no truth label for " + m.lecture_id + " clip " +
                        std::to_string(entry.metadata.sequence_index));
      }
      const AudioClip clip = LoadWav(entry.path);
      const NormalFit fit = FitNormal(
          ComputeSplSeries(clip, config.Frames(clip.sample_rate()), config.calibration_offset_db)
              .levels);
      points.push_back({fit.mean, fit.std});
      labels.push_back(it->second);
    }
  }
  for (NoiseLabel cls : {NoiseLabel::kNoisy, NoiseLabel::kQuiet}) {
    const auto count = std::count(labels.begin(), labels.end(), cls);
    if (count < args.folds) {
      throw Error(ErrorCode::kInsufficientData,
                  "class " + std::string(ToString(cls)) + " has " + std::to_string(count) +
                      " clips; need at least one per fold");
    }
  }
  const KnnModel model = TrainKnn(points, labels, config.knn_k);
  const double error = CrossValidate(points, labels, args.folds, config.knn_k, config.seed);
  Emit(args.out, KnnToJson(model));

  nlohmann::ordered_json summary;
  summary["clips"] = points.size();
  summary["k"] = config.knn_k;
  summary["folds"] = args.folds;
  summary["cv_error"] = error;
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

// ---- lecture ----------------------------------------------------------------

struct LectureArgs {
  std::string manifest;
  std::string knn;
  std::string male;
  std::string female;
  std::string out;
  ConfigFlags flags;
};

int RunLecture(const LectureArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  const LectureManifest manifest = LoadManifest(args.manifest);
  const KnnModel knn = KnnFromJson(ReadText(args.knn));
  const GmmModel male = GmmFromJson(ReadText(args.male));
  const GmmModel female = GmmFromJson(ReadText(args.female));
  const LectureRecord record = AnalyzeLecture(manifest, knn, male, female, config);
  Emit(args.out, RecordToJson(record, &config));
  return kOk;
}

// ---- localize ---------------------------------------------------------------

struct LocalizeArgs {
  std::vector<std::string> inputs;  // position=path
  std::string json_out;
  ConfigFlags flags;
};

int RunLocalize(const LocalizeArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  if (args.inputs.size() != 4) {
    throw UsageError("localize needs exactly 4 inputs, got " + std::to_string(args.inputs.size()));
  }
  std::vector<std::pair<Position, std::string>> parsed;
  for (const std::string &spec : args.inputs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("expected position=path, got '" + spec + "'");
    Position p;
    try {
      p = ParsePosition(spec.substr(0, eq));
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
    if (p == Position::kUnspecified) throw UsageError("localize inputs need a quadrant position");
    for (const auto &[seen, path] : parsed) {
      if (seen == p) throw UsageError("duplicate quadrant " + std::string(ToString(p)));
    }
    parsed.push_back({p, spec.substr(eq + 1)});
  }
  std::vector<PositionedClip> clips;
  for (const auto &[p, path] : parsed) clips.push_back({p, LoadWav(path)});
  const LocalizationResult result = LocalizeNoise(clips, config);

  if (!args.json_out.empty()) {
    std::string json = "{\n  \"quadrant\": \"" + std::string(ToString(result.quadrant)) +
                       "\",\n  \"mean_levels_dba\": {\n";
    std::size_t i = 0;
    for (const auto &[p, level] : result.mean_levels) {
      json += "    \"" + std::string(ToString(p)) + "\": " + Fixed(level) +
              (++i < result.mean_levels.size() ? ",\n" : "\n");
    }
    json += "  }\n}\n";
    Emit(args.json_out, json);
  }
  std::cout << ToString(result.quadrant) << "\n";
  return kOk;
}

// ---- correlate --------------------------------------------------------------

struct CorrelateArgs {
  std::vector<std::string> records;
  std::string out;
  ConfigFlags flags;
};

int RunCorrelate(const CorrelateArgs &args) {
  const AnalysisConfig config = args.flags.Resolve();
  if (args.records.size() < 2) throw UsageError("correlate needs at least two lecture records");
  std::vector<LectureRecord> records;
  for (const std::string &p : args.records) records.push_back(RecordFromJson(ReadText(p)));
  std::sort(records.begin(), records.end(), [](const LectureRecord &a, const LectureRecord &b) {
    return a.lecture_id < b.lecture_id;
  });
  const CorrelationReport report = Correlate(records);
  Emit(args.out, ReportToJson(report, &config));
  return kOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string scenario = "lectures";
  ScenarioConfig config;
  std::vector<std::string> genders;
  std::string quadrant = "back_left";
  double source_amp = 0.5;
};

int RunSynth(const SynthArgs &args) {
  if (args.scenario == "lectures") {
    ScenarioConfig config = args.config;
    for (const std::string &g : args.genders) config.gender_plan.push_back(ParseGender(g));
    const Corpus corpus = GenLectureCorpus(config, args.out);
    std::cerr << "wrote " << corpus.manifests.size() << " lectures to " << args.out << "\n";
    return kOk;
  }
  const Position q = ParsePosition(args.quadrant);
  const auto clips = GenQuadrantScenario(q, args.source_amp, args.config.sample_rate,
                                         args.config.seed);
  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + args.out + "'");
  for (const PositionedClip &c : clips) {
    WriteWav((fs::path(args.out) / (std::string(ToString(c.position)) + ".wav")).string(), c.clip);
  }
  return kOk;
}

int Main(int argc, char **argv) {
  CLI::App app{"Acoustic quality analysis of recorded lectures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "classroom 1.0.0");

  FeaturesArgs features;
  CLI::App *cmd_features = app.add_subcommand("features", "per-frame SPL and gender features as CSV");
  cmd_features->add_option("inputs", features.inputs, "WAV files")->required();
  cmd_features->add_option("-o,--out", features.out, "CSV output (default stdout)");
  features.flags.Attach(cmd_features);

  TrainArgs train;
  CLI::App *cmd_train = app.add_subcommand("train", "train gender GMMs or the noise k-NN");
  cmd_train->require_subcommand(1);
  CLI::App *cmd_gender = cmd_train->add_subcommand("gender", "GMMs from instructor-labeled manifests");
  CLI::App *cmd_noise = cmd_train->add_subcommand("noise", "k-NN from per-clip truth labels");
  for (CLI::App *sub : {cmd_gender, cmd_noise}) {
    sub->add_option("-m,--manifest", train.manifests, "lecture manifest (repeatable)");
    sub->add_option("--corpus", train.corpus, "directory of <lecture>/manifest.json")
        ->check(CLI::ExistingDirectory);
    train.flags.Attach(sub);
  }
  cmd_gender->add_option("--out-male", train.out_male, "male model JSON")->required();
  cmd_gender->add_option("--out-female", train.out_female, "female model JSON")->required();
  cmd_noise->add_option("--truth", train.truth, "truth JSON with per-clip noise labels")
      ->required();
  cmd_noise->add_option("-o,--out", train.out, "k-NN model JSON")->required();
  cmd_noise->add_option("--folds", train.folds, "cross-validation folds")->capture_default_str();

  LectureArgs lecture;
  CLI::App *cmd_lecture = app.add_subcommand("lecture", "analyze one lecture into a record");
  cmd_lecture->add_option("-m,--manifest", lecture.manifest, "lecture manifest")->required();
  cmd_lecture->add_option("--knn", lecture.knn, "k-NN model JSON")->required();
  cmd_lecture->add_option("--male", lecture.male, "male GMM JSON")->required();
  cmd_lecture->add_option("--female", lecture.female, "female GMM JSON")->required();
  cmd_lecture->add_option("-o,--out", lecture.out, "record output (default stdout)");
  lecture.flags.Attach(cmd_lecture);

  LocalizeArgs localize;
  CLI::App *cmd_localize = app.add_subcommand("localize", "quadrant of the loudest noise");
  cmd_localize->add_option("-i,--input", localize.inputs, "position=path, once per quadrant")
      ->required();
  cmd_localize->add_option("--json", localize.json_out, "also write verdict and levels as JSON");
  localize.flags.Attach(cmd_localize);

  CorrelateArgs correlate;
  CLI::App *cmd_correlate = app.add_subcommand("correlate", "chi-square tests over lecture records");
  cmd_correlate->add_option("records", correlate.records, "lecture record JSON files")->required();
  cmd_correlate->add_option("-o,--out", correlate.out, "report output (default stdout)");
  correlate.flags.Attach(cmd_correlate);

  SynthArgs synth;
  CLI::App *cmd_synth = app.add_subcommand("synth", "write a synthetic corpus");
  cmd_synth->add_option("-o,--out", synth.out, "output directory")->required();
  cmd_synth->add_option("--scenario", synth.scenario, "lectures or quadrant")
      ->check(CLI::IsMember({"lectures", "quadrant"}))
      ->capture_default_str();
  cmd_synth->add_option("--seed", synth.config.seed, "generator seed")->capture_default_str();
  cmd_synth->add_option("--lectures", synth.config.lectures, "lecture count")->capture_default_str();
  cmd_synth->add_option("--clips", synth.config.clips_per_lecture, "clips per lecture")
      ->capture_default_str();
  cmd_synth->add_option("--clip-seconds", synth.config.clip_seconds, "clip duration")
      ->capture_default_str();
  cmd_synth->add_option("--rate", synth.config.sample_rate, "sample rate (Hz)")
      ->capture_default_str();
  cmd_synth->add_option("--teacher-level", synth.config.teacher_level_dba,
                        "mean instructor level (dBA)")
      ->capture_default_str();
  cmd_synth->add_option("--noisy-level", synth.config.noisy_level_dbfs,
                        "babble level in noisy clips (dBFS)")
      ->capture_default_str();
  cmd_synth->add_option("--noisy-fraction", synth.config.noisy_lecture_fraction,
                        "fraction of noisy lectures")
      ->capture_default_str();
  cmd_synth->add_option("--genders", synth.genders,
                        "comma-separated instructor gender per lecture (default: seeded)")
      ->delimiter(',');
  cmd_synth->add_option("--quadrant", synth.quadrant, "source quadrant for --scenario quadrant")
      ->capture_default_str();
  cmd_synth->add_option("--source-amp", synth.source_amp, "source peak amplitude")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (cmd_features->parsed()) return RunFeatures(features);
    if (cmd_gender->parsed()) return RunTrainGender(train);
    if (cmd_noise->parsed()) return RunTrainNoise(train);
    if (cmd_lecture->parsed()) return RunLecture(lecture);
    if (cmd_localize->parsed()) return RunLocalize(localize);
    if (cmd_correlate->parsed()) return RunCorrelate(correlate);
    if (cmd_synth->parsed()) return RunSynth(synth);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error &e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kData;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace
}  // namespace classroom

int main(int argc, char **argv) { return classroom::Main(argc, argv); }
