// src/commands.cc

// Copyright 2026  The lidbench authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "lid/commands.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "lid/mathutil.h"
#include "lid/spectral.h"
#include "lid/util.h"

namespace lid::cmd {

namespace {

// Sorted-unique language list with index lookup.
std::vector<std::string> SortedLanguages(const CorpusManifest &m) {
  return m.Languages();
}

int LabelOf(const std::vector<std::string> &languages,
            const std::string &lang) {
  auto it = std::find(languages.begin(), languages.end(), lang);
  if (it == languages.end())
    throw std::runtime_error("language '" + lang + "' not known to the model");
  return static_cast<int>(it - languages.begin());
}

struct FeatureSet {
  std::vector<LabeledUtterance> utterances;
  std::vector<const ManifestEntry *> entries;
};

FeatureSet LoadFeatureSet(const CorpusManifest &manifest, Split split,
                          const std::vector<std::string> &languages) {
  FeatureSet set;
  for (const auto &e : manifest.entries) {
    if (e.split != split) continue;
    LabeledUtterance utt;
    utt.utt_id = e.utt_id;
    utt.features = ReadFeatures(e.path).values;
    utt.label = LabelOf(languages, e.language);
    set.utterances.push_back(std::move(utt));
    set.entries.push_back(&e);
  }
  return set;
}

std::string SanitizeToken(const std::string &s) {
  std::string out;
  for (char c : s)
    out.push_back((std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_');
  return out;
}

}  // namespace

SyntheticCorpusSpec ParseSynthSpec(const std::string &text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = TrimString(line);
    if (t.empty() || t[0] == '#') continue;
    auto pos = t.find('=');
    if (pos == std::string::npos)
      throw UsageError("bad spec line (expected key=value): " + t);
    kv[TrimString(t.substr(0, pos))] = TrimString(t.substr(pos + 1));
  }

  static const std::set<std::string> kKnown = {
      "corpus_name",     "languages",         "train_per_language",
      "test_per_language", "utterance_seconds", "channel",
      "snr_db",          "seed"};
  for (const auto &[key, value] : kv)
    if (!kKnown.count(key)) throw UsageError("unknown spec key '" + key + "'");
  auto need = [&](const std::string &key) -> const std::string & {
    auto it = kv.find(key);
    if (it == kv.end()) throw UsageError("missing spec key '" + key + "'");
    return it->second;
  };

  SyntheticCorpusSpec spec;
  try {
    spec.corpus_name = need("corpus_name");
    for (const auto &lang : SplitString(need("languages"), ',')) {
      std::string t = TrimString(lang);
      if (!t.empty()) spec.languages.push_back(t);
    }
    spec.train_per_language = std::stoi(need("train_per_language"));
    spec.test_per_language = std::stoi(need("test_per_language"));
    spec.utterance_seconds = std::stod(need("utterance_seconds"));
    spec.channel = ChannelSpec::Parse(need("channel"));
    const std::string &snr = need("snr_db");
    if (snr != "clean") spec.snr_db = std::stod(snr);
    spec.seed = std::stoull(need("seed"));
    spec.Validate();
  } catch (const UsageError &) {
    throw;
  } catch (const std::exception &e) {
    throw UsageError(std::string("bad spec value: ") + e.what());
  }
  return spec;
}

int RunSynth(const std::string &spec_path, const std::string &out_dir,
             std::optional<uint64_t> seed_override) {
  SyntheticCorpusSpec spec = ParseSynthSpec(ReadTextFile(spec_path));
  if (seed_override) spec.seed = *seed_override;
  SyntheticCorpusGenerator gen(spec);
  CorpusManifest manifest = gen.Generate(out_dir);
  std::cout << "synth: wrote " << manifest.entries.size() << " utterances to "
            << out_dir << "\n";
  return kExitOk;
}

int RunAnalyze(const std::string &manifest_path, const std::string &out_dir) {
  CorpusManifest manifest = ReadManifest(manifest_path);
  MakeDirs(out_dir);

  std::vector<LtasProfile> profiles(manifest.entries.size());
  std::vector<SnrReport> reports(manifest.entries.size());
  std::vector<char> ok(manifest.entries.size(), 0);
  std::vector<std::string> errors(manifest.entries.size());

  ParallelFor(manifest.entries.size(), [&](size_t i) {
    const auto &e = manifest.entries[i];
    try {
      AudioBuffer raw = ResampleTo8k(LoadWav(e.path));
      // SNR wants the pauses; LTAS wants them removed.
      reports[i] = EstimateSnr(raw);
      AudioBuffer voiced = ApplyVad(raw, EnergyVad(raw));
      profiles[i] = LtasSegment(Stft(voiced));
      ok[i] = 1;
    } catch (const std::exception &ex) {
      errors[i] = ex.what();
    }
  });

  std::vector<LtasProfile> good_profiles;
  std::vector<SnrReport> good_reports;
  long n_failed = 0;
  for (size_t i = 0; i < manifest.entries.size(); i++) {
    if (ok[i]) {
      good_profiles.push_back(std::move(profiles[i]));
      good_reports.push_back(reports[i]);
    } else {
      n_failed++;
      std::cerr << "analyze: skipping " << manifest.entries[i].utt_id << ": "
                << errors[i] << "\n";
    }
  }
  if (good_profiles.empty())
    throw std::runtime_error("no analyzable utterances in " + manifest_path);

  WriteTextFile(out_dir + "/ltas.csv", LtasToCsv(LtasCorpus(good_profiles)));
  WriteTextFile(out_dir + "/snr_hist.csv",
                HistogramToCsv(SnrHistogram(good_reports)));
  std::cout << "analyze: " << good_profiles.size() << " utterances ("
            << n_failed << " failed) -> " << out_dir << "\n";
  return n_failed == 0 ? kExitOk : kExitRuntime;
}

FeatureMatrix ExtractUtterance(const std::string &wav_path,
                               const std::optional<Method> &method) {
  AudioBuffer raw = ResampleTo8k(LoadWav(wav_path));
  AudioBuffer voiced = ApplyVad(raw, EnergyVad(raw));
  if (method.has_value() && *method == Method::kPcen)
    return ApplyMethod(MelFrontend(voiced), Method::kPcen);
  FeatureMatrix mfcc = Mfcc(voiced);
  if (!method.has_value()) return mfcc;
  return ApplyMethod(mfcc, *method);
}

int RunExtract(const std::string &manifest_path,
               const std::string &method_token, const std::string &out_dir) {
  std::optional<Method> method;
  if (method_token != "baseline") {
    method = ParseMethod(method_token);
    if (!method)
      throw UsageError("unknown method token '" + method_token +
                       "' (expected baseline, M0..M5, or an alias)");
  }
  CorpusManifest manifest = ReadManifest(manifest_path);
  MakeDirs(out_dir + "/feat");

  std::vector<char> ok(manifest.entries.size(), 0);
  std::vector<std::string> errors(manifest.entries.size());
  std::vector<std::string> out_paths(manifest.entries.size());
  ParallelFor(manifest.entries.size(), [&](size_t i) {
    const auto &e = manifest.entries[i];
    out_paths[i] = out_dir + "/feat/" + e.utt_id + ".lidf";
    try {
      WriteFeatures(ExtractUtterance(e.path, method), out_paths[i]);
      ok[i] = 1;
    } catch (const std::exception &ex) {
      errors[i] = ex.what();
    }
  });

  CorpusManifest feature_manifest;
  feature_manifest.corpus_name = manifest.corpus_name;
  long n_skipped = 0;
  for (size_t i = 0; i < manifest.entries.size(); i++) {
    if (!ok[i]) {
      n_skipped++;
      std::cerr << "extract: skipping " << manifest.entries[i].utt_id << ": "
                << errors[i] << "\n";
      continue;
    }
    ManifestEntry e = manifest.entries[i];
    e.path = out_paths[i];
    feature_manifest.entries.push_back(std::move(e));
  }
  if (feature_manifest.entries.empty())
    throw std::runtime_error("no utterances survived extraction");
  WriteManifest(feature_manifest, out_dir + "/feature_manifest.tsv");
  std::cout << "extract: " << feature_manifest.entries.size()
            << " utterances (" << n_skipped << " skipped) -> " << out_dir
            << "\n";
  return kExitOk;
}

int RunTrain(const std::string &feature_manifest_path,
             const TrainOptions &opts, const std::string &model_path,
             const std::string &report_path) {
  CorpusManifest manifest = ReadManifest(feature_manifest_path);
  std::vector<std::string> languages = SortedLanguages(manifest);
  if (languages.size() < 2)
    throw std::runtime_error("training needs at least 2 languages, got " +
                             std::to_string(languages.size()));

  TdnnConfig cfg = TdnnConfig::Preset(opts.preset,
                                      static_cast<int>(languages.size()));
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.max_epochs) cfg.max_epochs = *opts.max_epochs;

  FeatureSet all = LoadFeatureSet(manifest, Split::kTrain, languages);
  if (all.utterances.empty()) throw std::runtime_error("empty training split");

  // 90:10 train/validation carve-out, stratified by language, seeded.
  std::vector<std::vector<size_t>> by_label(languages.size());
  for (size_t i = 0; i < all.utterances.size(); i++)
    by_label[all.utterances[i].label].push_back(i);
  Rng rng(MixSeed(cfg.seed, 0x76616c));
  std::vector<LabeledUtterance> train_set, val_set;
  for (auto &indices : by_label) {
    if (indices.empty()) continue;
    rng.Shuffle(indices);
    size_t n_val = std::max<size_t>(1, indices.size() / 10);
    if (n_val >= indices.size()) n_val = indices.size() - 1;
    for (size_t j = 0; j < indices.size(); j++) {
      auto &dst = (j < n_val) ? val_set : train_set;
      dst.push_back(std::move(all.utterances[indices[j]]));
    }
  }

  auto [model, report] = TrainTdnn(cfg, languages, train_set, val_set);
  model.train_name =
      opts.train_name.empty() ? manifest.corpus_name : opts.train_name;
  SaveModel(model, model_path);

  std::ostringstream csv;
  csv << "epoch,train_loss,val_loss,is_best\n";
  for (size_t e = 0; e < report.train_loss.size(); e++)
    csv << (e + 1) << "," << FormatDouble(report.train_loss[e]) << ","
        << FormatDouble(report.val_loss[e]) << ","
        << (static_cast<int>(e + 1) == report.best_epoch ? 1 : 0) << "\n";
  WriteTextFile(report_path, csv.str());

  std::cout << "train: stopped after epoch " << report.stopped_epoch
            << " (best " << report.best_epoch << ", val loss "
            << FormatDouble(report.val_loss[report.best_epoch - 1], 6)
            << ") -> " << model_path << "\n";
  return kExitOk;
}

ScoredCell ScoreCell(const TdnnModel &model, const CorpusManifest &features,
                     const std::string &test_name, double duration_s) {
  // 10 ms hop: one second of features is 100 frames.
  const int needed =
      duration_s > 0.0 ? static_cast<int>(std::lround(duration_s * 100.0)) : 0;
  const int receptive = model.config.ReceptiveField();

  ScoredCell out;
  out.scores.languages = model.languages;
  out.cell.train_corpus = model.train_name;
  out.cell.test_corpus = test_name;
  out.cell.duration_s = duration_s;
  out.cell.within_corpora = (model.train_name == test_name);

  std::vector<const ManifestEntry *> entries;
  for (const auto &e : features.entries)
    if (e.split == Split::kTest) entries.push_back(&e);

  std::vector<std::optional<TrialScores::Row>> rows(entries.size());
  ParallelFor(entries.size(), [&](size_t i) {
    const ManifestEntry &e = *entries[i];
    Eigen::MatrixXd feats = ReadFeatures(e.path).values;
    int t_count = static_cast<int>(feats.cols());
    if (t_count < std::max(needed, receptive)) return;  // skip short
    Eigen::MatrixXd view =
        (needed > 0) ? feats.leftCols(needed).eval() : std::move(feats);
    Eigen::VectorXd s = model.ScoreUtterance(view);
    TrialScores::Row row;
    row.utt_id = e.utt_id;
    row.true_language = e.language;
    row.scores.assign(s.data(), s.data() + s.size());
    rows[i] = std::move(row);
  });
  for (size_t i = 0; i < rows.size(); i++) {
    if (rows[i])
      out.scores.rows.push_back(std::move(*rows[i]));
    else
      out.cell.n_utterances_skipped++;
  }
  out.cell.n_utterances_scored = static_cast<long>(out.scores.rows.size());
  if (out.scores.rows.empty())
    throw std::runtime_error("empty evaluation cell: " + model.train_name +
                             " x " + test_name + " @ " +
                             FormatDouble(duration_s) + " s");

  ScorePools pools = PoolTrials(out.scores);
  out.det = ComputeDetCurve(pools.targets, pools.nontargets);
  out.cell.eer_pct = 100.0 * Eer(out.det);
  out.cell.cavg_x100 = 100.0 * Cavg(out.scores).c_avg;
  return out;
}

int RunEvaluate(
    const std::vector<std::pair<std::string, std::string>> &models,
    const std::vector<std::pair<std::string, std::string>> &test_manifests,
    const std::vector<double> &durations_s, const std::string &out_dir) {
  if (models.empty() || test_manifests.empty() || durations_s.empty())
    throw UsageError("evaluate needs models, test manifests, and durations");
  for (double d : durations_s)
    if (d < 0.0) throw UsageError("durations must be positive (0 = full)");
  MakeDirs(out_dir);

  std::vector<EvalCell> grid;
  for (const auto &[model_name, model_path] : models) {
    TdnnModel model = LoadModel(model_path);
    if (!model_name.empty()) model.train_name = model_name;
    for (const auto &[test_name, manifest_path] : test_manifests) {
      CorpusManifest features = ReadManifest(manifest_path);
      for (double dur : durations_s) {
        ScoredCell cell = ScoreCell(model, features, test_name, dur);
        std::string tag = SanitizeToken(model.train_name) + "_" +
                          SanitizeToken(test_name) + "_" +
                          SanitizeToken(FormatDouble(dur));
        WriteTextFile(out_dir + "/scores_" + tag + ".tsv",
                      ScoresToTsv(cell.scores));
        WriteTextFile(out_dir + "/det_" + tag + ".csv",
                      DetCurveToCsv(cell.det));
        grid.push_back(cell.cell);
      }
    }
  }
  WriteTextFile(out_dir + "/results_grid.csv", ResultsGridToCsv(grid));
  std::cout << "evaluate: wrote " << grid.size() << " cells -> " << out_dir
            << "\n";
  return kExitOk;
}

int RunReproduce(const std::string &out_dir, uint64_t seed,
                 const std::string &preset) {
  MakeDirs(out_dir);
  const std::vector<std::string> languages = {"lang0", "lang1", "lang2",
                                              "lang3"};

  // Two corpora sharing language identities (same seed) but mismatched in
  // channel and noise: A clean/flat, B tilted at 10 dB SNR.
  SyntheticCorpusSpec spec_a;
  spec_a.corpus_name = "corpusA";
  spec_a.languages = languages;
  spec_a.train_per_language = 10;
  spec_a.test_per_language = 6;
  spec_a.utterance_seconds = 10.0;
  spec_a.channel = ChannelSpec::Parse("flat");
  spec_a.seed = seed;

  SyntheticCorpusSpec spec_b = spec_a;
  spec_b.corpus_name = "corpusB";
  spec_b.channel = ChannelSpec::Parse("tilt:6");
  spec_b.snr_db = 10.0;

  std::cout << "reproduce: generating corpora\n";
  SyntheticCorpusGenerator(spec_a).Generate(out_dir + "/corpusA");
  SyntheticCorpusGenerator(spec_b).Generate(out_dir + "/corpusB");

  RunAnalyze(out_dir + "/corpusA/manifest.tsv", out_dir + "/analysis/corpusA");
  RunAnalyze(out_dir + "/corpusB/manifest.tsv", out_dir + "/analysis/corpusB");

  const std::vector<std::string> methods = {"baseline", "M0", "M1", "M2",
                                            "M3", "M4", "M5"};
  struct MethodResult {
    std::string method;
    EvalCell within;
    EvalCell cross;
  };
  std::vector<MethodResult> results;

  for (const auto &method : methods) {
    std::cout << "reproduce: method " << method << "\n";
    std::string fa = out_dir + "/features/corpusA_" + method;
    std::string fb = out_dir + "/features/corpusB_" + method;
    RunExtract(out_dir + "/corpusA/manifest.tsv", method, fa);
    RunExtract(out_dir + "/corpusB/manifest.tsv", method, fb);

    TrainOptions topts;
    topts.preset = preset;
    topts.seed = MixSeed(seed, HashString("train:" + method));
    topts.train_name = "corpusA";
    std::string model_path = out_dir + "/models/A_" + method + ".lidm";
    MakeDirs(out_dir + "/models");
    RunTrain(fa + "/feature_manifest.tsv", topts, model_path,
             out_dir + "/models/A_" + method + "_report.csv");

    TdnnModel model = LoadModel(model_path);
    CorpusManifest feat_a = ReadManifest(fa + "/feature_manifest.tsv");
    CorpusManifest feat_b = ReadManifest(fb + "/feature_manifest.tsv");
    ScoredCell within = ScoreCell(model, feat_a, "corpusA", 0.0);
    ScoredCell cross = ScoreCell(model, feat_b, "corpusB", 0.0);

    std::string eval_dir = out_dir + "/eval/" + method;
    MakeDirs(eval_dir);
    WriteTextFile(eval_dir + "/scores_within.tsv", ScoresToTsv(within.scores));
    WriteTextFile(eval_dir + "/scores_cross.tsv", ScoresToTsv(cross.scores));
    WriteTextFile(eval_dir + "/det_within.csv", DetCurveToCsv(within.det));
    WriteTextFile(eval_dir + "/det_cross.csv", DetCurveToCsv(cross.det));
    results.push_back({method, within.cell, cross.cell});
  }

  std::ostringstream csv;
  csv << "method,within_eer_pct,within_cavg_x100,cross_eer_pct,cross_cavg_x100\n";
  for (const auto &r : results)
    csv << r.method << "," << FormatDouble(r.within.eer_pct) << ","
        << FormatDouble(r.within.cavg_x100) << ","
        << FormatDouble(r.cross.eer_pct) << ","
        << FormatDouble(r.cross.cavg_x100) << "\n";
  WriteTextFile(out_dir + "/comparison.csv", csv.str());

  std::cout << "reproduce: comparison table\n" << csv.str();
  return kExitOk;
}

}  // namespace lid::cmd
