// include/lid/commands.h

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

#ifndef LID_COMMANDS_H_
#define LID_COMMANDS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lid/compensation.h"
#include "lid/corpus.h"
#include "lid/evaluation.h"
#include "lid/synth.h"
#include "lid/tdnn.h"

namespace lid::cmd {

// Exit-code contract: 0 success, 1 runtime failure, 2 usage/config error.
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Thrown for bad configuration/usage; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value corpus spec (keys: corpus_name, languages,
// train_per_language, test_per_language, utterance_seconds, channel,
// snr_db, seed).  snr_db accepts "clean".
SyntheticCorpusSpec ParseSynthSpec(const std::string &text);

int RunSynth(const std::string &spec_path, const std::string &out_dir,
             std::optional<uint64_t> seed_override = std::nullopt);

// Per-corpus diagnostics: <out_dir>/ltas.csv (silence-removed) and
// <out_dir>/snr_hist.csv (raw audio, pauses included).  Unreadable
// entries are reported and skipped; partial results still land and the
// command exits 1.
int RunAnalyze(const std::string &manifest_path, const std::string &out_dir);

// VAD -> MFCC (mel energies for M5) -> method -> one LIDF file per
// utterance plus <out_dir>/feature_manifest.tsv.  method_token is
// "baseline" or a Method id/alias.
int RunExtract(const std::string &manifest_path,
               const std::string &method_token, const std::string &out_dir);

struct TrainOptions {
  std::string preset = "desk";
  std::optional<uint64_t> seed;
  std::optional<int> max_epochs;
  std::string train_name;  // defaults to the feature manifest's corpus name
};

int RunTrain(const std::string &feature_manifest_path,
             const TrainOptions &opts, const std::string &model_path,
             const std::string &report_path);

// Cross product of models x test feature manifests x durations.  Each
// cell writes scores_<model>_<test>_<dur>.tsv and det_<...>.csv; the grid
// lands in <out_dir>/results_grid.csv.  duration 0 means full utterance.
int RunEvaluate(
    const std::vector<std::pair<std::string, std::string>> &models,
    const std::vector<std::pair<std::string, std::string>> &test_manifests,
    const std::vector<double> &durations_s, const std::string &out_dir);

// Full workflow on two freshly generated mismatched corpora: baseline and
// every compensation method trained on corpus A, evaluated within (A) and
// across (B); writes comparison.csv.
int RunReproduce(const std::string &out_dir, uint64_t seed,
                 const std::string &preset = "desk");

// Shared pipeline: load -> resample -> VAD -> front-end -> method.
// nullopt method = plain MFCC baseline.
FeatureMatrix ExtractUtterance(const std::string &wav_path,
                               const std::optional<Method> &method);

// Internals reused by tests and reproduce.
struct ScoredCell {
  TrialScores scores;
  DetCurve det;
  EvalCell cell;
};
ScoredCell ScoreCell(const TdnnModel &model, const CorpusManifest &features,
                     const std::string &test_name, double duration_s);

}  // namespace lid::cmd

#endif  // LID_COMMANDS_H_
