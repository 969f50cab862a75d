// tools/lidbench.cc

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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lid/commands.h"
#include "lid/util.h"

namespace {

// "NAME=PATH" pairs for evaluate.
std::vector<std::pair<std::string, std::string>> ParseNamedPaths(
    const std::vector<std::string> &tokens, const std::string &what) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &tok : tokens) {
    auto pos = tok.find('=');
    if (pos == std::string::npos || pos == 0 || pos + 1 == tok.size())
      throw lid::cmd::UsageError("expected NAME=PATH for --" + what + ", got '" +
                                 tok + "'");
    out.emplace_back(tok.substr(0, pos), tok.substr(pos + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{
      "lidbench: cross-corpora spoken language identification workbench"};
  app.require_subcommand(1);

  // synth
  auto *synth = app.add_subcommand(
      "synth", "Generate a synthetic corpus from a key=value spec file");
  std::string synth_spec, synth_out;
  std::optional<uint64_t> synth_seed;
  synth->add_option("--spec", synth_spec, "spec file")->required();
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "override the spec seed");

  // analyze
  auto *analyze = app.add_subcommand(
      "analyze", "Corpus diagnostics: LTAS and SNR histogram CSVs");
  std::string analyze_manifest, analyze_out;
  analyze->add_option("--manifest", analyze_manifest, "corpus manifest TSV")
      ->required();
  analyze->add_option("--out", analyze_out, "output directory")->required();

  // extract
  auto *extract = app.add_subcommand(
      "extract", "Extract compensated features for every utterance");
  std::string extract_manifest, extract_method = "baseline", extract_out;
  extract->add_option("--manifest", extract_manifest, "corpus manifest TSV")
      ->required();
  extract->add_option("--method", extract_method,
                      "baseline, M0..M5, or cms|cmvn|wcmvn|fw|rasta|pcen");
  extract->add_option("--out", extract_out, "output directory")->required();

  // train
  auto *train =
      app.add_subcommand("train", "Train a TDNN language classifier");
  std::string train_features, train_model, train_report, train_name;
  lid::cmd::TrainOptions train_opts;
  std::optional<uint64_t> train_seed;
  std::optional<int> train_epochs;
  train->add_option("--features", train_features, "feature manifest TSV")
      ->required();
  train->add_option("--preset", train_opts.preset, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  train->add_option("--seed", train_seed, "training seed");
  train->add_option("--epochs", train_epochs, "override max epochs");
  train->add_option("--name", train_name, "train-corpus tag for results grids");
  train->add_option("--model", train_model, "output model file")->required();
  train->add_option("--report", train_report, "output train report CSV");

  // evaluate
  auto *evaluate = app.add_subcommand(
      "evaluate", "Score models against test corpora at several durations");
  std::vector<std::string> eval_models, eval_features;
  std::vector<double> eval_durations = {3.0, 6.0, 9.0};
  std::string eval_out;
  evaluate
      ->add_option("--model", eval_models,
                   "NAME=PATH of a trained model (repeatable)")
      ->required();
  evaluate
      ->add_option("--features", eval_features,
                   "NAME=PATH of a test feature manifest (repeatable)")
      ->required();
  evaluate->add_option("--durations", eval_durations,
                       "test durations in seconds (0 = full)")
      ->delimiter(',');
  evaluate->add_option("--out", eval_out, "output directory")->required();

  // reproduce
  auto *reproduce = app.add_subcommand(
      "reproduce",
      "End-to-end run: two mismatched corpora, baseline + M0..M5, "
      "within/cross comparison table");
  std::string repro_out, repro_preset = "desk";
  uint64_t repro_seed = 42;
  reproduce->add_option("--out", repro_out, "output directory")->required();
  reproduce->add_option("--seed", repro_seed, "corpus + training seed");
  reproduce->add_option("--preset", repro_preset, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? lid::cmd::kExitOk : lid::cmd::kExitUsage;
  }

  try {
    if (synth->parsed())
      return lid::cmd::RunSynth(synth_spec, synth_out, synth_seed);
    if (analyze->parsed())
      return lid::cmd::RunAnalyze(analyze_manifest, analyze_out);
    if (extract->parsed())
      return lid::cmd::RunExtract(extract_manifest, extract_method,
                                  extract_out);
    if (train->parsed()) {
      train_opts.seed = train_seed;
      train_opts.max_epochs = train_epochs;
      train_opts.train_name = train_name;
      if (train_report.empty()) train_report = train_model + ".report.csv";
      return lid::cmd::RunTrain(train_features, train_opts, train_model,
                                train_report);
    }
    if (evaluate->parsed())
      return lid::cmd::RunEvaluate(ParseNamedPaths(eval_models, "model"),
                                   ParseNamedPaths(eval_features, "features"),
                                   eval_durations, eval_out);
    if (reproduce->parsed())
      return lid::cmd::RunReproduce(repro_out, repro_seed, repro_preset);
  } catch (const lid::cmd::UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return lid::cmd::kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return lid::cmd::kExitRuntime;
  }
  return lid::cmd::kExitUsage;
}
