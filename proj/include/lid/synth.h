// include/lid/synth.h

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

#ifndef LID_SYNTH_H_
#define LID_SYNTH_H_

#include <optional>
#include <string>
#include <vector>

#include "lid/audio.h"
#include "lid/corpus.h"

namespace lid {

// Corpus-wide channel coloration.
struct ChannelSpec {
  enum class Kind { kFlat, kTilt, kBandpass };
  Kind kind = Kind::kFlat;
  double tilt_db_per_octave = 0.0;  // kTilt
  double band_lo_hz = 0.0;          // kBandpass
  double band_hi_hz = 0.0;

  // "flat" | "tilt:<dB/oct>" | "bandpass:<lo>,<hi>"
  static ChannelSpec Parse(const std::string &token);
  std::string ToString() const;
};

struct SyntheticCorpusSpec {
  std::string corpus_name;
  std::vector<std::string> languages;  // K >= 2
  int train_per_language = 0;
  int test_per_language = 0;
  double utterance_seconds = 0.0;  // >= 3
  ChannelSpec channel;
  std::optional<double> snr_db;  // nullopt = clean
  uint64_t seed = 0;

  void Validate() const;
};

// Emulated speech at 8 kHz: every language owns a seeded inventory of
// resonance patterns ("phones"); an utterance is a random sequence of
// phone segments and short pauses, excited by white noise, then shaped by
// a speaker tilt, a random utterance gain, the corpus channel filter, and
// additive noise at the configured SNR.  All bytes are a pure function of
// (spec, utt_id), so parallel and serial generation agree.
class SyntheticCorpusGenerator {
 public:
  explicit SyntheticCorpusGenerator(SyntheticCorpusSpec spec);

  // Writes wav/<utt_id>.wav files plus <out_dir>/manifest.tsv and returns
  // the manifest.
  CorpusManifest Generate(const std::string &out_dir) const;

  // Renders one utterance; exposed for tests.
  AudioBuffer RenderUtterance(const std::string &utt_id,
                              const std::string &language,
                              const std::string &speaker) const;

  CorpusManifest PlanManifest(const std::string &out_dir) const;

 private:
  SyntheticCorpusSpec spec_;
};

// Linear-phase FIR with the given log-magnitude tilt in dB/octave
// (flat below 100 Hz), applied with group-delay compensation.
std::vector<double> DesignTiltFir(double db_per_octave, int sample_rate,
                                  int n_taps = 255);
std::vector<double> DesignBandpassFir(double lo_hz, double hi_hz,
                                      int sample_rate, int n_taps = 255);
void FirFilterSame(const std::vector<double> &taps, std::vector<double> *x);

}  // namespace lid

#endif  // LID_SYNTH_H_
