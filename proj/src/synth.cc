// src/synth.cc

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

#include "lid/synth.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lid/mathutil.h"
#include "lid/util.h"

namespace lid {

namespace {

constexpr int kSampleRate = 8000;
constexpr int kPhonesPerLanguage = 5;
constexpr int kResonatorsPerPhone = 3;
constexpr double kActiveRms = 0.15;

struct Resonator {
  double freq_hz;
  double bandwidth_hz;
  double gain;
};

using Phone = std::vector<Resonator>;

// Seeded once per (corpus seed, language name); the inventory is the
// language's identity.
std::vector<Phone> LanguageInventory(uint64_t seed,
                                     const std::string &language) {
  Rng rng(MixSeed(seed, HashString("lang:" + language)));
  static const double kLo[kResonatorsPerPhone] = {250.0, 800.0, 2000.0};
  static const double kHi[kResonatorsPerPhone] = {750.0, 1900.0, 3500.0};
  static const double kGain[kResonatorsPerPhone] = {1.0, 0.7, 0.5};
  std::vector<Phone> phones(kPhonesPerLanguage);
  for (auto &phone : phones) {
    phone.resize(kResonatorsPerPhone);
    for (int r = 0; r < kResonatorsPerPhone; r++) {
      phone[r].freq_hz = rng.Uniform(kLo[r], kHi[r]);
      phone[r].bandwidth_hz = rng.Uniform(80.0, 220.0);
      phone[r].gain = kGain[r];
    }
  }
  return phones;
}

// Parallel bank of two-pole resonators driven by a shared excitation.
void RenderPhoneSegment(const Phone &phone, Rng &exc_rng, int n_samples,
                        std::vector<double> *out) {
  const double pi = std::acos(-1.0);
  std::vector<double> excitation(n_samples);
  for (int i = 0; i < n_samples; i++) excitation[i] = exc_rng.Gauss();

  std::vector<double> mix(n_samples, 0.0);
  for (const auto &res : phone) {
    double r = std::exp(-pi * res.bandwidth_hz / kSampleRate);
    double a1 = 2.0 * r * std::cos(2.0 * pi * res.freq_hz / kSampleRate);
    double a2 = -r * r;
    double g = (1.0 - r) * res.gain;
    double y1 = 0.0, y2 = 0.0;
    for (int i = 0; i < n_samples; i++) {
      double y = g * excitation[i] + a1 * y1 + a2 * y2;
      mix[i] += y;
      y2 = y1;
      y1 = y;
    }
  }
  // 10 ms raised-cosine edges to avoid segment clicks.
  int ramp = std::min(n_samples / 2, kSampleRate / 100);
  for (int i = 0; i < ramp; i++) {
    double w = 0.5 * (1.0 - std::cos(pi * i / ramp));
    mix[i] *= w;
    mix[n_samples - 1 - i] *= w;
  }
  out->insert(out->end(), mix.begin(), mix.end());
}

}  // namespace

ChannelSpec ChannelSpec::Parse(const std::string &token) {
  ChannelSpec spec;
  if (token == "flat") return spec;
  if (token.rfind("tilt:", 0) == 0) {
    spec.kind = Kind::kTilt;
    spec.tilt_db_per_octave = std::stod(token.substr(5));
    return spec;
  }
  if (token.rfind("bandpass:", 0) == 0) {
    auto parts = SplitString(token.substr(9), ',');
    if (parts.size() != 2)
      throw std::runtime_error("bandpass channel needs \"bandpass:lo,hi\"");
    spec.kind = Kind::kBandpass;
    spec.band_lo_hz = std::stod(parts[0]);
    spec.band_hi_hz = std::stod(parts[1]);
    if (!(spec.band_lo_hz > 0.0 && spec.band_lo_hz < spec.band_hi_hz &&
          spec.band_hi_hz <= kSampleRate / 2.0))
      throw std::runtime_error("bad bandpass channel edges");
    return spec;
  }
  throw std::runtime_error("unknown channel token '" + token + "'");
}

std::string ChannelSpec::ToString() const {
  switch (kind) {
    case Kind::kFlat: return "flat";
    case Kind::kTilt: return "tilt:" + FormatDouble(tilt_db_per_octave);
    case Kind::kBandpass:
      return "bandpass:" + FormatDouble(band_lo_hz) + "," +
             FormatDouble(band_hi_hz);
  }
  return "flat";
}

void SyntheticCorpusSpec::Validate() const {
  if (corpus_name.empty()) throw std::runtime_error("corpus_name is empty");
  if (languages.size() < 2)
    throw std::runtime_error("need at least 2 languages");
  if (train_per_language < 1 || test_per_language < 1)
    throw std::runtime_error("utterance counts must be >= 1");
  if (utterance_seconds < 3.0)
    throw std::runtime_error("utterance_seconds must be >= 3");
}

std::vector<double> DesignTiltFir(double db_per_octave, int sample_rate,
                                  int n_taps) {
  // Frequency-sampled zero-phase design: gain k*log2(f/1kHz) dB, flat
  // below 100 Hz.
  const int grid = 513;
  std::vector<double> mag(grid);
  for (int i = 0; i < grid; i++) {
    double f = std::max(0.5 * sample_rate * i / (grid - 1), 100.0);
    double db = db_per_octave * std::log2(f / 1000.0);
    mag[i] = std::pow(10.0, db / 20.0);
  }
  const double pi = std::acos(-1.0);
  const int delay = (n_taps - 1) / 2;
  std::vector<double> taps(n_taps, 0.0);
  for (int m = 0; m < n_taps; m++) {
    double acc = 0.0;
    for (int i = 0; i < grid; i++) {
      double w = (i == 0 || i == grid - 1) ? 0.5 : 1.0;
      acc += w * mag[i] * std::cos(pi * i * (m - delay) / (grid - 1));
    }
    double window = 0.54 - 0.46 * std::cos(2.0 * pi * m / (n_taps - 1));
    taps[m] = window * acc / (grid - 1);
  }
  return taps;
}

std::vector<double> DesignBandpassFir(double lo_hz, double hi_hz,
                                      int sample_rate, int n_taps) {
  const double pi = std::acos(-1.0);
  const int delay = (n_taps - 1) / 2;
  const double f1 = lo_hz / sample_rate, f2 = hi_hz / sample_rate;
  std::vector<double> taps(n_taps);
  for (int m = 0; m < n_taps; m++) {
    int k = m - delay;
    double ideal =
        (k == 0) ? 2.0 * (f2 - f1)
                 : (std::sin(2.0 * pi * f2 * k) - std::sin(2.0 * pi * f1 * k)) /
                       (pi * k);
    double window = 0.54 - 0.46 * std::cos(2.0 * pi * m / (n_taps - 1));
    taps[m] = ideal * window;
  }
  return taps;
}

void FirFilterSame(const std::vector<double> &taps, std::vector<double> *x) {
  const long n = static_cast<long>(x->size());
  const int n_taps = static_cast<int>(taps.size());
  const int delay = (n_taps - 1) / 2;
  std::vector<double> y(n, 0.0);
  for (long i = 0; i < n; i++) {
    double acc = 0.0;
    for (int k = 0; k < n_taps; k++) {
      long idx = i + delay - k;
      if (idx >= 0 && idx < n) acc += taps[k] * (*x)[idx];
    }
    y[i] = acc;
  }
  x->swap(y);
}

SyntheticCorpusGenerator::SyntheticCorpusGenerator(SyntheticCorpusSpec spec)
    : spec_(std::move(spec)) {
  spec_.Validate();
}

CorpusManifest SyntheticCorpusGenerator::PlanManifest(
    const std::string &out_dir) const {
  CorpusManifest m;
  m.corpus_name = spec_.corpus_name;
  for (const auto &lang : spec_.languages) {
    for (Split split : {Split::kTrain, Split::kTest}) {
      int count = split == Split::kTrain ? spec_.train_per_language
                                         : spec_.test_per_language;
      int n_speakers = std::max(1, std::min(4, count));
      for (int i = 0; i < count; i++) {
        ManifestEntry e;
        char idx[16];
        std::snprintf(idx, sizeof(idx), "%03d", i);
        e.utt_id = spec_.corpus_name + "-" + lang + "-" + SplitName(split) + idx;
        e.path = out_dir + "/wav/" + e.utt_id + ".wav";
        e.language = lang;
        e.speaker = spec_.corpus_name + "-" + lang + "-" + SplitName(split) +
                    "-s" + std::to_string(i % n_speakers);
        e.split = split;
        m.entries.push_back(std::move(e));
      }
    }
  }
  return m;
}

AudioBuffer SyntheticCorpusGenerator::RenderUtterance(
    const std::string &utt_id, const std::string &language,
    const std::string &speaker) const {
  const long n = static_cast<long>(spec_.utterance_seconds * kSampleRate);
  const uint64_t useed = MixSeed(spec_.seed, HashString(utt_id));
  Rng plan_rng(MixSeed(useed, 1));
  Rng exc_rng(MixSeed(useed, 2));
  Rng noise_rng(MixSeed(useed, 3));
  Rng gain_rng(MixSeed(useed, 4));

  const std::vector<Phone> inventory = LanguageInventory(spec_.seed, language);

  // Phone segments with occasional pauses, so utterances carry both the
  // spectral dynamics a mean-removing normalizer preserves and the silence
  // gaps a noise-floor estimator needs.
  // Pause lengths keep >= 15% of 20 ms frames fully silent, which the
  // percentile SNR estimator needs to see the noise floor.
  std::vector<double> x;
  x.reserve(n);
  while (static_cast<long>(x.size()) < n) {
    long remaining = n - static_cast<long>(x.size());
    if (plan_rng.Uniform() < 0.3) {
      long gap = static_cast<long>(plan_rng.Uniform(0.08, 0.20) * kSampleRate);
      gap = std::min(gap, remaining);
      x.insert(x.end(), gap, 0.0);
    } else {
      int phone_idx = static_cast<int>(plan_rng.Below(kPhonesPerLanguage));
      long seg = static_cast<long>(plan_rng.Uniform(0.06, 0.18) * kSampleRate);
      seg = std::max<long>(seg, 80);
      seg = std::min(seg, remaining);
      RenderPhoneSegment(inventory[phone_idx], exc_rng,
                         static_cast<int>(seg), &x);
    }
  }

  // Normalize the active region to a fixed RMS before gain/channel.
  double active_power = 0.0;
  long active_count = 0;
  for (double v : x) {
    if (v != 0.0) {
      active_power += v * v;
      active_count++;
    }
  }
  if (active_count > 0) {
    double scale = kActiveRms / std::sqrt(active_power / active_count);
    for (double &v : x) v *= scale;
  }

  // Speaker tilt in [-2, 2] dB/octave.
  Rng spk_rng(MixSeed(spec_.seed, HashString("spk:" + speaker)));
  double spk_tilt = spk_rng.Uniform(-2.0, 2.0);
  std::vector<double> spk_fir = DesignTiltFir(spk_tilt, kSampleRate);
  FirFilterSame(spk_fir, &x);

  // Utterance gain in [-6, 6] dB.
  double gain_db = gain_rng.Uniform(-6.0, 6.0);
  double gain = std::pow(10.0, gain_db / 20.0);
  for (double &v : x) v *= gain;

  switch (spec_.channel.kind) {
    case ChannelSpec::Kind::kFlat:
      break;
    case ChannelSpec::Kind::kTilt: {
      std::vector<double> fir =
          DesignTiltFir(spec_.channel.tilt_db_per_octave, kSampleRate);
      FirFilterSame(fir, &x);
      break;
    }
    case ChannelSpec::Kind::kBandpass: {
      std::vector<double> fir = DesignBandpassFir(
          spec_.channel.band_lo_hz, spec_.channel.band_hi_hz, kSampleRate);
      FirFilterSame(fir, &x);
      break;
    }
  }

  if (spec_.snr_db.has_value()) {
    double sig_power = 0.0;
    for (double v : x) sig_power += v * v;
    sig_power /= x.size();
    double noise_power = sig_power / std::pow(10.0, *spec_.snr_db / 10.0);
    double sigma = std::sqrt(noise_power);
    for (double &v : x) v += sigma * noise_rng.Gauss();
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak > 0.95) {
    double scale = 0.95 / peak;
    for (double &v : x) v *= scale;
  }

  AudioBuffer buf;
  buf.sample_rate_hz = kSampleRate;
  buf.samples = std::move(x);
  return buf;
}

CorpusManifest SyntheticCorpusGenerator::Generate(
    const std::string &out_dir) const {
  CorpusManifest manifest = PlanManifest(out_dir);
  MakeDirs(out_dir + "/wav");
  ParallelFor(manifest.entries.size(), [&](size_t i) {
    const auto &e = manifest.entries[i];
    AudioBuffer buf = RenderUtterance(e.utt_id, e.language, e.speaker);
    WriteWav(e.path, buf);
  });
  WriteManifest(manifest, out_dir + "/manifest.tsv");
  return manifest;
}

}  // namespace lid
