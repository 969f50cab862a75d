// include/lid/audio.h

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

#ifndef LID_AUDIO_H_
#define LID_AUDIO_H_

#include <string>
#include <vector>

namespace lid {

// Mono audio, samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  double DurationSeconds() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

// Per-frame voiced/unvoiced decisions tied to a frame/hop geometry.
struct VadMask {
  std::vector<bool> frame_decisions;
  int frame_len_samples = 0;
  int hop_samples = 0;

  size_t NumVoiced() const;
};

// Reads a RIFF/WAVE file (format tags 1 and 3; 8/16-bit integer or 32-bit
// float samples).  Multichannel input is averaged down to mono; integer
// samples are scaled by the type's full-scale value; float samples are
// clamped to [-1, 1].
AudioBuffer LoadWav(const std::string &path);

// Writes mono 16-bit PCM.
void WriteWav(const std::string &path, const AudioBuffer &buf);

// Integer-factor decimation to 8 kHz with a windowed-sinc anti-alias
// low-pass (Hamming, 64*factor+1 taps, 3.8 kHz cutoff).  Accepts rates
// {8000, 16000, 32000, 48000}; 8 kHz input is returned unchanged.
AudioBuffer ResampleTo8k(const AudioBuffer &buf);

// Frame-energy VAD: a frame is voiced iff its energy is within drop_db of
// the loudest frame and above an absolute -60 dBFS floor.
VadMask EnergyVad(const AudioBuffer &buf, double frame_ms = 20.0,
                  double hop_ms = 10.0, double drop_db = 30.0);

// Concatenates the hop-sized slices owned by voiced frames (the last frame
// owns its full analysis window).  Throws if no frame is voiced.
AudioBuffer ApplyVad(const AudioBuffer &buf, const VadMask &mask);

}  // namespace lid

#endif  // LID_AUDIO_H_
