// src/audio.cc

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

#include "lid/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lid {

namespace {

constexpr double kLogFloorDb = -120.0;  // 10*log10(1e-12)

uint16_t ReadU16(const uint8_t *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::string &s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void PutU32(std::string &s, uint32_t v) {
  for (int i = 0; i < 4; i++) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

size_t VadMask::NumVoiced() const {
  return static_cast<size_t>(
      std::count(frame_decisions.begin(), frame_decisions.end(), true));
}

AudioBuffer LoadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file: " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());

  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("malformed WAV (not a RIFF/WAVE file): " + path);

  uint16_t format_tag = 0, n_channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  const uint8_t *payload = nullptr;
  uint32_t payload_size = 0;

  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const uint8_t *hdr = data.data() + pos;
    uint32_t chunk_size = ReadU32(hdr + 4);
    pos += 8;
    if (pos + chunk_size > data.size())
      throw std::runtime_error("malformed WAV (truncated chunk): " + path);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16)
        throw std::runtime_error("malformed WAV (short fmt chunk): " + path);
      const uint8_t *f = data.data() + pos;
      format_tag = ReadU16(f);
      n_channels = ReadU16(f + 2);
      sample_rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      payload = data.data() + pos;
      payload_size = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt)
    throw std::runtime_error("malformed WAV (no fmt chunk): " + path);
  if (format_tag != 1 && format_tag != 3)
    throw std::runtime_error("unsupported WAV codec (format tag " +
                             std::to_string(format_tag) + "): " + path);
  if (n_channels == 0 || sample_rate == 0)
    throw std::runtime_error("malformed WAV (bad fmt fields): " + path);
  if (payload == nullptr || payload_size == 0)
    throw std::runtime_error("empty WAV payload: " + path);

  int bytes_per_sample;
  if (format_tag == 1 && bits == 8) {
    bytes_per_sample = 1;
  } else if (format_tag == 1 && bits == 16) {
    bytes_per_sample = 2;
  } else if (format_tag == 3 && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw std::runtime_error("unsupported WAV sample format (" +
                             std::to_string(bits) + "-bit, tag " +
                             std::to_string(format_tag) + "): " + path);
  }

  size_t frame_bytes = static_cast<size_t>(bytes_per_sample) * n_channels;
  size_t n_frames = payload_size / frame_bytes;
  if (n_frames == 0) throw std::runtime_error("empty WAV payload: " + path);

  AudioBuffer out;
  out.sample_rate_hz = static_cast<int>(sample_rate);
  out.samples.resize(n_frames);
  for (size_t t = 0; t < n_frames; t++) {
    double acc = 0.0;
    for (int c = 0; c < n_channels; c++) {
      const uint8_t *p = payload + t * frame_bytes + c * bytes_per_sample;
      double v;
      if (bytes_per_sample == 1) {
        v = (static_cast<int>(p[0]) - 128) / 128.0;
      } else if (bytes_per_sample == 2) {
        int16_t s = static_cast<int16_t>(ReadU16(p));
        v = s / 32768.0;
      } else {
        float f;
        uint32_t u = ReadU32(p);
        std::memcpy(&f, &u, 4);
        v = std::clamp(static_cast<double>(f), -1.0, 1.0);
      }
      acc += v;
    }
    out.samples[t] = acc / n_channels;
  }
  return out;
}

void WriteWav(const std::string &path, const AudioBuffer &buf) {
  if (buf.samples.empty()) throw std::runtime_error("refusing to write empty WAV");
  std::string bytes;
  uint32_t data_size = static_cast<uint32_t>(buf.samples.size() * 2);
  bytes.reserve(44 + data_size);
  bytes.append("RIFF");
  PutU32(bytes, 36 + data_size);
  bytes.append("WAVE");
  bytes.append("fmt ");
  PutU32(bytes, 16);
  PutU16(bytes, 1);  // PCM
  PutU16(bytes, 1);  // mono
  PutU32(bytes, static_cast<uint32_t>(buf.sample_rate_hz));
  PutU32(bytes, static_cast<uint32_t>(buf.sample_rate_hz) * 2);
  PutU16(bytes, 2);
  PutU16(bytes, 16);
  bytes.append("data");
  PutU32(bytes, data_size);
  for (double x : buf.samples) {
    double c = std::clamp(x, -1.0, 1.0);
    int16_t q = static_cast<int16_t>(std::lrint(c * 32767.0));
    PutU16(bytes, static_cast<uint16_t>(q));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write WAV: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

AudioBuffer ResampleTo8k(const AudioBuffer &buf) {
  constexpr int kTargetRate = 8000;
  if (buf.samples.empty()) throw std::runtime_error("empty buffer");
  if (buf.sample_rate_hz == kTargetRate) return buf;
  if (buf.sample_rate_hz != 16000 && buf.sample_rate_hz != 32000 &&
      buf.sample_rate_hz != 48000)
    throw std::runtime_error(
        "non-integer resampling ratio from " +
        std::to_string(buf.sample_rate_hz) + " Hz to 8000 Hz");

  const int factor = buf.sample_rate_hz / kTargetRate;
  const int n_taps = 64 * factor + 1;  // odd: integer group delay
  const int delay = (n_taps - 1) / 2;
  const double cutoff_hz = 3800.0;
  const double fc = cutoff_hz / buf.sample_rate_hz;  // normalized (cycles/sample)
  const double pi = std::acos(-1.0);

  // Windowed-sinc low-pass, Hamming window, unity DC gain.
  std::vector<double> h(n_taps);
  double sum = 0.0;
  for (int i = 0; i < n_taps; i++) {
    int m = i - delay;
    double sinc = (m == 0) ? 2.0 * fc : std::sin(2.0 * pi * fc * m) / (pi * m);
    double w = 0.54 - 0.46 * std::cos(2.0 * pi * i / (n_taps - 1));
    h[i] = sinc * w;
    sum += h[i];
  }
  for (double &v : h) v /= sum;

  const auto &x = buf.samples;
  const long n = static_cast<long>(x.size());
  AudioBuffer out;
  out.sample_rate_hz = kTargetRate;
  out.samples.resize(static_cast<size_t>((n + factor - 1) / factor));
  for (size_t j = 0; j < out.samples.size(); j++) {
    long center = static_cast<long>(j) * factor;
    double acc = 0.0;
    for (int k = 0; k < n_taps; k++) {
      long idx = center + delay - k;  // delay-compensated alignment
      if (idx >= 0 && idx < n) acc += h[k] * x[idx];
    }
    out.samples[j] = acc;
  }
  return out;
}

VadMask EnergyVad(const AudioBuffer &buf, double frame_ms, double hop_ms,
                  double drop_db) {
  int frame_len = static_cast<int>(std::lround(frame_ms * buf.sample_rate_hz / 1000.0));
  int hop = static_cast<int>(std::lround(hop_ms * buf.sample_rate_hz / 1000.0));
  if (frame_len <= 0 || hop <= 0) throw std::invalid_argument("bad VAD geometry");
  long n = static_cast<long>(buf.samples.size());
  if (n < frame_len)
    throw std::runtime_error("buffer shorter than one VAD frame");
  long t_count = (n - frame_len) / hop + 1;

  std::vector<double> energy_db(t_count);
  double max_db = kLogFloorDb;
  for (long t = 0; t < t_count; t++) {
    double acc = 0.0;
    const double *p = buf.samples.data() + t * hop;
    for (int i = 0; i < frame_len; i++) acc += p[i] * p[i];
    double mean = acc / frame_len;
    energy_db[t] = 10.0 * std::log10(std::max(mean, 1e-12));
    max_db = std::max(max_db, energy_db[t]);
  }

  VadMask mask;
  mask.frame_len_samples = frame_len;
  mask.hop_samples = hop;
  mask.frame_decisions.resize(t_count);
  for (long t = 0; t < t_count; t++)
    mask.frame_decisions[t] =
        energy_db[t] > max_db - drop_db && energy_db[t] > -60.0;
  return mask;
}

AudioBuffer ApplyVad(const AudioBuffer &buf, const VadMask &mask) {
  const long n = static_cast<long>(buf.samples.size());
  const int hop = mask.hop_samples;
  const int frame_len = mask.frame_len_samples;
  const long t_count = static_cast<long>(mask.frame_decisions.size());
  if (hop <= 0 || frame_len <= 0 || t_count == 0 ||
      (n - frame_len) / hop + 1 != t_count)
    throw std::invalid_argument("VAD mask does not match buffer geometry");

  AudioBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  for (long t = 0; t < t_count; t++) {
    if (!mask.frame_decisions[t]) continue;
    long begin = t * hop;
    long end = (t == t_count - 1) ? std::min<long>(begin + frame_len, n)
                                  : begin + hop;
    out.samples.insert(out.samples.end(), buf.samples.begin() + begin,
                       buf.samples.begin() + end);
  }
  if (out.samples.empty())
    throw std::runtime_error("utterance empty after VAD");
  return out;
}

}  // namespace lid
