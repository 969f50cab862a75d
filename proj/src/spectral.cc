// src/spectral.cc

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

#include "lid/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "lid/mathutil.h"
#include "lid/util.h"

namespace lid {

namespace {

// FFTW plan creation is not thread-safe; execution with the new-array
// interface is.
std::mutex &FftwPlanMutex() {
  static std::mutex m;
  return m;
}

// Real-to-complex FFT of a fixed size.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(FftwPlanMutex());
    plan_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(FftwPlanMutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  // Returns pointer to n/2+1 complex bins, valid until the next call.
  const fftw_complex *Transform(const double *x) {
    std::copy(x, x + n_, in_);
    fftw_execute(plan_);
    return out_;
  }

 private:
  int n_;
  double *in_;
  fftw_complex *out_;
  fftw_plan plan_;
};

}  // namespace

std::string FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kLogMel: return "logmel";
    case FeatureKind::kMelEnergy: return "mel-energy";
    case FeatureKind::kPcenMel: return "pcen-mel";
    case FeatureKind::kCepstraM0: return "cepstra-after-cms";
    case FeatureKind::kCepstraM1: return "cepstra-after-cmvn";
    case FeatureKind::kCepstraM2: return "cepstra-after-wcmvn";
    case FeatureKind::kCepstraM3: return "cepstra-after-fw";
    case FeatureKind::kCepstraM4: return "cepstra-after-rasta";
    case FeatureKind::kCepstraM5: return "cepstra-after-pcen";
  }
  return "unknown";
}

FeatureKind FeatureKindFromTag(uint16_t tag) {
  switch (tag) {
    case 0: case 1: case 2: case 3:
    case 10: case 11: case 12: case 13: case 14: case 15:
      return static_cast<FeatureKind>(tag);
    default:
      throw std::runtime_error("unknown feature-kind tag " +
                               std::to_string(tag));
  }
}

Spectrogram Stft(const AudioBuffer &buf, const StftOptions &opts) {
  const int sr = buf.sample_rate_hz;
  const int frame_len = static_cast<int>(std::lround(opts.frame_ms * sr / 1000.0));
  const int hop = static_cast<int>(std::lround(opts.hop_ms * sr / 1000.0));
  const int nfft = opts.fft_size;
  if (frame_len <= 0 || hop <= 0 || nfft < frame_len)
    throw std::invalid_argument("bad STFT geometry");
  const long n = static_cast<long>(buf.samples.size());
  if (n < frame_len)
    throw std::runtime_error("buffer shorter than one STFT frame");

  std::vector<double> x(buf.samples);
  if (opts.preemphasis > 0.0) {
    for (long i = n - 1; i >= 1; i--) x[i] -= opts.preemphasis * x[i - 1];
  }

  const long t_count = (n - frame_len) / hop + 1;
  const int n_bins = nfft / 2 + 1;
  const double pi = std::acos(-1.0);
  std::vector<double> window(frame_len);
  for (int i = 0; i < frame_len; i++)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * pi * i / (frame_len - 1));

  Spectrogram spec;
  spec.frame_len_samples = frame_len;
  spec.hop_samples = hop;
  spec.freqs_hz.resize(n_bins);
  for (int k = 0; k < n_bins; k++)
    spec.freqs_hz[k] = static_cast<double>(k) * sr / nfft;
  spec.power.resize(n_bins, t_count);

  RealFft fft(nfft);
  std::vector<double> frame(nfft, 0.0);
  for (long t = 0; t < t_count; t++) {
    const double *p = x.data() + t * hop;
    for (int i = 0; i < frame_len; i++) frame[i] = p[i] * window[i];
    std::fill(frame.begin() + frame_len, frame.end(), 0.0);
    const fftw_complex *bins = fft.Transform(frame.data());
    for (int k = 0; k < n_bins; k++) {
      double mag2 = bins[k][0] * bins[k][0] + bins[k][1] * bins[k][1];
      // One-sided scaling: interior bins carry both halves of the
      // two-sided spectrum; sum over bins then equals frame energy.
      double scale = (k == 0 || k == nfft / 2) ? 1.0 : 2.0;
      spec.power(k, t) = scale * mag2 / nfft;
    }
  }
  return spec;
}

LtasProfile LtasSegment(const Spectrogram &spec) {
  if (spec.Frames() < 1) throw std::runtime_error("empty spectrogram");
  LtasProfile out;
  out.freqs_hz = spec.freqs_hz;
  out.n_frames_accumulated = spec.Frames();
  out.values.assign(spec.Bins(), 0.0);
  for (int k = 0; k < spec.Bins(); k++) {
    double acc = 0.0;
    for (int t = 0; t < spec.Frames(); t++)
      acc += std::log(std::max(spec.power(k, t), kPowerFloor));
    out.values[k] = acc / spec.Frames();
  }
  return out;
}

LtasProfile LtasCorpus(const std::vector<LtasProfile> &profiles) {
  if (profiles.empty()) throw std::runtime_error("no LTAS profiles to average");
  const size_t f = profiles.front().values.size();
  LtasProfile out;
  out.freqs_hz = profiles.front().freqs_hz;
  out.values.assign(f, 0.0);
  for (const auto &p : profiles) {
    if (p.values.size() != f)
      throw std::runtime_error("LTAS profiles have mismatched bin counts");
    for (size_t k = 0; k < f; k++) out.values[k] += p.values[k];
    out.n_frames_accumulated += p.n_frames_accumulated;
  }
  for (size_t k = 0; k < f; k++) out.values[k] /= profiles.size();
  return out;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Eigen::MatrixXd MelFilterbank(int n_mels, double fmin_hz, double fmax_hz,
                              int fft_size, int sample_rate) {
  if (!(fmin_hz < fmax_hz && fmax_hz <= sample_rate / 2.0))
    throw std::invalid_argument("need fmin < fmax <= sample_rate/2");
  const int n_bins = fft_size / 2 + 1;
  const double mel_lo = HzToMel(fmin_hz);
  const double mel_hi = HzToMel(fmax_hz);
  std::vector<double> edges_hz(n_mels + 2);
  for (int m = 0; m < n_mels + 2; m++)
    edges_hz[m] = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, n_bins);
  for (int m = 0; m < n_mels; m++) {
    const double left = edges_hz[m], center = edges_hz[m + 1],
                 right = edges_hz[m + 2];
    double support = 0.0;
    for (int k = 0; k < n_bins; k++) {
      double f = static_cast<double>(k) * sample_rate / fft_size;
      double w = 0.0;
      if (f > left && f < right)
        w = (f <= center) ? (f - left) / (center - left)
                          : (right - f) / (right - center);
      fb(m, k) = w;
      support += w;
    }
    if (support <= 0.0)
      throw std::runtime_error(
          "mel filter " + std::to_string(m) +
          " has zero support; too many filters for this FFT resolution");
  }
  return fb;
}

FeatureMatrix MelEnergies(const Spectrogram &spec, const Eigen::MatrixXd &fb) {
  if (fb.cols() != spec.Bins())
    throw std::invalid_argument("filterbank / spectrogram bin mismatch");
  return FeatureMatrix(fb * spec.power, FeatureKind::kMelEnergy);
}

FeatureMatrix LogMelSpectrogram(const Spectrogram &spec,
                                const Eigen::MatrixXd &fb) {
  FeatureMatrix mel = MelEnergies(spec, fb);
  mel.values = mel.values.cwiseMax(kPowerFloor).array().log();
  mel.kind = FeatureKind::kLogMel;
  return mel;
}

FeatureMatrix Mfcc(const AudioBuffer &buf, const MfccOptions &opts) {
  Spectrogram spec = Stft(buf, opts.stft);
  Eigen::MatrixXd fb = MelFilterbank(opts.n_mels, opts.fmin_hz, opts.fmax_hz,
                                     opts.stft.fft_size, buf.sample_rate_hz);
  FeatureMatrix logmel = LogMelSpectrogram(spec, fb);
  Eigen::MatrixXd dct = DctMatrix(opts.n_coeffs, opts.n_mels);
  return FeatureMatrix(dct * logmel.values, FeatureKind::kMfcc);
}

FeatureMatrix MelFrontend(const AudioBuffer &buf, const MfccOptions &opts) {
  Spectrogram spec = Stft(buf, opts.stft);
  Eigen::MatrixXd fb = MelFilterbank(opts.n_mels, opts.fmin_hz, opts.fmax_hz,
                                     opts.stft.fft_size, buf.sample_rate_hz);
  return MelEnergies(spec, fb);
}

SnrReport EstimateSnr(const AudioBuffer &buf) {
  constexpr double kFrameMs = 20.0, kHopMs = 10.0, kBinDb = 0.5;
  const int sr = buf.sample_rate_hz;
  const int frame_len = static_cast<int>(std::lround(kFrameMs * sr / 1000.0));
  const int hop = static_cast<int>(std::lround(kHopMs * sr / 1000.0));
  const long n = static_cast<long>(buf.samples.size());
  const long t_count = (n >= frame_len) ? (n - frame_len) / hop + 1 : 0;
  if (t_count < 50)
    throw std::runtime_error("too-short input for SNR estimation (need >= 50 frames)");

  std::vector<double> power_db(t_count);
  double min_db = 1e30;
  for (long t = 0; t < t_count; t++) {
    double acc = 0.0;
    const double *p = buf.samples.data() + t * hop;
    for (int i = 0; i < frame_len; i++) acc += p[i] * p[i];
    power_db[t] = 10.0 * std::log10(std::max(acc / frame_len, kPowerFloor));
    min_db = std::min(min_db, power_db[t]);
  }

  // Histogram at 0.5 dB anchored at the minimum; percentile levels are bin
  // centers, so the estimate depends only on bin-index differences and is
  // exactly invariant to global gain.
  long n_bins = 1;
  for (long t = 0; t < t_count; t++) {
    long idx = static_cast<long>((power_db[t] - min_db) / kBinDb);
    n_bins = std::max(n_bins, idx + 1);
  }
  std::vector<long> counts(n_bins, 0);
  for (long t = 0; t < t_count; t++)
    counts[static_cast<long>((power_db[t] - min_db) / kBinDb)]++;

  auto percentile_center = [&](double q) {
    double target = q * t_count;
    long cum = 0;
    for (long b = 0; b < n_bins; b++) {
      cum += counts[b];
      if (cum >= target) return min_db + (b + 0.5) * kBinDb;
    }
    return min_db + (n_bins - 0.5) * kBinDb;
  };

  SnrReport rep;
  rep.noise_power_db = percentile_center(0.15);
  rep.signal_power_db = percentile_center(0.85);
  rep.snr_db = rep.signal_power_db - rep.noise_power_db;
  rep.n_frames = t_count;
  return rep;
}

Histogram SnrHistogram(const std::vector<SnrReport> &reports,
                       double bin_width_db) {
  if (reports.empty()) throw std::runtime_error("no SNR reports to histogram");
  if (bin_width_db <= 0.0) throw std::invalid_argument("bin width must be > 0");
  double lo = 1e30, hi = -1e30;
  for (const auto &r : reports) {
    lo = std::min(lo, r.snr_db);
    hi = std::max(hi, r.snr_db);
  }
  double first_edge = std::floor(lo / bin_width_db) * bin_width_db;
  long n_bins = static_cast<long>((hi - first_edge) / bin_width_db) + 1;
  Histogram h;
  h.counts.assign(n_bins, 0);
  h.bin_edges.resize(n_bins + 1);
  for (long b = 0; b <= n_bins; b++)
    h.bin_edges[b] = first_edge + b * bin_width_db;
  for (const auto &r : reports) {
    long idx = static_cast<long>((r.snr_db - first_edge) / bin_width_db);
    idx = std::clamp<long>(idx, 0, n_bins - 1);
    h.counts[idx]++;
  }
  return h;
}

std::string LtasToCsv(const LtasProfile &profile) {
  std::ostringstream ss;
  ss << "freq_hz,value\n";
  for (size_t k = 0; k < profile.values.size(); k++)
    ss << FormatDouble(profile.freqs_hz[k]) << ","
       << FormatDouble(profile.values[k]) << "\n";
  return ss.str();
}

std::string HistogramToCsv(const Histogram &hist) {
  std::ostringstream ss;
  ss << "bin_low_db,bin_high_db,count\n";
  for (size_t b = 0; b < hist.counts.size(); b++)
    ss << FormatDouble(hist.bin_edges[b]) << ","
       << FormatDouble(hist.bin_edges[b + 1]) << "," << hist.counts[b] << "\n";
  return ss.str();
}

}  // namespace lid
