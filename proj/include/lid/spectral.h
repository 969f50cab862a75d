// include/lid/spectral.h

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

#ifndef LID_SPECTRAL_H_
#define LID_SPECTRAL_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lid/audio.h"
#include "lid/feature_matrix.h"

namespace lid {

// Log-of-power floor used everywhere a log of a power quantity is taken.
constexpr double kPowerFloor = 1e-12;

// One-sided power spectrogram.  Power is scaled so that the sum over bins
// of one frame equals the windowed frame's energy (interior bins carry the
// doubled two-sided mass).
struct Spectrogram {
  Eigen::MatrixXd power;         // F x T, linear units, >= 0
  std::vector<double> freqs_hz;  // F bin centers
  int frame_len_samples = 0;
  int hop_samples = 0;

  int Bins() const { return static_cast<int>(power.rows()); }
  int Frames() const { return static_cast<int>(power.cols()); }
};

struct StftOptions {
  double frame_ms = 20.0;
  double hop_ms = 10.0;
  int fft_size = 256;
  // 0 disables; the MFCC front-end uses 0.97.
  double preemphasis = 0.0;
};

Spectrogram Stft(const AudioBuffer &buf, const StftOptions &opts = {});

// Time-averaged log power spectrum of one segment.
struct LtasProfile {
  std::vector<double> values;  // natural-log power, length F
  std::vector<double> freqs_hz;
  long n_frames_accumulated = 0;
};

LtasProfile LtasSegment(const Spectrogram &spec);

// Unweighted mean across segments (each segment counts once).
LtasProfile LtasCorpus(const std::vector<LtasProfile> &profiles);

// Triangular mel filterbank, n_mels x (fft_size/2 + 1), peak-one filters
// with centers equally spaced on mel(f) = 2595*log10(1 + f/700).
Eigen::MatrixXd MelFilterbank(int n_mels = 30, double fmin_hz = 20.0,
                              double fmax_hz = 3800.0, int fft_size = 256,
                              int sample_rate = 8000);

double HzToMel(double hz);
double MelToHz(double mel);

// Linear mel energies (PCEN consumes these).
FeatureMatrix MelEnergies(const Spectrogram &spec, const Eigen::MatrixXd &fb);

// log(E) with the 1e-12 floor.
FeatureMatrix LogMelSpectrogram(const Spectrogram &spec,
                                const Eigen::MatrixXd &fb);

struct MfccOptions {
  int n_coeffs = 20;
  int n_mels = 30;
  double fmin_hz = 20.0;
  double fmax_hz = 3800.0;
  StftOptions stft{20.0, 10.0, 256, 0.97};
};

// Full MFCC front-end: pre-emphasis, Hamming STFT, mel filterbank, log,
// orthonormal DCT-II keeping c0..c{n_coeffs-1}.  Expects silence-removed
// 8 kHz audio.
FeatureMatrix Mfcc(const AudioBuffer &buf, const MfccOptions &opts = {});

// Linear mel energies through the same front-end geometry (no log, no DCT).
FeatureMatrix MelFrontend(const AudioBuffer &buf, const MfccOptions &opts = {});

struct SnrReport {
  double snr_db = 0.0;
  double signal_power_db = 0.0;
  double noise_power_db = 0.0;
  long n_frames = 0;
};

// Percentile-histogram SNR estimate: 20 ms frame powers in dB are binned at
// 0.5 dB; noise level is the bin holding the 15th percentile, signal level
// the 85th.  Needs at least 50 frames.
SnrReport EstimateSnr(const AudioBuffer &buf);

struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1 edges
  std::vector<long> counts;       // n_bins
};

Histogram SnrHistogram(const std::vector<SnrReport> &reports,
                       double bin_width_db = 2.0);

// CSV exports: "freq_hz,value" / "bin_low_db,bin_high_db,count".
std::string LtasToCsv(const LtasProfile &profile);
std::string HistogramToCsv(const Histogram &hist);

}  // namespace lid

#endif  // LID_SPECTRAL_H_
