// include/lid/compensation.h

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

#ifndef LID_COMPENSATION_H_
#define LID_COMPENSATION_H_

#include <optional>
#include <string>

#include "lid/feature_matrix.h"

namespace lid {

// Feature-level compensation methods, keyed as in the results tables.
enum class Method {
  kCms = 0,    // M0: cepstral mean subtraction
  kCmvn = 1,   // M1: cepstral mean and variance normalization
  kWcmvn = 2,  // M2: windowed CMVN
  kFw = 3,     // M3: feature warping
  kRasta = 4,  // M4: RASTA filtering
  kPcen = 5,   // M5: per-channel energy normalization
};

// Accepts "M0".."M5" and "cms,cmvn,wcmvn,fw,rasta,pcen"; nullopt otherwise.
std::optional<Method> ParseMethod(const std::string &token);
std::string MethodId(Method m);

// Per-dimension utterance mean removed.
FeatureMatrix Cms(const FeatureMatrix &x);

// Per-dimension mean 0, population (divisor T) stddev 1; sigma floored at
// 1e-10 so constant dimensions map to zeros.
FeatureMatrix Cmvn(const FeatureMatrix &x);

// CMVN over sliding windows.  Edge windows keep full size by anchoring at
// the matrix bounds (they only shrink when T < window_frames), so
// T <= window_frames reduces exactly to Cmvn.
FeatureMatrix WindowedCmvn(const FeatureMatrix &x, int window_frames = 301);

struct WarpConfig {
  int window_frames = 301;  // must be odd
};

// Rank-based short-term gaussianization: frame t's value is replaced by
// Phi^-1((R - 0.5)/N) where R is its rank inside the window centered at t
// (ties broken by frame index, earlier frame ranks lower).
FeatureMatrix FeatureWarp(const FeatureMatrix &x, const WarpConfig &cfg = {});

// Causal band-pass IIR along each dimension's trajectory:
// numerator 0.1*[2, 1, 0, -1, -2], denominator [1, -0.98], zero initial
// state.  The transfer function's pure z^4 advance is a uniform 4-frame
// time shift and is not applied.
FeatureMatrix RastaFilter(const FeatureMatrix &x);

struct PcenConfig {
  double s = 0.025;     // smoother coefficient, 0 < s < 1
  int tau_frames = 1;   // smoother hop
  double alpha = 0.98;  // AGC exponent, (0, 1]
  double delta = 2.0;   // DRC bias
  double r = 0.5;       // DRC exponent
  double eps = 1e-6;    // AGC stabilizer
};

// Temporal integration + AGC + DRC on linear mel energies:
//   M(t) = s*E(t) + (1-s)*M(t-tau), M(t)=E(t) for t < tau
//   G = E / (M + eps)^alpha
//   out = (G + delta)^r - delta^r
FeatureMatrix Pcen(const FeatureMatrix &energies, const PcenConfig &cfg = {});

// Dispatch by method id.  M0..M4 expect MFCC input; M5 expects linear mel
// energies and cepstralizes its output with an orthonormal DCT-II to
// n_out_coeffs dimensions so every method feeds the same classifier shape.
FeatureMatrix ApplyMethod(const FeatureMatrix &x, Method method,
                          int n_out_coeffs = 20);

}  // namespace lid

#endif  // LID_COMPENSATION_H_
