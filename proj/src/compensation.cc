// src/compensation.cc

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

#include "lid/compensation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lid/mathutil.h"

namespace lid {

namespace {

constexpr double kSigmaFloor = 1e-10;

void CheckMatrix(const FeatureMatrix &x) {
  if (x.Dim() < 1 || x.Frames() < 1)
    throw std::invalid_argument("empty feature matrix");
  if (!x.values.allFinite())
    throw std::invalid_argument("feature matrix has non-finite values");
}

// Window [begin, end) for frame t: full window_frames wide, anchored at the
// bounds (Kaldi sliding-CMVN convention).
void AnchoredWindow(int t, int frames, int window, int *begin, int *end) {
  int half = window / 2;
  int b = t - half;
  int e = b + window;
  if (b < 0) {
    b = 0;
    e = std::min(window, frames);
  } else if (e > frames) {
    e = frames;
    b = std::max(0, frames - window);
  }
  *begin = b;
  *end = e;
}

}  // namespace

std::optional<Method> ParseMethod(const std::string &token) {
  if (token == "M0" || token == "cms") return Method::kCms;
  if (token == "M1" || token == "cmvn") return Method::kCmvn;
  if (token == "M2" || token == "wcmvn") return Method::kWcmvn;
  if (token == "M3" || token == "fw") return Method::kFw;
  if (token == "M4" || token == "rasta") return Method::kRasta;
  if (token == "M5" || token == "pcen") return Method::kPcen;
  return std::nullopt;
}

std::string MethodId(Method m) {
  return "M" + std::to_string(static_cast<int>(m));
}

FeatureMatrix Cms(const FeatureMatrix &x) {
  CheckMatrix(x);
  FeatureMatrix out = x;
  Eigen::VectorXd mean = out.values.rowwise().mean();
  out.values.colwise() -= mean;
  return out;
}

FeatureMatrix Cmvn(const FeatureMatrix &x) {
  CheckMatrix(x);
  FeatureMatrix out = x;
  const int t_count = x.Frames();
  Eigen::VectorXd mean = out.values.rowwise().mean();
  out.values.colwise() -= mean;
  Eigen::VectorXd sigma =
      (out.values.array().square().rowwise().sum() / t_count).sqrt();
  for (int d = 0; d < x.Dim(); d++)
    out.values.row(d) /= std::max(sigma(d), kSigmaFloor);
  return out;
}

FeatureMatrix WindowedCmvn(const FeatureMatrix &x, int window_frames) {
  CheckMatrix(x);
  if (window_frames < 1) throw std::invalid_argument("window must be >= 1");
  const int d_count = x.Dim(), t_count = x.Frames();
  FeatureMatrix out(Eigen::MatrixXd(d_count, t_count), x.kind);

  // Prefix sums of x and x^2 per dimension.
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(d_count, t_count + 1);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d_count, t_count + 1);
  for (int t = 0; t < t_count; t++) {
    s1.col(t + 1) = s1.col(t) + x.values.col(t);
    s2.col(t + 1) = s2.col(t) + x.values.col(t).cwiseProduct(x.values.col(t));
  }
  for (int t = 0; t < t_count; t++) {
    int b, e;
    AnchoredWindow(t, t_count, window_frames, &b, &e);
    const double n = e - b;
    for (int d = 0; d < d_count; d++) {
      double mean = (s1(d, e) - s1(d, b)) / n;
      double var = (s2(d, e) - s2(d, b)) / n - mean * mean;
      double sigma = std::sqrt(std::max(var, 0.0));
      out.values(d, t) =
          (x.values(d, t) - mean) / std::max(sigma, kSigmaFloor);
    }
  }
  return out;
}

FeatureMatrix FeatureWarp(const FeatureMatrix &x, const WarpConfig &cfg) {
  CheckMatrix(x);
  if (cfg.window_frames < 1 || cfg.window_frames % 2 == 0)
    throw std::invalid_argument("warp window must be odd and >= 1");
  const int d_count = x.Dim(), t_count = x.Frames();
  FeatureMatrix out(Eigen::MatrixXd(d_count, t_count), x.kind);
  for (int d = 0; d < d_count; d++) {
    const auto row = x.values.row(d);
    for (int t = 0; t < t_count; t++) {
      int b, e;
      AnchoredWindow(t, t_count, cfg.window_frames, &b, &e);
      const int n = e - b;
      const double v = row(t);
      int rank = 1;
      for (int j = b; j < e; j++) {
        if (row(j) < v || (row(j) == v && j < t)) rank++;
      }
      out.values(d, t) = NormalQuantile((rank - 0.5) / n);
    }
  }
  return out;
}

FeatureMatrix RastaFilter(const FeatureMatrix &x) {
  CheckMatrix(x);
  // H(z) numerator 0.1*(2 + z^-1 - z^-3 - 2 z^-4), denominator 1 - 0.98 z^-1.
  static const double kNum[5] = {0.2, 0.1, 0.0, -0.1, -0.2};
  constexpr double kPole = 0.98;
  const int d_count = x.Dim(), t_count = x.Frames();
  FeatureMatrix out(Eigen::MatrixXd(d_count, t_count), x.kind);
  for (int d = 0; d < d_count; d++) {
    double y_prev = 0.0;
    for (int t = 0; t < t_count; t++) {
      double acc = 0.0;
      for (int k = 0; k < 5; k++)
        if (t - k >= 0) acc += kNum[k] * x.values(d, t - k);
      double y = acc + kPole * y_prev;
      out.values(d, t) = y;
      y_prev = y;
    }
  }
  return out;
}

FeatureMatrix Pcen(const FeatureMatrix &energies, const PcenConfig &cfg) {
  CheckMatrix(energies);
  if ((energies.values.array() < 0.0).any())
    throw std::invalid_argument("PCEN requires nonnegative energies");
  if (!(cfg.s > 0.0 && cfg.s < 1.0))
    throw std::invalid_argument("PCEN requires 0 < s < 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("PCEN requires alpha in (0, 1]");
  if (cfg.r <= 0.0) throw std::invalid_argument("PCEN requires r > 0");
  if (cfg.r < 1.0 && cfg.delta <= 0.0)
    throw std::invalid_argument("PCEN requires delta > 0 when r < 1");
  if (cfg.tau_frames < 1) throw std::invalid_argument("PCEN requires tau >= 1");

  const int d_count = energies.Dim(), t_count = energies.Frames();
  const auto &e = energies.values;
  Eigen::MatrixXd m(d_count, t_count);
  for (int t = 0; t < t_count; t++) {
    if (t < cfg.tau_frames) {
      m.col(t) = e.col(t);
    } else {
      m.col(t) = cfg.s * e.col(t) + (1.0 - cfg.s) * m.col(t - cfg.tau_frames);
    }
  }

  FeatureMatrix out(Eigen::MatrixXd(d_count, t_count), FeatureKind::kPcenMel);
  const double delta_r = std::pow(cfg.delta, cfg.r);
  for (int t = 0; t < t_count; t++) {
    for (int d = 0; d < d_count; d++) {
      double gain = e(d, t) / std::pow(m(d, t) + cfg.eps, cfg.alpha);
      out.values(d, t) = std::pow(gain + cfg.delta, cfg.r) - delta_r;
    }
  }
  return out;
}

FeatureMatrix ApplyMethod(const FeatureMatrix &x, Method method,
                          int n_out_coeffs) {
  auto require_cepstra = [&]() {
    if (x.kind != FeatureKind::kMfcc)
      throw std::invalid_argument("method " + MethodId(method) +
                                  " expects MFCC input, got " +
                                  FeatureKindName(x.kind));
  };
  FeatureMatrix out;
  switch (method) {
    case Method::kCms:
      require_cepstra();
      out = Cms(x);
      break;
    case Method::kCmvn:
      require_cepstra();
      out = Cmvn(x);
      break;
    case Method::kWcmvn:
      require_cepstra();
      out = WindowedCmvn(x);
      break;
    case Method::kFw:
      require_cepstra();
      out = FeatureWarp(x);
      break;
    case Method::kRasta:
      require_cepstra();
      out = RastaFilter(x);
      break;
    case Method::kPcen: {
      if (x.kind != FeatureKind::kMelEnergy)
        throw std::invalid_argument("method M5 expects linear mel energies, got " +
                                    FeatureKindName(x.kind));
      FeatureMatrix pcen = Pcen(x);
      Eigen::MatrixXd dct = DctMatrix(n_out_coeffs, pcen.Dim());
      return FeatureMatrix(dct * pcen.values, FeatureKind::kCepstraM5);
    }
  }
  out.kind = static_cast<FeatureKind>(10 + static_cast<int>(method));
  return out;
}

}  // namespace lid
