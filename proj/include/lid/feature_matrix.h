// include/lid/feature_matrix.h

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

#ifndef LID_FEATURE_MATRIX_H_
#define LID_FEATURE_MATRIX_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace lid {

enum class FeatureKind : uint16_t {
  kMfcc = 0,
  kLogMel = 1,
  kMelEnergy = 2,   // linear mel energies (PCEN input)
  kPcenMel = 3,
  kCepstraM0 = 10,  // cepstra after compensation method M<i> = 10 + i
  kCepstraM1 = 11,
  kCepstraM2 = 12,
  kCepstraM3 = 13,
  kCepstraM4 = 14,
  kCepstraM5 = 15,
};

std::string FeatureKindName(FeatureKind kind);
FeatureKind FeatureKindFromTag(uint16_t tag);

// D x T matrix of per-frame feature vectors (one column per frame).
struct FeatureMatrix {
  Eigen::MatrixXd values;
  FeatureKind kind = FeatureKind::kMfcc;

  FeatureMatrix() = default;
  FeatureMatrix(Eigen::MatrixXd v, FeatureKind k)
      : values(std::move(v)), kind(k) {}

  int Dim() const { return static_cast<int>(values.rows()); }
  int Frames() const { return static_cast<int>(values.cols()); }
};

}  // namespace lid

#endif  // LID_FEATURE_MATRIX_H_
