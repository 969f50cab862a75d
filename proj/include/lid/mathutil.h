// include/lid/mathutil.h

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

#ifndef LID_MATHUTIL_H_
#define LID_MATHUTIL_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lid {

// Standard normal CDF.
double NormalCdf(double x);

// Inverse standard normal CDF (Wichura AS 241, double precision).
// Domain (0, 1); throws std::domain_error outside.
double NormalQuantile(double p);

// Orthonormal DCT-II matrix, n_coeffs x n_in (n_coeffs <= n_in).
// Row k: a_k * cos(pi * k * (2n + 1) / (2 * n_in)),
// a_0 = sqrt(1/n_in), a_k = sqrt(2/n_in) otherwise.
Eigen::MatrixXd DctMatrix(int n_coeffs, int n_in);

double LogSumExp(const Eigen::VectorXd &v);

// 64-bit mixing (splitmix64 finalizer); used to derive per-item seeds.
uint64_t MixSeed(uint64_t a, uint64_t b);
uint64_t HashString(const std::string &s);

// Deterministic RNG with explicitly coded draw algorithms, so seeded
// streams do not depend on libstdc++ distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n); rejection-free modulo is fine here.
  uint64_t Below(uint64_t n) { return engine_() % n; }

  // Standard normal via Box-Muller; one cached value.
  double Gauss();

  template <typename T>
  void Shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; i--) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace lid

#endif  // LID_MATHUTIL_H_
