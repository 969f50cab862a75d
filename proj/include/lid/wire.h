// include/lid/wire.h

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

#ifndef LID_WIRE_H_
#define LID_WIRE_H_

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace lid::wire {

inline void PutU16(std::string &s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void PutU32(std::string &s, uint32_t v) {
  for (int i = 0; i < 4; i++) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void PutU64(std::string &s, uint64_t v) {
  for (int i = 0; i < 8; i++) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void PutF32(std::string &s, float v) {
  uint32_t u;
  std::memcpy(&u, &v, 4);
  PutU32(s, u);
}

inline void PutF64(std::string &s, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  PutU64(s, u);
}

inline void PutString(std::string &s, const std::string &v) {
  PutU32(s, static_cast<uint32_t>(v.size()));
  s.append(v);
}

// Bounds-checked little-endian reader over a byte buffer.
class Reader {
 public:
  Reader(const uint8_t *data, size_t size, std::string context)
      : p_(data), end_(data + size), context_(std::move(context)) {}

  uint16_t GetU16() {
    Need(2);
    uint16_t v = static_cast<uint16_t>(p_[0] | (p_[1] << 8));
    p_ += 2;
    return v;
  }

  uint32_t GetU32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= static_cast<uint32_t>(p_[i]) << (8 * i);
    p_ += 4;
    return v;
  }

  uint64_t GetU64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(p_[i]) << (8 * i);
    p_ += 8;
    return v;
  }

  float GetF32() {
    uint32_t u = GetU32();
    float f;
    std::memcpy(&f, &u, 4);
    return f;
  }

  double GetF64() {
    uint64_t u = GetU64();
    double d;
    std::memcpy(&d, &u, 8);
    return d;
  }

  std::string GetString() {
    uint32_t n = GetU32();
    Need(n);
    std::string s(reinterpret_cast<const char *>(p_), n);
    p_ += n;
    return s;
  }

  void GetBytes(char *out, size_t n) {
    Need(n);
    std::memcpy(out, p_, n);
    p_ += n;
  }

  size_t Remaining() const { return static_cast<size_t>(end_ - p_); }

  void ExpectEnd() const {
    if (p_ != end_)
      throw std::runtime_error("trailing bytes in " + context_);
  }

 private:
  void Need(size_t n) {
    if (static_cast<size_t>(end_ - p_) < n)
      throw std::runtime_error("truncated payload in " + context_);
  }

  const uint8_t *p_;
  const uint8_t *end_;
  std::string context_;
};

}  // namespace lid::wire

#endif  // LID_WIRE_H_
