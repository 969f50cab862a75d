// include/lid/util.h

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

#ifndef LID_UTIL_H_
#define LID_UTIL_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lid {

std::vector<std::string> SplitString(const std::string &s, char delim);

// Strips leading/trailing whitespace.
std::string TrimString(const std::string &s);

// Formats a double with `digits` significant digits ("%.<digits>g").
std::string FormatDouble(double x, int digits = 9);

std::string ReadTextFile(const std::string &path);
void WriteTextFile(const std::string &path, const std::string &content);
std::vector<uint8_t> ReadBinaryFile(const std::string &path);

bool FileExists(const std::string &path);
void MakeDirs(const std::string &path);

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Work items are
// independent; any deterministic ordering of outputs is the caller's job.
// threads <= 0 means: LIDBENCH_THREADS env var, else hardware concurrency.
void ParallelFor(size_t n, const std::function<void(size_t)> &fn,
                 int threads = 0);

int EnvThreadCap();

}  // namespace lid

#endif  // LID_UTIL_H_
