// include/lid/corpus.h

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

#ifndef LID_CORPUS_H_
#define LID_CORPUS_H_

#include <string>
#include <vector>

#include "lid/feature_matrix.h"

namespace lid {

enum class Split { kTrain, kTest };

std::string SplitName(Split s);
Split SplitFromName(const std::string &name);

struct ManifestEntry {
  std::string utt_id;
  std::string path;
  std::string language;
  std::string speaker;
  Split split = Split::kTrain;
};

// Typed list of utterances defining train/test populations.  Speakers in
// the two splits must be disjoint.
struct CorpusManifest {
  std::string corpus_name;
  std::vector<ManifestEntry> entries;

  std::vector<std::string> Languages() const;  // sorted unique
  std::vector<ManifestEntry> EntriesForSplit(Split split) const;
};

// Validates uniqueness of utt_ids and speaker disjointness across splits.
void ValidateManifest(const CorpusManifest &m);

// TSV with header `utt_id path language speaker split`.  Write-then-read
// round-trips byte-identically for normalized manifests.
CorpusManifest ReadManifest(const std::string &path);
void WriteManifest(const CorpusManifest &m, const std::string &path);

// Binary feature file: magic "LIDF", version u16 = 1, kind-tag u16,
// n_dims u32, n_frames u32, then 32-bit little-endian floats frame-major.
void WriteFeatures(const FeatureMatrix &x, const std::string &path);
FeatureMatrix ReadFeatures(const std::string &path);

}  // namespace lid

#endif  // LID_CORPUS_H_
