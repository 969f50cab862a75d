// src/corpus.cc

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

#include "lid/corpus.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lid/util.h"
#include "lid/wire.h"

namespace lid {

namespace {

constexpr char kFeatureMagic[4] = {'L', 'I', 'D', 'F'};
constexpr uint16_t kFeatureVersion = 1;

}  // namespace

std::string SplitName(Split s) {
  return s == Split::kTrain ? "train" : "test";
}

Split SplitFromName(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw std::runtime_error("unknown split token '" + name + "'");
}

std::vector<std::string> CorpusManifest::Languages() const {
  std::set<std::string> langs;
  for (const auto &e : entries) langs.insert(e.language);
  return {langs.begin(), langs.end()};
}

std::vector<ManifestEntry> CorpusManifest::EntriesForSplit(Split split) const {
  std::vector<ManifestEntry> out;
  for (const auto &e : entries)
    if (e.split == split) out.push_back(e);
  return out;
}

void ValidateManifest(const CorpusManifest &m) {
  if (m.entries.empty()) throw std::runtime_error("empty manifest");
  std::set<std::string> ids;
  std::set<std::string> train_speakers, test_speakers;
  for (const auto &e : m.entries) {
    if (!ids.insert(e.utt_id).second)
      throw std::runtime_error("duplicate utt_id '" + e.utt_id + "'");
    (e.split == Split::kTrain ? train_speakers : test_speakers)
        .insert(e.speaker);
  }
  for (const auto &s : train_speakers)
    if (test_speakers.count(s))
      throw std::runtime_error("speaker '" + s +
                               "' appears in both train and test splits");
}

CorpusManifest ReadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "utt_id\tpath\tlanguage\tspeaker\tsplit")
    throw std::runtime_error("bad manifest header in " + path);

  CorpusManifest m;
  // Corpus name: directory name for the conventional <corpus>/manifest.tsv
  // layout, file stem otherwise.
  std::filesystem::path p(path);
  m.corpus_name = (p.filename() == "manifest.tsv" && p.has_parent_path())
                      ? p.parent_path().filename().string()
                      : p.stem().string();

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitString(line, '\t');
    if (fields.size() != 5)
      throw std::runtime_error("manifest row has wrong field count: " + line);
    ManifestEntry e;
    e.utt_id = fields[0];
    e.path = fields[1];
    e.language = fields[2];
    e.speaker = fields[3];
    e.split = SplitFromName(fields[4]);
    m.entries.push_back(std::move(e));
  }
  ValidateManifest(m);
  return m;
}

void WriteManifest(const CorpusManifest &m, const std::string &path) {
  ValidateManifest(m);
  std::ostringstream ss;
  ss << "utt_id\tpath\tlanguage\tspeaker\tsplit\n";
  for (const auto &e : m.entries)
    ss << e.utt_id << "\t" << e.path << "\t" << e.language << "\t" << e.speaker
       << "\t" << SplitName(e.split) << "\n";
  WriteTextFile(path, ss.str());
}

void WriteFeatures(const FeatureMatrix &x, const std::string &path) {
  if (!x.values.allFinite())
    throw std::runtime_error("refusing to write non-finite features");
  std::string bytes;
  bytes.reserve(16 + static_cast<size_t>(x.Dim()) * x.Frames() * 4);
  bytes.append(kFeatureMagic, 4);
  wire::PutU16(bytes, kFeatureVersion);
  wire::PutU16(bytes, static_cast<uint16_t>(x.kind));
  wire::PutU32(bytes, static_cast<uint32_t>(x.Dim()));
  wire::PutU32(bytes, static_cast<uint32_t>(x.Frames()));
  for (int t = 0; t < x.Frames(); t++)
    for (int d = 0; d < x.Dim(); d++)
      wire::PutF32(bytes, static_cast<float>(x.values(d, t)));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write features: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

FeatureMatrix ReadFeatures(const std::string &path) {
  std::vector<uint8_t> data = ReadBinaryFile(path);
  if (data.size() < 16 || std::memcmp(data.data(), kFeatureMagic, 4) != 0)
    throw std::runtime_error("bad magic in feature file: " + path);
  wire::Reader reader(data.data() + 4, data.size() - 4,
                      "feature file " + path);
  uint16_t version = reader.GetU16();
  if (version != kFeatureVersion)
    throw std::runtime_error("unsupported feature file version " +
                             std::to_string(version) + ": " + path);
  FeatureKind kind = FeatureKindFromTag(reader.GetU16());
  uint32_t n_dims = reader.GetU32();
  uint32_t n_frames = reader.GetU32();
  if (n_dims == 0 || n_frames == 0 ||
      reader.Remaining() != static_cast<size_t>(n_dims) * n_frames * 4)
    throw std::runtime_error("truncated feature payload: " + path);

  FeatureMatrix x(Eigen::MatrixXd(n_dims, n_frames), kind);
  for (uint32_t t = 0; t < n_frames; t++)
    for (uint32_t d = 0; d < n_dims; d++) x.values(d, t) = reader.GetF32();
  reader.ExpectEnd();
  return x;
}

}  // namespace lid
