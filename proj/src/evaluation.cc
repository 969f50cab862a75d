// src/evaluation.cc

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

#include "lid/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lid/mathutil.h"
#include "lid/util.h"

namespace lid {

namespace {

int LanguageIndex(const std::vector<std::string> &languages,
                  const std::string &name) {
  for (size_t i = 0; i < languages.size(); i++)
    if (languages[i] == name) return static_cast<int>(i);
  throw std::runtime_error("true language '" + name +
                           "' not in score header");
}

}  // namespace

ScorePools PoolTrials(const TrialScores &scores) {
  if (scores.rows.empty()) throw std::runtime_error("no trials to pool");
  ScorePools pools;
  for (const auto &row : scores.rows) {
    if (row.scores.size() != scores.languages.size())
      throw std::runtime_error("row '" + row.utt_id +
                               "' has wrong score count");
    int ti = LanguageIndex(scores.languages, row.true_language);
    for (size_t i = 0; i < row.scores.size(); i++) {
      if (static_cast<int>(i) == ti)
        pools.targets.push_back(row.scores[i]);
      else
        pools.nontargets.push_back(row.scores[i]);
    }
  }
  return pools;
}

DetCurve ComputeDetCurve(const std::vector<double> &targets,
                         const std::vector<double> &nontargets) {
  if (targets.empty() || nontargets.empty())
    throw std::runtime_error("DET curve needs nonempty target and nontarget pools");
  const double nt = static_cast<double>(targets.size());
  const double nn = static_cast<double>(nontargets.size());

  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + nontargets.size());
  thresholds.insert(thresholds.end(), targets.begin(), targets.end());
  thresholds.insert(thresholds.end(), nontargets.begin(), nontargets.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  std::vector<double> tgt_sorted(targets), non_sorted(nontargets);
  std::sort(tgt_sorted.begin(), tgt_sorted.end(), std::greater<double>());
  std::sort(non_sorted.begin(), non_sorted.end(), std::greater<double>());

  DetCurve curve;
  curve.n_targets = static_cast<long>(targets.size());
  curve.n_nontargets = static_cast<long>(nontargets.size());
  curve.points.reserve(thresholds.size() + 1);
  // Above every score: accept nothing.
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});

  size_t ti = 0, ni = 0;
  for (double th : thresholds) {
    while (ti < tgt_sorted.size() && tgt_sorted[ti] >= th) ti++;
    while (ni < non_sorted.size() && non_sorted[ni] >= th) ni++;
    // ti/ni = number of scores >= th (accepted).
    curve.points.push_back({th, ni / nn, (nt - ti) / nt});
  }
  return curve;
}

double Eer(const DetCurve &curve) {
  if (curve.points.empty()) throw std::runtime_error("empty DET curve");
  // diff = p_fa - p_miss is nondecreasing along the curve; find the
  // crossing.
  for (size_t i = 0; i < curve.points.size(); i++) {
    double diff = curve.points[i].p_fa - curve.points[i].p_miss;
    if (diff == 0.0) return curve.points[i].p_fa;
    if (diff > 0.0) {
      if (i == 0) return 0.5 * (curve.points[0].p_fa + curve.points[0].p_miss);
      const auto &a = curve.points[i - 1];
      const auto &b = curve.points[i];
      double da = a.p_fa - a.p_miss;  // < 0
      double db = diff;               // > 0
      double u = da / (da - db);      // in (0, 1]
      return a.p_fa + u * (b.p_fa - a.p_fa);
    }
  }
  // No crossing: the curve ends all-accepting with p_fa <= p_miss there.
  const auto &last = curve.points.back();
  return 0.5 * (last.p_fa + last.p_miss);
}

CavgBreakdown Cavg(const TrialScores &scores, double threshold) {
  const size_t n = scores.languages.size();
  if (n < 2) throw std::runtime_error("C_avg needs at least 2 languages");
  if (scores.rows.empty()) throw std::runtime_error("no trials");

  std::vector<long> trials_per_lang(n, 0);
  // accepted[t][l] counts rows with true language t accepted for language l;
  // missed[t] counts rows with true language t rejected for t.
  std::vector<std::vector<long>> accepted(n, std::vector<long>(n, 0));
  std::vector<long> missed(n, 0);
  for (const auto &row : scores.rows) {
    if (row.scores.size() != n)
      throw std::runtime_error("row '" + row.utt_id + "' has wrong score count");
    int t = LanguageIndex(scores.languages, row.true_language);
    trials_per_lang[t]++;
    for (size_t l = 0; l < n; l++) {
      bool accept = row.scores[l] >= threshold;
      if (accept) accepted[t][l]++;
    }
    if (row.scores[t] < threshold) missed[t]++;
  }
  for (size_t t = 0; t < n; t++)
    if (trials_per_lang[t] == 0)
      throw std::runtime_error("target language '" + scores.languages[t] +
                               "' has zero trials; its C_avg terms are undefined");

  CavgBreakdown out;
  out.languages = scores.languages;
  out.p_target = 0.5;
  out.p_nontarget = (1.0 - out.p_target) / (n - 1);
  out.p_miss.resize(n);
  out.p_fa.assign(n, std::vector<double>(n, 0.0));
  double total = 0.0;
  for (size_t lt = 0; lt < n; lt++) {
    out.p_miss[lt] = static_cast<double>(missed[lt]) / trials_per_lang[lt];
    double cost = out.p_target * out.p_miss[lt];
    for (size_t ln = 0; ln < n; ln++) {
      if (ln == lt) continue;
      out.p_fa[lt][ln] =
          static_cast<double>(accepted[ln][lt]) / trials_per_lang[ln];
      cost += out.p_nontarget * out.p_fa[lt][ln];
    }
    total += cost;
  }
  out.c_avg = total / n;
  return out;
}

std::string ScoresToTsv(const TrialScores &scores) {
  std::ostringstream ss;
  ss << "utt_id\ttrue_language";
  for (const auto &l : scores.languages) ss << "\t" << l;
  ss << "\n";
  for (const auto &row : scores.rows) {
    ss << row.utt_id << "\t" << row.true_language;
    for (double s : row.scores) ss << "\t" << FormatDouble(s, 10);
    ss << "\n";
  }
  return ss.str();
}

TrialScores ScoresFromTsv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty score file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = SplitString(line, '\t');
  if (header.size() < 4 || header[0] != "utt_id" || header[1] != "true_language")
    throw std::runtime_error("bad score file header");
  TrialScores scores;
  scores.languages.assign(header.begin() + 2, header.end());
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitString(line, '\t');
    if (fields.size() != header.size())
      throw std::runtime_error("score row has wrong field count: " + line);
    TrialScores::Row row;
    row.utt_id = fields[0];
    row.true_language = fields[1];
    for (size_t i = 2; i < fields.size(); i++)
      row.scores.push_back(std::stod(fields[i]));
    scores.rows.push_back(std::move(row));
  }
  return scores;
}

std::string DetCurveToCsv(const DetCurve &curve) {
  std::ostringstream ss;
  ss << "threshold,p_fa,p_miss,probit_fa,probit_miss\n";
  const double fa_min = 0.5 / curve.n_nontargets;
  const double miss_min = 0.5 / curve.n_targets;
  for (const auto &p : curve.points) {
    double fa = std::clamp(p.p_fa, fa_min, 1.0 - fa_min);
    double miss = std::clamp(p.p_miss, miss_min, 1.0 - miss_min);
    ss << FormatDouble(p.threshold) << "," << FormatDouble(p.p_fa) << ","
       << FormatDouble(p.p_miss) << "," << FormatDouble(NormalQuantile(fa))
       << "," << FormatDouble(NormalQuantile(miss)) << "\n";
  }
  return ss.str();
}

std::string ResultsGridToCsv(const std::vector<EvalCell> &cells) {
  std::ostringstream ss;
  ss << "train_corpus,test_corpus,duration_s,eer_pct,cavg_x100,within_corpora\n";
  for (const auto &c : cells) {
    ss << c.train_corpus << "," << c.test_corpus << ","
       << FormatDouble(c.duration_s) << "," << FormatDouble(c.eer_pct) << ","
       << FormatDouble(c.cavg_x100) << "," << (c.within_corpora ? 1 : 0)
       << "\n";
  }
  return ss.str();
}

}  // namespace lid
