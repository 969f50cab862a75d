// include/lid/evaluation.h

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

#ifndef LID_EVALUATION_H_
#define LID_EVALUATION_H_

#include <string>
#include <vector>

namespace lid {

// Per-utterance detection scores against every candidate language.
struct TrialScores {
  struct Row {
    std::string utt_id;
    std::string true_language;
    std::vector<double> scores;  // one per language, header order
  };
  std::vector<std::string> languages;
  std::vector<Row> rows;
};

struct ScorePools {
  std::vector<double> targets;
  std::vector<double> nontargets;
};

// Language-pooled detection trials: each row contributes its true
// language's score to the target pool and every other score to the
// nontarget pool.
ScorePools PoolTrials(const TrialScores &scores);

// Ordered operating points, thresholds descending.  Accept iff score >= t.
struct DetCurve {
  struct Point {
    double threshold;
    double p_fa;
    double p_miss;
  };
  std::vector<Point> points;
  long n_targets = 0;
  long n_nontargets = 0;
};

DetCurve ComputeDetCurve(const std::vector<double> &targets,
                         const std::vector<double> &nontargets);

// Equal error rate from the curve: the exact operating point when one
// exists, otherwise linear interpolation between the adjacent points
// straddling p_fa = p_miss.
double Eer(const DetCurve &curve);

struct CavgBreakdown {
  std::vector<std::string> languages;
  std::vector<double> p_miss;               // per target language
  std::vector<std::vector<double>> p_fa;    // [target][nontarget]
  double p_target = 0.5;
  double p_nontarget = 0.0;  // (1 - p_target) / (N - 1)
  double c_avg = 0.0;
};

// Average detection cost with hard accept-iff-score>=threshold decisions:
//   C_avg = (1/N) * sum_Lt { P_T * P_Miss(Lt)
//                            + sum_{Ln != Lt} P_NT * P_FA(Lt, Ln) }
CavgBreakdown Cavg(const TrialScores &scores, double threshold = 0.0);

// One (train corpus, test corpus, duration) cell of the results grid.
struct EvalCell {
  std::string train_corpus;
  std::string test_corpus;
  double duration_s = 0.0;
  double eer_pct = 0.0;
  double cavg_x100 = 0.0;
  bool within_corpora = false;
  long n_utterances_scored = 0;
  long n_utterances_skipped = 0;  // shorter than the duration
};

// Tab-separated score file: header `utt_id true_language <lang...>`,
// scores printed with >= 9 significant digits.
std::string ScoresToTsv(const TrialScores &scores);
TrialScores ScoresFromTsv(const std::string &text);

// CSV `threshold,p_fa,p_miss,probit_fa,probit_miss`.  Probit columns clamp
// rates to [0.5/pool, 1 - 0.5/pool] so endpoints stay finite.
std::string DetCurveToCsv(const DetCurve &curve);

std::string ResultsGridToCsv(const std::vector<EvalCell> &cells);

}  // namespace lid

#endif  // LID_EVALUATION_H_
