// include/lid/tdnn.h

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

#ifndef LID_TDNN_H_
#define LID_TDNN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lid {

struct TdnnLayerSpec {
  std::vector<int> context_offsets;
  int out_dim = 0;
};

// Five time-delay layers over spliced frame contexts, statistics pooling
// (mean ++ stddev), two hidden segment layers, softmax output.
struct TdnnConfig {
  int input_dim = 20;
  std::vector<TdnnLayerSpec> frame_layers;  // exactly 5
  std::vector<int> segment_dims;            // exactly 2 hidden layers
  int n_languages = 0;

  double lr = 0.001;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int max_epochs = 30;
  int patience = 3;
  int chunk_frames = 300;
  int batch_size = 32;
  uint64_t seed = 7;

  // Canonical x-vector dims.
  static TdnnConfig PaperPreset(int n_languages);
  // Small dims so the full recipe runs in minutes.
  static TdnnConfig DeskPreset(int n_languages);
  // For double-precision finite-difference checks.
  static TdnnConfig TinyPreset(int n_languages);
  static TdnnConfig Preset(const std::string &name, int n_languages);

  int ReceptiveField() const;
  void Validate() const;
};

struct Affine {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

struct ForwardResult {
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;
};

struct TdnnModel {
  TdnnConfig config;
  std::vector<std::string> languages;
  std::string train_name;            // corpus tag for results grids
  std::vector<Affine> frame_layers;  // 5
  std::vector<Affine> segment_layers;  // 2 hidden + output
  int trained_epochs = 0;

  // Seeded uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases.
  static TdnnModel Init(const TdnnConfig &cfg,
                        std::vector<std::string> languages);

  ForwardResult Forward(const Eigen::MatrixXd &features) const;

  // The two halves around statistics pooling.  FrameActivations returns
  // the last frame layer's output; PosteriorFromFrames pools it and runs
  // the segment layers (this half is invariant to frame permutations).
  Eigen::MatrixXd FrameActivations(const Eigen::MatrixXd &features) const;
  ForwardResult PosteriorFromFrames(const Eigen::MatrixXd &frame_acts) const;

  // Detection score per language: log-odds of the softmax posterior,
  // computed stably as logit_l - logsumexp(other logits).
  Eigen::VectorXd ScoreUtterance(const Eigen::MatrixXd &features) const;
};

double NllLoss(const Eigen::VectorXd &probs, int label);

struct TrainReport {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;
  int stopped_epoch = 0;  // 1-based
  int best_epoch = 0;     // 1-based, minimizes val loss
};

struct LabeledUtterance {
  std::string utt_id;
  Eigen::MatrixXd features;
  int label = 0;
};

// AdamW training with per-epoch random 300-frame crops (short utterances
// wrap-padded), shuffled minibatches, and validation-loss early stopping
// with the configured patience.  Returns the parameters of the best
// validation epoch.
std::pair<TdnnModel, TrainReport> TrainTdnn(
    const TdnnConfig &cfg, const std::vector<std::string> &languages,
    const std::vector<LabeledUtterance> &train_set,
    const std::vector<LabeledUtterance> &val_set);

// Max relative error between analytic gradients and central finite
// differences (h = 1e-5) over every parameter of a model.
double GradientCheck(const TdnnConfig &cfg, const Eigen::MatrixXd &features,
                     int label);

// Model file: magic "LIDM", version u16, explicit little-endian config
// block, then parameter tensors in declaration order as 64-bit floats.
void SaveModel(const TdnnModel &model, const std::string &path);
TdnnModel LoadModel(const std::string &path);

// One decoupled-weight-decay Adam update for a single tensor (step is
// 1-based).  With a zero gradient and fresh moments this shrinks the
// parameter by exactly (1 - lr * weight_decay).
void AdamWUpdate(Eigen::MatrixXd *param, const Eigen::MatrixXd &grad,
                 Eigen::MatrixXd *m, Eigen::MatrixXd *v, int step, double lr,
                 double weight_decay, double beta1, double beta2, double eps);

// Incremental trainer; TrainTdnn drives it, tests can step it directly.
class TdnnTrainer {
 public:
  TdnnTrainer(const TdnnConfig &cfg, std::vector<std::string> languages);

  // One AdamW step on a minibatch of fixed-size chunks; returns the mean
  // NLL of the batch before the update.
  double StepBatch(const std::vector<const LabeledUtterance *> &batch);

  double ValidationLoss(const std::vector<LabeledUtterance> &val_set) const;

  const TdnnModel &model() const { return model_; }
  TdnnModel &mutable_model() { return model_; }

 private:
  TdnnModel model_;
  std::vector<Affine> m_frame_, v_frame_, m_seg_, v_seg_;
  int step_ = 0;
};

}  // namespace lid

#endif  // LID_TDNN_H_
