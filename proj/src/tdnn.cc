// src/tdnn.cc

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

#include "lid/tdnn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lid/mathutil.h"
#include "lid/util.h"
#include "lid/wire.h"

namespace lid {

namespace {

constexpr double kPoolVarEps = 1e-10;

// Spliced context matrix: column t of the result stacks the input columns
// t + (off - min_off) for each offset.
Eigen::MatrixXd Splice(const Eigen::MatrixXd &x,
                       const std::vector<int> &offsets) {
  const int in_dim = static_cast<int>(x.rows());
  const int k = static_cast<int>(offsets.size());
  const int min_off = *std::min_element(offsets.begin(), offsets.end());
  const int max_off = *std::max_element(offsets.begin(), offsets.end());
  const int t_out = static_cast<int>(x.cols()) - (max_off - min_off);
  if (t_out < 1) throw std::runtime_error("input shorter than the receptive field");
  Eigen::MatrixXd s(in_dim * k, t_out);
  for (int j = 0; j < k; j++) {
    int shift = offsets[j] - min_off;
    s.middleRows(j * in_dim, in_dim) = x.middleCols(shift, t_out);
  }
  return s;
}

// Scatter-add of Splice's transpose.
void UnspliceAdd(const Eigen::MatrixXd &ds, const std::vector<int> &offsets,
                 int in_dim, Eigen::MatrixXd *dx) {
  const int k = static_cast<int>(offsets.size());
  const int min_off = *std::min_element(offsets.begin(), offsets.end());
  const int t_out = static_cast<int>(ds.cols());
  for (int j = 0; j < k; j++) {
    int shift = offsets[j] - min_off;
    dx->middleCols(shift, t_out) += ds.middleRows(j * in_dim, in_dim);
  }
}

struct Workspace {
  std::vector<Eigen::MatrixXd> spliced;  // per frame layer
  std::vector<Eigen::MatrixXd> frame_acts;
  Eigen::VectorXd mu, sigma, pooled;
  std::vector<Eigen::VectorXd> seg_acts;  // post-relu hidden activations
  Eigen::VectorXd logits, probs;
};

Eigen::VectorXd Softmax(const Eigen::VectorXd &logits) {
  Eigen::VectorXd p = (logits.array() - logits.maxCoeff()).exp();
  return p / p.sum();
}

void ForwardInternal(const TdnnModel &model, const Eigen::MatrixXd &features,
                     Workspace *ws) {
  if (features.rows() != model.config.input_dim)
    throw std::runtime_error("feature dim " + std::to_string(features.rows()) +
                             " does not match model input dim " +
                             std::to_string(model.config.input_dim));
  if (features.cols() < model.config.ReceptiveField())
    throw std::runtime_error("utterance shorter than the receptive field");

  const size_t n_frame = model.frame_layers.size();
  ws->spliced.resize(n_frame);
  ws->frame_acts.resize(n_frame);
  const Eigen::MatrixXd *cur = &features;
  for (size_t i = 0; i < n_frame; i++) {
    ws->spliced[i] = Splice(*cur, model.config.frame_layers[i].context_offsets);
    ws->frame_acts[i] =
        ((model.frame_layers[i].weight * ws->spliced[i]).colwise() +
         model.frame_layers[i].bias)
            .cwiseMax(0.0);
    cur = &ws->frame_acts[i];
  }

  const Eigen::MatrixXd &h = ws->frame_acts.back();
  const double t_count = static_cast<double>(h.cols());
  ws->mu = h.rowwise().mean();
  Eigen::MatrixXd centered = h.colwise() - ws->mu;
  Eigen::VectorXd var = centered.array().square().rowwise().sum() / t_count;
  ws->sigma = (var.array() + kPoolVarEps).sqrt();
  ws->pooled.resize(2 * h.rows());
  ws->pooled << ws->mu, ws->sigma;

  const size_t n_seg = model.segment_layers.size();
  ws->seg_acts.assign(n_seg - 1, Eigen::VectorXd());
  Eigen::VectorXd a = ws->pooled;
  for (size_t i = 0; i + 1 < n_seg; i++) {
    ws->seg_acts[i] = (model.segment_layers[i].weight * a +
                       model.segment_layers[i].bias)
                          .cwiseMax(0.0);
    a = ws->seg_acts[i];
  }
  ws->logits = model.segment_layers.back().weight * a +
               model.segment_layers.back().bias;
  ws->probs = Softmax(ws->logits);
}

struct Gradients {
  std::vector<Affine> frame;
  std::vector<Affine> segment;

  static Gradients ZerosLike(const TdnnModel &model) {
    Gradients g;
    auto zeros = [](const std::vector<Affine> &src) {
      std::vector<Affine> out(src.size());
      for (size_t i = 0; i < src.size(); i++) {
        out[i].weight = Eigen::MatrixXd::Zero(src[i].weight.rows(),
                                              src[i].weight.cols());
        out[i].bias = Eigen::VectorXd::Zero(src[i].bias.size());
      }
      return out;
    };
    g.frame = zeros(model.frame_layers);
    g.segment = zeros(model.segment_layers);
    return g;
  }
};

// Accumulates d(scale * NLL(label)) / d(params) into grads.
void Backward(const TdnnModel &model, const Workspace &ws, int label,
              double scale, Gradients *grads) {
  Eigen::VectorXd dlogits = ws.probs * scale;
  dlogits(label) -= scale;

  const size_t n_seg = model.segment_layers.size();
  Eigen::VectorXd d_out = dlogits;
  for (size_t i = n_seg; i-- > 0;) {
    const Eigen::VectorXd &input =
        (i == 0) ? ws.pooled : ws.seg_acts[i - 1];
    grads->segment[i].weight += d_out * input.transpose();
    grads->segment[i].bias += d_out;
    Eigen::VectorXd d_in = model.segment_layers[i].weight.transpose() * d_out;
    if (i > 0) {
      // ReLU mask of the producing layer.
      d_in = (ws.seg_acts[i - 1].array() > 0.0).select(d_in, 0.0);
    }
    d_out = d_in;
  }

  // d_out now holds the gradient wrt the pooled vector.
  const Eigen::MatrixXd &h = ws.frame_acts.back();
  const int pool_dim = static_cast<int>(h.rows());
  const double t_count = static_cast<double>(h.cols());
  Eigen::VectorXd dmu = d_out.head(pool_dim);
  Eigen::VectorXd dsigma = d_out.tail(pool_dim);
  Eigen::MatrixXd dh =
      ((h.colwise() - ws.mu).array().colwise() *
       (dsigma.array() / (t_count * ws.sigma.array())))
          .matrix();
  dh.colwise() += (dmu / t_count).eval();

  for (size_t i = model.frame_layers.size(); i-- > 0;) {
    const Eigen::MatrixXd &acts = ws.frame_acts[i];
    Eigen::MatrixXd dy = (acts.array() > 0.0).select(dh, 0.0);
    grads->frame[i].weight += dy * ws.spliced[i].transpose();
    grads->frame[i].bias += dy.rowwise().sum();
    if (i == 0) break;
    Eigen::MatrixXd ds = model.frame_layers[i].weight.transpose() * dy;
    const int in_dim = static_cast<int>(ws.frame_acts[i - 1].rows());
    dh = Eigen::MatrixXd::Zero(in_dim, ws.frame_acts[i - 1].cols());
    UnspliceAdd(ds, model.config.frame_layers[i].context_offsets, in_dim, &dh);
  }
}

Eigen::MatrixXd CropOrWrap(const Eigen::MatrixXd &features, int chunk,
                           Rng *rng) {
  const int t_count = static_cast<int>(features.cols());
  if (t_count == chunk) return features;
  if (t_count > chunk) {
    int start = static_cast<int>(rng->Below(t_count - chunk + 1));
    return features.middleCols(start, chunk);
  }
  Eigen::MatrixXd out(features.rows(), chunk);
  for (int j = 0; j < chunk; j++) out.col(j) = features.col(j % t_count);
  return out;
}

}  // namespace

TdnnConfig TdnnConfig::PaperPreset(int n_languages) {
  TdnnConfig cfg;
  cfg.frame_layers = {{{-2, -1, 0, 1, 2}, 512}, {{-2, 0, 2}, 512},
                      {{-3, 0, 3}, 512},        {{0}, 512},
                      {{0}, 1500}};
  cfg.segment_dims = {512, 512};
  cfg.n_languages = n_languages;
  return cfg;
}

TdnnConfig TdnnConfig::DeskPreset(int n_languages) {
  TdnnConfig cfg;
  cfg.frame_layers = {{{-2, -1, 0, 1, 2}, 64}, {{-2, 0, 2}, 64},
                      {{-3, 0, 3}, 64},        {{0}, 64},
                      {{0}, 150}};
  cfg.segment_dims = {64, 64};
  cfg.n_languages = n_languages;
  return cfg;
}

TdnnConfig TdnnConfig::TinyPreset(int n_languages) {
  TdnnConfig cfg;
  cfg.input_dim = 4;
  cfg.frame_layers = {{{-2, -1, 0, 1, 2}, 6}, {{-2, 0, 2}, 6},
                      {{-3, 0, 3}, 6},        {{0}, 6},
                      {{0}, 8}};
  cfg.segment_dims = {6, 6};
  cfg.n_languages = n_languages;
  cfg.chunk_frames = 20;
  cfg.batch_size = 4;
  return cfg;
}

TdnnConfig TdnnConfig::Preset(const std::string &name, int n_languages) {
  if (name == "desk") return DeskPreset(n_languages);
  if (name == "paper") return PaperPreset(n_languages);
  if (name == "tiny") return TinyPreset(n_languages);
  throw std::runtime_error("unknown preset '" + name + "'");
}

int TdnnConfig::ReceptiveField() const {
  int rf = 1;
  for (const auto &layer : frame_layers) {
    auto [lo, hi] = std::minmax_element(layer.context_offsets.begin(),
                                        layer.context_offsets.end());
    rf += *hi - *lo;
  }
  return rf;
}

void TdnnConfig::Validate() const {
  if (frame_layers.size() != 5)
    throw std::runtime_error("config needs exactly 5 frame layers");
  if (segment_dims.size() != 2)
    throw std::runtime_error("config needs exactly 2 hidden segment layers");
  if (input_dim < 1) throw std::runtime_error("bad input dim");
  if (n_languages < 2) throw std::runtime_error("need at least 2 languages");
  for (const auto &layer : frame_layers) {
    if (layer.context_offsets.empty() || layer.out_dim < 1)
      throw std::runtime_error("bad frame layer spec");
  }
  if (chunk_frames < ReceptiveField())
    throw std::runtime_error("chunk_frames below the receptive field");
  if (batch_size < 1 || max_epochs < 1 || patience < 1)
    throw std::runtime_error("bad training hyperparameters");
}

TdnnModel TdnnModel::Init(const TdnnConfig &cfg,
                          std::vector<std::string> languages) {
  cfg.Validate();
  if (static_cast<int>(languages.size()) != cfg.n_languages)
    throw std::runtime_error("language list does not match n_languages");
  TdnnModel model;
  model.config = cfg;
  model.languages = std::move(languages);
  Rng rng(cfg.seed);
  auto init_affine = [&rng](int out_dim, int in_dim) {
    Affine a;
    a.weight.resize(out_dim, in_dim);
    double bound = std::sqrt(6.0 / (in_dim + out_dim));
    for (int r = 0; r < out_dim; r++)
      for (int c = 0; c < in_dim; c++)
        a.weight(r, c) = rng.Uniform(-bound, bound);
    a.bias = Eigen::VectorXd::Zero(out_dim);
    return a;
  };
  int in_dim = cfg.input_dim;
  for (const auto &layer : cfg.frame_layers) {
    model.frame_layers.push_back(init_affine(
        layer.out_dim, in_dim * static_cast<int>(layer.context_offsets.size())));
    in_dim = layer.out_dim;
  }
  int seg_in = 2 * in_dim;  // mean ++ stddev
  for (int dim : cfg.segment_dims) {
    model.segment_layers.push_back(init_affine(dim, seg_in));
    seg_in = dim;
  }
  model.segment_layers.push_back(init_affine(cfg.n_languages, seg_in));
  return model;
}

ForwardResult TdnnModel::Forward(const Eigen::MatrixXd &features) const {
  Workspace ws;
  ForwardInternal(*this, features, &ws);
  return {ws.logits, ws.probs};
}

Eigen::MatrixXd TdnnModel::FrameActivations(
    const Eigen::MatrixXd &features) const {
  Workspace ws;
  ForwardInternal(*this, features, &ws);
  return ws.frame_acts.back();
}

ForwardResult TdnnModel::PosteriorFromFrames(
    const Eigen::MatrixXd &frame_acts) const {
  // Pooling and segment layers only; used where frame-order invariance
  // matters.
  const double t_count = static_cast<double>(frame_acts.cols());
  Eigen::VectorXd mu = frame_acts.rowwise().mean();
  Eigen::MatrixXd centered = frame_acts.colwise() - mu;
  Eigen::VectorXd var = centered.array().square().rowwise().sum() / t_count;
  Eigen::VectorXd pooled(2 * frame_acts.rows());
  pooled << mu, (var.array() + kPoolVarEps).sqrt().matrix();

  Eigen::VectorXd a = pooled;
  for (size_t i = 0; i + 1 < segment_layers.size(); i++)
    a = ((segment_layers[i].weight * a) + segment_layers[i].bias).cwiseMax(0.0);
  Eigen::VectorXd logits =
      segment_layers.back().weight * a + segment_layers.back().bias;
  return {logits, Softmax(logits)};
}

Eigen::VectorXd TdnnModel::ScoreUtterance(
    const Eigen::MatrixXd &features) const {
  ForwardResult fwd = Forward(features);
  const int n = static_cast<int>(fwd.logits.size());
  Eigen::VectorXd scores(n);
  Eigen::VectorXd others(n - 1);
  for (int l = 0; l < n; l++) {
    int k = 0;
    for (int j = 0; j < n; j++)
      if (j != l) others(k++) = fwd.logits(j);
    scores(l) = fwd.logits(l) - LogSumExp(others);
  }
  return scores;
}

double NllLoss(const Eigen::VectorXd &probs, int label) {
  if (label < 0 || label >= probs.size())
    throw std::out_of_range("label out of range");
  return -std::log(std::max(probs(label), 1e-300));
}

void AdamWUpdate(Eigen::MatrixXd *param, const Eigen::MatrixXd &grad,
                 Eigen::MatrixXd *m, Eigen::MatrixXd *v, int step, double lr,
                 double weight_decay, double beta1, double beta2, double eps) {
  *m = beta1 * *m + (1.0 - beta1) * grad;
  *v = beta2 * *v + (1.0 - beta2) * grad.cwiseProduct(grad);
  double bc1 = 1.0 - std::pow(beta1, step);
  double bc2 = 1.0 - std::pow(beta2, step);
  Eigen::MatrixXd m_hat = *m / bc1;
  Eigen::MatrixXd v_hat = *v / bc2;
  param->array() -=
      lr * (m_hat.array() / (v_hat.array().sqrt() + eps) +
            weight_decay * param->array());
}

TdnnTrainer::TdnnTrainer(const TdnnConfig &cfg,
                         std::vector<std::string> languages)
    : model_(TdnnModel::Init(cfg, std::move(languages))) {
  auto zeros = [](const std::vector<Affine> &src) {
    std::vector<Affine> out(src.size());
    for (size_t i = 0; i < src.size(); i++) {
      out[i].weight =
          Eigen::MatrixXd::Zero(src[i].weight.rows(), src[i].weight.cols());
      out[i].bias = Eigen::VectorXd::Zero(src[i].bias.size());
    }
    return out;
  };
  m_frame_ = zeros(model_.frame_layers);
  v_frame_ = zeros(model_.frame_layers);
  m_seg_ = zeros(model_.segment_layers);
  v_seg_ = zeros(model_.segment_layers);
}

double TdnnTrainer::StepBatch(
    const std::vector<const LabeledUtterance *> &batch) {
  if (batch.empty()) throw std::runtime_error("empty batch");
  Gradients grads = Gradients::ZerosLike(model_);
  const double scale = 1.0 / batch.size();
  double loss = 0.0;
  Workspace ws;
  for (const LabeledUtterance *utt : batch) {
    ForwardInternal(model_, utt->features, &ws);
    loss += scale * NllLoss(ws.probs, utt->label);
    Backward(model_, ws, utt->label, scale, &grads);
  }

  step_++;
  const TdnnConfig &cfg = model_.config;
  auto update = [&](std::vector<Affine> &params, std::vector<Affine> &grad,
                    std::vector<Affine> &m, std::vector<Affine> &v) {
    for (size_t i = 0; i < params.size(); i++) {
      AdamWUpdate(&params[i].weight, grad[i].weight, &m[i].weight,
                  &v[i].weight, step_, cfg.lr, cfg.weight_decay, cfg.beta1,
                  cfg.beta2, cfg.adam_eps);
      // Biases are not decayed.
      Eigen::MatrixXd gb = grad[i].bias, mb = m[i].bias, vb = v[i].bias,
                      pb = params[i].bias;
      AdamWUpdate(&pb, gb, &mb, &vb, step_, cfg.lr, 0.0, cfg.beta1, cfg.beta2,
                  cfg.adam_eps);
      params[i].bias = pb;
      m[i].bias = mb;
      v[i].bias = vb;
    }
  };
  update(model_.frame_layers, grads.frame, m_frame_, v_frame_);
  update(model_.segment_layers, grads.segment, m_seg_, v_seg_);
  return loss;
}

double TdnnTrainer::ValidationLoss(
    const std::vector<LabeledUtterance> &val_set) const {
  double loss = 0.0;
  for (const auto &utt : val_set)
    loss += NllLoss(model_.Forward(utt.features).probs, utt.label);
  return loss / val_set.size();
}

std::pair<TdnnModel, TrainReport> TrainTdnn(
    const TdnnConfig &cfg, const std::vector<std::string> &languages,
    const std::vector<LabeledUtterance> &train_set,
    const std::vector<LabeledUtterance> &val_set) {
  cfg.Validate();
  if (train_set.empty() || val_set.empty())
    throw std::runtime_error("empty training or validation split");
  auto count_langs = [&](const std::vector<LabeledUtterance> &set) {
    std::vector<bool> seen(cfg.n_languages, false);
    for (const auto &u : set) {
      if (u.label < 0 || u.label >= cfg.n_languages)
        throw std::runtime_error("label out of range in training data");
      seen[u.label] = true;
    }
    return std::count(seen.begin(), seen.end(), true);
  };
  if (count_langs(train_set) < 2 || count_langs(val_set) < 2)
    throw std::runtime_error("need at least 2 languages in every split");

  TdnnTrainer trainer(cfg, languages);
  Rng rng(MixSeed(cfg.seed, 0x7261696e));  // distinct from the init stream

  TrainReport report;
  TdnnModel best = trainer.model();
  double best_loss = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; epoch++) {
    // One random chunk per utterance, then shuffled minibatches.
    std::vector<LabeledUtterance> chunks(train_set.size());
    for (size_t i = 0; i < train_set.size(); i++) {
      chunks[i].utt_id = train_set[i].utt_id;
      chunks[i].label = train_set[i].label;
      chunks[i].features =
          CropOrWrap(train_set[i].features, cfg.chunk_frames, &rng);
    }
    std::vector<size_t> order(chunks.size());
    for (size_t i = 0; i < order.size(); i++) order[i] = i;
    rng.Shuffle(order);

    double epoch_loss = 0.0;
    int n_batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      size_t end = std::min(order.size(), begin + cfg.batch_size);
      std::vector<const LabeledUtterance *> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; i++) batch.push_back(&chunks[order[i]]);
      epoch_loss += trainer.StepBatch(batch);
      n_batches++;
    }
    report.train_loss.push_back(epoch_loss / n_batches);

    double val_loss = trainer.ValidationLoss(val_set);
    report.val_loss.push_back(val_loss);
    report.stopped_epoch = epoch;

    if (val_loss < best_loss) {
      best_loss = val_loss;
      best = trainer.model();
      best.trained_epochs = epoch;
      report.best_epoch = epoch;
      epochs_since_best = 0;
    } else {
      epochs_since_best++;
      if (epochs_since_best >= cfg.patience) break;
    }
  }
  return {std::move(best), report};
}

double GradientCheck(const TdnnConfig &cfg, const Eigen::MatrixXd &features,
                     int label) {
  TdnnConfig check_cfg = cfg;
  check_cfg.Validate();
  std::vector<std::string> langs;
  for (int i = 0; i < cfg.n_languages; i++)
    langs.push_back("L" + std::to_string(i));
  TdnnModel model = TdnnModel::Init(check_cfg, langs);

  Workspace ws;
  ForwardInternal(model, features, &ws);
  Gradients grads = Gradients::ZerosLike(model);
  Backward(model, ws, label, 1.0, &grads);

  auto loss_at = [&]() {
    Workspace w;
    ForwardInternal(model, features, &w);
    return NllLoss(w.probs, label);
  };

  const double h = 1e-5;
  double max_rel = 0.0;
  // Perturbs the live parameter storage in place so loss_at sees it.
  auto check_array = [&](double *param, const double *g, long n) {
    for (long i = 0; i < n; i++) {
      double saved = param[i];
      param[i] = saved + h;
      double up = loss_at();
      param[i] = saved - h;
      double down = loss_at();
      param[i] = saved;
      double numeric = (up - down) / (2.0 * h);
      double analytic = g[i];
      double rel = std::fabs(analytic - numeric) /
                   std::max(1.0, std::fabs(analytic) + std::fabs(numeric));
      max_rel = std::max(max_rel, rel);
    }
  };
  for (size_t i = 0; i < model.frame_layers.size(); i++) {
    check_array(model.frame_layers[i].weight.data(),
                grads.frame[i].weight.data(),
                model.frame_layers[i].weight.size());
    check_array(model.frame_layers[i].bias.data(), grads.frame[i].bias.data(),
                model.frame_layers[i].bias.size());
  }
  for (size_t i = 0; i < model.segment_layers.size(); i++) {
    check_array(model.segment_layers[i].weight.data(),
                grads.segment[i].weight.data(),
                model.segment_layers[i].weight.size());
    check_array(model.segment_layers[i].bias.data(),
                grads.segment[i].bias.data(),
                model.segment_layers[i].bias.size());
  }
  return max_rel;
}

namespace {

constexpr char kModelMagic[4] = {'L', 'I', 'D', 'M'};
constexpr uint16_t kModelVersion = 1;

void PutTensor(std::string &bytes, const Eigen::MatrixXd &m) {
  for (int r = 0; r < m.rows(); r++)
    for (int c = 0; c < m.cols(); c++) wire::PutF64(bytes, m(r, c));
}

void GetTensor(wire::Reader &reader, Eigen::MatrixXd *m) {
  for (int r = 0; r < m->rows(); r++)
    for (int c = 0; c < m->cols(); c++) (*m)(r, c) = reader.GetF64();
}

}  // namespace

void SaveModel(const TdnnModel &model, const std::string &path) {
  std::string bytes;
  bytes.append(kModelMagic, 4);
  wire::PutU16(bytes, kModelVersion);
  const TdnnConfig &cfg = model.config;
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.input_dim));
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.frame_layers.size()));
  for (const auto &layer : cfg.frame_layers) {
    wire::PutU32(bytes, static_cast<uint32_t>(layer.context_offsets.size()));
    for (int off : layer.context_offsets)
      wire::PutU32(bytes, static_cast<uint32_t>(static_cast<int32_t>(off)));
    wire::PutU32(bytes, static_cast<uint32_t>(layer.out_dim));
  }
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.segment_dims.size()));
  for (int dim : cfg.segment_dims) wire::PutU32(bytes, static_cast<uint32_t>(dim));
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.n_languages));
  wire::PutF64(bytes, cfg.lr);
  wire::PutF64(bytes, cfg.weight_decay);
  wire::PutF64(bytes, cfg.beta1);
  wire::PutF64(bytes, cfg.beta2);
  wire::PutF64(bytes, cfg.adam_eps);
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.max_epochs));
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.patience));
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.chunk_frames));
  wire::PutU32(bytes, static_cast<uint32_t>(cfg.batch_size));
  wire::PutU64(bytes, cfg.seed);
  wire::PutU32(bytes, static_cast<uint32_t>(model.trained_epochs));
  wire::PutString(bytes, model.train_name);
  for (const auto &lang : model.languages) wire::PutString(bytes, lang);
  for (const auto &layer : model.frame_layers) {
    PutTensor(bytes, layer.weight);
    PutTensor(bytes, layer.bias);
  }
  for (const auto &layer : model.segment_layers) {
    PutTensor(bytes, layer.weight);
    PutTensor(bytes, layer.bias);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

TdnnModel LoadModel(const std::string &path) {
  std::vector<uint8_t> data = ReadBinaryFile(path);
  if (data.size() < 6 || std::memcmp(data.data(), kModelMagic, 4) != 0)
    throw std::runtime_error("bad magic in model file: " + path);
  wire::Reader reader(data.data() + 4, data.size() - 4, "model file " + path);
  uint16_t version = reader.GetU16();
  if (version != kModelVersion)
    throw std::runtime_error("unsupported model version " +
                             std::to_string(version) + ": " + path);
  TdnnConfig cfg;
  cfg.input_dim = static_cast<int>(reader.GetU32());
  uint32_t n_frame = reader.GetU32();
  cfg.frame_layers.resize(n_frame);
  for (auto &layer : cfg.frame_layers) {
    uint32_t n_off = reader.GetU32();
    layer.context_offsets.resize(n_off);
    for (auto &off : layer.context_offsets)
      off = static_cast<int32_t>(reader.GetU32());
    layer.out_dim = static_cast<int>(reader.GetU32());
  }
  uint32_t n_seg = reader.GetU32();
  cfg.segment_dims.resize(n_seg);
  for (auto &dim : cfg.segment_dims) dim = static_cast<int>(reader.GetU32());
  cfg.n_languages = static_cast<int>(reader.GetU32());
  cfg.lr = reader.GetF64();
  cfg.weight_decay = reader.GetF64();
  cfg.beta1 = reader.GetF64();
  cfg.beta2 = reader.GetF64();
  cfg.adam_eps = reader.GetF64();
  cfg.max_epochs = static_cast<int>(reader.GetU32());
  cfg.patience = static_cast<int>(reader.GetU32());
  cfg.chunk_frames = static_cast<int>(reader.GetU32());
  cfg.batch_size = static_cast<int>(reader.GetU32());
  cfg.seed = reader.GetU64();

  TdnnModel model;
  model.config = cfg;
  model.trained_epochs = static_cast<int>(reader.GetU32());
  model.train_name = reader.GetString();
  model.languages.resize(cfg.n_languages);
  for (auto &lang : model.languages) lang = reader.GetString();

  int in_dim = cfg.input_dim;
  for (const auto &layer : cfg.frame_layers) {
    Affine a;
    a.weight.resize(layer.out_dim,
                    in_dim * static_cast<int>(layer.context_offsets.size()));
    a.bias.resize(layer.out_dim);
    model.frame_layers.push_back(std::move(a));
    in_dim = layer.out_dim;
  }
  int seg_in = 2 * in_dim;
  for (int dim : cfg.segment_dims) {
    Affine a;
    a.weight.resize(dim, seg_in);
    a.bias.resize(dim);
    model.segment_layers.push_back(std::move(a));
    seg_in = dim;
  }
  Affine out_layer;
  out_layer.weight.resize(cfg.n_languages, seg_in);
  out_layer.bias.resize(cfg.n_languages);
  model.segment_layers.push_back(std::move(out_layer));

  for (auto &layer : model.frame_layers) {
    GetTensor(reader, &layer.weight);
    Eigen::MatrixXd b(layer.bias.size(), 1);
    GetTensor(reader, &b);
    layer.bias = b;
  }
  for (auto &layer : model.segment_layers) {
    GetTensor(reader, &layer.weight);
    Eigen::MatrixXd b(layer.bias.size(), 1);
    GetTensor(reader, &b);
    layer.bias = b;
  }
  reader.ExpectEnd();
  return model;
}

}  // namespace lid
