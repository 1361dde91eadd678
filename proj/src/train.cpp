// Copyright 2026 The g2p-reinforcer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "g2p/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "g2p/data.hpp"
#include "g2p/ops.hpp"
#include "g2p/optimizer.hpp"

namespace g2p {

void TrainConfig::validate() const {
  if (lr <= 0) throw std::invalid_argument("train: lr must be positive");
  if (label_smoothing < 0 || label_smoothing >= 1)
    throw std::invalid_argument("train: label smoothing must be in [0,1)");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["parameter_count"] = parameter_count;
  j["wall_time_sec"] = wall_time_sec;
  j["epoch_loss"] = epoch_loss;
  j["val_epochs"] = val_epochs;
  j["val_accuracy"] = val_accuracy;
  j["final_train_accuracy"] = final_train_accuracy;
  j["test_accuracy"] = test_accuracy;
  j["config"] = config_echo;
  return j.dump(2);
}

namespace {

std::vector<std::vector<double>> snapshot_params(const Model& m) {
  std::vector<std::vector<double>> snap;
  for (const NamedParam& p : m.params()) snap.push_back(p.tensor.data());
  return snap;
}

void restore_params(Model& m, const std::vector<std::vector<double>>& snap) {
  for (std::size_t i = 0; i < snap.size(); ++i)
    m.params()[i].tensor.data() = snap[i];
}

std::string first_nonfinite_param(const Model& m) {
  for (const NamedParam& p : m.params()) {
    for (double v : p.tensor.data())
      if (!std::isfinite(v)) return p.name;
    for (double v : p.tensor.grad())
      if (!std::isfinite(v)) return p.name + ".grad";
  }
  return "batch loss";
}

}  // namespace

RunReport train(Model& model, const std::vector<Sample>& train_samples,
                const std::vector<Sample>& val, const TrainConfig& cfg) {
  cfg.validate();
  if (train_samples.empty())
    throw std::runtime_error("train: empty training split");
  set_numeric_mode(cfg.precision);
  model.freeze(cfg.frozen_set);

  auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.seed = cfg.seed;
  report.parameter_count = model.param_count();
  {
    std::ostringstream os;
    os << "reinforcer=" << reinforcer_kind_name(model.config().reinforcer)
       << " lm=" << lm_kind_name(model.config().lm)
       << " layers=" << model.config().num_layers
       << " dim=" << model.config().embed_dim << " lr=" << cfg.lr
       << " batch=" << cfg.batch_size << " smoothing=" << cfg.label_smoothing
       << " epochs=" << cfg.epochs << " seed=" << cfg.seed;
    report.config_echo = os.str();
  }

  Adam opt(model.param_tensors(), cfg.lr, cfg.beta1, cfg.beta2,
           cfg.adam_epsilon);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train_samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  bool track_best = !val.empty() && cfg.eval_every > 0;
  double best_val = -1;
  std::vector<std::vector<double>> best_snap;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0;
    long position_total = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end = std::min(order.size(),
                                 start + static_cast<std::size_t>(cfg.batch_size));
      Tensor batch_loss;
      long batch_positions = 0;
      for (std::size_t bi = start; bi < end; ++bi) {
        const Sample& s = train_samples[order[bi]];
        if (s.polyphone_positions.empty()) continue;
        PipelineOutput out = model.forward(s);
        std::vector<int> targets;
        for (int p : s.polyphone_positions)
          targets.push_back(s.phoneme_ids[static_cast<std::size_t>(p)]);
        Tensor ce = cross_entropy_label_smoothed_sum(*out.logits, targets,
                                                     cfg.label_smoothing);
        batch_loss = batch_loss.defined() ? add(batch_loss, ce) : ce;
        batch_positions += static_cast<long>(targets.size());
      }
      if (!batch_loss.defined()) continue;  // all-monophone batch
      Tensor mean_loss = scale(batch_loss, 1.0 / static_cast<double>(batch_positions));
      double lv = mean_loss.item();
      if (!std::isfinite(lv))
        throw NumericError("train: non-finite loss at epoch " +
                           std::to_string(epoch) + "; first non-finite tensor: " +
                           first_nonfinite_param(model));
      opt.zero_grad();
      mean_loss.backward();
      opt.step();
      loss_sum += lv * static_cast<double>(batch_positions);
      position_total += batch_positions;
    }
    report.epoch_loss.push_back(
        position_total > 0 ? loss_sum / static_cast<double>(position_total) : 0.0);
    if (track_best && ((epoch + 1) % cfg.eval_every == 0 || epoch + 1 == cfg.epochs)) {
      double acc = evaluate(model, val, true);
      report.val_epochs.push_back(epoch + 1);
      report.val_accuracy.push_back(acc);
      if (acc > best_val) {
        best_val = acc;
        best_snap = snapshot_params(model);
      }
    }
  }
  if (track_best && !best_snap.empty()) restore_params(model, best_snap);
  report.final_train_accuracy = evaluate(model, train_samples, true);
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double evaluate(const Model& model, const std::vector<Sample>& samples,
                bool restrict) {
  long correct = 0, total = 0;
  for (const Sample& s : samples) {
    if (s.polyphone_positions.empty()) continue;
    std::vector<int> preds = model.predict(s, restrict);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      int pos = s.polyphone_positions[i];
      if (preds[i] == s.phoneme_ids[static_cast<std::size_t>(pos)]) ++correct;
      ++total;
    }
  }
  if (total == 0)
    throw std::runtime_error("evaluate: no polyphone positions in the sample set");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string format_accuracy_cell(double mean, double stddev, long params) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << mean << "±" << stddev << " (";
  os.precision(1);
  if (params >= 1000000)
    os << static_cast<double>(params) / 1e6 << "M";
  else
    os << static_cast<double>(params) / 1e3 << "K";
  os << ")";
  return os.str();
}

MultiSeedResult multi_seed_run(const ModelConfig& mcfg, const TrainConfig& tcfg,
                               const std::vector<Sample>& all_samples,
                               const Vocabulary& vocab,
                               const PolyphoneDictionary& dict,
                               const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 2)
    throw std::invalid_argument("multi_seed_run: need at least 2 seeds");
  MultiSeedResult res;
  for (std::uint64_t seed : seeds) {
    CorpusSplit split = split_corpus(all_samples, {8, 1, 1}, seed);
    Model model(mcfg, vocab, dict, seed);
    TrainConfig cfg = tcfg;
    cfg.seed = seed;
    train(model, split.train, split.val, cfg);
    res.per_seed_accuracy.push_back(evaluate(model, split.test, true));
    res.parameter_count = model.param_count();
  }
  double mean = 0;
  for (double a : res.per_seed_accuracy) mean += a;
  mean /= static_cast<double>(res.per_seed_accuracy.size());
  double var = 0;
  for (double a : res.per_seed_accuracy) var += (a - mean) * (a - mean);
  var /= static_cast<double>(res.per_seed_accuracy.size() - 1);
  res.mean = mean;
  res.stddev = std::sqrt(var);
  res.formatted = format_accuracy_cell(res.mean, res.stddev, res.parameter_count);
  return res;
}

AttentionExport export_attention(const Model& model, const Sample& sample,
                                 int target_position) {
  if (model.config().lm != LmKind::Transformer)
    throw std::runtime_error(
        "export_attention: requires a transformer language model");
  if (target_position < 0 || target_position >= sample.length())
    throw std::out_of_range("export_attention: target position out of range");
  PipelineOutput out = model.forward(sample);
  int t = sample.length();
  AttentionExport e;
  e.labels = sample.chars;
  e.averaged = Tensor::zeros({t, t});
  long maps = 0;
  for (const auto& layer : out.attn)
    for (const Tensor& a : layer) {
      for (std::size_t i = 0; i < e.averaged.numel(); ++i)
        e.averaged.data()[i] += a.data()[i];
      ++maps;
    }
  if (maps == 0)
    throw std::runtime_error("export_attention: model has no attention layers");
  for (double& v : e.averaged.data()) v /= static_cast<double>(maps);
  e.target_row.assign(
      e.averaged.data().begin() + static_cast<std::ptrdiff_t>(target_position) * t,
      e.averaged.data().begin() + static_cast<std::ptrdiff_t>(target_position + 1) * t);
  return e;
}

std::string attention_to_csv(const AttentionExport& e) {
  std::ostringstream os;
  os.precision(10);
  int t = e.averaged.dim(0);
  for (int j = 0; j < t; ++j) os << ',' << e.labels[static_cast<std::size_t>(j)];
  os << '\n';
  for (int i = 0; i < t; ++i) {
    os << e.labels[static_cast<std::size_t>(i)];
    for (int j = 0; j < t; ++j) os << ',' << e.averaged.at({i, j});
    os << '\n';
  }
  os << "target";
  for (double v : e.target_row) os << ',' << v;
  os << '\n';
  return os.str();
}

std::vector<CaseStudyEntry> case_study_dump(const Model& a, const Model& b,
                                            const std::vector<Sample>& samples) {
  if (a.vocab().phonemes() != b.vocab().phonemes() ||
      a.vocab().chars() != b.vocab().chars())
    throw std::runtime_error("case_study: vocabulary mismatch between models");
  std::vector<CaseStudyEntry> out;
  for (const Sample& s : samples) {
    if (s.polyphone_positions.empty()) continue;
    std::vector<int> pa = a.predict(s, true);
    std::vector<int> pb = b.predict(s, true);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i] == pb[i]) continue;
      CaseStudyEntry e;
      for (const std::string& c : s.chars) e.sentence += c;
      e.position = s.polyphone_positions[i];
      e.gold = a.vocab().phoneme_at(
          s.phoneme_ids[static_cast<std::size_t>(e.position)]);
      e.pred_a = a.vocab().phoneme_at(pa[i]);
      e.pred_b = b.vocab().phoneme_at(pb[i]);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace g2p
