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

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "g2p/model.hpp"

namespace g2p {

struct TrainConfig {
  double lr = 1e-4;
  int batch_size = 32;  // desk-scale default; 256 per the full recipe
  double label_smoothing = 0.1;
  int epochs = 100;
  std::uint64_t seed = 0;
  std::set<std::string> frozen_set;
  int eval_every = 10;  // epochs between val evaluations; 0 disables
  Precision precision = Precision::F64;
  double beta1 = 0.9, beta2 = 0.999, adam_epsilon = 1e-8;

  void validate() const;
};

struct RunReport {
  std::vector<double> epoch_loss;
  std::vector<double> val_accuracy;   // at eval points
  std::vector<int> val_epochs;
  double final_train_accuracy = -1;
  double test_accuracy = -1;          // filled by callers that evaluate
  long parameter_count = 0;
  double wall_time_sec = 0;
  std::uint64_t seed = 0;
  std::string config_echo;

  std::string to_json() const;
};

// Shuffled mini-batch training. Batch loss is the label-smoothed
// cross-entropy averaged over all polyphone positions in the batch; K=0
// sentences contribute nothing. Aborts with a diagnostic on non-finite loss.
// When `val` is non-empty and eval_every > 0, keeps the best-val parameter
// snapshot and restores it at the end.
RunReport train(Model& model, const std::vector<Sample>& train_samples,
                const std::vector<Sample>& val, const TrainConfig& cfg);

// Polyphone accuracy in percent. Errors when no polyphone position exists.
double evaluate(const Model& model, const std::vector<Sample>& samples,
                bool restrict = true);

struct MultiSeedResult {
  std::vector<double> per_seed_accuracy;
  double mean = 0, stddev = 0;
  long parameter_count = 0;
  std::string formatted;  // "93.72±0.91 (1.9M)"
};

// Re-splits per seed, trains a fresh model, evaluates on the test split;
// reports mean and sample standard deviation.
MultiSeedResult multi_seed_run(const ModelConfig& mcfg, const TrainConfig& tcfg,
                               const std::vector<Sample>& all_samples,
                               const Vocabulary& vocab,
                               const PolyphoneDictionary& dict,
                               const std::vector<std::uint64_t>& seeds);

std::string format_accuracy_cell(double mean, double stddev, long params);

struct AttentionExport {
  std::vector<std::string> labels;   // characters on both axes
  Tensor averaged;                   // T x T mean over layers and heads
  std::vector<double> target_row;
};

// Mean attention across all layers and heads for one sentence
// (transformer-kind models only).
AttentionExport export_attention(const Model& model, const Sample& sample,
                                 int target_position);
std::string attention_to_csv(const AttentionExport& e);

struct CaseStudyEntry {
  std::string sentence;
  int position = 0;
  std::string gold, pred_a, pred_b;
};

// Sentences where the two models disagree at any polyphone position.
std::vector<CaseStudyEntry> case_study_dump(const Model& a, const Model& b,
                                            const std::vector<Sample>& samples);

}  // namespace g2p
