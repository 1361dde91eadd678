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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "g2p/models.hpp"
#include "g2p/reinforcer.hpp"
#include "g2p/tensor.hpp"
#include "g2p/vocab.hpp"

namespace g2p {

struct ModelConfig {
  ReinforcerKind reinforcer = ReinforcerKind::None;
  LmKind lm = LmKind::Identity;
  int embed_dim = 256;
  int num_layers = 1;
  int num_heads = 4;
  int ffn_dim = 0;        // 0 -> 4 * embed_dim
  int token_ffn_dim = 0;  // 0 -> max_seq_len
  int max_seq_len = 64;
  int kernel_size = 3;
  int shift_size = 1;
  bool use_positional = true;
  bool reinforcer_bias = true;

  ReinforcerConfig reinforcer_config() const;
  LMConfig lm_config() const;
};

// Parameter groups, the freeze() granularity.
// {embedding, reinforcer, lm, classifier}; the position table counts as lm.
struct NamedParam {
  std::string name;
  std::string group;
  Tensor tensor;
};

struct PipelineOutput {
  std::optional<Tensor> logits;  // K x |dict|; absent when K == 0
  std::vector<std::vector<Tensor>> attn;
};

// Full Eq.-style pipeline: embedding lookup -> (positional) -> Reinforcer ->
// language model -> polyphone-row gather -> |dict|-way classifier.
class Model {
 public:
  Model(ModelConfig cfg, Vocabulary vocab, PolyphoneDictionary dict,
        std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  const Vocabulary& vocab() const { return vocab_; }
  const PolyphoneDictionary& dictionary() const { return dict_; }

  PipelineOutput forward(const Sample& sample) const;
  // Language-model output rows at the polyphone positions, before the
  // classifier (exposed for analysis).
  Tensor encode(const std::vector<int>& char_ids) const;

  // Argmax prediction per polyphone position; restrict=true masks logits to
  // the character's dictionary candidates. Ties break toward the lowest id.
  std::vector<int> predict(const Sample& sample, bool restrict) const;

  std::vector<NamedParam>& params() { return params_; }
  const std::vector<NamedParam>& params() const { return params_; }
  std::vector<Tensor> param_tensors() const;
  long param_count() const;

  // Marks every tensor in the named groups requires_grad=false.
  // Valid names: lm, embedding, reinforcer, classifier.
  void freeze(const std::set<std::string>& frozen_set);

  Tensor embedding_table() const { return embedding_; }

 private:
  void register_params();

  ModelConfig cfg_;
  Vocabulary vocab_;
  PolyphoneDictionary dict_;
  Tensor embedding_;  // V_char x D
  Tensor conv_w_, conv_b_;
  Tensor sso_w_, sso_b_;
  LMParams lm_;
  Tensor cls_w_, cls_b_;  // D x |dict|, |dict|
  std::vector<NamedParam> params_;
};

// Standalone ops mirroring the pipeline stages (used by tests).
Tensor classify(const Tensor& e_poly, const Tensor& w_cls, const Tensor& bias);
std::vector<int> predict_from_logits(const Tensor& logits,
                                     const std::vector<std::string>& chars,
                                     const PolyphoneDictionary& dict,
                                     const Vocabulary& vocab, bool restrict);

std::string reinforcer_kind_name(ReinforcerKind k);
std::string lm_kind_name(LmKind k);
ReinforcerKind parse_reinforcer_kind(const std::string& s);
LmKind parse_lm_kind(const std::string& s);

}  // namespace g2p
