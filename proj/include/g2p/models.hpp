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

#include <random>
#include <vector>

#include "g2p/ops.hpp"
#include "g2p/tensor.hpp"

namespace g2p {

enum class LmKind { Identity, Transformer, Mixer };

struct LMConfig {
  LmKind kind = LmKind::Identity;
  int num_layers = 0;
  int embed_dim = 256;
  int num_heads = 4;
  int ffn_dim = 0;       // 0 -> 4 * embed_dim
  int token_ffn_dim = 0; // 0 -> max_seq_len (mixer token-mixing hidden)
  int max_seq_len = 64;
  bool use_positional = true;  // transformer only

  int ffn() const { return ffn_dim > 0 ? ffn_dim : 4 * embed_dim; }
  int token_ffn() const { return token_ffn_dim > 0 ? token_ffn_dim : max_seq_len; }
  void validate() const;
};

struct TransformerLayerParams {
  Tensor wq, bq, wk, bk, wv, bv, wo, bo;
  Tensor ln1_gain, ln1_bias;
  Tensor ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  Tensor ln2_gain, ln2_bias;
};

struct MixerLayerParams {
  Tensor ln1_gain, ln1_bias;
  Tensor tok_w1, tok_b1, tok_w2, tok_b2;
  Tensor ln2_gain, ln2_bias;
  Tensor ch_w1, ch_b1, ch_w2, ch_b2;
};

struct LMParams {
  std::vector<TransformerLayerParams> transformer;
  std::vector<MixerLayerParams> mixer;
  Tensor pos_table;  // L_max x D, transformer only
};

LMParams init_lm_params(const LMConfig& cfg, std::mt19937_64& rng);

struct TransformerOutput {
  Tensor out;
  // attn[layer][head] is a detached T x T row-stochastic map.
  std::vector<std::vector<Tensor>> attn;
};

// L post-norm encoder layers. pad_mask (optional, length T) marks padded
// key positions, which are excluded from attention via -inf pre-softmax.
TransformerOutput transformer_encode(const Tensor& e_cxt, const LMParams& p,
                                     const LMConfig& cfg,
                                     const std::vector<bool>& pad_mask = {});

// L pre-norm mixer layers over the zero-padded L_max grid; rows beyond the
// input length are sliced off on return.
Tensor mixer_encode(const Tensor& e_cxt, const LMParams& p,
                    const LMConfig& cfg);

// Adds learned position rows 0..T-1.
Tensor add_positional(const Tensor& e, const Tensor& pos_table);

}  // namespace g2p
