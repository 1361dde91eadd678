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

#include "g2p/models.hpp"

#include <cmath>

namespace g2p {

namespace {
constexpr double kMaskValue = -1e30;
}

void LMConfig::validate() const {
  if (kind == LmKind::Transformer && embed_dim % num_heads != 0)
    throw ShapeError("lm: embed_dim must be divisible by num_heads");
  if (num_layers < 0) throw ShapeError("lm: num_layers must be >= 0");
  if (max_seq_len < 1) throw ShapeError("lm: max_seq_len must be >= 1");
}

LMParams init_lm_params(const LMConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  LMParams p;
  int d = cfg.embed_dim;
  if (cfg.kind == LmKind::Transformer) {
    if (cfg.use_positional)
      p.pos_table = Tensor::uniform_init({cfg.max_seq_len, d}, d, rng);
    for (int l = 0; l < cfg.num_layers; ++l) {
      TransformerLayerParams lp;
      lp.wq = Tensor::uniform_init({d, d}, d, rng);
      lp.bq = Tensor::zeros({d}, true);
      lp.wk = Tensor::uniform_init({d, d}, d, rng);
      lp.bk = Tensor::zeros({d}, true);
      lp.wv = Tensor::uniform_init({d, d}, d, rng);
      lp.bv = Tensor::zeros({d}, true);
      lp.wo = Tensor::uniform_init({d, d}, d, rng);
      lp.bo = Tensor::zeros({d}, true);
      lp.ln1_gain = Tensor::full({d}, 1.0, true);
      lp.ln1_bias = Tensor::zeros({d}, true);
      lp.ffn_w1 = Tensor::uniform_init({d, cfg.ffn()}, d, rng);
      lp.ffn_b1 = Tensor::zeros({cfg.ffn()}, true);
      lp.ffn_w2 = Tensor::uniform_init({cfg.ffn(), d}, cfg.ffn(), rng);
      lp.ffn_b2 = Tensor::zeros({d}, true);
      lp.ln2_gain = Tensor::full({d}, 1.0, true);
      lp.ln2_bias = Tensor::zeros({d}, true);
      p.transformer.push_back(std::move(lp));
    }
  } else if (cfg.kind == LmKind::Mixer) {
    int lmax = cfg.max_seq_len;
    int th = cfg.token_ffn();
    for (int l = 0; l < cfg.num_layers; ++l) {
      MixerLayerParams lp;
      lp.ln1_gain = Tensor::full({d}, 1.0, true);
      lp.ln1_bias = Tensor::zeros({d}, true);
      lp.tok_w1 = Tensor::uniform_init({lmax, th}, lmax, rng);
      lp.tok_b1 = Tensor::zeros({th}, true);
      lp.tok_w2 = Tensor::uniform_init({th, lmax}, th, rng);
      lp.tok_b2 = Tensor::zeros({lmax}, true);
      lp.ln2_gain = Tensor::full({d}, 1.0, true);
      lp.ln2_bias = Tensor::zeros({d}, true);
      lp.ch_w1 = Tensor::uniform_init({d, cfg.ffn()}, d, rng);
      lp.ch_b1 = Tensor::zeros({cfg.ffn()}, true);
      lp.ch_w2 = Tensor::uniform_init({cfg.ffn(), d}, cfg.ffn(), rng);
      lp.ch_b2 = Tensor::zeros({d}, true);
      p.mixer.push_back(std::move(lp));
    }
  }
  return p;
}

TransformerOutput transformer_encode(const Tensor& e_cxt, const LMParams& p,
                                     const LMConfig& cfg,
                                     const std::vector<bool>& pad_mask) {
  int t = e_cxt.dim(0), d = e_cxt.dim(1);
  if (t > cfg.max_seq_len)
    throw ShapeError("transformer: sequence length " + std::to_string(t) +
                     " exceeds max_seq_len " + std::to_string(cfg.max_seq_len));
  int h = cfg.num_heads;
  int dh = d / h;
  double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Tensor mask;
  bool masked = false;
  if (!pad_mask.empty()) {
    if (static_cast<int>(pad_mask.size()) != t)
      throw ShapeError("transformer: pad_mask length mismatch");
    mask = Tensor::zeros({t, t});
    for (int q = 0; q < t; ++q)
      for (int kpos = 0; kpos < t; ++kpos)
        if (pad_mask[kpos]) {
          mask.data()[static_cast<std::size_t>(q) * t + kpos] = kMaskValue;
          masked = true;
        }
  }

  TransformerOutput res;
  Tensor x = e_cxt;
  for (const TransformerLayerParams& lp : p.transformer) {
    Tensor q = affine(x, lp.wq, lp.bq);
    Tensor k = affine(x, lp.wk, lp.bk);
    Tensor v = affine(x, lp.wv, lp.bv);
    std::vector<Tensor> head_out;
    std::vector<Tensor> head_attn;
    for (int hi = 0; hi < h; ++hi) {
      Tensor qh = slice_cols(q, hi * dh, dh);
      Tensor kh = slice_cols(k, hi * dh, dh);
      Tensor vh = slice_cols(v, hi * dh, dh);
      Tensor scores = scale(matmul(qh, transpose2d(kh)), att_scale);
      if (masked) scores = add_const(scores, mask);
      Tensor a = softmax_lastdim(scores);
      head_attn.push_back(a.detach());
      head_out.push_back(matmul(a, vh));
    }
    res.attn.push_back(std::move(head_attn));
    Tensor ctx = affine(concat_cols(head_out), lp.wo, lp.bo);
    Tensor h1 = layer_norm(add(x, ctx), lp.ln1_gain, lp.ln1_bias);
    Tensor f = affine(gelu(affine(h1, lp.ffn_w1, lp.ffn_b1)), lp.ffn_w2,
                      lp.ffn_b2);
    x = layer_norm(add(h1, f), lp.ln2_gain, lp.ln2_bias);
  }
  res.out = x;
  return res;
}

Tensor mixer_encode(const Tensor& e_cxt, const LMParams& p,
                    const LMConfig& cfg) {
  int t = e_cxt.dim(0);
  if (t > cfg.max_seq_len)
    throw ShapeError("mixer: sequence length " + std::to_string(t) +
                     " exceeds max_seq_len " + std::to_string(cfg.max_seq_len));
  Tensor x = pad_rows(e_cxt, cfg.max_seq_len);
  for (const MixerLayerParams& lp : p.mixer) {
    // Token mixing across the padded length axis.
    Tensor n1 = layer_norm(x, lp.ln1_gain, lp.ln1_bias);
    Tensor nt = transpose2d(n1);  // D x L_max
    Tensor tok = affine(gelu(affine(nt, lp.tok_w1, lp.tok_b1)), lp.tok_w2,
                        lp.tok_b2);
    x = add(x, transpose2d(tok));
    // Channel mixing.
    Tensor n2 = layer_norm(x, lp.ln2_gain, lp.ln2_bias);
    Tensor ch = affine(gelu(affine(n2, lp.ch_w1, lp.ch_b1)), lp.ch_w2,
                       lp.ch_b2);
    x = add(x, ch);
  }
  return t == cfg.max_seq_len ? x : slice_rows_head(x, t);
}

Tensor add_positional(const Tensor& e, const Tensor& pos_table) {
  int t = e.dim(0);
  if (t > pos_table.dim(0))
    throw ShapeError("add_positional: sequence length " + std::to_string(t) +
                     " exceeds position table " +
                     std::to_string(pos_table.dim(0)));
  Tensor rows = t == pos_table.dim(0) ? pos_table
                                      : slice_rows_head(pos_table, t);
  return add(e, rows);
}

}  // namespace g2p
