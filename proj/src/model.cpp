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

#include "g2p/model.hpp"

#include <limits>

namespace g2p {

ReinforcerConfig ModelConfig::reinforcer_config() const {
  ReinforcerConfig rc;
  rc.kind = reinforcer;
  rc.kernel_size = kernel_size;
  rc.shift_size = shift_size;
  rc.embed_dim = embed_dim;
  rc.bias = reinforcer_bias;
  return rc;
}

LMConfig ModelConfig::lm_config() const {
  LMConfig lc;
  lc.kind = lm;
  lc.num_layers = lm == LmKind::Identity ? 0 : num_layers;
  lc.embed_dim = embed_dim;
  lc.num_heads = num_heads;
  lc.ffn_dim = ffn_dim;
  lc.token_ffn_dim = token_ffn_dim;
  lc.max_seq_len = max_seq_len;
  lc.use_positional = use_positional;
  return lc;
}

Model::Model(ModelConfig cfg, Vocabulary vocab, PolyphoneDictionary dict,
             std::uint64_t seed)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)), dict_(std::move(dict)) {
  cfg_.reinforcer_config().validate();
  cfg_.lm_config().validate();
  std::mt19937_64 rng(seed);
  int d = cfg_.embed_dim;
  embedding_ = Tensor::uniform_init({vocab_.num_chars(), d}, d, rng);
  if (cfg_.reinforcer == ReinforcerKind::Conv) {
    conv_w_ = Tensor::uniform_init({d, d, cfg_.kernel_size},
                                   d * cfg_.kernel_size, rng);
    if (cfg_.reinforcer_bias) conv_b_ = Tensor::zeros({d}, true);
  } else if (cfg_.reinforcer == ReinforcerKind::Sso) {
    int w = 2 * cfg_.shift_size + 1;
    sso_w_ = Tensor::uniform_init({w * d, d}, w * d, rng);
    if (cfg_.reinforcer_bias) sso_b_ = Tensor::zeros({d}, true);
  }
  lm_ = init_lm_params(cfg_.lm_config(), rng);
  cls_w_ = Tensor::uniform_init({d, vocab_.num_phonemes()}, d, rng);
  cls_b_ = Tensor::zeros({vocab_.num_phonemes()}, true);
  register_params();
}

void Model::register_params() {
  params_.clear();
  params_.push_back({"embedding.table", "embedding", embedding_});
  if (conv_w_.defined()) params_.push_back({"reinforcer.conv.w", "reinforcer", conv_w_});
  if (conv_b_.defined()) params_.push_back({"reinforcer.conv.b", "reinforcer", conv_b_});
  if (sso_w_.defined()) params_.push_back({"reinforcer.sso.w", "reinforcer", sso_w_});
  if (sso_b_.defined()) params_.push_back({"reinforcer.sso.b", "reinforcer", sso_b_});
  if (lm_.pos_table.defined())
    params_.push_back({"lm.pos_table", "lm", lm_.pos_table});
  for (std::size_t l = 0; l < lm_.transformer.size(); ++l) {
    auto& lp = lm_.transformer[l];
    std::string pre = "lm.transformer." + std::to_string(l) + ".";
    params_.push_back({pre + "wq", "lm", lp.wq});
    params_.push_back({pre + "bq", "lm", lp.bq});
    params_.push_back({pre + "wk", "lm", lp.wk});
    params_.push_back({pre + "bk", "lm", lp.bk});
    params_.push_back({pre + "wv", "lm", lp.wv});
    params_.push_back({pre + "bv", "lm", lp.bv});
    params_.push_back({pre + "wo", "lm", lp.wo});
    params_.push_back({pre + "bo", "lm", lp.bo});
    params_.push_back({pre + "ln1_gain", "lm", lp.ln1_gain});
    params_.push_back({pre + "ln1_bias", "lm", lp.ln1_bias});
    params_.push_back({pre + "ffn_w1", "lm", lp.ffn_w1});
    params_.push_back({pre + "ffn_b1", "lm", lp.ffn_b1});
    params_.push_back({pre + "ffn_w2", "lm", lp.ffn_w2});
    params_.push_back({pre + "ffn_b2", "lm", lp.ffn_b2});
    params_.push_back({pre + "ln2_gain", "lm", lp.ln2_gain});
    params_.push_back({pre + "ln2_bias", "lm", lp.ln2_bias});
  }
  for (std::size_t l = 0; l < lm_.mixer.size(); ++l) {
    auto& lp = lm_.mixer[l];
    std::string pre = "lm.mixer." + std::to_string(l) + ".";
    params_.push_back({pre + "ln1_gain", "lm", lp.ln1_gain});
    params_.push_back({pre + "ln1_bias", "lm", lp.ln1_bias});
    params_.push_back({pre + "tok_w1", "lm", lp.tok_w1});
    params_.push_back({pre + "tok_b1", "lm", lp.tok_b1});
    params_.push_back({pre + "tok_w2", "lm", lp.tok_w2});
    params_.push_back({pre + "tok_b2", "lm", lp.tok_b2});
    params_.push_back({pre + "ln2_gain", "lm", lp.ln2_gain});
    params_.push_back({pre + "ln2_bias", "lm", lp.ln2_bias});
    params_.push_back({pre + "ch_w1", "lm", lp.ch_w1});
    params_.push_back({pre + "ch_b1", "lm", lp.ch_b1});
    params_.push_back({pre + "ch_w2", "lm", lp.ch_w2});
    params_.push_back({pre + "ch_b2", "lm", lp.ch_b2});
  }
  params_.push_back({"classifier.w", "classifier", cls_w_});
  params_.push_back({"classifier.b", "classifier", cls_b_});
}

Tensor Model::encode(const std::vector<int>& char_ids) const {
  Tensor e = embedding_lookup(embedding_, char_ids);
  if (cfg_.lm == LmKind::Transformer && cfg_.use_positional)
    e = add_positional(e, lm_.pos_table);
  switch (cfg_.reinforcer) {
    case ReinforcerKind::None:
      break;
    case ReinforcerKind::Conv:
      e = conv_reinforce(e, conv_w_, conv_b_);
      break;
    case ReinforcerKind::Sso:
      e = sso_reinforce(e, sso_w_, sso_b_, cfg_.shift_size);
      break;
  }
  switch (cfg_.lm) {
    case LmKind::Identity:
      break;
    case LmKind::Transformer:
      e = transformer_encode(e, lm_, cfg_.lm_config()).out;
      break;
    case LmKind::Mixer:
      e = mixer_encode(e, lm_, cfg_.lm_config());
      break;
  }
  return e;
}

PipelineOutput Model::forward(const Sample& sample) const {
  PipelineOutput out;
  Tensor e = embedding_lookup(embedding_, sample.char_ids);
  if (cfg_.lm == LmKind::Transformer && cfg_.use_positional)
    e = add_positional(e, lm_.pos_table);
  switch (cfg_.reinforcer) {
    case ReinforcerKind::None:
      break;
    case ReinforcerKind::Conv:
      e = conv_reinforce(e, conv_w_, conv_b_);
      break;
    case ReinforcerKind::Sso:
      e = sso_reinforce(e, sso_w_, sso_b_, cfg_.shift_size);
      break;
  }
  switch (cfg_.lm) {
    case LmKind::Identity:
      break;
    case LmKind::Transformer: {
      TransformerOutput t = transformer_encode(e, lm_, cfg_.lm_config());
      e = t.out;
      out.attn = std::move(t.attn);
      break;
    }
    case LmKind::Mixer:
      e = mixer_encode(e, lm_, cfg_.lm_config());
      break;
  }
  if (!sample.polyphone_positions.empty()) {
    Tensor e_poly = gather_rows(e, sample.polyphone_positions);
    out.logits = classify(e_poly, cls_w_, cls_b_);
  }
  return out;
}

std::vector<int> Model::predict(const Sample& sample, bool restrict) const {
  if (sample.polyphone_positions.empty()) return {};
  PipelineOutput out = forward(sample);
  std::vector<std::string> chars;
  for (int p : sample.polyphone_positions)
    chars.push_back(sample.chars.at(static_cast<std::size_t>(p)));
  return predict_from_logits(*out.logits, chars, dict_, vocab_, restrict);
}

std::vector<Tensor> Model::param_tensors() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const NamedParam& p : params_) out.push_back(p.tensor);
  return out;
}

long Model::param_count() const {
  long n = 0;
  for (const NamedParam& p : params_) n += static_cast<long>(p.tensor.numel());
  return n;
}

void Model::freeze(const std::set<std::string>& frozen_set) {
  static const std::set<std::string> valid = {"lm", "embedding", "reinforcer",
                                              "classifier"};
  for (const std::string& name : frozen_set)
    if (!valid.count(name))
      throw std::invalid_argument("freeze: unknown component '" + name + "'");
  for (NamedParam& p : params_)
    p.tensor.set_requires_grad(!frozen_set.count(p.group));
}

Tensor classify(const Tensor& e_poly, const Tensor& w_cls, const Tensor& bias) {
  return affine(e_poly, w_cls, bias);
}

std::vector<int> predict_from_logits(const Tensor& logits,
                                     const std::vector<std::string>& chars,
                                     const PolyphoneDictionary& dict,
                                     const Vocabulary& vocab, bool restrict) {
  int k = logits.dim(0), v = logits.dim(1);
  if (static_cast<int>(chars.size()) != k)
    throw ShapeError("predict: character count mismatch");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    const double* row = logits.data().data() + static_cast<std::size_t>(r) * v;
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    if (restrict) {
      for (const std::string& cand : dict.candidates(chars[r])) {
        int id = vocab.phoneme_id(cand);
        if (row[id] > best_score) {
          best_score = row[id];
          best = id;
        } else if (row[id] == best_score && id < best) {
          best = id;
        }
      }
    } else {
      for (int j = 0; j < v; ++j)
        if (row[j] > best_score) {
          best_score = row[j];
          best = j;
        }
    }
    out.push_back(best);
  }
  return out;
}

std::string reinforcer_kind_name(ReinforcerKind k) {
  switch (k) {
    case ReinforcerKind::None: return "none";
    case ReinforcerKind::Conv: return "conv";
    case ReinforcerKind::Sso: return "sso";
  }
  return "none";
}

std::string lm_kind_name(LmKind k) {
  switch (k) {
    case LmKind::Identity: return "identity";
    case LmKind::Transformer: return "transformer";
    case LmKind::Mixer: return "mixer";
  }
  return "identity";
}

ReinforcerKind parse_reinforcer_kind(const std::string& s) {
  if (s == "none") return ReinforcerKind::None;
  if (s == "conv") return ReinforcerKind::Conv;
  if (s == "sso") return ReinforcerKind::Sso;
  throw std::invalid_argument("unknown reinforcer kind '" + s + "'");
}

LmKind parse_lm_kind(const std::string& s) {
  if (s == "identity") return LmKind::Identity;
  if (s == "transformer") return LmKind::Transformer;
  if (s == "mixer") return LmKind::Mixer;
  throw std::invalid_argument("unknown lm kind '" + s + "'");
}

}  // namespace g2p
