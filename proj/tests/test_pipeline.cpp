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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "g2p/checkpoint.hpp"
#include "g2p/model.hpp"
#include "g2p/ops.hpp"

using namespace g2p;
namespace fs = std::filesystem;

namespace {

// Four two-candidate characters; phonemes s<i>1 / s<i>2.
struct Fixture {
  Vocabulary vocab;
  PolyphoneDictionary dict;
  Fixture() {
    for (int i = 0; i < 4; ++i) {
      std::string c = "g" + std::to_string(i);
      vocab.add_char(c);
      vocab.add_phoneme("s" + std::to_string(i) + "1");
      vocab.add_phoneme("s" + std::to_string(i) + "2");
      dict.add(c, "s" + std::to_string(i) + "1");
      dict.add(c, "s" + std::to_string(i) + "2");
    }
  }
  Sample sample(std::initializer_list<int> chars) const {
    Sample s;
    for (int i : chars) {
      std::string c = "g" + std::to_string(i);
      s.chars.push_back(c);
      s.char_ids.push_back(vocab.char_id(c));
      s.phoneme_ids.push_back(vocab.phoneme_id("s" + std::to_string(i) + "1"));
      s.polyphone_positions.push_back(static_cast<int>(s.chars.size()) - 1);
    }
    return s;
  }
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("gather_rows selects and orders rows; empty list throws") {
  Tensor x({3, 2}, {1, 2, 3, 4, 5, 6});
  Tensor g = gather_rows(x, {2, 0});
  CHECK(g.at({0, 0}) == 5);
  CHECK(g.at({0, 1}) == 6);
  CHECK(g.at({1, 0}) == 1);
  CHECK_THROWS(gather_rows(x, {}));
  CHECK_THROWS_AS(gather_rows(x, {3}), IndexError);
}

TEST_CASE("degenerate pipeline: logits are emb row times classifier") {
  Fixture f;
  ModelConfig cfg;
  cfg.reinforcer = ReinforcerKind::None;
  cfg.lm = LmKind::Identity;
  cfg.embed_dim = 6;
  cfg.max_seq_len = 8;
  Model m(cfg, f.vocab, f.dict, 3);
  Sample s = f.sample({2, 0, 1});
  PipelineOutput out = m.forward(s);
  REQUIRE(out.logits.has_value());
  REQUIRE(out.logits->shape() ==
          std::vector<int>{3, f.vocab.num_phonemes()});
  const auto& params = m.params();
  const Tensor& emb = params[0].tensor;  // embedding.table
  Tensor cls_w, cls_b;
  for (const NamedParam& p : params) {
    if (p.name == "classifier.w") cls_w = p.tensor;
    if (p.name == "classifier.b") cls_b = p.tensor;
  }
  for (int r = 0; r < 3; ++r) {
    int cid = s.char_ids[static_cast<std::size_t>(r)];
    for (int v = 0; v < f.vocab.num_phonemes(); ++v) {
      double want = cls_b.data()[static_cast<std::size_t>(v)];
      for (int j = 0; j < 6; ++j)
        want += emb.at({cid, j}) * cls_w.at({j, v});
      CHECK(out.logits->at({r, v}) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("pipeline: no polyphones means no logits") {
  Fixture f;
  ModelConfig cfg;
  cfg.embed_dim = 4;
  cfg.max_seq_len = 8;
  Model m(cfg, f.vocab, f.dict, 1);
  Sample s = f.sample({0, 1});
  s.polyphone_positions.clear();
  PipelineOutput out = m.forward(s);
  CHECK(!out.logits.has_value());
  CHECK(m.predict(s, true).empty());
}

TEST_CASE("predict_from_logits: restriction and tie-breaking") {
  Fixture f;
  // Hand logits over the 10-phoneme vocab (pad, unk, s01, s02, s11, ...).
  int v = f.vocab.num_phonemes();
  Tensor logits = Tensor::zeros({1, v});
  // Highest score on s11 (wrong character), candidates for g0 are s01/s02.
  logits.data()[static_cast<std::size_t>(f.vocab.phoneme_id("s11"))] = 9.0;
  logits.data()[static_cast<std::size_t>(f.vocab.phoneme_id("s02"))] = 1.0;
  std::vector<int> restricted =
      predict_from_logits(logits, {"g0"}, f.dict, f.vocab, true);
  CHECK(restricted[0] == f.vocab.phoneme_id("s02"));
  std::vector<int> free =
      predict_from_logits(logits, {"g0"}, f.dict, f.vocab, false);
  CHECK(free[0] == f.vocab.phoneme_id("s11"));
  // Exact tie between the two candidates: lowest id wins.
  logits.data()[static_cast<std::size_t>(f.vocab.phoneme_id("s01"))] = 1.0;
  std::vector<int> tied =
      predict_from_logits(logits, {"g0"}, f.dict, f.vocab, true);
  CHECK(tied[0] == std::min(f.vocab.phoneme_id("s01"),
                            f.vocab.phoneme_id("s02")));
}

TEST_CASE("predict: restricted predictions always land on candidates") {
  Fixture f;
  std::mt19937_64 rng(5);
  for (auto rk : {ReinforcerKind::None, ReinforcerKind::Conv,
                  ReinforcerKind::Sso})
    for (auto lk : {LmKind::Identity, LmKind::Transformer, LmKind::Mixer}) {
      ModelConfig cfg;
      cfg.reinforcer = rk;
      cfg.lm = lk;
      cfg.embed_dim = 8;
      cfg.num_layers = 1;
      cfg.num_heads = 2;
      cfg.max_seq_len = 8;
      Model m(cfg, f.vocab, f.dict, rng());
      Sample s = f.sample({0, 3, 1, 2});
      std::vector<int> preds = m.predict(s, true);
      REQUIRE(preds.size() == 4);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const std::string& c = s.chars[static_cast<std::size_t>(
            s.polyphone_positions[i])];
        bool in_candidates = false;
        for (const std::string& cand : f.dict.candidates(c))
          if (f.vocab.phoneme_id(cand) == preds[i]) in_candidates = true;
        CHECK(in_candidates);
      }
    }
}

TEST_CASE("pipeline: full-stack scalar oracle, D=1") {
  // One character, D=1: logits = gelu-free path since reinforcer/lm are
  // disabled, so logit_v = e * w_v + b_v and CE is computable by hand.
  Vocabulary vocab;
  PolyphoneDictionary dict;
  vocab.add_char("z");
  vocab.add_phoneme("za1");
  vocab.add_phoneme("za2");
  dict.add("z", "za1");
  dict.add("z", "za2");
  ModelConfig cfg;
  cfg.embed_dim = 1;
  cfg.max_seq_len = 4;
  Model m(cfg, vocab, dict, 9);
  // Overwrite with hand values.
  for (NamedParam& p : m.params()) {
    if (p.name == "embedding.table")
      for (double& x : p.tensor.data()) x = 0.5;
    if (p.name == "classifier.w") {
      // 1 x 4 (pad, unk, za1, za2)
      p.tensor.data() = {0.0, 0.0, 2.0, -2.0};
    }
    if (p.name == "classifier.b") p.tensor.data() = {0, 0, 0.25, 0.25};
  }
  Sample s;
  s.chars = {"z"};
  s.char_ids = {vocab.char_id("z")};
  s.phoneme_ids = {vocab.phoneme_id("za1")};
  s.polyphone_positions = {0};
  PipelineOutput out = m.forward(s);
  CHECK(out.logits->at({0, 2}) == doctest::Approx(1.25));
  CHECK(out.logits->at({0, 3}) == doctest::Approx(-0.75));
  // Plain CE (eps=0): logsumexp - logit_target over the 4 logits.
  double lse = std::log(std::exp(0.0) + std::exp(0.0) + std::exp(1.25) +
                        std::exp(-0.75));
  Tensor loss = cross_entropy_label_smoothed(*out.logits, {2}, 0.0);
  CHECK(loss.item() == doctest::Approx(lse - 1.25).epsilon(1e-12));
  CHECK(m.predict(s, true)[0] == 2);
}

TEST_CASE("determinism: same seed gives bit-identical forward passes") {
  Fixture f;
  ModelConfig cfg;
  cfg.reinforcer = ReinforcerKind::Sso;
  cfg.lm = LmKind::Transformer;
  cfg.embed_dim = 8;
  cfg.num_layers = 2;
  cfg.num_heads = 2;
  cfg.max_seq_len = 8;
  Model a(cfg, f.vocab, f.dict, 123);
  Model b(cfg, f.vocab, f.dict, 123);
  Sample s = f.sample({1, 2, 0, 3});
  Tensor la = *a.forward(s).logits;
  Tensor lb = *b.forward(s).logits;
  CHECK(la.data() == lb.data());
  // Repeated forward on the same model is also bit-stable.
  Tensor la2 = *a.forward(s).logits;
  CHECK(la.data() == la2.data());
  Model c(cfg, f.vocab, f.dict, 124);
  CHECK(c.forward(s).logits->data() != la.data());
}

TEST_CASE("checkpoint: save/load round trip preserves behavior and bytes") {
  Fixture f;
  ModelConfig cfg;
  cfg.reinforcer = ReinforcerKind::Conv;
  cfg.lm = LmKind::Mixer;
  cfg.embed_dim = 8;
  cfg.num_layers = 1;
  cfg.max_seq_len = 8;
  Model m(cfg, f.vocab, f.dict, 77);
  fs::path dir1 = fs::temp_directory_path() / "g2p_ckpt_rt1";
  fs::path dir2 = fs::temp_directory_path() / "g2p_ckpt_rt2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  save_checkpoint(m, dir1.string());
  Model loaded = load_checkpoint(dir1.string());
  CHECK(loaded.config().reinforcer == cfg.reinforcer);
  CHECK(loaded.config().lm == cfg.lm);
  CHECK(loaded.vocab().chars() == f.vocab.chars());
  CHECK(loaded.vocab().phonemes() == f.vocab.phonemes());
  CHECK(loaded.dictionary().serialize() == f.dict.serialize());
  // Weights pass through float32, so a second save must be byte-identical.
  save_checkpoint(loaded, dir2.string());
  CHECK(read_bytes(dir1 / "weights.bin") == read_bytes(dir2 / "weights.bin"));
  CHECK(read_bytes(dir1 / "manifest.json") == read_bytes(dir2 / "manifest.json"));
  // And loaded predictions match the float32-rounded original.
  Sample s = f.sample({3, 1, 2});
  Model rounded = load_checkpoint(dir2.string());
  CHECK(loaded.forward(s).logits->data() == rounded.forward(s).logits->data());
  std::vector<int> pl = loaded.predict(s, true);
  std::vector<int> pm = m.predict(s, true);
  CHECK(pl == pm);  // fixture logit gaps are far above f32 rounding
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("checkpoint: loading a missing directory fails") {
  CHECK_THROWS(load_checkpoint("/nonexistent/g2p_ckpt"));
}

TEST_CASE("model: sequence longer than max_seq_len is rejected") {
  Fixture f;
  ModelConfig cfg;
  cfg.lm = LmKind::Transformer;
  cfg.embed_dim = 4;
  cfg.num_layers = 1;
  cfg.num_heads = 2;
  cfg.max_seq_len = 3;
  Model m(cfg, f.vocab, f.dict, 1);
  Sample s = f.sample({0, 1, 2, 3});
  CHECK_THROWS_AS(m.forward(s), ShapeError);
}
