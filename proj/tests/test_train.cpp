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
#include <random>

#include "g2p/data.hpp"
#include "g2p/train.hpp"

using namespace g2p;

namespace {

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
  Sample sample(std::initializer_list<int> chars, int variant = 1) const {
    Sample s;
    for (int i : chars) {
      std::string c = "g" + std::to_string(i);
      s.chars.push_back(c);
      s.char_ids.push_back(vocab.char_id(c));
      s.phoneme_ids.push_back(
          vocab.phoneme_id("s" + std::to_string(i) + std::to_string(variant)));
      s.polyphone_positions.push_back(static_cast<int>(s.chars.size()) - 1);
    }
    return s;
  }
  Model model(std::uint64_t seed, LmKind lm = LmKind::Identity) const {
    ModelConfig cfg;
    cfg.reinforcer = ReinforcerKind::Sso;
    cfg.lm = lm;
    cfg.embed_dim = 8;
    cfg.num_layers = 1;
    cfg.num_heads = 2;
    cfg.max_seq_len = 8;
    return Model(cfg, vocab, dict, seed);
  }
};

}  // namespace

TEST_CASE("train: zero epochs leaves parameters untouched") {
  Fixture f;
  Model m = f.model(1);
  std::vector<std::vector<double>> before;
  for (const NamedParam& p : m.params()) before.push_back(p.tensor.data());
  TrainConfig cfg;
  cfg.epochs = 0;
  RunReport r = train(m, {f.sample({0, 1}), f.sample({2})}, {}, cfg);
  CHECK(r.epoch_loss.empty());
  CHECK(r.val_accuracy.empty());
  CHECK(r.final_train_accuracy >= 0.0);
  std::size_t i = 0;
  for (const NamedParam& p : m.params()) CHECK(p.tensor.data() == before[i++]);
}

TEST_CASE("train: loss decreases and the model overfits a tiny set") {
  Fixture f;
  Model m = f.model(2);
  std::vector<Sample> data = {f.sample({0, 1, 2}), f.sample({3, 0}, 2),
                              f.sample({1, 3}), f.sample({2, 2, 1}, 2)};
  TrainConfig cfg;
  cfg.epochs = 150;
  cfg.lr = 5e-3;
  cfg.batch_size = 4;
  cfg.eval_every = 0;
  RunReport r = train(m, data, {}, cfg);
  REQUIRE(r.epoch_loss.size() == 150);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  CHECK(r.final_train_accuracy == doctest::Approx(100.0));
  CHECK(r.parameter_count == m.param_count());
  CHECK(r.wall_time_sec > 0.0);
}

TEST_CASE("train: non-finite parameters abort with a diagnostic") {
  Fixture f;
  Model m = f.model(3);
  for (double& v : m.params()[0].tensor.data()) v = std::nan("");
  TrainConfig cfg;
  cfg.epochs = 1;
  try {
    train(m, {f.sample({0, 1})}, {}, cfg);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("embedding.table") != std::string::npos);
  }
}

TEST_CASE("train: config validation") {
  TrainConfig cfg;
  cfg.lr = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lr = 1e-3;
  cfg.label_smoothing = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.label_smoothing = 0.1;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("evaluate: perfect and chance-level accuracy") {
  Fixture f;
  Model m = f.model(4);
  // Gold = the model's own predictions => 100% by construction.
  std::vector<Sample> self;
  for (int i = 0; i < 8; ++i) {
    Sample s = f.sample({i % 4, (i + 1) % 4});
    std::vector<int> preds = m.predict(s, true);
    for (std::size_t j = 0; j < preds.size(); ++j)
      s.phoneme_ids[static_cast<std::size_t>(s.polyphone_positions[j])] =
          preds[j];
    self.push_back(s);
  }
  CHECK(evaluate(m, self, true) == doctest::Approx(100.0));

  // Gold drawn uniformly from the two candidates against a fixed model
  // lands at 50% up to Monte-Carlo noise.
  std::mt19937_64 rng(99);
  std::vector<Sample> coin;
  for (int i = 0; i < 10000; ++i) {
    Sample s = f.sample({static_cast<int>(rng() % 4)},
                        1 + static_cast<int>(rng() % 2));
    coin.push_back(s);
  }
  double acc = evaluate(m, coin, true);
  CHECK(acc > 48.0);
  CHECK(acc < 52.0);

  // No polyphone positions anywhere is an error.
  Sample empty = f.sample({0});
  empty.polyphone_positions.clear();
  CHECK_THROWS(evaluate(m, {empty}, true));
}

TEST_CASE("multi-seed: repeated seed gives zero spread; cell format") {
  Fixture f;
  std::vector<Sample> data;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i)
    data.push_back(f.sample({static_cast<int>(rng() % 4),
                             static_cast<int>(rng() % 4)},
                            1 + static_cast<int>(rng() % 2)));
  ModelConfig mcfg;
  mcfg.reinforcer = ReinforcerKind::Sso;
  mcfg.embed_dim = 4;
  mcfg.max_seq_len = 8;
  TrainConfig tcfg;
  tcfg.epochs = 3;
  tcfg.lr = 1e-3;
  MultiSeedResult res =
      multi_seed_run(mcfg, tcfg, data, f.vocab, f.dict, {5, 5, 5});
  REQUIRE(res.per_seed_accuracy.size() == 3);
  CHECK(res.per_seed_accuracy[0] == res.per_seed_accuracy[1]);
  CHECK(res.stddev == doctest::Approx(0.0));
  CHECK(res.mean == doctest::Approx(res.per_seed_accuracy[0]));
  CHECK_THROWS(multi_seed_run(mcfg, tcfg, data, f.vocab, f.dict, {1}));

  CHECK(format_accuracy_cell(93.715, 0.91, 1900000) == "93.72±0.91 (1.9M)");
  CHECK(format_accuracy_cell(53.67, 0.5, 2300) == "53.67±0.50 (2.3K)");
}

TEST_CASE("attention export: single map passthrough and multi-map average") {
  Fixture f;
  ModelConfig cfg;
  cfg.lm = LmKind::Transformer;
  cfg.embed_dim = 8;
  cfg.num_layers = 1;
  cfg.num_heads = 1;
  cfg.max_seq_len = 8;
  Model one(cfg, f.vocab, f.dict, 21);
  Sample s = f.sample({0, 2, 1});
  AttentionExport e1 = export_attention(one, s, 1);
  PipelineOutput out1 = one.forward(s);
  CHECK(e1.averaged.data() == out1.attn[0][0].data());
  CHECK(e1.labels == s.chars);
  for (int q = 0; q < 3; ++q) {
    double row = 0;
    for (int k = 0; k < 3; ++k) row += e1.averaged.at({q, k});
    CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
  }
  for (int k = 0; k < 3; ++k)
    CHECK(e1.target_row[static_cast<std::size_t>(k)] == e1.averaged.at({1, k}));

  cfg.num_layers = 2;
  cfg.num_heads = 2;
  Model multi(cfg, f.vocab, f.dict, 22);
  AttentionExport em = export_attention(multi, s, 0);
  PipelineOutput outm = multi.forward(s);
  for (int q = 0; q < 3; ++q)
    for (int k = 0; k < 3; ++k) {
      double want = 0;
      for (const auto& layer : outm.attn)
        for (const Tensor& a : layer) want += a.at({q, k});
      want /= 4.0;
      CHECK(em.averaged.at({q, k}) == doctest::Approx(want).epsilon(1e-12));
    }

  std::string csv = attention_to_csv(em);
  CHECK(csv.find(",g0,g2,g1\n") == 0);
  CHECK(csv.find("\ntarget,") != std::string::npos);

  // Non-transformer models cannot export attention.
  Model ident = f.model(23);
  CHECK_THROWS(export_attention(ident, s, 0));
  CHECK_THROWS_AS(export_attention(multi, s, 3), std::out_of_range);
}

TEST_CASE("case study: identical models agree, forced split disagrees") {
  Fixture f;
  Model a = f.model(31);
  Model b = f.model(31);
  std::vector<Sample> data = {f.sample({0, 1}), f.sample({2, 3})};
  CHECK(case_study_dump(a, b, data).empty());

  // Push b's classifier bias hard toward the "2" readings.
  for (NamedParam& p : b.params())
    if (p.name == "classifier.b")
      for (int i = 0; i < 4; ++i)
        p.tensor.data()[static_cast<std::size_t>(
            f.vocab.phoneme_id("s" + std::to_string(i) + "2"))] = 100.0;
  // And a's toward the "1" readings.
  for (NamedParam& p : a.params())
    if (p.name == "classifier.b")
      for (int i = 0; i < 4; ++i)
        p.tensor.data()[static_cast<std::size_t>(
            f.vocab.phoneme_id("s" + std::to_string(i) + "1"))] = 100.0;
  std::vector<CaseStudyEntry> entries = case_study_dump(a, b, data);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].sentence == "g0g1");
  CHECK(entries[0].position == 0);
  CHECK(entries[0].gold == "s01");
  CHECK(entries[0].pred_a == "s01");
  CHECK(entries[0].pred_b == "s02");

  // Mismatched vocabularies are rejected.
  Vocabulary other = f.vocab;
  other.add_phoneme("extra1");
  Model c(a.config(), other, f.dict, 1);
  CHECK_THROWS(case_study_dump(a, c, data));
}

TEST_CASE("run report: json round trip fields") {
  RunReport r;
  r.seed = 9;
  r.parameter_count = 1234;
  r.epoch_loss = {1.5, 0.75};
  r.val_epochs = {10};
  r.val_accuracy = {62.5};
  r.final_train_accuracy = 88.0;
  r.config_echo = "reinforcer=sso";
  std::string j = r.to_json();
  CHECK(j.find("\"seed\": 9") != std::string::npos);
  CHECK(j.find("\"parameter_count\": 1234") != std::string::npos);
  CHECK(j.find("0.75") != std::string::npos);
  CHECK(j.find("reinforcer=sso") != std::string::npos);
}
