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
#include <numeric>
#include <random>

#include "g2p/model.hpp"
#include "g2p/models.hpp"
#include "g2p/ops.hpp"
#include "g2p/optimizer.hpp"

using namespace g2p;

namespace {

Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng,
                     bool requires_grad = false) {
  Tensor t(std::move(shape), requires_grad);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

// Independent row-wise layer norm for the mixer walkthrough.
std::vector<double> ln_ref(const std::vector<double>& x, int rows, int d) {
  std::vector<double> out(x.size());
  for (int r = 0; r < rows; ++r) {
    double mu = 0, var = 0;
    for (int j = 0; j < d; ++j) mu += x[static_cast<std::size_t>(r * d + j)];
    mu /= d;
    for (int j = 0; j < d; ++j) {
      double dx = x[static_cast<std::size_t>(r * d + j)] - mu;
      var += dx * dx;
    }
    var /= d;
    double inv = 1.0 / std::sqrt(var + 1e-5);
    for (int j = 0; j < d; ++j)
      out[static_cast<std::size_t>(r * d + j)] =
          (x[static_cast<std::size_t>(r * d + j)] - mu) * inv;
  }
  return out;
}

double gelu_ref(double x) {
  return x * 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

}  // namespace

TEST_CASE("transformer: zero layers is the identity") {
  std::mt19937_64 rng(1);
  LMConfig cfg;
  cfg.kind = LmKind::Transformer;
  cfg.num_layers = 0;
  cfg.embed_dim = 8;
  cfg.num_heads = 2;
  cfg.max_seq_len = 16;
  LMParams p = init_lm_params(cfg, rng);
  Tensor e = random_tensor({5, 8}, rng);
  TransformerOutput out = transformer_encode(e, p, cfg);
  CHECK(out.attn.empty());
  for (std::size_t i = 0; i < e.numel(); ++i)
    CHECK(out.out.data()[i] == e.data()[i]);
}

TEST_CASE("transformer: attention maps are row-stochastic") {
  std::mt19937_64 rng(2);
  LMConfig cfg;
  cfg.kind = LmKind::Transformer;
  cfg.num_layers = 2;
  cfg.embed_dim = 8;
  cfg.num_heads = 2;
  cfg.max_seq_len = 16;
  LMParams p = init_lm_params(cfg, rng);
  const int t = 6;
  Tensor e = random_tensor({t, 8}, rng);
  TransformerOutput out = transformer_encode(e, p, cfg);
  REQUIRE(out.attn.size() == 2);
  for (const auto& layer : out.attn) {
    REQUIRE(layer.size() == 2);
    for (const Tensor& a : layer) {
      REQUIRE(a.shape() == std::vector<int>{t, t});
      for (int q = 0; q < t; ++q) {
        double row = 0;
        for (int k = 0; k < t; ++k) {
          CHECK(a.at({q, k}) >= 0.0);
          row += a.at({q, k});
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("transformer: pad mask removes attention to padded keys") {
  std::mt19937_64 rng(3);
  LMConfig cfg;
  cfg.kind = LmKind::Transformer;
  cfg.num_layers = 1;
  cfg.embed_dim = 8;
  cfg.num_heads = 2;
  cfg.max_seq_len = 16;
  LMParams p = init_lm_params(cfg, rng);
  const int t = 5;
  Tensor e = random_tensor({t, 8}, rng);
  std::vector<bool> mask = {false, false, false, true, true};
  TransformerOutput out = transformer_encode(e, p, cfg, mask);
  for (const Tensor& a : out.attn[0])
    for (int q = 0; q < t; ++q) {
      double row = 0;
      for (int k = 0; k < t; ++k) {
        if (mask[static_cast<std::size_t>(k)])
          CHECK(a.at({q, k}) == doctest::Approx(0.0).epsilon(1e-12));
        row += a.at({q, k});
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("transformer: permutation equivariant without positions") {
  std::mt19937_64 rng(4);
  LMConfig cfg;
  cfg.kind = LmKind::Transformer;
  cfg.num_layers = 2;
  cfg.embed_dim = 8;
  cfg.num_heads = 4;
  cfg.max_seq_len = 16;
  cfg.use_positional = false;
  LMParams p = init_lm_params(cfg, rng);
  const int t = 6, d = 8;
  Tensor e = random_tensor({t, d}, rng);
  std::vector<int> perm(t);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Tensor ep({t, d});
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      ep.data()[static_cast<std::size_t>(i * d + j)] = e.at({perm[static_cast<std::size_t>(i)], j});
  Tensor out = transformer_encode(e, p, cfg).out;
  Tensor outp = transformer_encode(ep, p, cfg).out;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      CHECK(outp.at({i, j}) ==
            doctest::Approx(out.at({perm[static_cast<std::size_t>(i)], j}))
                .epsilon(1e-10));
}

TEST_CASE("mixer: zero layers is the identity") {
  std::mt19937_64 rng(5);
  LMConfig cfg;
  cfg.kind = LmKind::Mixer;
  cfg.num_layers = 0;
  cfg.embed_dim = 4;
  cfg.max_seq_len = 8;
  LMParams p = init_lm_params(cfg, rng);
  Tensor e = random_tensor({3, 4}, rng);
  Tensor out = mixer_encode(e, p, cfg);
  REQUIRE(out.shape() == e.shape());
  for (std::size_t i = 0; i < e.numel(); ++i)
    CHECK(out.data()[i] == e.data()[i]);
}

TEST_CASE("mixer: zero input stays finite") {
  std::mt19937_64 rng(6);
  LMConfig cfg;
  cfg.kind = LmKind::Mixer;
  cfg.num_layers = 2;
  cfg.embed_dim = 4;
  cfg.max_seq_len = 8;
  LMParams p = init_lm_params(cfg, rng);
  Tensor e = Tensor::zeros({5, 4});
  Tensor out = mixer_encode(e, p, cfg);
  for (double v : out.data()) CHECK(std::isfinite(v));
}

TEST_CASE("mixer: one layer matches a plain-loop reference, T=2 D=2 Lmax=4") {
  std::mt19937_64 rng(7);
  LMConfig cfg;
  cfg.kind = LmKind::Mixer;
  cfg.num_layers = 1;
  cfg.embed_dim = 2;
  cfg.max_seq_len = 4;
  cfg.ffn_dim = 3;
  cfg.token_ffn_dim = 2;
  LMParams p = init_lm_params(cfg, rng);
  // Randomize the biases too so the reference exercises every term.
  for (Tensor* b : {&p.mixer[0].tok_b1, &p.mixer[0].tok_b2, &p.mixer[0].ch_b1,
                    &p.mixer[0].ch_b2, &p.mixer[0].ln1_bias, &p.mixer[0].ln2_bias}) {
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (double& v : b->data()) v = dist(rng);
  }
  const int t = 2, d = 2, lmax = 4, th = 2, fd = 3;
  Tensor e = random_tensor({t, d}, rng);

  // Reference with flat loops over the padded grid.
  std::vector<double> x(static_cast<std::size_t>(lmax) * d, 0.0);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      x[static_cast<std::size_t>(i * d + j)] = e.at({i, j});
  const MixerLayerParams& lp = p.mixer[0];
  std::vector<double> n1 = ln_ref(x, lmax, d);
  for (std::size_t i = 0; i < n1.size(); ++i) {
    int j = static_cast<int>(i) % d;
    n1[i] = n1[i] * lp.ln1_gain.data()[static_cast<std::size_t>(j)] +
            lp.ln1_bias.data()[static_cast<std::size_t>(j)];
  }
  // Token mixing: for each channel j, map the length-lmax column through
  // the two-layer MLP.
  for (int j = 0; j < d; ++j) {
    std::vector<double> h(static_cast<std::size_t>(th), 0.0);
    for (int a = 0; a < th; ++a) {
      double acc = lp.tok_b1.data()[static_cast<std::size_t>(a)];
      for (int i = 0; i < lmax; ++i)
        acc += n1[static_cast<std::size_t>(i * d + j)] *
               lp.tok_w1.data()[static_cast<std::size_t>(i * th + a)];
      h[static_cast<std::size_t>(a)] = gelu_ref(acc);
    }
    for (int i = 0; i < lmax; ++i) {
      double acc = lp.tok_b2.data()[static_cast<std::size_t>(i)];
      for (int a = 0; a < th; ++a)
        acc += h[static_cast<std::size_t>(a)] *
               lp.tok_w2.data()[static_cast<std::size_t>(a * lmax + i)];
      x[static_cast<std::size_t>(i * d + j)] += acc;
    }
  }
  // Channel mixing per row.
  std::vector<double> n2 = ln_ref(x, lmax, d);
  for (std::size_t i = 0; i < n2.size(); ++i) {
    int j = static_cast<int>(i) % d;
    n2[i] = n2[i] * lp.ln2_gain.data()[static_cast<std::size_t>(j)] +
            lp.ln2_bias.data()[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < lmax; ++i) {
    std::vector<double> h(static_cast<std::size_t>(fd), 0.0);
    for (int a = 0; a < fd; ++a) {
      double acc = lp.ch_b1.data()[static_cast<std::size_t>(a)];
      for (int j = 0; j < d; ++j)
        acc += n2[static_cast<std::size_t>(i * d + j)] *
               lp.ch_w1.data()[static_cast<std::size_t>(j * fd + a)];
      h[static_cast<std::size_t>(a)] = gelu_ref(acc);
    }
    for (int j = 0; j < d; ++j) {
      double acc = lp.ch_b2.data()[static_cast<std::size_t>(j)];
      for (int a = 0; a < fd; ++a)
        acc += h[static_cast<std::size_t>(a)] *
               lp.ch_w2.data()[static_cast<std::size_t>(a * d + j)];
      x[static_cast<std::size_t>(i * d + j)] += acc;
    }
  }

  Tensor out = mixer_encode(e, p, cfg);
  REQUIRE(out.shape() == std::vector<int>{t, d});
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      CHECK(out.at({i, j}) ==
            doctest::Approx(x[static_cast<std::size_t>(i * d + j)])
                .epsilon(1e-10));
}

TEST_CASE("mixer: zeroed token mixing makes rows independent") {
  std::mt19937_64 rng(8);
  LMConfig cfg;
  cfg.kind = LmKind::Mixer;
  cfg.num_layers = 1;
  cfg.embed_dim = 4;
  cfg.max_seq_len = 8;
  LMParams p = init_lm_params(cfg, rng);
  for (Tensor* w : {&p.mixer[0].tok_w1, &p.mixer[0].tok_w2, &p.mixer[0].tok_b1,
                    &p.mixer[0].tok_b2})
    for (double& v : w->data()) v = 0.0;
  const int t = 5;
  Tensor e = random_tensor({t, 4}, rng);
  Tensor base = mixer_encode(e, p, cfg);
  Tensor e2(e.shape(), e.data());
  for (int j = 0; j < 4; ++j)
    e2.data()[static_cast<std::size_t>(j)] += 1.0;  // perturb row 0 only
  Tensor moved = mixer_encode(e2, p, cfg);
  for (int i = 1; i < t; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(moved.at({i, j}) == base.at({i, j}));
  double diff0 = 0;
  for (int j = 0; j < 4; ++j)
    diff0 = std::max(diff0, std::abs(moved.at({0, j}) - base.at({0, j})));
  CHECK(diff0 > 1e-6);
}

TEST_CASE("add_positional: values and gradient extent") {
  std::mt19937_64 rng(9);
  const int lmax = 6, t = 4, d = 3;
  Tensor pos = random_tensor({lmax, d}, rng, true);
  Tensor e = random_tensor({t, d}, rng, true);
  Tensor out = add_positional(e, pos);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      CHECK(out.at({i, j}) == doctest::Approx(e.at({i, j}) + pos.at({i, j})));
  Tensor loss = sum(out);
  pos.zero_grad();
  e.zero_grad();
  loss.backward();
  for (int i = 0; i < lmax; ++i)
    for (int j = 0; j < d; ++j)
      CHECK(pos.grad()[static_cast<std::size_t>(i * d + j)] ==
            (i < t ? 1.0 : 0.0));
  // Too-long sequences are rejected.
  Tensor long_e = random_tensor({lmax + 1, d}, rng);
  CHECK_THROWS_AS(add_positional(long_e, pos), ShapeError);
}

TEST_CASE("lm config validation") {
  LMConfig cfg;
  cfg.kind = LmKind::Transformer;
  cfg.embed_dim = 10;
  cfg.num_heads = 4;  // 10 % 4 != 0
  CHECK_THROWS_AS(cfg.validate(), ShapeError);
  cfg.num_heads = 2;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.ffn() == 40);
  cfg.ffn_dim = 7;
  CHECK(cfg.ffn() == 7);
}

TEST_CASE("freeze: frozen groups stay bit-identical through a train step") {
  Vocabulary vocab;
  PolyphoneDictionary dict;
  for (int i = 0; i < 4; ++i) {
    std::string c = "g" + std::to_string(i);
    vocab.add_char(c);
    vocab.add_phoneme("s" + std::to_string(i) + "1");
    vocab.add_phoneme("s" + std::to_string(i) + "2");
    dict.add(c, "s" + std::to_string(i) + "1");
    dict.add(c, "s" + std::to_string(i) + "2");
  }
  ModelConfig cfg;
  cfg.reinforcer = ReinforcerKind::Sso;
  cfg.lm = LmKind::Transformer;
  cfg.embed_dim = 8;
  cfg.num_layers = 1;
  cfg.num_heads = 2;
  cfg.max_seq_len = 8;
  Model model(cfg, vocab, dict, 11);
  model.freeze({"lm", "embedding"});

  std::map<std::string, std::vector<double>> before;
  for (const NamedParam& p : model.params()) before[p.name] = p.tensor.data();

  Sample s;
  s.chars = {"g0", "g1", "g2"};
  s.char_ids = {vocab.char_id("g0"), vocab.char_id("g1"), vocab.char_id("g2")};
  s.phoneme_ids = {vocab.phoneme_id("s01"), vocab.phoneme_id("s11"),
                   vocab.phoneme_id("s21")};
  s.polyphone_positions = {0, 1, 2};

  Adam opt(model.param_tensors(), 1e-2);
  for (int step = 0; step < 3; ++step) {
    PipelineOutput out = model.forward(s);
    Tensor loss = cross_entropy_label_smoothed(*out.logits, s.phoneme_ids, 0.1);
    opt.zero_grad();
    loss.backward();
    opt.step();
  }

  bool trainable_moved = false;
  for (const NamedParam& p : model.params()) {
    if (p.group == "lm" || p.group == "embedding") {
      CHECK(p.tensor.data() == before[p.name]);
    } else if (p.tensor.data() != before[p.name]) {
      trainable_moved = true;
    }
  }
  CHECK(trainable_moved);
  CHECK_THROWS_AS(model.freeze({"bogus"}), std::invalid_argument);
}
