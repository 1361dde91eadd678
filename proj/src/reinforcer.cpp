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

#include "g2p/reinforcer.hpp"

namespace g2p {

void ReinforcerConfig::validate() const {
  if (embed_dim < 1) throw ShapeError("reinforcer: embed_dim must be >= 1");
  if (kind == ReinforcerKind::Conv && kernel_size % 2 == 0)
    throw ShapeError("reinforcer: kernel size must be odd");
  if (kind == ReinforcerKind::Sso && shift_size < 1)
    throw ShapeError("reinforcer: shift size must be >= 1");
}

Tensor conv_reinforce(const Tensor& e_emb, const Tensor& w,
                      const Tensor& bias) {
  int k = w.dim(2);
  return conv1d(e_emb, w, bias, (k - 1) / 2, 1);
}

Tensor shift_sequence(const Tensor& e, int k) { return shift_rows(e, k); }

Tensor sso_preactivation(const Tensor& e_emb, const Tensor& w_bar,
                         const Tensor& bias, int shift_size) {
  int d = e_emb.dim(1);
  int w = 2 * shift_size + 1;
  if (w_bar.ndim() != 2 || w_bar.dim(0) != w * d || w_bar.dim(1) != d)
    throw ShapeError("sso: weight must be " + std::to_string(w * d) + "x" +
                     std::to_string(d) + ", got " + shape_str(w_bar.shape()));
  std::vector<Tensor> shifted;
  shifted.reserve(static_cast<std::size_t>(w));
  for (int k = -shift_size; k <= shift_size; ++k)
    shifted.push_back(shift_sequence(e_emb, k));
  Tensor stacked = concat_cols(shifted);
  return affine(stacked, w_bar, bias);
}

Tensor sso_reinforce(const Tensor& e_emb, const Tensor& w_bar,
                     const Tensor& bias, int shift_size) {
  Tensor pre = sso_preactivation(e_emb, w_bar, bias, shift_size);
  return add(gelu(pre), e_emb);
}

long param_count(const ReinforcerConfig& cfg) {
  long d = cfg.embed_dim;
  switch (cfg.kind) {
    case ReinforcerKind::None:
      return 0;
    case ReinforcerKind::Conv:
      return cfg.kernel_size * d * d + (cfg.bias ? d : 0);
    case ReinforcerKind::Sso:
      return cfg.window() * d * d + (cfg.bias ? d : 0);
  }
  return 0;
}

Tensor sso_weight_as_conv_kernel(const Tensor& w_bar, int shift_size,
                                 int embed_dim) {
  int d = embed_dim;
  int w = 2 * shift_size + 1;
  Tensor kernel({d, d, w});
  auto& kd = kernel.data();
  const auto& wd = w_bar.data();
  for (int k = -shift_size; k <= shift_size; ++k) {
    int block = k + shift_size;
    int tap = shift_size - k;
    for (int c = 0; c < d; ++c)
      for (int o = 0; o < d; ++o)
        kd[(static_cast<std::size_t>(o) * d + c) * w + tap] =
            wd[static_cast<std::size_t>(block * d + c) * d + o];
  }
  return kernel;
}

}  // namespace g2p
