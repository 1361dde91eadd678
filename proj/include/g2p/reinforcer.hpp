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

#include "g2p/ops.hpp"
#include "g2p/tensor.hpp"

namespace g2p {

enum class ReinforcerKind { None, Conv, Sso };

struct ReinforcerConfig {
  ReinforcerKind kind = ReinforcerKind::None;
  int kernel_size = 3;  // conv; odd
  int shift_size = 1;   // sso; window = 2*shift_size + 1
  int embed_dim = 256;
  bool bias = true;

  int window() const { return 2 * shift_size + 1; }
  void validate() const;
};

// Conv variant: conv1d with D_out = D_in = D, pad = (k-1)/2, stride 1.
// Bare convolution, no activation, no residual.
Tensor conv_reinforce(const Tensor& e_emb, const Tensor& w, const Tensor& bias);

// out[t] = e[t-k] where defined, zero rows elsewhere.
Tensor shift_sequence(const Tensor& e, int k);

// Stack the k = -s..+s shifted copies along channels, apply the linear map
// w_bar ((w*D) x D) plus optional bias, GELU, then the residual.
Tensor sso_reinforce(const Tensor& e_emb, const Tensor& w_bar,
                     const Tensor& bias, int shift_size);
// Pre-activation path (stack + linear only), used by the conv-equivalence
// check.
Tensor sso_preactivation(const Tensor& e_emb, const Tensor& w_bar,
                         const Tensor& bias, int shift_size);

// Trainable parameter count for the configured variant.
long param_count(const ReinforcerConfig& cfg);

// Reshapes an SSO weight matrix ((w*D) x D) into the equivalent conv kernel
// (D x D x w); the block for shift k lands on kernel tap s-k.
Tensor sso_weight_as_conv_kernel(const Tensor& w_bar, int shift_size,
                                 int embed_dim);

}  // namespace g2p
