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

#include <vector>

#include "g2p/tensor.hpp"

namespace g2p {

Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor sum(const Tensor& a);  // scalar

// 2-D matrix product, differentiable w.r.t. both inputs.
Tensor matmul(const Tensor& a, const Tensor& b);

// y = x * w + bias, bias broadcast over rows. bias may be undefined.
Tensor affine(const Tensor& x, const Tensor& w, const Tensor& bias);

// Exact erf-form GELU: x * Phi(x).
Tensor gelu(const Tensor& x);

// Softmax over the last axis, max-subtracted.
Tensor softmax_lastdim(const Tensor& x);

// Per-row normalization over the last axis D, then gain/bias affine.
// Variance uses epsilon 1e-5.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias);

// Cross-correlation with zero padding. x: T x Din, w: Dout x Din x k,
// bias optional (undefined tensor = no bias).
Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& bias, int pad,
              int stride);

// Mean over K rows of -sum_v q_v log p_v with the smoothed target
// q = (1-eps) * onehot + eps/V, p = softmax(logits). logits: K x V.
Tensor cross_entropy_label_smoothed(const Tensor& logits,
                                    const std::vector<int>& targets,
                                    double epsilon);
// Same, but summed over rows (for cross-sample batch averaging).
Tensor cross_entropy_label_smoothed_sum(const Tensor& logits,
                                        const std::vector<int>& targets,
                                        double epsilon);

// Row gather: out row i = table row ids[i]. Differentiable into the table.
Tensor embedding_lookup(const Tensor& table, const std::vector<int>& ids);

// Row selection preserving order. positions must be in range.
Tensor gather_rows(const Tensor& x, const std::vector<int>& positions);

// out[t] = x[t - k] where defined, zero elsewhere.
Tensor shift_rows(const Tensor& x, int k);

// Concatenation along the channel (last) axis of same-length row tensors.
Tensor concat_cols(const std::vector<Tensor>& parts);

// Column slice [offset, offset+len).
Tensor slice_cols(const Tensor& x, int offset, int len);

// Row slice [0, len) / zero-pad rows up to len.
Tensor slice_rows_head(const Tensor& x, int len);
Tensor pad_rows(const Tensor& x, int len);

Tensor transpose2d(const Tensor& x);

// Adds a constant (non-differentiable) tensor, used for attention masks.
Tensor add_const(const Tensor& x, const Tensor& c);

}  // namespace g2p
