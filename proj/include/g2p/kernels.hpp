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

#include <cstddef>

namespace g2p::kernels {

// OpenMP-parallel kernels. Each output element is written by exactly one
// thread with a sequential inner sum, so results are bit-identical for any
// thread count.

// C[M x N] = A[M x K] * B[K x N]
void matmul(const double* a, const double* b, double* c, int m, int k, int n);
// C[M x N] += A^T[M x K] * B[K x N]  (a is stored K x M)
void matmul_at_b_acc(const double* a, const double* b, double* c, int m, int k,
                     int n);
// C[M x N] += A[M x K] * B^T[K x N]  (b is stored N x K)
void matmul_a_bt_acc(const double* a, const double* b, double* c, int m, int k,
                     int n);

// Cross-correlation, zero padding. x: T x Din, w: Dout x Din x k,
// bias: Dout or null, y: Tout x Dout.
void conv1d(const double* x, const double* w, const double* bias, double* y,
            int t_in, int d_in, int d_out, int k, int pad, int stride,
            int t_out);
// Gradients w.r.t. input and weights; accumulates into dx / dw / dbias.
void conv1d_backward(const double* x, const double* w, const double* dy,
                     double* dx, double* dw, double* dbias, int t_in, int d_in,
                     int d_out, int k, int pad, int stride, int t_out);

namespace serial {

// Naive triple/quadruple-loop references. Kept as the test oracle and the
// benchmark baseline; never called from the training path.

void matmul(const double* a, const double* b, double* c, int m, int k, int n);
void conv1d(const double* x, const double* w, const double* bias, double* y,
            int t_in, int d_in, int d_out, int k, int pad, int stride,
            int t_out);

}  // namespace serial

}  // namespace g2p::kernels
