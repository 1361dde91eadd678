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

#include "g2p/kernels.hpp"

namespace g2p::kernels {

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for if (m * n * k > 4096)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
  }
}

void matmul_at_b_acc(const double* a, const double* b, double* c, int m, int k,
                     int n) {
#pragma omp parallel for if (m * n * k > 4096)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += a[p * m + i] * b[p * n + j];
      c[i * n + j] += acc;
    }
  }
}

void matmul_a_bt_acc(const double* a, const double* b, double* c, int m, int k,
                     int n) {
#pragma omp parallel for if (m * n * k > 4096)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += a[i * k + p] * b[j * k + p];
      c[i * n + j] += acc;
    }
  }
}

void conv1d(const double* x, const double* w, const double* bias, double* y,
            int t_in, int d_in, int d_out, int k, int pad, int stride,
            int t_out) {
#pragma omp parallel for if (t_out * d_out * d_in * k > 4096)
  for (int t = 0; t < t_out; ++t) {
    for (int o = 0; o < d_out; ++o) {
      double acc = bias ? bias[o] : 0.0;
      for (int j = 0; j < k; ++j) {
        int s = t * stride - pad + j;
        if (s < 0 || s >= t_in) continue;
        const double* xr = x + static_cast<std::size_t>(s) * d_in;
        const double* wr = w + (static_cast<std::size_t>(o) * d_in) * k;
        for (int c = 0; c < d_in; ++c) acc += wr[c * k + j] * xr[c];
      }
      y[static_cast<std::size_t>(t) * d_out + o] = acc;
    }
  }
}

void conv1d_backward(const double* x, const double* w, const double* dy,
                     double* dx, double* dw, double* dbias, int t_in, int d_in,
                     int d_out, int k, int pad, int stride, int t_out) {
  // dx: each input row s accumulates from the output rows that read it.
  if (dx) {
#pragma omp parallel for if (t_in * d_in * d_out * k > 4096)
    for (int s = 0; s < t_in; ++s) {
      for (int c = 0; c < d_in; ++c) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
          int num = s + pad - j;
          if (num < 0 || num % stride != 0) continue;
          int t = num / stride;
          if (t >= t_out) continue;
          for (int o = 0; o < d_out; ++o)
            acc += dy[static_cast<std::size_t>(t) * d_out + o] *
                   w[(static_cast<std::size_t>(o) * d_in + c) * k + j];
        }
        dx[static_cast<std::size_t>(s) * d_in + c] += acc;
      }
    }
  }
  if (dw) {
#pragma omp parallel for if (d_out * d_in * k * t_out > 4096)
    for (int o = 0; o < d_out; ++o) {
      for (int c = 0; c < d_in; ++c) {
        for (int j = 0; j < k; ++j) {
          double acc = 0.0;
          for (int t = 0; t < t_out; ++t) {
            int s = t * stride - pad + j;
            if (s < 0 || s >= t_in) continue;
            acc += dy[static_cast<std::size_t>(t) * d_out + o] *
                   x[static_cast<std::size_t>(s) * d_in + c];
          }
          dw[(static_cast<std::size_t>(o) * d_in + c) * k + j] += acc;
        }
      }
    }
  }
  if (dbias) {
    for (int o = 0; o < d_out; ++o) {
      double acc = 0.0;
      for (int t = 0; t < t_out; ++t)
        acc += dy[static_cast<std::size_t>(t) * d_out + o];
      dbias[o] += acc;
    }
  }
}

namespace serial {

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
}

void conv1d(const double* x, const double* w, const double* bias, double* y,
            int t_in, int d_in, int d_out, int k, int pad, int stride,
            int t_out) {
  for (int t = 0; t < t_out; ++t)
    for (int o = 0; o < d_out; ++o) {
      double acc = bias ? bias[o] : 0.0;
      for (int c = 0; c < d_in; ++c)
        for (int j = 0; j < k; ++j) {
          int s = t * stride - pad + j;
          if (s < 0 || s >= t_in) continue;
          acc += w[(static_cast<std::size_t>(o) * d_in + c) * k + j] *
                 x[static_cast<std::size_t>(s) * d_in + c];
        }
      y[static_cast<std::size_t>(t) * d_out + o] = acc;
    }
}

}  // namespace serial

}  // namespace g2p::kernels
