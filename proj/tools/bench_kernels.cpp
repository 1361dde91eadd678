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

// Compares the OpenMP kernels against the serial reference loops.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "g2p/kernels.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void fill_random(std::vector<double>& v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1, 1);
  for (double& x : v) x = dist(rng);
}

}  // namespace

int main() {
  std::mt19937_64 rng(42);
  const int reps = 20;

  {
    const int m = 512, k = 512, n = 512;
    std::vector<double> a(static_cast<std::size_t>(m) * k),
        b(static_cast<std::size_t>(k) * n), c1(static_cast<std::size_t>(m) * n),
        c2(static_cast<std::size_t>(m) * n);
    fill_random(a, rng);
    fill_random(b, rng);

    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r)
      g2p::kernels::serial::matmul(a.data(), b.data(), c1.data(), m, k, n);
    double serial = seconds_since(t0) / reps;

    t0 = clock_type::now();
    for (int r = 0; r < reps; ++r)
      g2p::kernels::matmul(a.data(), b.data(), c2.data(), m, k, n);
    double parallel = seconds_since(t0) / reps;

    double max_diff = 0;
    for (std::size_t i = 0; i < c1.size(); ++i)
      max_diff = std::max(max_diff, std::abs(c1[i] - c2[i]));
    std::printf("matmul    %dx%dx%d  serial %.4fs  omp %.4fs  speedup %.2fx  maxdiff %.3g\n",
                m, k, n, serial, parallel, serial / parallel, max_diff);
  }

  {
    const int t = 2048, din = 128, dout = 128, k = 3;
    std::vector<double> x(static_cast<std::size_t>(t) * din),
        w(static_cast<std::size_t>(dout) * din * k), bias(dout),
        y1(static_cast<std::size_t>(t) * dout),
        y2(static_cast<std::size_t>(t) * dout);
    fill_random(x, rng);
    fill_random(w, rng);
    fill_random(bias, rng);

    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r)
      g2p::kernels::serial::conv1d(x.data(), w.data(), bias.data(), y1.data(),
                                   t, din, dout, k, 1, 1, t);
    double serial = seconds_since(t0) / reps;

    t0 = clock_type::now();
    for (int r = 0; r < reps; ++r)
      g2p::kernels::conv1d(x.data(), w.data(), bias.data(), y2.data(), t, din,
                           dout, k, 1, 1, t);
    double parallel = seconds_since(t0) / reps;

    double max_diff = 0;
    for (std::size_t i = 0; i < y1.size(); ++i)
      max_diff = std::max(max_diff, std::abs(y1[i] - y2[i]));
    std::printf("conv1d    T=%d D=%d k=%d  serial %.4fs  omp %.4fs  speedup %.2fx  maxdiff %.3g\n",
                t, din, k, serial, parallel, serial / parallel, max_diff);
  }
  return 0;
}
