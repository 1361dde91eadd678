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

#include "g2p/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace g2p {

double grad_check(const std::function<Tensor()>& loss_fn,
                  std::vector<Tensor> params, double h) {
  for (Tensor& p : params) p.zero_grad();
  Tensor loss = loss_fn();
  if (!std::isfinite(loss.item()))
    throw NumericError("grad_check: non-finite loss");
  loss.backward();

  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (Tensor& p : params) analytic.push_back(p.grad());

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& p = params[pi];
    for (std::size_t i = 0; i < p.numel(); ++i) {
      double saved = p.data()[i];
      p.data()[i] = saved + h;
      double up = loss_fn().item();
      p.data()[i] = saved - h;
      double down = loss_fn().item();
      p.data()[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw NumericError("grad_check: non-finite loss during perturbation");
      double numeric = (up - down) / (2.0 * h);
      double a = analytic[pi][i];
      double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace g2p
