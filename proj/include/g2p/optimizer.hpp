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

// Adam with bias correction. Parameters with requires_grad=false are
// skipped entirely (frozen-mode contract).
class Adam {
 public:
  explicit Adam(std::vector<Tensor> params, double lr = 1e-4,
                double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);

  void step();
  void zero_grad();

  long step_count() const { return step_count_; }
  double lr() const { return lr_; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
  long step_count_ = 0;
  double lr_, beta1_, beta2_, epsilon_;
};

}  // namespace g2p
