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

#include <functional>
#include <vector>

#include "g2p/tensor.hpp"

namespace g2p {

// Central-difference check of the backward pass. `loss_fn` must rebuild the
// graph and return the scalar loss value each call; it reads the current
// contents of `params`. Returns the worst relative error over all parameter
// elements, with denominator max(|analytic|, |numeric|, 1e-8).
double grad_check(const std::function<Tensor()>& loss_fn,
                  std::vector<Tensor> params, double h = 1e-5);

}  // namespace g2p
