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

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace g2p {

// Numeric mode. F64 is the verification mode; F32 rounds every forward
// result through float precision on the same code path.
enum class Precision { F64, F32 };

Precision numeric_mode();
void set_numeric_mode(Precision p);

struct TensorImpl;

// Value-semantic handle to an n-dimensional array with an optional
// gradient buffer and a backward closure for reverse-mode autodiff.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, bool requires_grad = false);
  Tensor(std::vector<int> shape, std::vector<double> data,
         bool requires_grad = false);

  static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
  static Tensor full(std::vector<int> shape, double value,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  // Uniform in [-bound, bound], bound = sqrt(1/fan_in).
  static Tensor uniform_init(std::vector<int> shape, int fan_in,
                             std::mt19937_64& rng, bool requires_grad = true);

  bool defined() const { return impl_ != nullptr; }
  const std::vector<int>& shape() const;
  std::size_t numel() const;
  int dim(int i) const;
  int ndim() const;

  std::vector<double>& data();
  const std::vector<double>& data() const;
  std::vector<double>& grad();
  const std::vector<double>& grad() const;
  bool requires_grad() const;
  void set_requires_grad(bool rg);

  double item() const;  // scalar tensors only
  double at(std::initializer_list<int> idx) const;

  void zero_grad();

  // Runs the backward pass from this (scalar) tensor. Seeds d(this)=1.
  void backward();

  // Detached copy of the values (no graph, no grad).
  Tensor detach() const;

  TensorImpl* impl() const { return impl_.get(); }

 private:
  std::shared_ptr<TensorImpl> impl_;
  friend Tensor make_op_output(std::vector<int> shape, bool requires_grad,
                               std::vector<Tensor> parents,
                               std::function<void(TensorImpl&)> backward);
};

struct TensorImpl {
  std::vector<int> shape;
  std::vector<double> data;
  std::vector<double> grad;  // sized lazily, same extent as data
  bool requires_grad = false;
  std::vector<Tensor> parents;
  std::function<void(TensorImpl&)> backward;

  std::size_t numel() const { return data.size(); }
  void ensure_grad();
};

// Creates an op output node. The backward closure receives the output impl
// (with populated grad) and must accumulate into the parents' grads.
Tensor make_op_output(std::vector<int> shape, bool requires_grad,
                      std::vector<Tensor> parents,
                      std::function<void(TensorImpl&)> backward);

// Rounds values through float when the mode is F32.
void quantize_inplace(std::vector<double>& v);

std::string shape_str(const std::vector<int>& shape);

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace g2p
