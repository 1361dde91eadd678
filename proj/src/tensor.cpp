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

#include "g2p/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace g2p {

namespace {
Precision g_mode = Precision::F64;

std::size_t shape_numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int e : shape) {
    if (e <= 0) throw ShapeError("non-positive extent in shape " + shape_str(shape));
    n *= static_cast<std::size_t>(e);
  }
  return n;
}
}  // namespace

Precision numeric_mode() { return g_mode; }
void set_numeric_mode(Precision p) { g_mode = p; }

void quantize_inplace(std::vector<double>& v) {
  if (g_mode == Precision::F32) {
    for (double& x : v) x = static_cast<double>(static_cast<float>(x));
  }
}

std::string shape_str(const std::vector<int>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

void TensorImpl::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

Tensor::Tensor(std::vector<int> shape, bool requires_grad) {
  std::size_t n = shape_numel(shape);
  impl_ = std::make_shared<TensorImpl>();
  impl_->shape = std::move(shape);
  impl_->data.assign(n, 0.0);
  impl_->requires_grad = requires_grad;
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data,
               bool requires_grad) {
  std::size_t n = shape_numel(shape);
  if (n != data.size())
    throw ShapeError("data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_str(shape));
  impl_ = std::make_shared<TensorImpl>();
  impl_->shape = std::move(shape);
  impl_->data = std::move(data);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
  return Tensor(std::move(shape), requires_grad);
}

Tensor Tensor::full(std::vector<int> shape, double value, bool requires_grad) {
  Tensor t(std::move(shape), requires_grad);
  std::fill(t.data().begin(), t.data().end(), value);
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor({1}, {value}, requires_grad);
}

Tensor Tensor::uniform_init(std::vector<int> shape, int fan_in,
                            std::mt19937_64& rng, bool requires_grad) {
  double bound = std::sqrt(1.0 / static_cast<double>(std::max(fan_in, 1)));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t(std::move(shape), requires_grad);
  for (double& x : t.data()) x = dist(rng);
  return t;
}

const std::vector<int>& Tensor::shape() const { return impl_->shape; }
std::size_t Tensor::numel() const { return impl_->data.size(); }
int Tensor::dim(int i) const { return impl_->shape.at(static_cast<std::size_t>(i)); }
int Tensor::ndim() const { return static_cast<int>(impl_->shape.size()); }

std::vector<double>& Tensor::data() { return impl_->data; }
const std::vector<double>& Tensor::data() const { return impl_->data; }
std::vector<double>& Tensor::grad() {
  impl_->ensure_grad();
  return impl_->grad;
}
const std::vector<double>& Tensor::grad() const {
  impl_->ensure_grad();
  return impl_->grad;
}
bool Tensor::requires_grad() const { return impl_->requires_grad; }
void Tensor::set_requires_grad(bool rg) { impl_->requires_grad = rg; }

double Tensor::item() const {
  if (numel() != 1) throw ShapeError("item() on non-scalar tensor " + shape_str(shape()));
  return impl_->data[0];
}

double Tensor::at(std::initializer_list<int> idx) const {
  if (idx.size() != impl_->shape.size())
    throw IndexError("index rank mismatch");
  std::size_t off = 0;
  auto it = idx.begin();
  for (std::size_t d = 0; d < impl_->shape.size(); ++d, ++it) {
    if (*it < 0 || *it >= impl_->shape[d]) throw IndexError("index out of range");
    off = off * static_cast<std::size_t>(impl_->shape[d]) + static_cast<std::size_t>(*it);
  }
  return impl_->data[off];
}

void Tensor::zero_grad() {
  impl_->ensure_grad();
  std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
}

Tensor Tensor::detach() const {
  Tensor t;
  t.impl_ = std::make_shared<TensorImpl>();
  t.impl_->shape = impl_->shape;
  t.impl_->data = impl_->data;
  t.impl_->requires_grad = false;
  return t;
}

Tensor make_op_output(std::vector<int> shape, bool requires_grad,
                      std::vector<Tensor> parents,
                      std::function<void(TensorImpl&)> backward) {
  Tensor out(std::move(shape), requires_grad);
  if (requires_grad) {
    out.impl_->parents = std::move(parents);
    out.impl_->backward = std::move(backward);
  }
  return out;
}

void Tensor::backward() {
  if (numel() != 1) throw ShapeError("backward() requires a scalar root");
  // Topological order over the graph reachable from the root.
  std::vector<TensorImpl*> order;
  std::unordered_set<TensorImpl*> seen;
  std::vector<std::pair<TensorImpl*, std::size_t>> stack;
  stack.emplace_back(impl_.get(), 0);
  seen.insert(impl_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      TensorImpl* p = node->parents[next].impl();
      ++next;
      if (p && !seen.count(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (TensorImpl* n : order) n->ensure_grad();
  impl_->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorImpl* n = *it;
    if (n->backward) n->backward(*n);
  }
}

}  // namespace g2p
