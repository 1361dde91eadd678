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

#include "g2p/ops.hpp"

#include <algorithm>
#include <cmath>

#include "g2p/kernels.hpp"

namespace g2p {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

bool any_grad(std::initializer_list<const Tensor*> ts) {
  for (const Tensor* t : ts)
    if (t->defined() && t->requires_grad()) return true;
  return false;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  bool rg = any_grad({&a, &b});
  Tensor out = make_op_output(a.shape(), rg, {a, b}, [](TensorImpl& o) {
    auto& pa = o.parents[0];
    auto& pb = o.parents[1];
    if (pa.requires_grad()) {
      auto& g = pa.grad();
      for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
    }
    if (pb.requires_grad()) {
      auto& g = pb.grad();
      for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
    }
  });
  auto& y = out.data();
  const auto& xa = a.data();
  const auto& xb = b.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xa[i] + xb[i];
  quantize_inplace(y);
  return out;
}

Tensor scale(const Tensor& a, double s) {
  Tensor out =
      make_op_output(a.shape(), a.requires_grad(), {a}, [s](TensorImpl& o) {
        auto& pa = o.parents[0];
        if (!pa.requires_grad()) return;
        auto& g = pa.grad();
        for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += s * o.grad[i];
      });
  auto& y = out.data();
  const auto& x = a.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = s * x[i];
  quantize_inplace(y);
  return out;
}

Tensor sum(const Tensor& a) {
  Tensor out = make_op_output({1}, a.requires_grad(), {a}, [](TensorImpl& o) {
    auto& pa = o.parents[0];
    if (!pa.requires_grad()) return;
    auto& g = pa.grad();
    for (double& gi : g) gi += o.grad[0];
  });
  double acc = 0.0;
  for (double x : a.data()) acc += x;
  out.data()[0] = acc;
  quantize_inplace(out.data());
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2 || a.dim(1) != b.dim(0))
    throw ShapeError("matmul: incompatible shapes " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  bool rg = any_grad({&a, &b});
  Tensor out = make_op_output({m, n}, rg, {a, b}, [m, k, n](TensorImpl& o) {
    auto& pa = o.parents[0];
    auto& pb = o.parents[1];
    if (pa.requires_grad())  // dA += dC * B^T
      kernels::matmul_a_bt_acc(o.grad.data(), pb.data().data(),
                               pa.grad().data(), m, n, k);
    if (pb.requires_grad())  // dB += A^T * dC
      kernels::matmul_at_b_acc(pa.data().data(), o.grad.data(),
                               pb.grad().data(), k, m, n);
  });
  kernels::matmul(a.data().data(), b.data().data(), out.data().data(), m, k, n);
  quantize_inplace(out.data());
  return out;
}

Tensor affine(const Tensor& x, const Tensor& w, const Tensor& bias) {
  Tensor y = matmul(x, w);
  if (!bias.defined()) return y;
  if (bias.ndim() != 1 || bias.dim(0) != y.dim(1))
    throw ShapeError("affine: bias shape " + shape_str(bias.shape()) +
                     " does not match output " + shape_str(y.shape()));
  int rows = y.dim(0), cols = y.dim(1);
  bool rg = any_grad({&y, &bias});
  Tensor out =
      make_op_output(y.shape(), rg, {y, bias}, [rows, cols](TensorImpl& o) {
        auto& py = o.parents[0];
        auto& pb = o.parents[1];
        if (py.requires_grad()) {
          auto& g = py.grad();
          for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
        }
        if (pb.requires_grad()) {
          auto& g = pb.grad();
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
              g[j] += o.grad[static_cast<std::size_t>(i) * cols + j];
        }
      });
  auto& od = out.data();
  const auto& yd = y.data();
  const auto& bd = bias.data();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      od[static_cast<std::size_t>(i) * cols + j] =
          yd[static_cast<std::size_t>(i) * cols + j] + bd[j];
  quantize_inplace(od);
  return out;
}

Tensor gelu(const Tensor& x) {
  Tensor out =
      make_op_output(x.shape(), x.requires_grad(), {x}, [](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        const auto& xd = px.data();
        for (std::size_t i = 0; i < o.grad.size(); ++i) {
          double v = xd[i];
          double phi = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
          double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
          g[i] += o.grad[i] * (phi + v * pdf);
        }
      });
  auto& y = out.data();
  const auto& xd = x.data();
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = xd[i] * 0.5 * (1.0 + std::erf(xd[i] * kInvSqrt2));
  quantize_inplace(y);
  return out;
}

Tensor softmax_lastdim(const Tensor& x) {
  int cols = x.dim(x.ndim() - 1);
  std::size_t rows = x.numel() / static_cast<std::size_t>(cols);
  Tensor out = make_op_output(x.shape(), x.requires_grad(), {x},
                              [rows, cols](TensorImpl& o) {
                                auto& px = o.parents[0];
                                if (!px.requires_grad()) return;
                                auto& g = px.grad();
                                for (std::size_t r = 0; r < rows; ++r) {
                                  const double* y = o.data.data() + r * cols;
                                  const double* dy = o.grad.data() + r * cols;
                                  double dot = 0.0;
                                  for (int j = 0; j < cols; ++j)
                                    dot += dy[j] * y[j];
                                  double* gx = g.data() + r * cols;
                                  for (int j = 0; j < cols; ++j)
                                    gx[j] += y[j] * (dy[j] - dot);
                                }
                              });
  auto& y = out.data();
  const auto& xd = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = xd.data() + r * cols;
    double mx = row[0];
    for (int j = 1; j < cols; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    double* yr = y.data() + r * cols;
    for (int j = 0; j < cols; ++j) {
      yr[j] = std::exp(row[j] - mx);
      z += yr[j];
    }
    for (int j = 0; j < cols; ++j) yr[j] /= z;
  }
  quantize_inplace(y);
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias) {
  int d = x.dim(x.ndim() - 1);
  if (gain.numel() != static_cast<std::size_t>(d) ||
      bias.numel() != static_cast<std::size_t>(d))
    throw ShapeError("layer_norm: gain/bias must have extent " +
                     std::to_string(d));
  std::size_t rows = x.numel() / static_cast<std::size_t>(d);
  bool rg = any_grad({&x, &gain, &bias});
  Tensor out = make_op_output(
      x.shape(), rg, {x, gain, bias}, [rows, d](TensorImpl& o) {
        auto& px = o.parents[0];
        auto& pg = o.parents[1];
        auto& pb = o.parents[2];
        const auto& xd = px.data();
        const auto& gd = pg.data();
        for (std::size_t r = 0; r < rows; ++r) {
          const double* xr = xd.data() + r * d;
          const double* dy = o.grad.data() + r * d;
          double mu = 0.0;
          for (int j = 0; j < d; ++j) mu += xr[j];
          mu /= d;
          double var = 0.0;
          for (int j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
          var /= d;
          double inv = 1.0 / std::sqrt(var + kLnEps);
          if (px.requires_grad()) {
            double m1 = 0.0, m2 = 0.0;
            for (int j = 0; j < d; ++j) {
              double xhat = (xr[j] - mu) * inv;
              m1 += gd[j] * dy[j];
              m2 += gd[j] * dy[j] * xhat;
            }
            m1 /= d;
            m2 /= d;
            auto& g = px.grad();
            for (int j = 0; j < d; ++j) {
              double xhat = (xr[j] - mu) * inv;
              g[r * d + j] += inv * (gd[j] * dy[j] - m1 - xhat * m2);
            }
          }
          if (pg.requires_grad()) {
            auto& g = pg.grad();
            for (int j = 0; j < d; ++j)
              g[j] += dy[j] * (xr[j] - mu) * inv;
          }
          if (pb.requires_grad()) {
            auto& g = pb.grad();
            for (int j = 0; j < d; ++j) g[j] += dy[j];
          }
        }
      });
  auto& y = out.data();
  const auto& xd = x.data();
  const auto& gd = gain.data();
  const auto& bd = bias.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = xd.data() + r * d;
    double* yr = y.data() + r * d;
    double mu = 0.0;
    for (int j = 0; j < d; ++j) mu += xr[j];
    mu /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= d;
    double inv = 1.0 / std::sqrt(var + kLnEps);
    for (int j = 0; j < d; ++j) yr[j] = gd[j] * (xr[j] - mu) * inv + bd[j];
  }
  quantize_inplace(y);
  return out;
}

Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& bias, int pad,
              int stride) {
  if (x.ndim() != 2 || w.ndim() != 3 || w.dim(1) != x.dim(1))
    throw ShapeError("conv1d: incompatible shapes " + shape_str(x.shape()) +
                     " vs " + shape_str(w.shape()));
  int t_in = x.dim(0), d_in = x.dim(1), d_out = w.dim(0), k = w.dim(2);
  if (k % 2 == 0) throw ShapeError("conv1d: kernel size must be odd");
  int num = t_in + 2 * pad - k;
  if (num < 0 || num % stride != 0)
    throw ShapeError("conv1d: non-integer output length for T=" +
                     std::to_string(t_in) + " k=" + std::to_string(k) +
                     " pad=" + std::to_string(pad) +
                     " stride=" + std::to_string(stride));
  int t_out = num / stride + 1;
  bool rg = any_grad({&x, &w, &bias});
  std::vector<Tensor> parents = {x, w};
  bool has_bias = bias.defined();
  if (has_bias) parents.push_back(bias);
  Tensor out = make_op_output(
      {t_out, d_out}, rg, std::move(parents),
      [=](TensorImpl& o) {
        auto& px = o.parents[0];
        auto& pw = o.parents[1];
        double* dx = px.requires_grad() ? px.grad().data() : nullptr;
        double* dw = pw.requires_grad() ? pw.grad().data() : nullptr;
        double* db = nullptr;
        if (has_bias && o.parents[2].requires_grad())
          db = o.parents[2].grad().data();
        kernels::conv1d_backward(px.data().data(), pw.data().data(),
                                 o.grad.data(), dx, dw, db, t_in, d_in, d_out,
                                 k, pad, stride, t_out);
      });
  kernels::conv1d(x.data().data(), w.data().data(),
                  has_bias ? bias.data().data() : nullptr, out.data().data(),
                  t_in, d_in, d_out, k, pad, stride, t_out);
  quantize_inplace(out.data());
  return out;
}

namespace {

Tensor cross_entropy_impl(const Tensor& logits, const std::vector<int>& targets,
                          double epsilon, bool mean) {
  if (logits.ndim() != 2)
    throw ShapeError("cross_entropy: logits must be K x V");
  int kk = logits.dim(0), v = logits.dim(1);
  if (static_cast<std::size_t>(kk) != targets.size())
    throw ShapeError("cross_entropy: target count mismatch");
  for (int t : targets)
    if (t < 0 || t >= v)
      throw IndexError("cross_entropy: target " + std::to_string(t) +
                       " out of range [0," + std::to_string(v) + ")");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw NumericError("cross_entropy: epsilon must be in [0,1)");
  double norm = mean ? 1.0 / std::max(kk, 1) : 1.0;
  Tensor out = make_op_output(
      {1}, logits.requires_grad(), {logits},
      [targets, epsilon, kk, v, norm](TensorImpl& o) {
        auto& pl = o.parents[0];
        if (!pl.requires_grad()) return;
        const auto& ld = pl.data();
        auto& g = pl.grad();
        double up = o.grad[0] * norm;
        for (int r = 0; r < kk; ++r) {
          const double* row = ld.data() + static_cast<std::size_t>(r) * v;
          double mx = row[0];
          for (int j = 1; j < v; ++j) mx = std::max(mx, row[j]);
          double z = 0.0;
          for (int j = 0; j < v; ++j) z += std::exp(row[j] - mx);
          for (int j = 0; j < v; ++j) {
            double p = std::exp(row[j] - mx) / z;
            double q = epsilon / v + (j == targets[r] ? 1.0 - epsilon : 0.0);
            g[static_cast<std::size_t>(r) * v + j] += up * (p - q);
          }
        }
      });
  // loss_r = logsumexp(row) - sum_v q_v * row_v
  double total = 0.0;
  const auto& ld = logits.data();
  for (int r = 0; r < kk; ++r) {
    const double* row = ld.data() + static_cast<std::size_t>(r) * v;
    double mx = row[0];
    for (int j = 1; j < v; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (int j = 0; j < v; ++j) z += std::exp(row[j] - mx);
    double lse = mx + std::log(z);
    double qdot = 0.0;
    for (int j = 0; j < v; ++j) {
      double q = epsilon / v + (j == targets[r] ? 1.0 - epsilon : 0.0);
      qdot += q * row[j];
    }
    total += lse - qdot;
  }
  out.data()[0] = total * norm;
  quantize_inplace(out.data());
  return out;
}

}  // namespace

Tensor cross_entropy_label_smoothed(const Tensor& logits,
                                    const std::vector<int>& targets,
                                    double epsilon) {
  return cross_entropy_impl(logits, targets, epsilon, true);
}

Tensor cross_entropy_label_smoothed_sum(const Tensor& logits,
                                        const std::vector<int>& targets,
                                        double epsilon) {
  return cross_entropy_impl(logits, targets, epsilon, false);
}

Tensor embedding_lookup(const Tensor& table, const std::vector<int>& ids) {
  if (table.ndim() != 2) throw ShapeError("embedding_lookup: table must be 2-D");
  int v = table.dim(0), d = table.dim(1);
  for (int id : ids)
    if (id < 0 || id >= v)
      throw IndexError("embedding_lookup: id " + std::to_string(id) +
                       " out of range [0," + std::to_string(v) + ")");
  int t = static_cast<int>(ids.size());
  Tensor out = make_op_output(
      {t, d}, table.requires_grad(), {table}, [ids, d](TensorImpl& o) {
        auto& pt = o.parents[0];
        if (!pt.requires_grad()) return;
        auto& g = pt.grad();
        for (std::size_t r = 0; r < ids.size(); ++r)
          for (int j = 0; j < d; ++j)
            g[static_cast<std::size_t>(ids[r]) * d + j] += o.grad[r * d + j];
      });
  auto& y = out.data();
  const auto& td = table.data();
  for (std::size_t r = 0; r < ids.size(); ++r)
    std::copy_n(td.data() + static_cast<std::size_t>(ids[r]) * d, d,
                y.data() + r * d);
  quantize_inplace(y);
  return out;
}

Tensor gather_rows(const Tensor& x, const std::vector<int>& positions) {
  if (x.ndim() != 2) throw ShapeError("gather_rows: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  for (int p : positions)
    if (p < 0 || p >= t)
      throw IndexError("gather_rows: position " + std::to_string(p) +
                       " out of range [0," + std::to_string(t) + ")");
  int k = static_cast<int>(positions.size());
  // K may be zero; tensors cannot be empty, so K=0 is handled by callers.
  if (k == 0) throw IndexError("gather_rows: empty position list");
  Tensor out = make_op_output(
      {k, d}, x.requires_grad(), {x}, [positions, d](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (std::size_t r = 0; r < positions.size(); ++r)
          for (int j = 0; j < d; ++j)
            g[static_cast<std::size_t>(positions[r]) * d + j] +=
                o.grad[r * d + j];
      });
  auto& y = out.data();
  const auto& xd = x.data();
  for (std::size_t r = 0; r < positions.size(); ++r)
    std::copy_n(xd.data() + static_cast<std::size_t>(positions[r]) * d, d,
                y.data() + r * d);
  quantize_inplace(y);
  return out;
}

Tensor shift_rows(const Tensor& x, int k) {
  if (x.ndim() != 2) throw ShapeError("shift_rows: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  Tensor out =
      make_op_output({t, d}, x.requires_grad(), {x}, [t, d, k](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (int r = 0; r < t; ++r) {
          int s = r - k;
          if (s < 0 || s >= t) continue;
          for (int j = 0; j < d; ++j)
            g[static_cast<std::size_t>(s) * d + j] +=
                o.grad[static_cast<std::size_t>(r) * d + j];
        }
      });
  auto& y = out.data();
  const auto& xd = x.data();
  for (int r = 0; r < t; ++r) {
    int s = r - k;
    if (s < 0 || s >= t) continue;
    std::copy_n(xd.data() + static_cast<std::size_t>(s) * d, d,
                y.data() + static_cast<std::size_t>(r) * d);
  }
  quantize_inplace(y);
  return out;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  int t = parts[0].dim(0);
  int total = 0;
  bool rg = false;
  for (const Tensor& p : parts) {
    if (p.ndim() != 2 || p.dim(0) != t)
      throw ShapeError("concat_cols: row count mismatch");
    total += p.dim(1);
    rg = rg || p.requires_grad();
  }
  std::vector<int> widths;
  for (const Tensor& p : parts) widths.push_back(p.dim(1));
  Tensor out = make_op_output(
      {t, total}, rg, parts, [t, total, widths](TensorImpl& o) {
        int off = 0;
        for (std::size_t pi = 0; pi < o.parents.size(); ++pi) {
          auto& p = o.parents[pi];
          int w = widths[pi];
          if (p.requires_grad()) {
            auto& g = p.grad();
            for (int r = 0; r < t; ++r)
              for (int j = 0; j < w; ++j)
                g[static_cast<std::size_t>(r) * w + j] +=
                    o.grad[static_cast<std::size_t>(r) * total + off + j];
          }
          off += w;
        }
      });
  auto& y = out.data();
  int off = 0;
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& pd = parts[pi].data();
    int w = widths[pi];
    for (int r = 0; r < t; ++r)
      std::copy_n(pd.data() + static_cast<std::size_t>(r) * w, w,
                  y.data() + static_cast<std::size_t>(r) * total + off);
    off += w;
  }
  quantize_inplace(y);
  return out;
}

Tensor slice_cols(const Tensor& x, int offset, int len) {
  if (x.ndim() != 2) throw ShapeError("slice_cols: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  if (offset < 0 || len <= 0 || offset + len > d)
    throw IndexError("slice_cols: invalid slice");
  Tensor out = make_op_output(
      {t, len}, x.requires_grad(), {x}, [t, d, offset, len](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (int r = 0; r < t; ++r)
          for (int j = 0; j < len; ++j)
            g[static_cast<std::size_t>(r) * d + offset + j] +=
                o.grad[static_cast<std::size_t>(r) * len + j];
      });
  auto& y = out.data();
  const auto& xd = x.data();
  for (int r = 0; r < t; ++r)
    std::copy_n(xd.data() + static_cast<std::size_t>(r) * d + offset, len,
                y.data() + static_cast<std::size_t>(r) * len);
  quantize_inplace(y);
  return out;
}

Tensor slice_rows_head(const Tensor& x, int len) {
  if (x.ndim() != 2) throw ShapeError("slice_rows_head: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  if (len <= 0 || len > t) throw IndexError("slice_rows_head: invalid length");
  Tensor out =
      make_op_output({len, d}, x.requires_grad(), {x}, [len, d](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (std::size_t i = 0; i < static_cast<std::size_t>(len) * d; ++i)
          g[i] += o.grad[i];
      });
  std::copy_n(x.data().data(), static_cast<std::size_t>(len) * d,
              out.data().data());
  quantize_inplace(out.data());
  return out;
}

Tensor pad_rows(const Tensor& x, int len) {
  if (x.ndim() != 2) throw ShapeError("pad_rows: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  if (len < t) throw ShapeError("pad_rows: target length shorter than input");
  if (len == t) return x;
  Tensor out =
      make_op_output({len, d}, x.requires_grad(), {x}, [t, d](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (std::size_t i = 0; i < static_cast<std::size_t>(t) * d; ++i)
          g[i] += o.grad[i];
      });
  std::copy_n(x.data().data(), static_cast<std::size_t>(t) * d,
              out.data().data());
  quantize_inplace(out.data());
  return out;
}

Tensor transpose2d(const Tensor& x) {
  if (x.ndim() != 2) throw ShapeError("transpose2d: input must be 2-D");
  int t = x.dim(0), d = x.dim(1);
  Tensor out =
      make_op_output({d, t}, x.requires_grad(), {x}, [t, d](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (int r = 0; r < t; ++r)
          for (int j = 0; j < d; ++j)
            g[static_cast<std::size_t>(r) * d + j] +=
                o.grad[static_cast<std::size_t>(j) * t + r];
      });
  auto& y = out.data();
  const auto& xd = x.data();
  for (int r = 0; r < t; ++r)
    for (int j = 0; j < d; ++j)
      y[static_cast<std::size_t>(j) * t + r] =
          xd[static_cast<std::size_t>(r) * d + j];
  quantize_inplace(y);
  return out;
}

Tensor add_const(const Tensor& x, const Tensor& c) {
  check_same_shape(x, c, "add_const");
  Tensor out =
      make_op_output(x.shape(), x.requires_grad(), {x}, [](TensorImpl& o) {
        auto& px = o.parents[0];
        if (!px.requires_grad()) return;
        auto& g = px.grad();
        for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
      });
  auto& y = out.data();
  const auto& xd = x.data();
  const auto& cd = c.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xd[i] + cd[i];
  quantize_inplace(y);
  return out;
}

}  // namespace g2p
