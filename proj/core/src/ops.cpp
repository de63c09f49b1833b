#include "avocast/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace avocast {

namespace {

std::string dim_error(const char* op, const TensorPtr& a, const TensorPtr& b) {
  return std::string("shape: ") + op + " got " + shape_to_string(a->shape()) + " and " +
         shape_to_string(b->shape());
}

void require_matrix(const char* op, const TensorPtr& t) {
  if (t->ndim() != 2) {
    throw std::invalid_argument(std::string("shape: ") + op + " expects a matrix, got " +
                                shape_to_string(t->shape()));
  }
}

}  // namespace

TensorPtr matmul(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  require_matrix("matmul", a);
  require_matrix("matmul", b);
  const std::int64_t m = a->dim(0), k = a->dim(1), k2 = b->dim(0), n = b->dim(1);
  if (k != k2) throw std::invalid_argument(dim_error("matmul", a, b));

  const auto av = a->data();
  const auto bv = b->data();
  std::vector<double> out(static_cast<std::size_t>(m * n), 0.0);
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::int64_t p = 0; p < k; ++p) acc += av[i * k + p] * bv[p * n + j];
      out[i * n + j] = acc;
    }
  }
  TensorPtr c = Tensor::matrix(m, n, std::move(out), a->requires_grad() || b->requires_grad());
  if (c->requires_grad()) {
    tape.record(c, [a, b, c, m, n, k] {
      const auto g = c->grad();
      if (a->requires_grad()) {
        std::vector<double> da(static_cast<std::size_t>(m * k), 0.0);
        const auto bv = b->data();
        for (std::int64_t i = 0; i < m; ++i)
          for (std::int64_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::int64_t j = 0; j < n; ++j) acc += g[i * n + j] * bv[p * n + j];
            da[i * k + p] = acc;
          }
        a->accumulate_grad(da);
      }
      if (b->requires_grad()) {
        std::vector<double> db(static_cast<std::size_t>(k * n), 0.0);
        const auto av = a->data();
        for (std::int64_t p = 0; p < k; ++p)
          for (std::int64_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::int64_t i = 0; i < m; ++i) acc += av[i * k + p] * g[i * n + j];
            db[p * n + j] = acc;
          }
        b->accumulate_grad(db);
      }
    });
  }
  return c;
}

TensorPtr causal_dilated_conv1d(Tape& tape, const TensorPtr& x, const TensorPtr& kernel,
                                std::int64_t dilation) {
  if (dilation < 1) {
    throw std::invalid_argument("conv: dilation must be positive, got " + std::to_string(dilation));
  }
  require_matrix("conv input", x);
  if (kernel->ndim() != 3) {
    throw std::invalid_argument("shape: conv kernel must be [C_out x C_in x K], got " +
                                shape_to_string(kernel->shape()));
  }
  const std::int64_t c_in = x->dim(0), t_len = x->dim(1);
  const std::int64_t c_out = kernel->dim(0), kc_in = kernel->dim(1), k_size = kernel->dim(2);
  if (kc_in != c_in) throw std::invalid_argument(dim_error("conv", x, kernel));
  if (t_len < 1 || k_size < 1) {
    throw std::invalid_argument("shape: conv needs T >= 1 and K >= 1, got " +
                                shape_to_string(x->shape()) + " and " +
                                shape_to_string(kernel->shape()));
  }

  const auto xv = x->data();
  const auto kv = kernel->data();
  std::vector<double> out(static_cast<std::size_t>(c_out * t_len), 0.0);
  // out[c,t] = sum_{i,j} kernel[c,i,j] * x[i, t - (K-1-j)*d], taps before the
  // series start read the implicit zero padding.
  for (std::int64_t c = 0; c < c_out; ++c) {
    for (std::int64_t t = 0; t < t_len; ++t) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < c_in; ++i) {
        for (std::int64_t j = 0; j < k_size; ++j) {
          std::int64_t s = t - (k_size - 1 - j) * dilation;
          if (s < 0) continue;
          acc += kv[(c * c_in + i) * k_size + j] * xv[i * t_len + s];
        }
      }
      out[c * t_len + t] = acc;
    }
  }
  TensorPtr y =
      Tensor::matrix(c_out, t_len, std::move(out), x->requires_grad() || kernel->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, kernel, y, dilation, c_in, c_out, t_len, k_size] {
      const auto g = y->grad();
      if (kernel->requires_grad()) {
        std::vector<double> dk(static_cast<std::size_t>(c_out * c_in * k_size), 0.0);
        const auto xv = x->data();
        for (std::int64_t c = 0; c < c_out; ++c)
          for (std::int64_t i = 0; i < c_in; ++i)
            for (std::int64_t j = 0; j < k_size; ++j) {
              double acc = 0.0;
              for (std::int64_t t = 0; t < t_len; ++t) {
                std::int64_t s = t - (k_size - 1 - j) * dilation;
                if (s >= 0) acc += g[c * t_len + t] * xv[i * t_len + s];
              }
              dk[(c * c_in + i) * k_size + j] = acc;
            }
        kernel->accumulate_grad(dk);
      }
      if (x->requires_grad()) {
        std::vector<double> dx(static_cast<std::size_t>(c_in * t_len), 0.0);
        const auto kv = kernel->data();
        for (std::int64_t i = 0; i < c_in; ++i)
          for (std::int64_t s = 0; s < t_len; ++s) {
            double acc = 0.0;
            for (std::int64_t c = 0; c < c_out; ++c)
              for (std::int64_t j = 0; j < k_size; ++j) {
                std::int64_t t = s + (k_size - 1 - j) * dilation;
                if (t < t_len) acc += kv[(c * c_in + i) * k_size + j] * g[c * t_len + t];
              }
            dx[i * t_len + s] = acc;
          }
        x->accumulate_grad(dx);
      }
    });
  }
  return y;
}

TensorPtr relu(Tape& tape, const TensorPtr& x) {
  std::vector<double> out(x->data().begin(), x->data().end());
  for (double& v : out) v = std::max(0.0, v);
  TensorPtr y = Tensor::create(x->shape(), std::move(out), x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y] {
      const auto g = y->grad();
      const auto xv = x->data();
      std::vector<double> dx(xv.size(), 0.0);
      for (std::size_t i = 0; i < xv.size(); ++i) dx[i] = xv[i] > 0.0 ? g[i] : 0.0;
      x->accumulate_grad(dx);
    });
  }
  return y;
}

TensorPtr tanh_op(Tape& tape, const TensorPtr& x) {
  std::vector<double> out(x->data().begin(), x->data().end());
  for (double& v : out) v = std::tanh(v);
  TensorPtr y = Tensor::create(x->shape(), std::move(out), x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y] {
      const auto g = y->grad();
      const auto yv = y->data();
      std::vector<double> dx(yv.size(), 0.0);
      for (std::size_t i = 0; i < yv.size(); ++i) dx[i] = (1.0 - yv[i] * yv[i]) * g[i];
      x->accumulate_grad(dx);
    });
  }
  return y;
}

TensorPtr softmax(Tape& tape, const TensorPtr& x) {
  if (x->ndim() != 1) {
    throw std::invalid_argument("shape: softmax expects a vector, got " +
                                shape_to_string(x->shape()));
  }
  if (x->numel() == 0) throw std::invalid_argument("shape: softmax on empty vector");
  const auto xv = x->data();
  double hi = *std::max_element(xv.begin(), xv.end());
  std::vector<double> out(xv.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) {
    out[i] = std::exp(xv[i] - hi);
    total += out[i];
  }
  for (double& v : out) v /= total;
  TensorPtr y = Tensor::create(x->shape(), std::move(out), x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y] {
      const auto g = y->grad();
      const auto yv = y->data();
      double dot = 0.0;
      for (std::size_t i = 0; i < yv.size(); ++i) dot += g[i] * yv[i];
      std::vector<double> dx(yv.size(), 0.0);
      for (std::size_t i = 0; i < yv.size(); ++i) dx[i] = yv[i] * (g[i] - dot);
      x->accumulate_grad(dx);
    });
  }
  return y;
}

TensorPtr add(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  if (a->shape() != b->shape()) throw std::invalid_argument(dim_error("add", a, b));
  const auto av = a->data();
  const auto bv = b->data();
  std::vector<double> out(av.size(), 0.0);
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
  TensorPtr c = Tensor::create(a->shape(), std::move(out), a->requires_grad() || b->requires_grad());
  if (c->requires_grad()) {
    tape.record(c, [a, b, c] {
      const auto g = c->grad();
      if (a->requires_grad()) a->accumulate_grad(g);
      if (b->requires_grad()) b->accumulate_grad(g);
    });
  }
  return c;
}

TensorPtr mul(Tape& tape, const TensorPtr& a, const TensorPtr& b) {
  if (a->shape() != b->shape()) throw std::invalid_argument(dim_error("mul", a, b));
  const auto av = a->data();
  const auto bv = b->data();
  std::vector<double> out(av.size(), 0.0);
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  TensorPtr c = Tensor::create(a->shape(), std::move(out), a->requires_grad() || b->requires_grad());
  if (c->requires_grad()) {
    tape.record(c, [a, b, c] {
      const auto g = c->grad();
      if (a->requires_grad()) {
        const auto bv = b->data();
        std::vector<double> da(bv.size(), 0.0);
        for (std::size_t i = 0; i < bv.size(); ++i) da[i] = g[i] * bv[i];
        a->accumulate_grad(da);
      }
      if (b->requires_grad()) {
        const auto av = a->data();
        std::vector<double> db(av.size(), 0.0);
        for (std::size_t i = 0; i < av.size(); ++i) db[i] = g[i] * av[i];
        b->accumulate_grad(db);
      }
    });
  }
  return c;
}

TensorPtr add_bias(Tape& tape, const TensorPtr& m, const TensorPtr& bias) {
  require_matrix("add_bias", m);
  if (bias->ndim() != 1 || bias->dim(0) != m->dim(0)) {
    throw std::invalid_argument(dim_error("add_bias", m, bias));
  }
  const std::int64_t rows = m->dim(0), cols = m->dim(1);
  const auto mv = m->data();
  const auto bv = bias->data();
  std::vector<double> out(mv.size(), 0.0);
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t j = 0; j < cols; ++j) out[i * cols + j] = mv[i * cols + j] + bv[i];
  TensorPtr c =
      Tensor::matrix(rows, cols, std::move(out), m->requires_grad() || bias->requires_grad());
  if (c->requires_grad()) {
    tape.record(c, [m, bias, c, rows, cols] {
      const auto g = c->grad();
      if (m->requires_grad()) m->accumulate_grad(g);
      if (bias->requires_grad()) {
        std::vector<double> db(static_cast<std::size_t>(rows), 0.0);
        for (std::int64_t i = 0; i < rows; ++i)
          for (std::int64_t j = 0; j < cols; ++j) db[i] += g[i * cols + j];
        bias->accumulate_grad(db);
      }
    });
  }
  return c;
}

TensorPtr scale(Tape& tape, const TensorPtr& x, double factor) {
  std::vector<double> out(x->data().begin(), x->data().end());
  for (double& v : out) v *= factor;
  TensorPtr y = Tensor::create(x->shape(), std::move(out), x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y, factor] {
      const auto g = y->grad();
      std::vector<double> dx(g.size(), 0.0);
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] = factor * g[i];
      x->accumulate_grad(dx);
    });
  }
  return y;
}

TensorPtr reshape(Tape& tape, const TensorPtr& x, std::vector<std::int64_t> shape) {
  std::int64_t n = 1;
  for (std::int64_t e : shape) n *= e;
  if (n != x->numel()) {
    throw std::invalid_argument("shape: reshape from " + shape_to_string(x->shape()) + " to " +
                                shape_to_string(shape) + " changes element count");
  }
  TensorPtr y = Tensor::create(std::move(shape), {x->data().begin(), x->data().end()},
                               x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y] { x->accumulate_grad(y->grad()); });
  }
  return y;
}

TensorPtr sum(Tape& tape, const TensorPtr& x) {
  double total = 0.0;
  for (double v : x->data()) total += v;
  TensorPtr y = Tensor::scalar(total, x->requires_grad());
  if (y->requires_grad()) {
    tape.record(y, [x, y] {
      double g = y->grad()[0];
      std::vector<double> dx(static_cast<std::size_t>(x->numel()), g);
      x->accumulate_grad(dx);
    });
  }
  return y;
}

TensorPtr stack_scalars(Tape& tape, std::span<const TensorPtr> parts) {
  std::vector<double> out;
  out.reserve(parts.size());
  bool rg = false;
  for (const TensorPtr& p : parts) {
    if (!p->is_scalar()) {
      throw std::invalid_argument("shape: stack_scalars got non-scalar part of shape " +
                                  shape_to_string(p->shape()));
    }
    out.push_back(p->value());
    rg = rg || p->requires_grad();
  }
  TensorPtr y = Tensor::vector(std::move(out), rg);
  if (y->requires_grad()) {
    std::vector<TensorPtr> held(parts.begin(), parts.end());
    tape.record(y, [held = std::move(held), y] {
      const auto g = y->grad();
      for (std::size_t i = 0; i < held.size(); ++i) {
        if (held[i]->requires_grad()) {
          held[i]->accumulate_grad(std::span<const double>(&g[i], 1));
        }
      }
    });
  }
  return y;
}

void backward(Tape& tape, const TensorPtr& loss) { tape.backward(loss); }

}  // namespace avocast
