#include "xmodal/graph.hpp"

#include <cmath>
#include <stdexcept>

#include "xmodal/kernels.hpp"

namespace xmodal {

Tensor& Node::ensure_grad() {
  if (grad.data.empty()) grad = Tensor::zeros(value.shape);
  return grad;
}

void Node::zero_grad() {
  if (!grad.data.empty()) grad.fill(0);
}

Var make_param(std::string name, Tensor value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  node->name = std::move(name);
  return node;
}

Var make_const(Tensor value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return node;
}

Var Tape::record(Tensor value, std::vector<Var> inputs, std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  for (const Var& in : inputs) {
    if (in->requires_grad) {
      node->requires_grad = true;
      break;
    }
  }
  node->inputs = std::move(inputs);
  if (node->requires_grad) node->backward_fn = std::move(backward_fn);
  nodes_.push_back(node);
  return node;
}

void Tape::backward(const Var& root) {
  if (root->value.numel() != 1)
    throw std::invalid_argument("backward: root must be scalar, got " + root->value.shape_str());
  root->ensure_grad().fill(1);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& node = **it;
    if (!node.requires_grad || node.grad.data.empty() || !node.backward_fn) continue;
    node.backward_fn(node);
  }
}

namespace ops {
namespace {

const kernels::Ops& K() { return kernels::active(); }

void require_matrix(const char* op, const Var& x) {
  if (x->value.rank() != 2)
    throw std::invalid_argument(std::string(op) + ": expected matrix, got " +
                                x->value.shape_str());
}

void accumulate(Node& dst, const Tensor& delta) {
  Tensor& g = dst.ensure_grad();
  K().axpy(g.numel(), 1, delta.ptr(), g.ptr());
}

}  // namespace

Var matmul(Tape& t, const Var& a, const Var& b) {
  require_matrix("matmul", a);
  require_matrix("matmul", b);
  const int64_t m = a->value.rows(), k = a->value.cols(), n = b->value.cols();
  if (b->value.rows() != k)
    throw std::invalid_argument("matmul: shape mismatch " + a->value.shape_str() + " vs " +
                                b->value.shape_str());
  Tensor out({m, n});
  K().matmul_nn(a->value.ptr(), b->value.ptr(), out.ptr(), m, k, n, false);
  return t.record(std::move(out), {a, b}, [m, k, n](Node& node) {
    const Var& a_in = node.inputs[0];
    const Var& b_in = node.inputs[1];
    if (a_in->requires_grad)
      K().matmul_nt(node.grad.ptr(), b_in->value.ptr(), a_in->ensure_grad().ptr(), m, n, k, true);
    if (b_in->requires_grad)
      K().matmul_tn(a_in->value.ptr(), node.grad.ptr(), b_in->ensure_grad().ptr(), k, m, n, true);
  });
}

Var matmul_nt(Tape& t, const Var& a, const Var& b) {
  require_matrix("matmul_nt", a);
  require_matrix("matmul_nt", b);
  const int64_t m = a->value.rows(), k = a->value.cols(), n = b->value.rows();
  if (b->value.cols() != k)
    throw std::invalid_argument("matmul_nt: shape mismatch " + a->value.shape_str() + " vs " +
                                b->value.shape_str());
  Tensor out({m, n});
  K().matmul_nt(a->value.ptr(), b->value.ptr(), out.ptr(), m, k, n, false);
  return t.record(std::move(out), {a, b}, [m, k, n](Node& node) {
    const Var& a_in = node.inputs[0];
    const Var& b_in = node.inputs[1];
    if (a_in->requires_grad)
      K().matmul_nn(node.grad.ptr(), b_in->value.ptr(), a_in->ensure_grad().ptr(), m, n, k, true);
    if (b_in->requires_grad)
      K().matmul_tn(node.grad.ptr(), a_in->value.ptr(), b_in->ensure_grad().ptr(), n, m, k, true);
  });
}

Var add(Tape& t, const Var& a, const Var& b) {
  check_same_shape("add", a->value, b->value);
  Tensor out(a->value.shape);
  K().vadd(out.numel(), a->value.ptr(), b->value.ptr(), out.ptr());
  return t.record(std::move(out), {a, b}, [](Node& node) {
    for (int i = 0; i < 2; ++i)
      if (node.inputs[i]->requires_grad) accumulate(*node.inputs[i], node.grad);
  });
}

Var sub(Tape& t, const Var& a, const Var& b) {
  check_same_shape("sub", a->value, b->value);
  Tensor out(a->value.shape);
  for (int64_t i = 0; i < out.numel(); ++i) out.at(i) = a->value.at(i) - b->value.at(i);
  return t.record(std::move(out), {a, b}, [](Node& node) {
    if (node.inputs[0]->requires_grad) accumulate(*node.inputs[0], node.grad);
    if (node.inputs[1]->requires_grad)
      K().axpy(node.grad.numel(), -1, node.grad.ptr(), node.inputs[1]->ensure_grad().ptr());
  });
}

Var hadamard(Tape& t, const Var& a, const Var& b) {
  check_same_shape("hadamard", a->value, b->value);
  Tensor out(a->value.shape);
  K().vmul(out.numel(), a->value.ptr(), b->value.ptr(), out.ptr());
  return t.record(std::move(out), {a, b}, [](Node& node) {
    const Tensor& g = node.grad;
    for (int swap = 0; swap < 2; ++swap) {
      const Var& target = node.inputs[swap];
      const Var& other = node.inputs[1 - swap];
      if (!target->requires_grad) continue;
      Tensor& tg = target->ensure_grad();
      for (int64_t i = 0; i < g.numel(); ++i) tg.at(i) += g.at(i) * other->value.at(i);
    }
  });
}

Var scale(Tape& t, const Var& x, real alpha) {
  Tensor out(x->value.shape);
  K().vscale(out.numel(), alpha, x->value.ptr(), out.ptr());
  return t.record(std::move(out), {x}, [alpha](Node& node) {
    if (node.inputs[0]->requires_grad)
      K().axpy(node.grad.numel(), alpha, node.grad.ptr(), node.inputs[0]->ensure_grad().ptr());
  });
}

Var add_bias_row(Tape& t, const Var& x, const Var& bias) {
  require_matrix("add_bias_row", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  if (bias->value.rank() != 1 || bias->value.shape[0] != n)
    throw std::invalid_argument("add_bias_row: shape mismatch " + x->value.shape_str() + " vs " +
                                bias->value.shape_str());
  Tensor out({m, n});
  for (int64_t i = 0; i < m; ++i)
    K().vadd(n, x->value.row_ptr(i), bias->value.ptr(), out.row_ptr(i));
  return t.record(std::move(out), {x, bias}, [m, n](Node& node) {
    if (node.inputs[0]->requires_grad) accumulate(*node.inputs[0], node.grad);
    if (node.inputs[1]->requires_grad)
      K().colsum(node.grad.ptr(), node.inputs[1]->ensure_grad().ptr(), m, n, true);
  });
}

Var mul_row(Tape& t, const Var& x, const Var& g) {
  require_matrix("mul_row", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  if (g->value.rank() != 1 || g->value.shape[0] != n)
    throw std::invalid_argument("mul_row: shape mismatch " + x->value.shape_str() + " vs " +
                                g->value.shape_str());
  Tensor out({m, n});
  for (int64_t i = 0; i < m; ++i) K().vmul(n, x->value.row_ptr(i), g->value.ptr(), out.row_ptr(i));
  return t.record(std::move(out), {x, g}, [m, n](Node& node) {
    const Var& x_in = node.inputs[0];
    const Var& g_in = node.inputs[1];
    if (x_in->requires_grad) {
      Tensor& xg = x_in->ensure_grad();
      for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) xg.at(i, j) += node.grad.at(i, j) * g_in->value.at(j);
    }
    if (g_in->requires_grad) {
      Tensor& gg = g_in->ensure_grad();
      for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) gg.at(j) += node.grad.at(i, j) * x_in->value.at(i, j);
    }
  });
}

namespace {
constexpr double kGeluC0 = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluC1 = 0.044715;
}  // namespace

Var gelu(Tape& t, const Var& x) {
  Tensor out(x->value.shape);
  for (int64_t i = 0; i < out.numel(); ++i) {
    const double v = x->value.at(i);
    out.at(i) = static_cast<real>(0.5 * v * (1.0 + std::tanh(kGeluC0 * (v + kGeluC1 * v * v * v))));
  }
  return t.record(std::move(out), {x}, [](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    const Tensor& xv = node.inputs[0]->value;
    for (int64_t i = 0; i < xv.numel(); ++i) {
      const double v = xv.at(i);
      const double u = kGeluC0 * (v + kGeluC1 * v * v * v);
      const double th = std::tanh(u);
      const double du = kGeluC0 * (1.0 + 3.0 * kGeluC1 * v * v);
      const double d = 0.5 * (1.0 + th) + 0.5 * v * (1.0 - th * th) * du;
      xg.at(i) += node.grad.at(i) * static_cast<real>(d);
    }
  });
}

Var layer_norm_rows(Tape& t, const Var& x, real eps) {
  require_matrix("layer_norm_rows", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  Tensor out({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const real* row = x->value.row_ptr(i);
    double mean = 0;
    for (int64_t j = 0; j < n; ++j) mean += row[j];
    mean /= static_cast<double>(n);
    double var = 0;
    for (int64_t j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= static_cast<double>(n);
    const double inv = 1.0 / std::sqrt(var + eps);
    for (int64_t j = 0; j < n; ++j) out.at(i, j) = static_cast<real>((row[j] - mean) * inv);
  }
  return t.record(std::move(out), {x}, [m, n, eps](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    const Tensor& xv = node.inputs[0]->value;
    for (int64_t i = 0; i < m; ++i) {
      const real* row = xv.row_ptr(i);
      double mean = 0;
      for (int64_t j = 0; j < n; ++j) mean += row[j];
      mean /= static_cast<double>(n);
      double var = 0;
      for (int64_t j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
      var /= static_cast<double>(n);
      const double inv = 1.0 / std::sqrt(var + eps);
      double gmean = 0, gymean = 0;
      for (int64_t j = 0; j < n; ++j) {
        const double y = (row[j] - mean) * inv;
        const double g = node.grad.at(i, j);
        gmean += g;
        gymean += g * y;
      }
      gmean /= static_cast<double>(n);
      gymean /= static_cast<double>(n);
      for (int64_t j = 0; j < n; ++j) {
        const double y = (row[j] - mean) * inv;
        xg.at(i, j) += static_cast<real>(inv * (node.grad.at(i, j) - gmean - y * gymean));
      }
    }
  });
}

Var softmax_rows(Tape& t, const Var& x) {
  require_matrix("softmax_rows", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  Tensor out({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const real* row = x->value.row_ptr(i);
    double mx = row[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max<double>(mx, row[j]);
    double sum = 0;
    for (int64_t j = 0; j < n; ++j) {
      const double e = std::exp(row[j] - mx);
      out.at(i, j) = static_cast<real>(e);
      sum += e;
    }
    for (int64_t j = 0; j < n; ++j) out.at(i, j) = static_cast<real>(out.at(i, j) / sum);
  }
  return t.record(std::move(out), {x}, [m, n](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    for (int64_t i = 0; i < m; ++i) {
      double dot = 0;
      for (int64_t j = 0; j < n; ++j) dot += node.grad.at(i, j) * node.value.at(i, j);
      for (int64_t j = 0; j < n; ++j)
        xg.at(i, j) += static_cast<real>(node.value.at(i, j) * (node.grad.at(i, j) - dot));
    }
  });
}

Var masked_softmax_rows(Tape& t, const Var& x, const std::vector<uint8_t>& allowed) {
  require_matrix("masked_softmax_rows", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  if (static_cast<int64_t>(allowed.size()) != m * n)
    throw std::invalid_argument("masked_softmax_rows: mask size " +
                                std::to_string(allowed.size()) + " vs " + x->value.shape_str());
  Tensor out({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const real* row = x->value.row_ptr(i);
    double mx = 0;
    bool any = false;
    for (int64_t j = 0; j < n; ++j) {
      if (!allowed[i * n + j]) continue;
      mx = any ? std::max<double>(mx, row[j]) : row[j];
      any = true;
    }
    if (!any)
      throw std::invalid_argument("masked_softmax_rows: row " + std::to_string(i) +
                                  " has no allowed positions");
    double sum = 0;
    for (int64_t j = 0; j < n; ++j) {
      if (!allowed[i * n + j]) continue;
      const double e = std::exp(row[j] - mx);
      out.at(i, j) = static_cast<real>(e);
      sum += e;
    }
    for (int64_t j = 0; j < n; ++j)
      if (allowed[i * n + j]) out.at(i, j) = static_cast<real>(out.at(i, j) / sum);
  }
  return t.record(std::move(out), {x}, [m, n](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    for (int64_t i = 0; i < m; ++i) {
      double dot = 0;
      for (int64_t j = 0; j < n; ++j) dot += node.grad.at(i, j) * node.value.at(i, j);
      for (int64_t j = 0; j < n; ++j)
        xg.at(i, j) += static_cast<real>(node.value.at(i, j) * (node.grad.at(i, j) - dot));
    }
  });
}

Var embedding(Tape& t, const Var& table, const std::vector<int>& ids) {
  require_matrix("embedding", table);
  const int64_t vocab = table->value.rows(), d = table->value.cols();
  Tensor out({static_cast<int64_t>(ids.size()), d});
  for (size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || ids[r] >= vocab)
      throw std::invalid_argument("embedding: id " + std::to_string(ids[r]) +
                                  " out of range for table " + table->value.shape_str());
    std::copy_n(table->value.row_ptr(ids[r]), d, out.row_ptr(r));
  }
  return t.record(std::move(out), {table}, [ids, d](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& tg = node.inputs[0]->ensure_grad();
    for (size_t r = 0; r < ids.size(); ++r)
      K().axpy(d, 1, node.grad.row_ptr(static_cast<int64_t>(r)), tg.row_ptr(ids[r]));
  });
}

Var concat_rows(Tape& t, const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no parts");
  const int64_t n = parts[0]->value.cols();
  int64_t m = 0;
  for (const Var& p : parts) {
    require_matrix("concat_rows", p);
    if (p->value.cols() != n)
      throw std::invalid_argument("concat_rows: shape mismatch " + parts[0]->value.shape_str() +
                                  " vs " + p->value.shape_str());
    m += p->value.rows();
  }
  Tensor out({m, n});
  int64_t at = 0;
  for (const Var& p : parts) {
    std::copy_n(p->value.ptr(), p->value.numel(), out.row_ptr(at));
    at += p->value.rows();
  }
  return t.record(std::move(out), parts, [](Node& node) {
    int64_t at = 0;
    for (const Var& p : node.inputs) {
      const int64_t rows = p->value.rows();
      if (p->requires_grad)
        K().axpy(p->value.numel(), 1, node.grad.row_ptr(at), p->ensure_grad().ptr());
      at += rows;
    }
  });
}

Var slice_rows(Tape& t, const Var& x, int64_t row_begin, int64_t row_end) {
  require_matrix("slice_rows", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  if (row_begin < 0 || row_end > m || row_begin >= row_end)
    throw std::invalid_argument("slice_rows: range [" + std::to_string(row_begin) + "," +
                                std::to_string(row_end) + ") invalid for " + x->value.shape_str());
  Tensor out({row_end - row_begin, n});
  std::copy_n(x->value.row_ptr(row_begin), out.numel(), out.ptr());
  return t.record(std::move(out), {x}, [row_begin](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    K().axpy(node.grad.numel(), 1, node.grad.ptr(), xg.row_ptr(row_begin));
  });
}

Var concat_cols(Tape& t, const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const int64_t m = parts[0]->value.rows();
  int64_t n = 0;
  for (const Var& p : parts) {
    require_matrix("concat_cols", p);
    if (p->value.rows() != m)
      throw std::invalid_argument("concat_cols: shape mismatch " + parts[0]->value.shape_str() +
                                  " vs " + p->value.shape_str());
    n += p->value.cols();
  }
  Tensor out({m, n});
  int64_t at = 0;
  for (const Var& p : parts) {
    const int64_t pc = p->value.cols();
    for (int64_t i = 0; i < m; ++i) std::copy_n(p->value.row_ptr(i), pc, out.row_ptr(i) + at);
    at += pc;
  }
  return t.record(std::move(out), parts, [m](Node& node) {
    int64_t at = 0;
    for (const Var& p : node.inputs) {
      const int64_t pc = p->value.cols();
      if (p->requires_grad) {
        Tensor& pg = p->ensure_grad();
        for (int64_t i = 0; i < m; ++i) K().axpy(pc, 1, node.grad.row_ptr(i) + at, pg.row_ptr(i));
      }
      at += pc;
    }
  });
}

Var slice_cols(Tape& t, const Var& x, int64_t col_begin, int64_t col_end) {
  require_matrix("slice_cols", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  if (col_begin < 0 || col_end > n || col_begin >= col_end)
    throw std::invalid_argument("slice_cols: range [" + std::to_string(col_begin) + "," +
                                std::to_string(col_end) + ") invalid for " + x->value.shape_str());
  const int64_t w = col_end - col_begin;
  Tensor out({m, w});
  for (int64_t i = 0; i < m; ++i) std::copy_n(x->value.row_ptr(i) + col_begin, w, out.row_ptr(i));
  return t.record(std::move(out), {x}, [m, w, col_begin](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    for (int64_t i = 0; i < m; ++i)
      K().axpy(w, 1, node.grad.row_ptr(i), xg.row_ptr(i) + col_begin);
  });
}

Var mean_rows(Tape& t, const Var& x) {
  require_matrix("mean_rows", x);
  const int64_t m = x->value.rows(), n = x->value.cols();
  Tensor out({1, n});
  K().colsum(x->value.ptr(), out.ptr(), m, n, false);
  K().vscale(n, real(1) / static_cast<real>(m), out.ptr(), out.ptr());
  return t.record(std::move(out), {x}, [m, n](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& xg = node.inputs[0]->ensure_grad();
    const real inv = real(1) / static_cast<real>(m);
    for (int64_t i = 0; i < m; ++i) K().axpy(n, inv, node.grad.ptr(), xg.row_ptr(i));
  });
}

Var cross_entropy(Tape& t, const Var& logits, const std::vector<int>& targets,
                  const std::vector<uint8_t>& active) {
  require_matrix("cross_entropy", logits);
  const int64_t rows = logits->value.rows(), vocab = logits->value.cols();
  if (static_cast<int64_t>(targets.size()) != rows ||
      static_cast<int64_t>(active.size()) != rows)
    throw std::invalid_argument("cross_entropy: targets/mask length " +
                                std::to_string(targets.size()) + " vs logits " +
                                logits->value.shape_str());
  int64_t count = 0;
  double loss = 0;
  for (int64_t r = 0; r < rows; ++r) {
    if (!active[r]) continue;
    if (targets[r] < 0 || targets[r] >= vocab)
      throw std::invalid_argument("cross_entropy: target id " + std::to_string(targets[r]) +
                                  " out of range for logits " + logits->value.shape_str());
    const real* row = logits->value.row_ptr(r);
    double mx = row[0];
    for (int64_t j = 1; j < vocab; ++j) mx = std::max<double>(mx, row[j]);
    double sum = 0;
    for (int64_t j = 0; j < vocab; ++j) sum += std::exp(row[j] - mx);
    loss += mx + std::log(sum) - row[targets[r]];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("cross_entropy: no active positions");
  Tensor out({1});
  out.at(0) = static_cast<real>(loss / static_cast<double>(count));
  return t.record(std::move(out), {logits}, [targets, active, rows, vocab, count](Node& node) {
    if (!node.inputs[0]->requires_grad) return;
    Tensor& lg = node.inputs[0]->ensure_grad();
    const Tensor& lv = node.inputs[0]->value;
    const double g = node.grad.at(0) / static_cast<double>(count);
    for (int64_t r = 0; r < rows; ++r) {
      if (!active[r]) continue;
      const real* row = lv.row_ptr(r);
      double mx = row[0];
      for (int64_t j = 1; j < vocab; ++j) mx = std::max<double>(mx, row[j]);
      double sum = 0;
      for (int64_t j = 0; j < vocab; ++j) sum += std::exp(row[j] - mx);
      for (int64_t j = 0; j < vocab; ++j) {
        const double p = std::exp(row[j] - mx) / sum;
        lg.at(r, j) += static_cast<real>(g * (p - (j == targets[r] ? 1.0 : 0.0)));
      }
    }
  });
}

Var affine(Tape& t, const Var& x, const Var& w, const Var& b) {
  return add_bias_row(t, matmul(t, x, w), b);
}

Var sdpa(Tape& t, const Var& q, const Var& k, const Var& v, real scale_factor,
         const std::vector<uint8_t>& mask_allowed) {
  Var scores = scale(t, matmul_nt(t, q, k), scale_factor);
  Var weights = mask_allowed.empty() ? softmax_rows(t, scores)
                                     : masked_softmax_rows(t, scores, mask_allowed);
  return matmul(t, weights, v);
}

}  // namespace ops

GradCheckResult grad_check(const std::function<Var(Tape&)>& f, std::vector<Param>& params,
                           double eps) {
  if (!(eps > 0.0 && eps <= 1e-2))
    throw std::invalid_argument("grad_check: eps must lie in (0, 1e-2]");

  for (Param& p : params) p.var->zero_grad();
  std::vector<Tensor> analytic;
  {
    Tape tape;
    Var root = f(tape);
    if (!std::isfinite(static_cast<double>(root->value.at(0))))
      throw std::runtime_error("grad_check: non-finite loss at unperturbed parameters");
    tape.backward(root);
    for (Param& p : params) analytic.push_back(p.var->ensure_grad());
  }

  auto eval = [&](const std::string& pname, int64_t coord) {
    Tape tape;
    Var root = f(tape);
    const double value = root->value.at(0);
    if (!std::isfinite(value))
      throw std::runtime_error("grad_check: non-finite loss perturbing " + pname + "[" +
                               std::to_string(coord) + "]");
    return value;
  };

  GradCheckResult result;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& value = params[pi].var->value;
    for (int64_t i = 0; i < value.numel(); ++i) {
      const real original = value.at(i);
      value.at(i) = original + static_cast<real>(eps);
      const double up = eval(params[pi].name, i);
      value.at(i) = original - static_cast<real>(eps);
      const double down = eval(params[pi].name, i);
      value.at(i) = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[pi].at(i);
      const double rel = std::fabs(a - numeric) /
                         std::max({std::fabs(a), std::fabs(numeric), 1e-12});
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_param = params[pi].name;
        result.worst_coord = i;
      }
    }
  }
  for (Param& p : params) p.var->zero_grad();
  return result;
}

}  // namespace xmodal
