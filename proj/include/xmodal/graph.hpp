#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "xmodal/tensor.hpp"

namespace xmodal {

// Reverse-mode autodiff over a per-step tape. Parameters are Nodes created
// outside any tape (make_param); intermediate nodes are recorded on the Tape
// in creation order and backward() replays them in reverse. A tape and the
// graph hanging off it belong to one thread.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on demand, same shape as value
  bool requires_grad = false;
  std::string name;  // set for parameters, empty for intermediates
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward_fn;  // reads this->grad, accumulates into inputs

  Tensor& ensure_grad();
  void zero_grad();
};

using Var = std::shared_ptr<Node>;

Var make_param(std::string name, Tensor value);
Var make_const(Tensor value);

class Tape {
 public:
  Var record(Tensor value, std::vector<Var> inputs, std::function<void(Node&)> backward_fn);
  // Seeds d(root)/d(root) = 1 (root must be scalar) and runs the tape in
  // reverse, accumulating into every requires_grad node it reaches.
  void backward(const Var& root);
  size_t size() const { return nodes_.size(); }

 private:
  std::vector<Var> nodes_;
};

namespace ops {

// Shape contracts are checked on entry; violations throw
// std::invalid_argument naming the op and both shapes.
Var matmul(Tape& t, const Var& a, const Var& b);     // [m,k]x[k,n] -> [m,n]
Var matmul_nt(Tape& t, const Var& a, const Var& b);  // [m,k]x[n,k]^T -> [m,n]
Var add(Tape& t, const Var& a, const Var& b);
Var sub(Tape& t, const Var& a, const Var& b);
Var hadamard(Tape& t, const Var& a, const Var& b);
Var scale(Tape& t, const Var& x, real alpha);
Var add_bias_row(Tape& t, const Var& x, const Var& bias);  // [m,n] + [n]
Var mul_row(Tape& t, const Var& x, const Var& g);          // [m,n] * [n] broadcast
Var gelu(Tape& t, const Var& x);                           // tanh approximation
// Row-wise (x - mean) / sqrt(var + eps); affine scale/shift live outside.
Var layer_norm_rows(Tape& t, const Var& x, real eps = 1e-6);
Var softmax_rows(Tape& t, const Var& x);
// Softmax over the last axis with `allowed[r*cols+c]==false` positions
// forced to probability zero. Each row must keep at least one allowed slot.
Var masked_softmax_rows(Tape& t, const Var& x, const std::vector<uint8_t>& allowed);
Var embedding(Tape& t, const Var& table, const std::vector<int>& ids);
Var concat_rows(Tape& t, const std::vector<Var>& parts);
Var slice_rows(Tape& t, const Var& x, int64_t row_begin, int64_t row_end);
Var concat_cols(Tape& t, const std::vector<Var>& parts);
Var slice_cols(Tape& t, const Var& x, int64_t col_begin, int64_t col_end);
Var mean_rows(Tape& t, const Var& x);  // [m,n] -> [1,n]
// Mean over `active` positions of -log softmax(logits)[target]; scalar out.
Var cross_entropy(Tape& t, const Var& logits, const std::vector<int>& targets,
                  const std::vector<uint8_t>& active);
Var affine(Tape& t, const Var& x, const Var& w, const Var& b);  // x*w + b

// Scaled dot-product attention, composed from the primitives above so its
// backward rule follows from theirs. mask_allowed is empty (no mask) or
// [Tq*Tk] row-major.
Var sdpa(Tape& t, const Var& q, const Var& k, const Var& v, real scale_factor,
         const std::vector<uint8_t>& mask_allowed);

}  // namespace ops

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  int64_t worst_coord = -1;
};

struct Param {
  std::string name;
  Var var;
};

// Central-difference validation of the backward rules: for every coordinate
// of every param, compares the analytic gradient of f against
// (f(+eps) - f(-eps)) / 2eps with the relative error
// |a - n| / max(|a|, |n|, 1e-12). f must rebuild its graph per call from the
// current parameter values. Throws std::runtime_error naming the parameter
// coordinate if f ever returns a non-finite loss.
GradCheckResult grad_check(const std::function<Var(Tape&)>& f, std::vector<Param>& params,
                           double eps);

}  // namespace xmodal
