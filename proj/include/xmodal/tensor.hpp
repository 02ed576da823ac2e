#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace xmodal {

#ifdef XMODAL_SINGLE_PRECISION
using real = float;
#else
using real = double;
#endif

// Dense row-major tensor. Shapes are mostly rank-1/2 in practice; the
// autograd layer (graph.hpp) owns gradients, this type is plain storage.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<real> data;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape_in);

  static Tensor zeros(std::vector<int64_t> shape_in);
  static Tensor full(std::vector<int64_t> shape_in, real value);
  static Tensor from(std::vector<int64_t> shape_in, std::initializer_list<real> values);
  static Tensor row(std::initializer_list<real> values);

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int64_t rank() const { return static_cast<int64_t>(shape.size()); }
  // rows()/cols() require rank 2.
  int64_t rows() const;
  int64_t cols() const;

  real& at(int64_t i) { return data[static_cast<size_t>(i)]; }
  real at(int64_t i) const { return data[static_cast<size_t>(i)]; }
  real& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols() + c)]; }
  real at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols() + c)]; }

  real* ptr() { return data.data(); }
  const real* ptr() const { return data.data(); }
  real* row_ptr(int64_t r) { return data.data() + r * cols(); }
  const real* row_ptr(int64_t r) const { return data.data() + r * cols(); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  void fill(real value);
  std::string shape_str() const;
};

std::string shape_str(const std::vector<int64_t>& shape);
int64_t shape_numel(const std::vector<int64_t>& shape);

// Throws std::invalid_argument naming `op` and both shapes.
void check_same_shape(const char* op, const Tensor& a, const Tensor& b);

}  // namespace xmodal
