#include "xmodal/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace xmodal {

int64_t shape_numel(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor shape has non-positive dim " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const std::vector<int64_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<int64_t> shape_in) : shape(std::move(shape_in)) {
  data.assign(static_cast<size_t>(shape_numel(shape)), real(0));
}

Tensor Tensor::zeros(std::vector<int64_t> shape_in) { return Tensor(std::move(shape_in)); }

Tensor Tensor::full(std::vector<int64_t> shape_in, real value) {
  Tensor t(std::move(shape_in));
  t.fill(value);
  return t;
}

Tensor Tensor::from(std::vector<int64_t> shape_in, std::initializer_list<real> values) {
  Tensor t(std::move(shape_in));
  if (static_cast<int64_t>(values.size()) != t.numel())
    throw std::invalid_argument("tensor init list size does not match shape " + t.shape_str());
  size_t i = 0;
  for (real v : values) t.data[i++] = v;
  return t;
}

Tensor Tensor::row(std::initializer_list<real> values) {
  return from({1, static_cast<int64_t>(values.size())}, values);
}

int64_t Tensor::rows() const {
  if (shape.size() != 2) throw std::logic_error("rows() on non-matrix tensor " + shape_str());
  return shape[0];
}

int64_t Tensor::cols() const {
  if (shape.size() != 2) throw std::logic_error("cols() on non-matrix tensor " + shape_str());
  return shape[1];
}

void Tensor::fill(real value) {
  for (real& v : data) v = value;
}

std::string Tensor::shape_str() const { return xmodal::shape_str(shape); }

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
}

}  // namespace xmodal
