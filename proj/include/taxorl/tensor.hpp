#ifndef TAXORL_TENSOR_HPP
#define TAXORL_TENSOR_HPP

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace taxorl {

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major tensor of doubles; only rank 1 and 2 are used.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    v.assign(count(), 0.0);
  }
  Tensor(std::vector<int> s, std::vector<double> vals)
      : shape(std::move(s)), v(std::move(vals)) {
    if (v.size() != count())
      throw ShapeError("tensor value count does not match shape");
  }

  static Tensor vec(std::vector<double> vals) {
    int n = static_cast<int>(vals.size());
    return Tensor({n}, std::move(vals));
  }
  static Tensor scalar(double x) { return Tensor({1}, {x}); }

  std::size_t count() const {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    return n;
  }
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const {
    return v[static_cast<std::size_t>(r) * cols() + c];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  std::string shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i)
      s += (i ? "x" : "") + std::to_string(shape[i]);
    return s + "]";
  }
};

}  // namespace taxorl

#endif
