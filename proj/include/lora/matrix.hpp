// Dense square matrix of doubles, row-major.  Small helper shared by the
// collision and interference code; not a general linear-algebra type.
#pragma once

#include <cstddef>
#include <vector>

namespace lora {

class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const double* row(std::size_t i) const { return data_.data() + i * n_; }
  const std::vector<double>& data() const { return data_; }

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

} // namespace lora
