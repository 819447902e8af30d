#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace idmft {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Dense rank-4 tensor of two-electron repulsion integrals in chemists'
/// notation, (ij|kl).  Stored without symmetry packing; at the basis set
/// sizes this code targets the full M^4 footprint is negligible and flat
/// storage keeps the contraction loops simple.
class EriTensor {
public:
  EriTensor() = default;
  explicit EriTensor(std::size_t m) : m_(m), data_(m * m * m * m, 0.0) {}

  std::size_t dim() const { return m_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * m_ + j) * m_ + k) * m_ + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * m_ + j) * m_ + k) * m_ + l];
  }

  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

private:
  std::size_t m_ = 0;
  std::vector<double> data_;
};

} // namespace idmft
