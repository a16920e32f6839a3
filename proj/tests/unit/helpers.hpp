#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "swapent/tensor.hpp"

namespace testing {

inline swapent::DenseTensor random_tensor(const swapent::Shape& shape, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  swapent::DenseTensor t(shape);
  for (auto& x : t.data()) x = dist(gen);
  return t;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Dense kron of one-qubit operators; qubit 0 is the most significant bit.
inline std::vector<double> kron_chain(const std::vector<std::vector<double>>& ops) {
  std::vector<double> m{1.0};
  std::size_t dim = 1;
  for (const auto& op : ops) {
    std::vector<double> next(dim * 2 * dim * 2);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b)
            next[(r * 2 + a) * (dim * 2) + (c * 2 + b)] = m[r * dim + c] * op[a * 2 + b];
    m = std::move(next);
    dim *= 2;
  }
  return m;
}

}  // namespace testing
