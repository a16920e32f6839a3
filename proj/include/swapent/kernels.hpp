#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial counterpart that
// is kept as the reference for tests and benchmarks.

#include <cstddef>
#include <span>

#include "swapent/tensor.hpp"

namespace swapent::kernels {

/// out[perm-index] = in[index] for a row-major tensor of the given shape.
void permute_parallel(std::span<const double> in, const Shape& shape,
                      std::span<const std::size_t> perm, std::span<double> out);
void permute_serial(std::span<const double> in, const Shape& shape,
                    std::span<const std::size_t> perm, std::span<double> out);

/// Row-major C(m x n) = A(m x k) * B(k x n).
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);

/// Naive index-loop contraction; same result layout as `contract`.
DenseTensor contract_reference(const DenseTensor& a, const DenseTensor& b,
                               std::span<const AxisPair> pairs);

}  // namespace swapent::kernels
