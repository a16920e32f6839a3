#include "swapent/kernels.hpp"

#include <cblas.h>
#include <omp.h>

#include <algorithm>
#include <cstring>

#include "swapent/errors.hpp"

namespace swapent::kernels {
namespace {

constexpr std::size_t kParallelThreshold = 1 << 15;

// Permutation reduced to the fewest axes: consecutive output axes that are
// also consecutive in the input are merged.
struct PermutePlan {
  std::vector<std::size_t> out_extent;
  std::vector<std::size_t> in_stride;  // input stride for each output axis
  std::size_t volume = 1;
};

PermutePlan make_plan(const Shape& shape, std::span<const std::size_t> perm) {
  const std::size_t rank = shape.size();
  if (perm.size() != rank) throw ShapeError("permutation rank mismatch");
  std::vector<std::size_t> stride(rank, 1);
  for (std::size_t i = rank; i-- > 1;) stride[i - 1] = stride[i] * shape[i];

  std::vector<bool> seen(rank, false);
  for (std::size_t p : perm) {
    if (p >= rank || seen[p]) throw ShapeError("invalid permutation");
    seen[p] = true;
  }

  PermutePlan plan;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t ax = perm[i];
    if (shape[ax] == 1) continue;
    // merge with the previous kept axis when that one sits immediately before it in memory
    if (!plan.out_extent.empty() && plan.in_stride.back() == stride[ax] * shape[ax]) {
      plan.out_extent.back() *= shape[ax];
      plan.in_stride.back() = stride[ax];
      continue;
    }
    plan.out_extent.push_back(shape[ax]);
    plan.in_stride.push_back(stride[ax]);
  }
  if (plan.out_extent.empty()) {
    plan.out_extent.push_back(1);
    plan.in_stride.push_back(1);
  }
  for (std::size_t e : plan.out_extent) plan.volume *= e;
  return plan;
}

// Copies output rows [row_begin, row_end) where a row is the innermost axis.
void permute_rows(const PermutePlan& plan, const double* in, double* out, std::size_t row_begin,
                  std::size_t row_end) {
  const std::size_t r = plan.out_extent.size();
  const std::size_t inner = plan.out_extent[r - 1];
  const std::size_t inner_stride = plan.in_stride[r - 1];
  if (row_begin >= row_end) return;

  std::vector<std::size_t> idx(r, 0);
  std::size_t rem = row_begin;
  std::size_t offset = 0;
  for (std::size_t a = r - 1; a-- > 0;) {
    idx[a] = rem % plan.out_extent[a];
    rem /= plan.out_extent[a];
    offset += idx[a] * plan.in_stride[a];
  }

  double* dst = out + row_begin * inner;
  for (std::size_t row = row_begin; row < row_end; ++row) {
    const double* src = in + offset;
    if (inner_stride == 1) {
      std::memcpy(dst, src, inner * sizeof(double));
    } else {
      for (std::size_t j = 0; j < inner; ++j) dst[j] = src[j * inner_stride];
    }
    dst += inner;
    for (std::size_t a = r - 1; a-- > 0;) {
      ++idx[a];
      offset += plan.in_stride[a];
      if (idx[a] < plan.out_extent[a]) break;
      offset -= idx[a] * plan.in_stride[a];
      idx[a] = 0;
    }
  }
}

void check_sizes(std::span<const double> in, const Shape& shape, std::span<double> out) {
  const std::size_t vol = shape_volume(shape);
  if (in.size() != vol || out.size() != vol) throw ShapeError("permute buffer size mismatch");
}

}  // namespace

void permute_serial(std::span<const double> in, const Shape& shape,
                    std::span<const std::size_t> perm, std::span<double> out) {
  check_sizes(in, shape, out);
  const PermutePlan plan = make_plan(shape, perm);
  const std::size_t rows = plan.volume / plan.out_extent.back();
  permute_rows(plan, in.data(), out.data(), 0, rows);
}

void permute_parallel(std::span<const double> in, const Shape& shape,
                      std::span<const std::size_t> perm, std::span<double> out) {
  check_sizes(in, shape, out);
  const PermutePlan plan = make_plan(shape, perm);
  const std::size_t rows = plan.volume / plan.out_extent.back();
  if (plan.volume < kParallelThreshold || rows < 2 || omp_in_parallel()) {
    permute_rows(plan, in.data(), out.data(), 0, rows);
    return;
  }
#pragma omp parallel
  {
    const std::size_t nt = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t t = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t begin = rows * t / nt;
    const std::size_t end = rows * (t + 1) / nt;
    permute_rows(plan, in.data(), out.data(), begin, end);
  }
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
          double* c) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    std::fill(c, c + m * n, 0.0);
    return;
  }
  if (n == 1) {
    cblas_dgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(m), static_cast<int>(k), 1.0, a,
                static_cast<int>(k), b, 1, 0.0, c, 1);
    return;
  }
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
              static_cast<int>(k), 1.0, a, static_cast<int>(k), b, static_cast<int>(n), 0.0, c,
              static_cast<int>(n));
}

DenseTensor contract_reference(const DenseTensor& a, const DenseTensor& b,
                               std::span<const AxisPair> pairs) {
  std::vector<bool> paired_a(a.rank(), false), paired_b(b.rank(), false);
  for (auto [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw ShapeError("axis out of range");
    if (paired_a[ia] || paired_b[ib]) throw ShapeError("axis listed twice");
    if (a.extent(ia) != b.extent(ib)) throw ShapeError("paired extents differ");
    paired_a[ia] = paired_b[ib] = true;
  }
  std::vector<std::size_t> free_a, free_b;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!paired_a[i]) free_a.push_back(i);
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!paired_b[i]) free_b.push_back(i);

  Shape out_shape;
  for (auto i : free_a) out_shape.push_back(a.extent(i));
  for (auto i : free_b) out_shape.push_back(b.extent(i));
  if (out_shape.empty()) out_shape.push_back(1);
  DenseTensor out(out_shape);

  auto strides = [](const Shape& s) {
    std::vector<std::size_t> st(s.size(), 1);
    for (std::size_t i = s.size(); i-- > 1;) st[i - 1] = st[i] * s[i];
    return st;
  };
  const auto sa = strides(a.shape());
  const auto sb = strides(b.shape());

  Shape sum_shape;
  for (auto [ia, ib] : pairs) sum_shape.push_back(a.extent(ia));
  const std::size_t sum_volume = shape_volume(sum_shape);
  const std::size_t nfa = free_a.size(), nfb = free_b.size();

  std::vector<std::size_t> oidx(nfa + nfb, 0), sidx(pairs.size(), 0);
  for (std::size_t o = 0; o < out.size(); ++o) {
    std::size_t rem = o;
    for (std::size_t k = nfa + nfb; k-- > 0;) {
      const std::size_t ext = k < nfa ? a.extent(free_a[k]) : b.extent(free_b[k - nfa]);
      oidx[k] = rem % ext;
      rem /= ext;
    }
    std::size_t base_a = 0, base_b = 0;
    for (std::size_t k = 0; k < nfa; ++k) base_a += oidx[k] * sa[free_a[k]];
    for (std::size_t k = 0; k < nfb; ++k) base_b += oidx[nfa + k] * sb[free_b[k]];
    double acc = 0.0;
    for (std::size_t s = 0; s < sum_volume; ++s) {
      std::size_t r = s, off_a = base_a, off_b = base_b;
      for (std::size_t k = pairs.size(); k-- > 0;) {
        sidx[k] = r % sum_shape[k];
        r /= sum_shape[k];
        off_a += sidx[k] * sa[pairs[k].first];
        off_b += sidx[k] * sb[pairs[k].second];
      }
      acc += a[off_a] * b[off_b];
    }
    out[o] = acc;
  }
  return out;
}

}  // namespace swapent::kernels
