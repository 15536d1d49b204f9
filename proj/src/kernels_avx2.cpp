// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include "fw/kernels.hpp"

namespace fw::kernels::avx2 {
namespace {

// (a0 + a2) + (a1 + a3), matching the scalar reference.
inline double reduce(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d pair = _mm_add_pd(lo, hi);  // (a0+a2, a1+a3)
  __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  if (cols == 0) return;
  const std::size_t rows = matrix.size() / cols;
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < rows; ++i) {
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(matrix.data() + i * cols + j));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += matrix[i * cols + j];
    out[j] = acc;
  }
}

double sum_squared_deviation(std::span<const double> values, double center) {
  const std::size_t n = values.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(values.data() + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = reduce(acc);
  for (; i < n; ++i) {
    double d = values[i] - center;
    total += d * d;
  }
  return total;
}

double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
  double total = reduce(acc);
  for (; i < n; ++i) total += values[i];
  return total;
}

}  // namespace fw::kernels::avx2
