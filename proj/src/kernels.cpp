#include "fw/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace fw::kernels {
namespace {

// -1 = no override, otherwise the Isa value.
std::atomic<int> g_override{-1};

// Lane combine order shared with the AVX2 horizontal reduction.
inline double combine_lanes(const double (&acc)[4]) { return (acc[0] + acc[2]) + (acc[1] + acc[3]); }

}  // namespace

std::string_view to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept {
#if defined(FW_HAVE_AVX2)
  static const bool has_avx2 = __builtin_cpu_supports("avx2");
  if (has_avx2) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa active_isa() noexcept {
  int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  static const bool force_scalar = std::getenv("FW_FORCE_SCALAR") != nullptr;
  return force_scalar ? Isa::Scalar : detected_isa();
}

void override_isa(std::optional<Isa> isa) noexcept {
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

namespace scalar {

void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  if (cols == 0) return;
  const std::size_t rows = matrix.size() / cols;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = matrix.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j];
  }
}

double sum_squared_deviation(std::span<const double> values, double center) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  const std::size_t n = values.size();
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      double d = values[i + k] - center;
      acc[k] += d * d;
    }
  }
  double total = combine_lanes(acc);
  for (; i < n; ++i) {
    double d = values[i] - center;
    total += d * d;
  }
  return total;
}

double sum(std::span<const double> values) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  const std::size_t n = values.size();
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) acc[k] += values[i + k];
  }
  double total = combine_lanes(acc);
  for (; i < n; ++i) total += values[i];
  return total;
}

}  // namespace scalar

void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out) {
#if defined(FW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::column_sums(matrix, cols, out);
#endif
  scalar::column_sums(matrix, cols, out);
}

double sum_squared_deviation(std::span<const double> values, double center) {
#if defined(FW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::sum_squared_deviation(values, center);
#endif
  return scalar::sum_squared_deviation(values, center);
}

double sum(std::span<const double> values) {
#if defined(FW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::sum(values);
#endif
  return scalar::sum(values);
}

}  // namespace fw::kernels
