#pragma once

// Data-parallel inner loops of the aggregation core.
//
// Each kernel has a scalar reference and, on x86-64, an AVX2 variant picked
// at runtime. The scalar reference uses the same 4-lane accumulation order
// as the vector code, so both variants return bit-identical results for any
// input, which keeps concordance values and state hashes independent of the
// host CPU.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace fw::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

// Best ISA this binary and CPU support.
Isa detected_isa() noexcept;

// ISA used by the dispatching entry points: the detected one unless the
// FW_FORCE_SCALAR environment variable is set or an override is installed.
Isa active_isa() noexcept;
void override_isa(std::optional<Isa> isa) noexcept;

// out[j] = sum over rows i of matrix[i * cols + j]; rows are added in order.
void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out);
// Sum of (v - center)^2.
double sum_squared_deviation(std::span<const double> values, double center);
// Sum of values.
double sum(std::span<const double> values);

namespace scalar {
void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out);
double sum_squared_deviation(std::span<const double> values, double center);
double sum(std::span<const double> values);
}  // namespace scalar

#if defined(FW_HAVE_AVX2)
namespace avx2 {
void column_sums(std::span<const double> matrix, std::size_t cols, std::span<double> out);
double sum_squared_deviation(std::span<const double> values, double center);
double sum(std::span<const double> values);
}  // namespace avx2
#endif

}  // namespace fw::kernels
