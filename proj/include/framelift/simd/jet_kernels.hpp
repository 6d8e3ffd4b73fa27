#pragma once

#include <string_view>

// Inner product kernel of the jet algebra: the truncated bivariate Cauchy
// product out(a, b) = sum f(i, j) g(a - i, b - j) over a + b <= order, on the
// padded layout of framelift::Jet. A scalar reference and an AVX2/FMA variant
// are provided; the variant is picked once at startup from CPUID unless
// FRAMELIFT_ISA=scalar is set in the environment.
namespace framelift::simd {

enum class Isa { scalar, avx2 };

using JetMulKernel = void (*)(const double* f, const double* g, double* out, int order);

void jet_mul_scalar(const double* f, const double* g, double* out, int order);
#if defined(FRAMELIFT_HAVE_AVX2_KERNEL)
void jet_mul_avx2(const double* f, const double* g, double* out, int order);
#endif

bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
// Throws framelift::InvalidArgument when the host cannot run `isa`.
void set_active_isa(Isa isa);
JetMulKernel jet_mul_kernel() noexcept;
std::string_view isa_name(Isa isa) noexcept;

}  // namespace framelift::simd
