#include <atomic>
#include <cstdlib>
#include <string_view>

#include "framelift/error.hpp"
#include "framelift/simd/jet_kernels.hpp"

namespace framelift::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(FRAMELIFT_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

JetMulKernel kernel_for(Isa isa) noexcept {
#if defined(FRAMELIFT_HAVE_AVX2_KERNEL)
  if (isa == Isa::avx2) return &jet_mul_avx2;
#endif
  (void)isa;
  return &jet_mul_scalar;
}

Isa detect() noexcept {
  if (const char* forced = std::getenv("FRAMELIFT_ISA"); forced && std::string_view(forced) == "scalar") {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct State {
  std::atomic<Isa> isa;
  std::atomic<JetMulKernel> kernel;
  State() : isa(detect()), kernel(kernel_for(isa.load())) {}
};

State& state() noexcept {
  static State s;
  return s;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return state().isa.load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) throw InvalidArgument("instruction set not supported on this host: " + std::string(isa_name(isa)));
  state().isa.store(isa, std::memory_order_relaxed);
  state().kernel.store(kernel_for(isa), std::memory_order_relaxed);
}

JetMulKernel jet_mul_kernel() noexcept { return state().kernel.load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace framelift::simd
