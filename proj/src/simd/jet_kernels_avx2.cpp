#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <array>

#include "framelift/jet.hpp"
#include "framelift/simd/jet_kernels.hpp"

namespace framelift::simd {
namespace {

constexpr int kS = Jet::kStride;
constexpr int kN = Jet::kStorage;
// Largest shift is (kMaxOrder, kMaxOrder) -> 4 * 9 + 4, plus one full operand.
constexpr int kAcc = 4 * kS + 4 + kN;

struct Masks {
  alignas(32) double m[Jet::kMaxOrder + 1][kN];
};

constexpr Masks make_masks() {
  Masks masks{};
  for (int n = 0; n <= Jet::kMaxOrder; ++n) {
    for (int a = 0; a < Jet::kRows; ++a) {
      for (int b = 0; b < kS; ++b) masks.m[n][a * kS + b] = (a + b <= n && b <= Jet::kMaxOrder) ? 1.0 : 0.0;
    }
  }
  return masks;
}

constexpr Masks kMasks = make_masks();

}  // namespace

// Each nonzero f(i, j) scales the whole of g, shifted by i * kStride + j, into
// an accumulator. The stride leaves room for the column carry so no product
// lands in the wrong row; entries past the truncation order are masked off.
void jet_mul_avx2(const double* f, const double* g, double* out, int order) {
  alignas(32) double acc[kAcc + 4] = {};
  for (int i = 0; i <= order; ++i) {
    for (int j = 0; i + j <= order; ++j) {
      const double fij = f[i * kS + j];
      if (fij == 0.0) continue;
      const __m256d scale = _mm256_set1_pd(fij);
      double* dst = acc + i * kS + j;
      // g is zero outside the (order - i - j) triangle, so only its leading
      // rows contribute; kStorage is a multiple of four.
      const int span = (order - i + 1) * kS;
      for (int k = 0; k < span; k += 4) {
        const __m256d gv = _mm256_loadu_pd(g + k);
        const __m256d dv = _mm256_loadu_pd(dst + k);
        _mm256_storeu_pd(dst + k, _mm256_fmadd_pd(scale, gv, dv));
      }
    }
  }
  const double* mask = kMasks.m[order];
  for (int k = 0; k < kN; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(acc + k), _mm256_load_pd(mask + k)));
  }
}

}  // namespace framelift::simd

#endif
