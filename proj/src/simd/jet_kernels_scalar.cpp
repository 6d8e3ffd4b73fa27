#include "framelift/jet.hpp"
#include "framelift/simd/jet_kernels.hpp"

namespace framelift::simd {

void jet_mul_scalar(const double* f, const double* g, double* out, int order) {
  constexpr int s = Jet::kStride;
  for (int k = 0; k < Jet::kStorage; ++k) out[k] = 0.0;
  for (int a = 0; a <= order; ++a) {
    for (int b = 0; a + b <= order; ++b) {
      double acc = 0.0;
      for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) acc += f[i * s + j] * g[(a - i) * s + (b - j)];
      }
      out[a * s + b] = acc;
    }
  }
}

}  // namespace framelift::simd
