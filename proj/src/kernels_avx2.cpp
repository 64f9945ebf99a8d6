// Compiled with -mavx2 and only called after a runtime CPU check.
#include "wavepot/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace wavepot::kernels::avx2 {

namespace {
constexpr int kLanes = 4;
constexpr int kOrders = 3;

inline __m256d lane_load(const double* base, std::size_t stride, int i) {
    return _mm256_set_pd(base[3 * stride + i], base[2 * stride + i],
                         base[stride + i], base[i]);
}
}  // namespace

// Same recursion as the scalar reference, one ray per lane.
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights) {
    const std::size_t full = count - count % kLanes;
    const __m256d sign = _mm256_set1_pd(-0.0);
    for (std::size_t j = 0; j < full; j += kLanes) {
        const double* a = offsets + j * width;
        __m256d c[kMaxStencil][kOrders];
        for (int i = 0; i < width; ++i)
            for (int m = 0; m < kOrders; ++m) c[i][m] = _mm256_setzero_pd();
        __m256d ai[kMaxStencil];
        for (int i = 0; i < width; ++i) ai[i] = lane_load(a, width, i);

        __m256d c1 = _mm256_set1_pd(1.0);
        __m256d c4 = ai[0];
        c[0][0] = _mm256_set1_pd(1.0);
        for (int i = 1; i < width; ++i) {
            const int mn = std::min(i, kOrders - 1);
            __m256d c2 = _mm256_set1_pd(1.0);
            const __m256d c5 = c4;
            c4 = ai[i];
            for (int k = 0; k < i; ++k) {
                const __m256d c3 = _mm256_sub_pd(ai[i], ai[k]);
                c2 = _mm256_mul_pd(c2, c3);
                if (k == i - 1) {
                    for (int m = mn; m >= 1; --m) {
                        const __m256d mm = _mm256_set1_pd(static_cast<double>(m));
                        const __m256d t1 = _mm256_mul_pd(mm, c[i - 1][m - 1]);
                        const __m256d t2 = _mm256_mul_pd(c5, c[i - 1][m]);
                        c[i][m] = _mm256_div_pd(
                            _mm256_mul_pd(c1, _mm256_sub_pd(t1, t2)), c2);
                    }
                    const __m256d nc1 = _mm256_xor_pd(c1, sign);
                    c[i][0] = _mm256_div_pd(
                        _mm256_mul_pd(_mm256_mul_pd(nc1, c5), c[i - 1][0]), c2);
                }
                for (int m = mn; m >= 1; --m) {
                    const __m256d mm = _mm256_set1_pd(static_cast<double>(m));
                    const __m256d t1 = _mm256_mul_pd(c4, c[k][m]);
                    const __m256d t2 = _mm256_mul_pd(mm, c[k][m - 1]);
                    c[k][m] = _mm256_div_pd(_mm256_sub_pd(t1, t2), c3);
                }
                c[k][0] = _mm256_div_pd(_mm256_mul_pd(c4, c[k][0]), c3);
            }
            c1 = c2;
        }
        alignas(32) double lanes[kLanes];
        for (int m = 0; m < kOrders; ++m)
            for (int i = 0; i < width; ++i) {
                _mm256_store_pd(lanes, c[i][m]);
                for (int l = 0; l < kLanes; ++l)
                    weights[((j + l) * kOrders + m) * width + i] = lanes[l];
            }
    }
    if (full < count)
        scalar::fornberg_weights(offsets + full * width, count - full, width,
                                 weights + full * kOrders * width);
}

void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out) {
    const std::size_t full = count - count % kLanes;
    const std::size_t stride = static_cast<std::size_t>(kOrders) * width;
    for (std::size_t j = 0; j < full; j += kLanes) {
        const double* w = weights + (j * kOrders + order) * width;
        __m256d acc = _mm256_setzero_pd();
        for (int i = 0; i < width; ++i) {
            const __m256d wi = lane_load(w, stride, i);
            const __m256d vi = _mm256_set_pd(f[start[j + 3] + i], f[start[j + 2] + i],
                                             f[start[j + 1] + i], f[start[j] + i]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(wi, vi));
        }
        _mm256_storeu_pd(out + j, acc);
    }
    if (full < count)
        scalar::apply_stencil(weights + full * stride, start + full, count - full,
                              width, order, f, out + full);
}

}  // namespace wavepot::kernels::avx2
