#include "wavepot/kernels.hpp"

#include <algorithm>

namespace wavepot::kernels::scalar {

// Fornberg's recursion for weights on arbitrarily spaced nodes, evaluated
// at offset 0. Orders above 2 are never needed by the field module.
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights) {
    constexpr int kOrders = 3;
    for (std::size_t j = 0; j < count; ++j) {
        const double* a = offsets + j * width;
        double c[kMaxStencil][kOrders] = {};
        double c1 = 1.0;
        double c4 = a[0];
        c[0][0] = 1.0;
        for (int i = 1; i < width; ++i) {
            const int mn = std::min(i, kOrders - 1);
            double c2 = 1.0;
            const double c5 = c4;
            c4 = a[i];
            for (int k = 0; k < i; ++k) {
                const double c3 = a[i] - a[k];
                c2 = c2 * c3;
                if (k == i - 1) {
                    for (int m = mn; m >= 1; --m) {
                        const double t1 = static_cast<double>(m) * c[i - 1][m - 1];
                        const double t2 = c5 * c[i - 1][m];
                        c[i][m] = c1 * (t1 - t2) / c2;
                    }
                    c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
                }
                for (int m = mn; m >= 1; --m) {
                    const double t1 = c4 * c[k][m];
                    const double t2 = static_cast<double>(m) * c[k][m - 1];
                    c[k][m] = (t1 - t2) / c3;
                }
                c[k][0] = c4 * c[k][0] / c3;
            }
            c1 = c2;
        }
        for (int m = 0; m < kOrders; ++m)
            for (int i = 0; i < width; ++i)
                weights[(j * kOrders + m) * width + i] = c[i][m];
    }
}

void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out) {
    for (std::size_t j = 0; j < count; ++j) {
        const double* w = weights + (j * 3 + order) * width;
        const double* v = f + start[j];
        double acc = 0.0;
        for (int i = 0; i < width; ++i) acc = acc + w[i] * v[i];
        out[j] = acc;
    }
}

}  // namespace wavepot::kernels::scalar
