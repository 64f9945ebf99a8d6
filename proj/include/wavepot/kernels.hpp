#pragma once

#include <cstddef>

// Hot inner loops of the field evaluation, with a scalar reference
// implementation and vector variants selected at runtime. Every variant
// performs the same floating-point operations in the same order, so the
// results are bit-identical to the scalar reference.
namespace wavepot::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend backend);
bool backend_available(Backend backend);
Backend active_backend();
// Throws std::invalid_argument when the backend is not available.
void set_backend(Backend backend);

// Finite-difference weights for derivative orders 0, 1, 2 at offset 0 from
// `width` node offsets per ray (offsets[j*width + i]). Output layout is
// weights[(j*3 + m)*width + i]. Nodes must be distinct.
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights);

// out[j] = sum_i weights[(j*3 + order)*width + i] * f[start[j] + i].
void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out);

namespace scalar {
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights);
void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out);
}  // namespace scalar

namespace avx2 {
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights);
void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out);
}  // namespace avx2

inline constexpr int kMaxStencil = 15;

}  // namespace wavepot::kernels
