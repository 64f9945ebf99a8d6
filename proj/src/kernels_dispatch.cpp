#include "wavepot/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace wavepot::kernels {

#if !defined(WAVEPOT_HAVE_AVX2)
// Stubs so the symbols exist on targets without an AVX2 build; they are
// unreachable because backend_available(Avx2) is false there.
namespace avx2 {
void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights) {
    scalar::fornberg_weights(offsets, count, width, weights);
}
void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out) {
    scalar::apply_stencil(weights, start, count, width, order, f, out);
}
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(WAVEPOT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect() { return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar; }

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

const char* backend_name(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend backend) {
    return backend == Backend::Scalar || (backend == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() { return current().load(); }

void set_backend(Backend backend) {
    if (!backend_available(backend))
        throw std::invalid_argument(std::string("kernel backend not available: ") +
                                    backend_name(backend));
    current().store(backend);
}

void fornberg_weights(const double* offsets, std::size_t count, int width,
                      double* weights) {
    if (width < 1 || width > kMaxStencil)
        throw std::invalid_argument("stencil width out of range");
    if (active_backend() == Backend::Avx2)
        avx2::fornberg_weights(offsets, count, width, weights);
    else
        scalar::fornberg_weights(offsets, count, width, weights);
}

void apply_stencil(const double* weights, const std::size_t* start,
                   std::size_t count, int width, int order, const double* f,
                   double* out) {
    if (active_backend() == Backend::Avx2)
        avx2::apply_stencil(weights, start, count, width, order, f, out);
    else
        scalar::apply_stencil(weights, start, count, width, order, f, out);
}

}  // namespace wavepot::kernels
