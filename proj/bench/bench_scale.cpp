// Compares the OpenMP separable operator path against the serial naive
// reference on the 224x672 -> 224x224 workload.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reference.hpp"
#include "scalecraft/kernels.hpp"

using namespace scalecraft;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    const Dimensions in{672, 224}, out{224, 224};
    std::mt19937 rng(7);
    const FloatPlanes img = to_float(reference::random_image(rng, in, 3));

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled\n");
#endif
    std::printf("%-10s %14s %14s %8s\n", "kernel", "separable (ms)", "naive (ms)", "speedup");

    for (KernelKind kind : {KernelKind::Nearest, KernelKind::Bilinear, KernelKind::Bicubic}) {
        const auto op = build_operator(in, out, kind, SamplingConvention::HalfPixel);
        volatile double sink = 0.0;
        const double sep = time_best_of(5, [&] {
            const FloatPlanes y = apply_float(op, img);
            sink = sink + y.planes[0][0];
        });
        const double naive = time_best_of(3, [&] {
            const FloatPlanes y = reference::scale_naive(img, out, kind,
                                                         SamplingConvention::HalfPixel);
            sink = sink + y.planes[0][0];
        });
        std::printf("%-10s %14.3f %14.3f %7.1fx\n", to_string(kind).c_str(), sep * 1e3,
                    naive * 1e3, naive / sep);
    }
    return 0;
}
