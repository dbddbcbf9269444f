#pragma once

// Serial reference implementations, kept independent of the library's
// separable path. These recompute the coordinate mapping and kernel weights
// from scratch and evaluate every output pixel directly.

#include <random>
#include <vector>

#include "scalecraft/image.hpp"
#include "scalecraft/kernels.hpp"

namespace scalecraft::reference {

// Direct per-output-pixel interpolation, no separable factorization.
FloatPlanes scale_naive(const FloatPlanes& in, Dimensions out, KernelKind kind,
                        SamplingConvention conv, double bicubic_a = -0.5);

double mse_naive(const Image& a, const Image& b);
int linf_naive(const Image& a, const Image& b);

Image random_image(std::mt19937& rng, Dimensions dims, int channels);

// Synthetic benign corpus: linear gradients, Gaussian blobs, uniform noise.
std::vector<Image> benign_corpus(std::mt19937& rng, Dimensions dims, int channels,
                                 int count);

Image checkerboard(Dimensions dims, int channels, int cell, std::uint8_t lo = 0,
                   std::uint8_t hi = 255);

}  // namespace scalecraft::reference
