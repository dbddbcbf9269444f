#pragma once

#include <string>
#include <vector>

#include "scalecraft/image.hpp"

namespace scalecraft {

enum class KernelKind { Nearest, Bilinear, Bicubic };

enum class SamplingConvention { HalfPixel, CornerAligned };

std::string to_string(KernelKind k);
std::string to_string(SamplingConvention c);

struct Tap {
    int src = 0;
    double weight = 0.0;
};

// One sparse row per output index; weights in each row sum to 1.
struct CoefficientMatrix {
    int out_len = 0;
    int in_len = 0;
    std::vector<std::vector<Tap>> rows;
};

// Separable realization of the downscaling map: per channel,
// output = rows · plane · colsᵀ.
struct ScalingOperator {
    KernelKind kind = KernelKind::Bilinear;
    double bicubic_a = -0.5;
    SamplingConvention convention = SamplingConvention::HalfPixel;
    CoefficientMatrix rows;  // height axis, out_h × in_h
    CoefficientMatrix cols;  // width axis,  out_w × in_w

    Dimensions in_dims() const { return {cols.in_len, rows.in_len}; }
    Dimensions out_dims() const { return {cols.out_len, rows.out_len}; }
};

// HalfPixel maps output index i to source coordinate (i+0.5)·in/out − 0.5;
// CornerAligned uses i·(in−1)/(out−1). Zero-weight taps are dropped, border
// taps are clamped in range with weights merged and re-normalized.
CoefficientMatrix build_axis(int in_len, int out_len, KernelKind kind,
                             SamplingConvention conv, double bicubic_a = -0.5);

ScalingOperator build_operator(Dimensions in, Dimensions out, KernelKind kind,
                               SamplingConvention conv, double bicubic_a = -0.5);

FloatPlanes apply_float(const ScalingOperator& op, const FloatPlanes& planes);
Image apply(const ScalingOperator& op, const Image& img);

struct SupportEntry {
    int src_row = 0;
    int src_col = 0;
    double weight = 0.0;
};

// Source pixels with nonzero weight for one output pixel; weights sum to 1.
std::vector<SupportEntry> support(const ScalingOperator& op, int out_row, int out_col);

struct CoverageStats {
    double influenced_fraction = 0.0;
    double camouflage_fraction = 0.0;
    // per source pixel, max |row weight · col weight| over all output pixels
    std::vector<double> max_abs_weight_map;  // in_h × in_w, row-major
};

CoverageStats coverage_stats(const ScalingOperator& op);

// CSV dump, columns: axis,out_index,src_index,weight
std::string dump_coefficients_csv(const ScalingOperator& op);

}  // namespace scalecraft
