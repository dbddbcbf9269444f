#include "scalecraft/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace scalecraft {

std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Nearest: return "nearest";
        case KernelKind::Bilinear: return "bilinear";
        case KernelKind::Bicubic: return "bicubic";
    }
    return "?";
}

std::string to_string(SamplingConvention c) {
    return c == SamplingConvention::HalfPixel ? "half-pixel" : "corner-aligned";
}

namespace {

double source_coord(int i, int in_len, int out_len, SamplingConvention conv) {
    if (conv == SamplingConvention::HalfPixel)
        return (i + 0.5) * (static_cast<double>(in_len) / out_len) - 0.5;
    if (out_len == 1) return (in_len - 1) / 2.0;
    return static_cast<double>(i) * (in_len - 1) / (out_len - 1);
}

// Keys cubic kernel with free parameter a.
double keys_weight(double x, double a) {
    x = std::fabs(x);
    if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

// Clamp taps in range, merge duplicates, drop zero weights, normalize to sum 1.
std::vector<Tap> finalize_taps(std::vector<Tap> raw, int in_len) {
    std::map<int, double> merged;
    for (const Tap& t : raw) {
        const int idx = std::clamp(t.src, 0, in_len - 1);
        merged[idx] += t.weight;
    }
    double sum = 0.0;
    for (const auto& [idx, w] : merged) sum += w;
    std::vector<Tap> out;
    for (const auto& [idx, w] : merged) {
        const double nw = w / sum;
        if (nw != 0.0) out.push_back({idx, nw});
    }
    return out;
}

}  // namespace

CoefficientMatrix build_axis(int in_len, int out_len, KernelKind kind,
                             SamplingConvention conv, double bicubic_a) {
    if (in_len < 1 || out_len < 1)
        throw std::invalid_argument("axis lengths must be positive");
    if (out_len > in_len)
        throw std::invalid_argument("upscaling not supported (out_len > in_len)");
    if (kind == KernelKind::Bicubic && !(bicubic_a >= -1.0 && bicubic_a < 0.0))
        throw std::invalid_argument("bicubic parameter must be in [-1, 0)");

    CoefficientMatrix m;
    m.in_len = in_len;
    m.out_len = out_len;
    m.rows.resize(out_len);

    for (int i = 0; i < out_len; ++i) {
        const double s = source_coord(i, in_len, out_len, conv);
        std::vector<Tap> raw;
        switch (kind) {
            case KernelKind::Nearest: {
                // round half down: tie at .5 picks the lower index
                const int idx = static_cast<int>(std::ceil(s - 0.5));
                raw.push_back({idx, 1.0});
                break;
            }
            case KernelKind::Bilinear: {
                const int i0 = static_cast<int>(std::floor(s));
                const double frac = s - i0;
                raw.push_back({i0, 1.0 - frac});
                raw.push_back({i0 + 1, frac});
                break;
            }
            case KernelKind::Bicubic: {
                const int i0 = static_cast<int>(std::floor(s));
                for (int t = i0 - 1; t <= i0 + 2; ++t)
                    raw.push_back({t, keys_weight(s - t, bicubic_a)});
                break;
            }
        }
        m.rows[i] = finalize_taps(std::move(raw), in_len);
    }
    return m;
}

ScalingOperator build_operator(Dimensions in, Dimensions out, KernelKind kind,
                               SamplingConvention conv, double bicubic_a) {
    ScalingOperator op;
    op.kind = kind;
    op.convention = conv;
    op.bicubic_a = bicubic_a;
    op.rows = build_axis(in.height, out.height, kind, conv, bicubic_a);
    op.cols = build_axis(in.width, out.width, kind, conv, bicubic_a);
    return op;
}

FloatPlanes apply_float(const ScalingOperator& op, const FloatPlanes& in) {
    if (in.dims != op.in_dims())
        throw std::invalid_argument("image dimensions do not match operator");
    const int out_h = op.rows.out_len;
    const int out_w = op.cols.out_len;
    const int in_w = in.dims.width;
    FloatPlanes out({out_w, out_h}, in.channels);

    for (int c = 0; c < in.channels; ++c) {
        const std::vector<double>& src = in.planes[c];
        std::vector<double>& dst = out.planes[c];
#pragma omp parallel for schedule(static)
        for (int r = 0; r < out_h; ++r) {
            // horizontal pass restricted to the rows this output row reads
            for (int q = 0; q < out_w; ++q) {
                double acc = 0.0;
                for (const Tap& rt : op.rows.rows[r]) {
                    double h = 0.0;
                    const double* row = src.data() + static_cast<std::size_t>(rt.src) * in_w;
                    for (const Tap& ct : op.cols.rows[q]) h += ct.weight * row[ct.src];
                    acc += rt.weight * h;
                }
                dst[static_cast<std::size_t>(r) * out_w + q] = acc;
            }
        }
    }
    return out;
}

Image apply(const ScalingOperator& op, const Image& img) {
    return from_float(apply_float(op, to_float(img)));
}

std::vector<SupportEntry> support(const ScalingOperator& op, int out_row, int out_col) {
    if (out_row < 0 || out_row >= op.rows.out_len || out_col < 0 || out_col >= op.cols.out_len)
        throw std::out_of_range("output index out of range");
    std::vector<SupportEntry> s;
    for (const Tap& rt : op.rows.rows[out_row])
        for (const Tap& ct : op.cols.rows[out_col])
            s.push_back({rt.src, ct.src, rt.weight * ct.weight});
    return s;
}

CoverageStats coverage_stats(const ScalingOperator& op) {
    const int in_h = op.rows.in_len;
    const int in_w = op.cols.in_len;

    // the union of all supports is (influenced rows) × (influenced cols)
    std::vector<double> row_max(in_h, 0.0), col_max(in_w, 0.0);
    for (const auto& taps : op.rows.rows)
        for (const Tap& t : taps)
            row_max[t.src] = std::max(row_max[t.src], std::fabs(t.weight));
    for (const auto& taps : op.cols.rows)
        for (const Tap& t : taps)
            col_max[t.src] = std::max(col_max[t.src], std::fabs(t.weight));

    std::size_t rows_hit = 0, cols_hit = 0;
    for (double w : row_max) rows_hit += (w != 0.0);
    for (double w : col_max) cols_hit += (w != 0.0);

    CoverageStats st;
    st.influenced_fraction = static_cast<double>(rows_hit) * cols_hit /
                             (static_cast<double>(in_h) * in_w);
    st.camouflage_fraction = 1.0 - st.influenced_fraction;
    st.max_abs_weight_map.resize(static_cast<std::size_t>(in_h) * in_w);
    for (int r = 0; r < in_h; ++r)
        for (int c = 0; c < in_w; ++c)
            st.max_abs_weight_map[static_cast<std::size_t>(r) * in_w + c] = row_max[r] * col_max[c];
    return st;
}

std::string dump_coefficients_csv(const ScalingOperator& op) {
    std::ostringstream out;
    out << "axis,out_index,src_index,weight\n";
    out.precision(17);
    for (int i = 0; i < op.rows.out_len; ++i)
        for (const Tap& t : op.rows.rows[i])
            out << "row," << i << "," << t.src << "," << t.weight << "\n";
    for (int i = 0; i < op.cols.out_len; ++i)
        for (const Tap& t : op.cols.rows[i])
            out << "col," << i << "," << t.src << "," << t.weight << "\n";
    return out.str();
}

}  // namespace scalecraft
