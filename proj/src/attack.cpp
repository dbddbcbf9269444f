#include "scalecraft/attack.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "scalecraft/detect.hpp"

namespace scalecraft {

std::string to_string(CraftMode m) {
    switch (m) {
        case CraftMode::ExactNN: return "exact-nn";
        case CraftMode::Local: return "local";
        case CraftMode::Iterative: return "iterative";
    }
    return "?";
}

namespace {

void validate_spec(const AttackSpec& spec) {
    if (spec.source.channels != spec.target.channels)
        throw std::invalid_argument("source/target channel counts differ");
    if (spec.source.dims != spec.op.in_dims())
        throw std::invalid_argument("source dims do not match operator input");
    if (spec.target.dims != spec.op.out_dims())
        throw std::invalid_argument("target dims do not match operator output");
    if (spec.out_tolerance < 0)
        throw std::invalid_argument("out_tolerance must be nonnegative");
}

double modified_fraction(const Image& crafted, const Image& source) {
    const int w = source.dims.width, h = source.dims.height, ch = source.channels;
    std::size_t modified = 0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int k = 0; k < ch; ++k)
                if (crafted.at(r, c, k) != source.at(r, c, k)) {
                    ++modified;
                    break;
                }
    return static_cast<double>(modified) / (static_cast<double>(w) * h);
}

CraftResult finalize(Image crafted, const AttackSpec& spec, int iterations) {
    CraftResult res;
    res.out_linf = linf_diff(apply(spec.op, crafted), spec.target);
    const auto p = psnr(crafted, spec.source);
    res.source_psnr = p ? *p : std::numeric_limits<double>::infinity();
    res.modified_fraction = modified_fraction(crafted, spec.source);
    res.iterations_used = iterations;
    res.crafted = std::move(crafted);
    return res;
}

// Least-norm correction of one output value's support under the box, active-set
// style: saturated pixels leave the free set and the residual is redistributed.
void solve_support(std::vector<double*> vals, const std::vector<double>& weights,
                   double target) {
    const std::size_t n = vals.size();
    std::vector<bool> free_px(n, true);
    for (std::size_t pass = 0; pass <= n + 1; ++pass) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += weights[k] * *vals[k];
        const double r = target - sum;
        if (std::fabs(r) < 1e-9) return;
        double denom = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (free_px[k]) denom += weights[k] * weights[k];
        if (denom == 0.0) return;  // fully saturated, best effort
        bool clamped = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!free_px[k]) continue;
            double v = *vals[k] + r * weights[k] / denom;
            if (v < 0.0) { v = 0.0; free_px[k] = false; clamped = true; }
            if (v > 255.0) { v = 255.0; free_px[k] = false; clamped = true; }
            *vals[k] = v;
        }
        if (!clamped) return;
    }
}

}  // namespace

bool supports_disjoint(const ScalingOperator& op) {
    for (const CoefficientMatrix* axis : {&op.rows, &op.cols}) {
        std::vector<int> owner(axis->in_len, -1);
        for (int i = 0; i < axis->out_len; ++i)
            for (const Tap& t : axis->rows[i]) {
                if (owner[t.src] >= 0 && owner[t.src] != i) return false;
                owner[t.src] = i;
            }
    }
    return true;
}

CraftResult craft_nearest(const AttackSpec& spec) {
    validate_spec(spec);
    if (spec.op.kind != KernelKind::Nearest)
        throw std::invalid_argument("craft_nearest requires a nearest-neighbor operator");

    Image crafted = spec.source;
    const Dimensions out = spec.op.out_dims();
    for (int r = 0; r < out.height; ++r) {
        const int sr = spec.op.rows.rows[r][0].src;
        for (int c = 0; c < out.width; ++c) {
            const int sc = spec.op.cols.rows[c][0].src;
            for (int k = 0; k < spec.source.channels; ++k)
                crafted.at(sr, sc, k) = spec.target.at(r, c, k);
        }
    }
    return finalize(std::move(crafted), spec, 0);
}

CraftResult craft_local(const AttackSpec& spec) {
    validate_spec(spec);
    if (spec.op.kind == KernelKind::Nearest)
        throw std::invalid_argument("craft_local expects bilinear or bicubic; use craft_nearest");
    if (!supports_disjoint(spec.op))
        throw std::invalid_argument("overlapping supports; use craft_iterative");

    FloatPlanes planes = to_float(spec.source);
    const Dimensions out = spec.op.out_dims();
    const int in_w = spec.source.dims.width;

    for (int ch = 0; ch < spec.source.channels; ++ch) {
        std::vector<double>& plane = planes.planes[ch];
#pragma omp parallel for collapse(2) schedule(static)
        for (int r = 0; r < out.height; ++r) {
            for (int c = 0; c < out.width; ++c) {
                std::vector<double*> vals;
                std::vector<double> weights;
                for (const Tap& rt : spec.op.rows.rows[r])
                    for (const Tap& ct : spec.op.cols.rows[c]) {
                        vals.push_back(&plane[static_cast<std::size_t>(rt.src) * in_w + ct.src]);
                        weights.push_back(rt.weight * ct.weight);
                    }
                solve_support(std::move(vals), weights,
                              static_cast<double>(spec.target.at(r, c, ch)));
            }
        }
    }
    return finalize(from_float(planes), spec, 0);
}

CraftResult craft_iterative(const AttackSpec& spec) {
    validate_spec(spec);

    const Dimensions out = spec.op.out_dims();
    const int in_w = spec.source.dims.width;
    const double stop = spec.out_tolerance > 0 ? spec.out_tolerance - 0.5 : 1e-6;

    // flattened support lists, shared across channels
    struct Sup {
        std::vector<std::size_t> idx;
        std::vector<double> w;
        double denom = 0.0;
    };
    std::vector<Sup> sups(static_cast<std::size_t>(out.height) * out.width);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            Sup& s = sups[static_cast<std::size_t>(r) * out.width + c];
            for (const Tap& rt : spec.op.rows.rows[r])
                for (const Tap& ct : spec.op.cols.rows[c]) {
                    s.idx.push_back(static_cast<std::size_t>(rt.src) * in_w + ct.src);
                    const double w = rt.weight * ct.weight;
                    s.w.push_back(w);
                    s.denom += w * w;
                }
        }

    FloatPlanes planes = to_float(spec.source);
    const FloatPlanes target = to_float(spec.target);

    auto residual_linf = [&]() {
        const FloatPlanes y = apply_float(spec.op, planes);
        double m = 0.0;
        for (int ch = 0; ch < planes.channels; ++ch)
            for (std::size_t i = 0; i < y.planes[ch].size(); ++i)
                m = std::max(m, std::fabs(target.planes[ch][i] - y.planes[ch][i]));
        return m;
    };

    int iterations = 0;
    if (residual_linf() > stop) {
        for (; iterations < spec.max_iters; ) {
            // Gauss-Seidel sweep in fixed order; deterministic by construction
            for (int ch = 0; ch < planes.channels; ++ch) {
                std::vector<double>& plane = planes.planes[ch];
                for (std::size_t o = 0; o < sups.size(); ++o) {
                    const Sup& s = sups[o];
                    double sum = 0.0;
                    for (std::size_t k = 0; k < s.idx.size(); ++k)
                        sum += s.w[k] * plane[s.idx[k]];
                    const double r = target.planes[ch][o] - sum;
                    if (std::fabs(r) < 1e-12 || s.denom == 0.0) continue;
                    for (std::size_t k = 0; k < s.idx.size(); ++k) {
                        double v = plane[s.idx[k]] + r * s.w[k] / s.denom;
                        plane[s.idx[k]] = std::clamp(v, 0.0, 255.0);
                    }
                }
            }
            ++iterations;
            if (residual_linf() <= stop) break;
        }
    }
    return finalize(from_float(planes), spec, iterations);
}

CraftResult craft(const AttackSpec& spec) {
    switch (spec.mode) {
        case CraftMode::ExactNN: return craft_nearest(spec);
        case CraftMode::Local: return craft_local(spec);
        case CraftMode::Iterative: return craft_iterative(spec);
    }
    throw std::logic_error("unknown craft mode");
}

VerifyResult verify(const Image& crafted, const ScalingOperator& op,
                    const Image& target, int tol) {
    const Image scaled = apply(op, crafted);
    VerifyResult res;
    res.out_linf = linf_diff(scaled, target);
    res.ok = res.out_linf <= tol;
    const auto p = psnr(scaled, target);
    res.out_psnr = p ? *p : std::numeric_limits<double>::infinity();
    return res;
}

double deceit_score(const Image& crafted, const ScalingOperator& op) {
    const Image scaled = apply(op, crafted);
    const HistogramConfig cfg;
    const auto h1 = color_histogram(crafted, cfg);
    const auto h2 = color_histogram(scaled, cfg);
    double m = 0.0;
    for (int c = 0; c < crafted.channels; ++c)
        m = std::max(m, hist_distance(h1[c], h2[c]));
    return m;
}

}  // namespace scalecraft
