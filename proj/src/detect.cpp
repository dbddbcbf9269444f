#include "scalecraft/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace scalecraft {

std::string to_string(Verdict v) {
    return v == Verdict::Benign ? "BENIGN" : "SUSPICIOUS";
}

std::string DetectionReport::to_json() const {
    nlohmann::json j;
    j["hist_distance_per_channel"] = hist_distance_per_channel;
    j["hist_distance_max"] = hist_distance_max;
    j["robust_residual"] = robust_residual;
    j["threshold"] = threshold;
    j["verdict"] = to_string(verdict);
    return j.dump(2);
}

SizePolicy SizePolicy::exact_match(Dimensions model_dims) {
    SizePolicy p;
    p.allowed.insert({model_dims.width, model_dims.height});
    return p;
}

SizePolicy SizePolicy::allow(std::vector<Dimensions> dims) {
    if (dims.empty()) throw std::invalid_argument("size policy must allow at least one size");
    SizePolicy p;
    for (const Dimensions& d : dims) p.allowed.insert({d.width, d.height});
    return p;
}

std::vector<Histogram> color_histogram(const Image& img, const HistogramConfig& cfg) {
    if (cfg.bins_per_channel < 2 || cfg.bins_per_channel > 256 ||
        256 % cfg.bins_per_channel != 0)
        throw std::invalid_argument("bins_per_channel must divide 256 and lie in [2,256]");
    const int shift = 256 / cfg.bins_per_channel;
    std::vector<Histogram> hists(img.channels, Histogram(cfg.bins_per_channel, 0.0));
    const std::size_t n = static_cast<std::size_t>(img.dims.width) * img.dims.height;
    for (int c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < n; ++i)
            hists[c][img.pixels[i * img.channels + c] / shift] += 1.0;
        for (double& b : hists[c]) b /= static_cast<double>(n);
    }
    return hists;
}

double hist_distance(const Histogram& h1, const Histogram& h2) {
    if (h1.size() != h2.size()) throw std::invalid_argument("histogram bin counts differ");
    double s = 0.0;
    for (std::size_t i = 0; i < h1.size(); ++i) s += std::fabs(h1[i] - h2[i]);
    return 0.5 * s;
}

namespace {

double max_channel_distance(const Image& a, const Image& b, const HistogramConfig& cfg) {
    const auto ha = color_histogram(a, cfg);
    const auto hb = color_histogram(b, cfg);
    double m = 0.0;
    for (std::size_t c = 0; c < ha.size(); ++c) m = std::max(m, hist_distance(ha[c], hb[c]));
    return m;
}

}  // namespace

DetectionReport detect_scaling_attack(const Image& input, const ScalingOperator& op,
                                      const HistogramConfig& cfg, double threshold) {
    if (input.dims != op.in_dims())
        throw std::invalid_argument("input dims do not match operator");

    const Image scaled = apply(op, input);

    DetectionReport report;
    report.threshold = threshold;
    const auto hin = color_histogram(input, cfg);
    const auto hout = color_histogram(scaled, cfg);
    for (int c = 0; c < input.channels; ++c) {
        const double d = hist_distance(hin[c], hout[c]);
        report.hist_distance_per_channel.push_back(d);
        report.hist_distance_max = std::max(report.hist_distance_max, d);
    }

    // robust-scaling cross-check: compare against a bicubic reference output
    const ScalingOperator robust =
        build_operator(op.in_dims(), op.out_dims(), KernelKind::Bicubic, op.convention);
    const Image robust_out = apply(robust, input);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < scaled.pixels.size(); ++i)
        abs_sum += std::fabs(static_cast<double>(scaled.pixels[i]) -
                             static_cast<double>(robust_out.pixels[i]));
    report.robust_residual = abs_sum / static_cast<double>(scaled.pixels.size());

    report.verdict =
        report.hist_distance_max > threshold ? Verdict::Suspicious : Verdict::Benign;
    return report;
}

PolicyDecision enforce_size_policy(const Image& img, const SizePolicy& policy) {
    if (policy.allowed.empty())
        throw std::invalid_argument("size policy must allow at least one size");
    if (policy.allowed.count({img.dims.width, img.dims.height}))
        return {true, ""};
    return {false, "input size " + std::to_string(img.dims.width) + "x" +
                       std::to_string(img.dims.height) + " not in allowed set"};
}

double calibrate_threshold(const std::vector<Image>& benign_corpus,
                           const ScalingOperator& op, const HistogramConfig& cfg) {
    if (benign_corpus.empty()) throw std::invalid_argument("calibration corpus is empty");
    double worst = 0.0;
    for (const Image& img : benign_corpus)
        worst = std::max(worst, max_channel_distance(img, apply(op, img), cfg));
    return std::max(worst * kThresholdMargin, kThresholdFloor);
}

}  // namespace scalecraft
