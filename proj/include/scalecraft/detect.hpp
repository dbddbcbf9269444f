#pragma once

#include <set>
#include <string>
#include <vector>

#include "scalecraft/image.hpp"
#include "scalecraft/kernels.hpp"

namespace scalecraft {

struct HistogramConfig {
    int bins_per_channel = 32;  // must divide 256
};

// Default verdict threshold on the max per-channel histogram distance.
// Calibrated as the worst calibrate_threshold result over the synthetic
// benign corpus (gradients, blobs, noise) across all three kernels; noise
// under bilinear smoothing dominates at ~0.54. Override with
// calibrate_threshold on a corpus representative of your inputs.
inline constexpr double kDefaultDetectionThreshold = 0.55;
inline constexpr double kThresholdFloor = 0.05;
inline constexpr double kThresholdMargin = 1.2;

enum class Verdict { Benign, Suspicious };

std::string to_string(Verdict v);

struct DetectionReport {
    std::vector<double> hist_distance_per_channel;
    double hist_distance_max = 0.0;
    double robust_residual = 0.0;  // mean |configured output − bicubic output|
    double threshold = kDefaultDetectionThreshold;
    Verdict verdict = Verdict::Benign;

    std::string to_json() const;
};

struct SizePolicy {
    std::set<std::pair<int, int>> allowed;  // (width, height)

    static SizePolicy exact_match(Dimensions model_dims);
    static SizePolicy allow(std::vector<Dimensions> dims);
};

struct PolicyDecision {
    bool accepted = false;
    std::string reason;
};

using Histogram = std::vector<double>;

// Per-channel normalized histograms; bin b covers [b·(256/bins), (b+1)·(256/bins)).
std::vector<Histogram> color_histogram(const Image& img, const HistogramConfig& cfg);

// Total-variation distance, (1/2)·Σ|h1−h2| ∈ [0,1].
double hist_distance(const Histogram& h1, const Histogram& h2);

DetectionReport detect_scaling_attack(const Image& input, const ScalingOperator& op,
                                      const HistogramConfig& cfg, double threshold);

PolicyDecision enforce_size_policy(const Image& img, const SizePolicy& policy);

// max corpus distance × 1.2, floored at 0.05. Order-independent.
double calibrate_threshold(const std::vector<Image>& benign_corpus,
                           const ScalingOperator& op, const HistogramConfig& cfg);

}  // namespace scalecraft
