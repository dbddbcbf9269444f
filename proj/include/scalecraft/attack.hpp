#pragma once

#include "scalecraft/image.hpp"
#include "scalecraft/kernels.hpp"

namespace scalecraft {

enum class CraftMode { ExactNN, Local, Iterative };

std::string to_string(CraftMode m);

struct AttackSpec {
    Image source;             // camouflage image, operator input dims
    Image target;             // desired scaled output, operator output dims
    ScalingOperator op;
    CraftMode mode = CraftMode::ExactNN;
    int out_tolerance = 1;    // intensity levels
    int max_iters = 500;      // Iterative mode only
};

struct CraftResult {
    Image crafted;
    int out_linf = 0;               // linf_diff(apply(op, crafted), target)
    double source_psnr = 0.0;       // +inf when crafted == source
    double modified_fraction = 0.0; // pixel positions differing from source
    int iterations_used = 0;
};

// Overwrites exactly the sampled source pixel of each output pixel with the
// target value; everything else stays camouflage. Requires a Nearest operator.
CraftResult craft_nearest(const AttackSpec& spec);

// Per-output-pixel least-norm adjustment of the support so its weighted sum
// hits the target value, clamped to [0,255]. Requires pairwise-disjoint
// supports; pixels outside every support are untouched.
CraftResult craft_local(const AttackSpec& spec);

// Alternating projection for the general (overlapping-support) case:
// residual distribution over supports, then box clamp. Non-convergence is
// reported through out_linf, not an error.
CraftResult craft_iterative(const AttackSpec& spec);

CraftResult craft(const AttackSpec& spec);

struct VerifyResult {
    bool ok = false;
    int out_linf = 0;
    double out_psnr = 0.0;  // +inf when exact
};

VerifyResult verify(const Image& crafted, const ScalingOperator& op,
                    const Image& target, int tol);

// Normalized histogram distance between an image and its own scaled output.
// 0 for scale-invariant content, near 1 for a strong downscaling attack.
double deceit_score(const Image& crafted, const ScalingOperator& op);

// True when no source index appears in more than one output row on either axis
// (equivalent to pairwise-disjoint 2D supports).
bool supports_disjoint(const ScalingOperator& op);

}  // namespace scalecraft
