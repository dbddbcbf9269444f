#pragma once

#include <string>
#include <vector>

#include "scalecraft/kernels.hpp"

namespace scalecraft {

// Preset binding a framework/library pair to its default kernel kind. Presets
// pick the kernel family only; bit-exact parity with the named library's
// resize is out of scope, and the sampling convention stays user-selectable.
struct FrameworkProfile {
    std::string name;
    KernelKind kind = KernelKind::Bilinear;
    SamplingConvention convention = SamplingConvention::HalfPixel;
    std::string note;
};

const std::vector<FrameworkProfile>& framework_profiles();

// Throws with the list of available names on an unknown profile.
FrameworkProfile resolve_profile(const std::string& name);

}  // namespace scalecraft
