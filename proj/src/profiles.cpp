#include "scalecraft/profiles.hpp"

#include <stdexcept>

namespace scalecraft {

const std::vector<FrameworkProfile>& framework_profiles() {
    static const std::vector<FrameworkProfile> table = {
        {"caffe-opencv", KernelKind::Bilinear, SamplingConvention::HalfPixel,
         "Caffe with OpenCV preprocessing; kernel family only, not bit-exact cv::resize"},
        {"tensorflow-python-opencv", KernelKind::Bilinear, SamplingConvention::HalfPixel,
         "TensorFlow pipelines using python-opencv; kernel family only"},
        {"tensorflow-pillow", KernelKind::Nearest, SamplingConvention::HalfPixel,
         "TensorFlow pipelines using Pillow; kernel family only"},
        {"tensorflow-tf.image", KernelKind::Bilinear, SamplingConvention::HalfPixel,
         "tf.image.resize default; kernel family only"},
        {"torch-torch-opencv", KernelKind::Bilinear, SamplingConvention::HalfPixel,
         "Torch with torch-opencv; kernel family only"},
        {"torch-lua-image", KernelKind::Bilinear, SamplingConvention::HalfPixel,
         "Torch with lua image package; kernel family only"},
    };
    return table;
}

FrameworkProfile resolve_profile(const std::string& name) {
    for (const FrameworkProfile& p : framework_profiles())
        if (p.name == name) return p;
    std::string msg = "unknown profile '" + name + "'; available:";
    for (const FrameworkProfile& p : framework_profiles()) msg += " " + p.name;
    throw std::invalid_argument(msg);
}

}  // namespace scalecraft
