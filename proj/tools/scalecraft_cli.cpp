#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "scalecraft/attack.hpp"
#include "scalecraft/detect.hpp"
#include "scalecraft/image.hpp"
#include "scalecraft/kernels.hpp"
#include "scalecraft/profiles.hpp"

namespace {

using namespace scalecraft;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCraftMiss = 3;
constexpr int kExitSuspicious = 4;
constexpr int kExitPolicyReject = 5;

KernelKind parse_kernel(const std::string& s) {
    if (s == "nearest") return KernelKind::Nearest;
    if (s == "bilinear") return KernelKind::Bilinear;
    if (s == "bicubic") return KernelKind::Bicubic;
    throw CLI::ValidationError("--kernel must be nearest, bilinear or bicubic");
}

SamplingConvention parse_convention(const std::string& s) {
    if (s == "half-pixel") return SamplingConvention::HalfPixel;
    if (s == "corner-aligned") return SamplingConvention::CornerAligned;
    throw CLI::ValidationError("--convention must be half-pixel or corner-aligned");
}

struct KernelChoice {
    std::string kernel = "bilinear";
    std::string convention = "half-pixel";
    std::string profile;

    // --profile overrides --kernel; convention stays an explicit choice
    std::pair<KernelKind, SamplingConvention> resolve() const {
        if (!profile.empty()) {
            const FrameworkProfile p = resolve_profile(profile);
            return {p.kind, parse_convention(convention)};
        }
        return {parse_kernel(kernel), parse_convention(convention)};
    }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel, "Kernel: nearest, bilinear, bicubic");
        cmd->add_option("--convention", convention,
                        "Sampling convention: half-pixel, corner-aligned");
        cmd->add_option("--profile", profile,
                        "Framework profile (see 'profiles list'); overrides --kernel");
    }
};

nlohmann::json craft_result_json(const CraftResult& res, const VerifyResult& ver, int tol) {
    nlohmann::json j;
    j["out_linf"] = res.out_linf;
    j["source_psnr"] =
        std::isinf(res.source_psnr) ? nlohmann::json(nullptr) : nlohmann::json(res.source_psnr);
    j["modified_fraction"] = res.modified_fraction;
    j["iterations_used"] = res.iterations_used;
    j["tolerance"] = tol;
    j["verified"] = ver.ok;
    return j;
}

int run_scale(const std::string& in_path, const std::string& out_path, int width, int height,
              const KernelChoice& choice) {
    const Image input = load_image(in_path);
    if (width > input.dims.width || height > input.dims.height) {
        std::cerr << "error: target dimensions exceed input (downscale only)\n";
        return kExitValidation;
    }
    const auto [kind, conv] = choice.resolve();
    const ScalingOperator op = build_operator(input.dims, {width, height}, kind, conv);
    save_image(apply(op, input), out_path);
    std::cout << "scaled " << input.dims.width << "x" << input.dims.height << " -> " << width
              << "x" << height << " using " << to_string(kind) << " (" << to_string(conv)
              << ")\n";
    return kExitOk;
}

int run_craft(const std::string& source_path, const std::string& target_path,
              const std::string& out_path, const std::string& mode_str, int tolerance,
              int max_iters, const KernelChoice& choice, const std::string& report_path) {
    AttackSpec spec;
    if (mode_str == "exact-nn") spec.mode = CraftMode::ExactNN;
    else if (mode_str == "local") spec.mode = CraftMode::Local;
    else if (mode_str == "iterative") spec.mode = CraftMode::Iterative;
    else throw CLI::ValidationError("--mode must be exact-nn, local or iterative");
    spec.source = load_image(source_path);
    spec.target = load_image(target_path);
    spec.out_tolerance = tolerance;
    spec.max_iters = max_iters;

    const auto [kind, conv] = choice.resolve();
    spec.op = build_operator(spec.source.dims, spec.target.dims, kind, conv);

    const CraftResult res = craft(spec);
    save_image(res.crafted, out_path);
    const VerifyResult ver = verify(res.crafted, spec.op, spec.target, tolerance);

    if (!report_path.empty()) {
        std::ofstream rep(report_path);
        if (!rep) {
            std::cerr << "error: cannot write report " << report_path << "\n";
            return kExitIo;
        }
        rep << craft_result_json(res, ver, tolerance).dump(2) << "\n";
    }
    std::cout << "crafted " << out_path << ": out_linf=" << res.out_linf
              << " modified_fraction=" << res.modified_fraction
              << " iterations=" << res.iterations_used
              << (ver.ok ? " (verified)" : " (missed tolerance)") << "\n";
    return ver.ok ? kExitOk : kExitCraftMiss;
}

int run_detect(const std::string& in_path, int model_width, int model_height,
               const KernelChoice& choice, double threshold, const std::string& policy) {
    const Image input = load_image(in_path);

    if (policy == "exact") {
        const auto decision =
            enforce_size_policy(input, SizePolicy::exact_match({model_width, model_height}));
        if (!decision.accepted) {
            std::cerr << "rejected by size policy: " << decision.reason << "\n";
            return kExitPolicyReject;
        }
    } else if (!policy.empty() && policy != "none") {
        throw CLI::ValidationError("--policy must be none or exact");
    }

    if (model_width > input.dims.width || model_height > input.dims.height) {
        std::cerr << "error: model dimensions exceed input (downscale only)\n";
        return kExitValidation;
    }
    const auto [kind, conv] = choice.resolve();
    const ScalingOperator op =
        build_operator(input.dims, {model_width, model_height}, kind, conv);
    const DetectionReport report =
        detect_scaling_attack(input, op, HistogramConfig{}, threshold);
    std::cout << report.to_json() << "\n";
    return report.verdict == Verdict::Suspicious ? kExitSuspicious : kExitOk;
}

int run_inspect(int in_width, int in_height, int out_width, int out_height,
                const KernelChoice& choice) {
    const auto [kind, conv] = choice.resolve();
    const ScalingOperator op =
        build_operator({in_width, in_height}, {out_width, out_height}, kind, conv);
    std::cout << dump_coefficients_csv(op);
    const CoverageStats st = coverage_stats(op);
    std::cout << "# influenced_fraction=" << st.influenced_fraction
              << " camouflage_fraction=" << st.camouflage_fraction << "\n";
    return kExitOk;
}

int run_profiles_list() {
    for (const FrameworkProfile& p : framework_profiles())
        std::cout << p.name << "\t" << to_string(p.kind) << "\t" << to_string(p.convention)
                  << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downscaling-attack crafting and detection toolkit"};
    app.require_subcommand(1);

    // scale
    auto* scale_cmd = app.add_subcommand("scale", "Downscale an image");
    std::string sc_in, sc_out;
    int sc_w = 0, sc_h = 0;
    KernelChoice sc_choice;
    scale_cmd->add_option("--in", sc_in, "Input image")->required();
    scale_cmd->add_option("--out", sc_out, "Output image")->required();
    scale_cmd->add_option("--width", sc_w, "Output width")->required();
    scale_cmd->add_option("--height", sc_h, "Output height")->required();
    sc_choice.add_flags(scale_cmd);

    // craft
    auto* craft_cmd = app.add_subcommand("craft", "Craft a downscaling-attack image");
    std::string cr_source, cr_target, cr_out, cr_report;
    std::string cr_mode = "exact-nn";
    int cr_tol = 1;
    int cr_max_iters = 500;
    KernelChoice cr_choice;
    cr_choice.kernel = "nearest";
    craft_cmd->add_option("--source", cr_source, "Camouflage source image")->required();
    craft_cmd->add_option("--target", cr_target, "Target image at model size")->required();
    craft_cmd->add_option("--out", cr_out, "Crafted output image")->required();
    craft_cmd->add_option("--mode", cr_mode, "exact-nn, local or iterative");
    craft_cmd->add_option("--tolerance", cr_tol, "Max output intensity error");
    craft_cmd->add_option("--max-iters", cr_max_iters, "Iteration budget (iterative mode)");
    craft_cmd->add_option("--report", cr_report, "Write JSON metrics to this path");
    cr_choice.add_flags(craft_cmd);

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "Detect a downscaling attack");
    std::string dt_in, dt_policy = "none";
    int dt_w = 0, dt_h = 0;
    double dt_threshold = kDefaultDetectionThreshold;
    KernelChoice dt_choice;
    detect_cmd->add_option("--in", dt_in, "Input image")->required();
    detect_cmd->add_option("--model-width", dt_w, "Model input width")->required();
    detect_cmd->add_option("--model-height", dt_h, "Model input height")->required();
    detect_cmd->add_option("--threshold", dt_threshold, "Histogram-distance threshold");
    detect_cmd->add_option("--policy", dt_policy, "Size policy: none or exact");
    dt_choice.add_flags(detect_cmd);

    // inspect
    auto* inspect_cmd = app.add_subcommand("inspect", "Dump operator coefficients as CSV");
    int in_w = 0, in_h = 0, out_w = 0, out_h = 0;
    KernelChoice in_choice;
    inspect_cmd->add_option("--in-width", in_w, "Input width")->required();
    inspect_cmd->add_option("--in-height", in_h, "Input height")->required();
    inspect_cmd->add_option("--out-width", out_w, "Output width")->required();
    inspect_cmd->add_option("--out-height", out_h, "Output height")->required();
    in_choice.add_flags(inspect_cmd);

    // profiles
    auto* profiles_cmd = app.add_subcommand("profiles", "Framework profiles");
    auto* profiles_list = profiles_cmd->add_subcommand("list", "List framework profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (scale_cmd->parsed())
            return run_scale(sc_in, sc_out, sc_w, sc_h, sc_choice);
        if (craft_cmd->parsed())
            return run_craft(cr_source, cr_target, cr_out, cr_mode, cr_tol, cr_max_iters, cr_choice, cr_report);
        if (detect_cmd->parsed())
            return run_detect(dt_in, dt_w, dt_h, dt_choice, dt_threshold, dt_policy);
        if (inspect_cmd->parsed())
            return run_inspect(in_w, in_h, out_w, out_h, in_choice);
        if (profiles_cmd->parsed()) {
            if (profiles_list->parsed()) return run_profiles_list();
            std::cerr << "error: expected 'profiles list'\n";
            return kExitValidation;
        }
    } catch (const ImageIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
