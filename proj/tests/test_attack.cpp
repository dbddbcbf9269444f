#include <doctest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "scalecraft/attack.hpp"

using namespace scalecraft;

namespace {

AttackSpec make_spec(Image source, Image target, KernelKind kind, CraftMode mode) {
    AttackSpec spec;
    spec.op = build_operator(source.dims, target.dims, kind, SamplingConvention::HalfPixel);
    spec.source = std::move(source);
    spec.target = std::move(target);
    spec.mode = mode;
    return spec;
}

}  // namespace

TEST_CASE("craft_nearest overwrites exactly the sampled pixels") {
    std::mt19937 rng(1);
    const Image source = reference::random_image(rng, {4, 4}, 1);
    const Image target = reference::random_image(rng, {2, 2}, 1);
    const auto spec = make_spec(source, target, KernelKind::Nearest, CraftMode::ExactNN);
    const CraftResult res = craft_nearest(spec);

    CHECK(res.out_linf == 0);
    CHECK(apply(spec.op, res.crafted) == target);
    CHECK(res.modified_fraction <= 0.25);

    // non-sampled pixels are untouched camouflage
    const auto st = coverage_stats(spec.op);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (st.max_abs_weight_map[r * 4 + c] == 0.0)
                CHECK(res.crafted.at(r, c, 0) == source.at(r, c, 0));
}

TEST_CASE("craft_nearest is a no-op when the target is the scaled source") {
    std::mt19937 rng(2);
    const Image source = reference::random_image(rng, {8, 6}, 3);
    const auto op = build_operator({8, 6}, {4, 3}, KernelKind::Nearest,
                                    SamplingConvention::HalfPixel);
    auto spec = make_spec(source, apply(op, source), KernelKind::Nearest, CraftMode::ExactNN);
    const CraftResult res = craft_nearest(spec);
    CHECK(res.crafted == source);
    CHECK(res.modified_fraction == 0.0);
    CHECK(std::isinf(res.source_psnr));
}

TEST_CASE("craft_nearest at paper dimensions keeps two thirds of the source") {
    std::mt19937 rng(3);
    const Image source = reference::random_image(rng, {672, 224}, 1);
    const Image target = reference::random_image(rng, {224, 224}, 1);
    const auto spec = make_spec(source, target, KernelKind::Nearest, CraftMode::ExactNN);
    const CraftResult res = craft_nearest(spec);
    CHECK(res.out_linf == 0);
    CHECK(res.modified_fraction <= 1.0 / 3.0 + 1e-12);
}

TEST_CASE("craft_nearest rejects non-nearest operators") {
    std::mt19937 rng(4);
    auto spec = make_spec(reference::random_image(rng, {4, 4}, 1),
                          reference::random_image(rng, {2, 2}, 1), KernelKind::Bilinear,
                          CraftMode::ExactNN);
    CHECK_THROWS_AS(craft_nearest(spec), std::invalid_argument);
}

TEST_CASE("craft_local solves the two-pixel least-norm case analytically") {
    // 2x1 -> 1x1 bilinear: support {0,1} with weights 0.5/0.5
    Image source({2, 1}, 1, 100);
    Image target({1, 1}, 1, 120);
    const auto spec = make_spec(source, target, KernelKind::Bilinear, CraftMode::Local);
    const CraftResult res = craft_local(spec);
    CHECK(res.crafted.at(0, 0, 0) == 120);
    CHECK(res.crafted.at(0, 1, 0) == 120);
    CHECK(res.out_linf == 0);
}

TEST_CASE("craft_local leaves out-of-support pixels bit-identical") {
    std::mt19937 rng(5);
    const Image source = reference::random_image(rng, {12, 8}, 1);
    const Image target = reference::random_image(rng, {4, 2}, 1);
    const auto spec = make_spec(source, target, KernelKind::Bilinear, CraftMode::Local);
    const CraftResult res = craft_local(spec);
    CHECK(res.out_linf <= 1);

    const auto st = coverage_stats(spec.op);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 12; ++c)
            if (st.max_abs_weight_map[r * 12 + c] == 0.0)
                CHECK(res.crafted.at(r, c, 0) == source.at(r, c, 0));
}

TEST_CASE("craft_local matches unchanged pixels when the target is already met") {
    std::mt19937 rng(6);
    const Image source = reference::random_image(rng, {8, 8}, 1);
    const auto op = build_operator({8, 8}, {2, 2}, KernelKind::Bilinear,
                                    SamplingConvention::HalfPixel);
    // target pixel equal to the current weighted average: zero change
    const Image scaled = apply(op, source);
    auto spec = make_spec(source, scaled, KernelKind::Bilinear, CraftMode::Local);
    const CraftResult res = craft_local(spec);
    CHECK(res.out_linf <= 1);
    CHECK(res.modified_fraction <= coverage_stats(op).influenced_fraction + 1e-12);
}

TEST_CASE("craft_local saturated source can still reach a zero target") {
    const Image source({8, 8}, 1, 255);
    const Image target({2, 2}, 1, 0);
    const auto spec = make_spec(source, target, KernelKind::Bilinear, CraftMode::Local);
    const CraftResult res = craft_local(spec);
    CHECK(res.out_linf <= 1);
}

TEST_CASE("craft_local refuses overlapping supports") {
    std::mt19937 rng(7);
    // 6->3 bicubic has 4-tap columns that overlap between neighboring outputs
    auto spec = make_spec(reference::random_image(rng, {6, 6}, 1),
                          reference::random_image(rng, {3, 3}, 1), KernelKind::Bicubic,
                          CraftMode::Local);
    CHECK(!supports_disjoint(spec.op));
    CHECK_THROWS_AS(craft_local(spec), std::invalid_argument);
}

TEST_CASE("craft_iterative converges instantly on a zero-residual instance") {
    std::mt19937 rng(8);
    const Image source = reference::random_image(rng, {10, 10}, 1);
    const auto op = build_operator({10, 10}, {5, 5}, KernelKind::Bilinear,
                                    SamplingConvention::HalfPixel);
    auto spec = make_spec(source, apply(op, source), KernelKind::Bilinear,
                          CraftMode::Iterative);
    const CraftResult res = craft_iterative(spec);
    CHECK(res.iterations_used == 0);
    CHECK(res.crafted == source);
}

TEST_CASE("craft_iterative agrees with craft_local on disjoint supports") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Image source = reference::random_image(rng, {8, 8}, 1);
        const Image target = reference::random_image(rng, {2, 2}, 1);
        auto spec = make_spec(source, target, KernelKind::Bilinear, CraftMode::Local);
        const CraftResult local = craft_local(spec);
        spec.mode = CraftMode::Iterative;
        const CraftResult iter = craft_iterative(spec);
        CHECK(linf_diff(apply(spec.op, local.crafted), apply(spec.op, iter.crafted)) <= 1);
    }
}

TEST_CASE("craft_iterative handles overlapping bicubic supports") {
    std::mt19937 rng(10);
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Image source = reference::random_image(rng, {6, 6}, 1);
        const Image target = reference::random_image(rng, {3, 3}, 1);
        const auto spec =
            make_spec(source, target, KernelKind::Bicubic, CraftMode::Iterative);
        const CraftResult res = craft_iterative(spec);
        CHECK(res.out_linf == linf_diff(apply(spec.op, res.crafted), spec.target));
        if (res.out_linf <= 1) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("verify closes the loop and respects the tolerance") {
    std::mt19937 rng(11);
    const Image source = reference::random_image(rng, {8, 8}, 1);
    Image target = reference::random_image(rng, {4, 4}, 1);
    const auto spec = make_spec(source, target, KernelKind::Nearest, CraftMode::ExactNN);
    const CraftResult res = craft_nearest(spec);
    CHECK(verify(res.crafted, spec.op, target, 0).ok);

    Image bumped = target;
    bumped.at(0, 0, 0) = static_cast<std::uint8_t>(
        bumped.at(0, 0, 0) < 254 ? bumped.at(0, 0, 0) + 2 : bumped.at(0, 0, 0) - 2);
    CHECK(!verify(res.crafted, spec.op, bumped, 1).ok);
}

TEST_CASE("deceit_score separates benign content from a crafted attack") {
    const auto op = build_operator({64, 64}, {8, 8}, KernelKind::Nearest,
                                    SamplingConvention::HalfPixel);
    const Image flat({64, 64}, 1, 42);
    CHECK(deceit_score(flat, op) == doctest::Approx(0.0).epsilon(1e-12));

    // smooth gradient: histogram barely moves under scaling
    Image gradient({64, 64}, 1);
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
            gradient.at(r, c, 0) = static_cast<std::uint8_t>((r * 2 + c * 2) / 2 % 256);
    CHECK(deceit_score(gradient, op) < 0.3);

    // checkerboard camouflage hiding a uniform dark target
    AttackSpec spec;
    spec.source = reference::checkerboard({64, 64}, 1, 1, 100, 255);
    spec.target = Image({8, 8}, 1, 5);
    spec.op = op;
    const CraftResult res = craft_nearest(spec);
    CHECK(deceit_score(res.crafted, op) > 0.7);
}

TEST_CASE("modified fraction shrinks as the scale factor grows") {
    std::mt19937 rng(12);
    const Image source = reference::random_image(rng, {96, 96}, 1);
    double prev_fraction = 1.0;
    double prev_psnr = -1.0;
    for (int out : {48, 24, 12}) {
        const Image target = reference::random_image(rng, {out, out}, 1);
        const auto spec = make_spec(source, target, KernelKind::Nearest, CraftMode::ExactNN);
        const CraftResult res = craft_nearest(spec);
        CHECK(res.modified_fraction <= prev_fraction);
        CHECK(res.source_psnr >= prev_psnr);
        prev_fraction = res.modified_fraction;
        prev_psnr = res.source_psnr;
    }
}

TEST_CASE("craft validates dimension compatibility") {
    std::mt19937 rng(13);
    AttackSpec spec;
    spec.source = reference::random_image(rng, {8, 8}, 1);
    spec.target = reference::random_image(rng, {4, 4}, 3);  // channel mismatch
    spec.op = build_operator({8, 8}, {4, 4}, KernelKind::Nearest,
                             SamplingConvention::HalfPixel);
    CHECK_THROWS_AS(craft_nearest(spec), std::invalid_argument);
}
