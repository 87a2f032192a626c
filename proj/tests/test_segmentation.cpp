#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dcc/segmentation.hpp"

using namespace dcc;

namespace {

ImageRgb fill(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRgb img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    return img;
}

} // namespace

TEST_CASE("sky band over gray ground is found at the horizon row") {
    const int w = 320, h = 240;
    ImageRgb img = fill(w, h, 128, 128, 128);
    const int horizon = static_cast<int>(h * 0.3);
    for (int y = 0; y < horizon; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = 110;
            img.at(x, y, 1) = 160;
            img.at(x, y, 2) = 235;
        }
    const SkyResult sky = segment_sky(img);
    REQUIRE(sky.has_sky);
    CHECK(std::abs(sky.skyline_row - horizon) <= 1);
    // mask-1 pixels only above the skyline band
    for (int y = sky.skyline_row + kMacroblockSize; y < h; ++y)
        for (int x = 0; x < w; ++x)
            REQUIRE(sky.mask[static_cast<std::size_t>(y) * w + x] == 0);
}

TEST_CASE("nadir frame without sky and dark frames reject") {
    CHECK_FALSE(segment_sky(fill(160, 120, 128, 128, 128)).has_sky);
    CHECK_FALSE(segment_sky(fill(160, 120, 0, 0, 0)).has_sky);
    // bright but not blue-dominant
    CHECK_FALSE(segment_sky(fill(160, 120, 220, 220, 220)).has_sky);
}

TEST_CASE("all-sky frame puts the skyline at the bottom") {
    const SkyResult sky = segment_sky(fill(160, 128, 100, 150, 240));
    REQUIRE(sky.has_sky);
    CHECK(sky.skyline_row == 128);
}

TEST_CASE("slice count follows the pitch bands") {
    for (int p = 0; p <= 90; ++p) {
        const int expect = p >= 75 ? 1 : (p >= 30 && p <= 60 ? 3 : 2);
        REQUIRE(slice_count_for_pitch(p) == expect);
    }
}

TEST_CASE("plan examples from the pitch rules") {
    const SlicePlan nadir = plan_slices(90, 1080, nullptr);
    REQUIRE(nadir.slices.size() == 1);
    CHECK(nadir.slices[0].row_start == 0);
    CHECK(nadir.slices[0].row_end == 1080);

    const SlicePlan three = plan_slices(45, 1080, nullptr);
    REQUIRE(three.slices.size() == 3);
    CHECK(three.slices[0].rows() == 352);
    CHECK(three.slices[1].rows() == 352);
    CHECK(three.slices[2].rows() == 376);

    SkyResult sky;
    sky.has_sky = true;
    sky.skyline_row = 270; // top 25%
    const SlicePlan low = plan_slices(20, 1080, &sky);
    REQUIRE(low.slices.size() == 2);
    CHECK(low.sky_rows == 272); // snapped to 16
    CHECK(low.slices[0].row_start == 272);
    CHECK(low.slices[1].row_end == 1080);
}

TEST_CASE("plans partition the non-sky rows exactly") {
    std::mt19937 rng(3);
    for (int iter = 0; iter < 200; ++iter) {
        const double pitch = rng() % 91;
        const int h = 16 * (20 + static_cast<int>(rng() % 120));
        SkyResult sky;
        sky.has_sky = rng() % 2 == 0;
        sky.skyline_row = static_cast<int>(rng() % (h / 2));
        const SlicePlan plan = plan_slices(pitch, h, &sky);
        REQUIRE(!plan.slices.empty());
        REQUIRE(plan.slices.size() <= 3);
        int row = plan.sky_rows;
        for (const SliceSpan& s : plan.slices) {
            REQUIRE(s.row_start == row);
            REQUIRE(s.row_end > s.row_start);
            row = s.row_end;
        }
        REQUIRE(row == h);
        for (std::size_t i = 0; i + 1 < plan.slices.size(); ++i)
            REQUIRE(plan.slices[i].row_end % kMacroblockSize == 0);
    }
}

TEST_CASE("pitch outside [0,90] is rejected") {
    CHECK_THROWS_AS(plan_slices(-1, 1080, nullptr), InvalidArgument);
    CHECK_THROWS_AS(plan_slices(90.5, 1080, nullptr), InvalidArgument);
}

TEST_CASE("road stripe is recovered at block granularity") {
    const int w = 320, h = 240;
    ImageRgb img = fill(w, h, 70, 120, 60); // grass
    const int road_y0 = 96, road_y1 = 160;  // block-aligned stripe
    for (int y = road_y0; y < road_y1; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = 125;
            img.at(x, y, 1) = 124;
            img.at(x, y, 2) = 121;
        }
    const BlockMask mask = segment_road(img);
    for (int by = 0; by < mask.height_mb; ++by)
        for (int bx = 0; bx < mask.width_mb; ++bx) {
            const int y0 = by * kMacroblockSize, y1 = y0 + kMacroblockSize;
            if (y0 >= road_y0 && y1 <= road_y1) {
                REQUIRE(mask.get(bx, by)); // fully inside the stripe
            } else if (y1 <= road_y0 - kMacroblockSize || y0 >= road_y1 + kMacroblockSize) {
                REQUIRE_FALSE(mask.get(bx, by)); // beyond one block of dilation
            }
        }
}

TEST_CASE("uniform grass rejects and uniform asphalt accepts") {
    CHECK(segment_road(fill(64, 64, 70, 140, 60)).count() == 0);
    const BlockMask all = segment_road(fill(64, 64, 122, 122, 122));
    CHECK(all.count() == static_cast<std::size_t>(all.width_mb) * all.height_mb);
}

TEST_CASE("block labels are stable under sub-majority flips") {
    // start from a block with clear margin, flip fewer pixels than the margin
    ImageRgb img = fill(16, 16, 122, 122, 122); // all 256 pixels pass
    const BlockMask before = segment_road(img);
    REQUIRE(before.get(0, 0));
    std::mt19937 rng(9);
    int flipped = 0;
    while (flipped < 120) { // margin is 256 - 128 = 128; stay below it
        const int x = static_cast<int>(rng() % 16), y = static_cast<int>(rng() % 16);
        if (img.at(x, y, 1) == 122) {
            img.at(x, y, 0) = 40;
            img.at(x, y, 1) = 200;
            img.at(x, y, 2) = 40;
            ++flipped;
        }
    }
    CHECK(segment_road(img).get(0, 0));
}
