#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dcc/regions.hpp"

using namespace dcc;

namespace {
ResidualPlane empty_delta(int w, int h) {
    Yuv420 f(w, h);
    return frame_delta(f, shift_reference(f, {0, 0}));
}
} // namespace

TEST_CASE("residual mask is the complement of the skip flags") {
    ResidualPlane d = empty_delta(96, 64);
    const DecimationResult all_skip = decimate_residuals(d, 0);
    const BlockMask none = ropi_from_residuals(d, all_skip.skip);
    CHECK(none.count() == 0);

    std::vector<std::uint8_t> flags(d.mb_sad.size(), 1);
    flags[5] = 0;
    flags[9] = 0;
    const BlockMask two = ropi_from_residuals(d, flags);
    CHECK(two.count() == 2);
    CHECK(two.bits[5] == 1);
    CHECK(two.bits[9] == 1);
}

TEST_CASE("empty detection list yields an empty mask") {
    const BlockMask m = ropi_from_detections({}, {0, 0}, 8, 6);
    CHECK(m.count() == 0);
}

TEST_CASE("a 32x32 box with zero motion dilates to 4x4 blocks") {
    DetectionBox b;
    b.x = 64;
    b.y = 32;
    b.w = 32;
    b.h = 32;
    const BlockMask m = ropi_from_detections({b}, {0, 0}, 12, 8);
    CHECK(m.count() == 16);
    for (int by = 1; by <= 4; ++by)
        for (int bx = 3; bx <= 6; ++bx) REQUIRE(m.get(bx, by));
}

TEST_CASE("boxes ride the cumulative global motion") {
    DetectionBox b;
    b.x = 96; // block 6
    b.y = 32;
    b.w = 16;
    b.h = 16;
    // three frames at 16 px leftward content shift each: cumulative d_w = 48
    const BlockMask m = ropi_from_detections({b}, {48, 0}, 12, 8);
    // translated block position: (96 - 48)/16 = 3, plus the 1-block ring
    CHECK(m.get(3, 2));
    CHECK(m.get(2, 1));
    CHECK(m.get(4, 3));
    CHECK_FALSE(m.get(6, 2)); // original site has moved on
}

TEST_CASE("boxes fully off-frame are dropped") {
    DetectionBox b;
    b.x = 10;
    b.y = 10;
    b.w = 12;
    b.h = 12;
    const BlockMask m = ropi_from_detections({b}, {400, 0}, 8, 8);
    CHECK(m.count() == 0);
}

TEST_CASE("fast flight dilates one extra block") {
    DetectionBox b;
    b.x = 64;
    b.y = 64;
    b.w = 16;
    b.h = 16;
    const BlockMask slow = ropi_from_detections({b}, {0, 0}, 16, 16, 0);
    const BlockMask fast = ropi_from_detections({b}, {0, 0}, 16, 16, 1);
    CHECK(slow.count() == 9);
    CHECK(fast.count() == 25);
}

TEST_CASE("union map with disjoint sources keeps distinct tags") {
    BlockMask road(4, 4), residual(4, 4), det(4, 4);
    road.set(0, 0);
    residual.set(1, 1);
    det.set(2, 2);
    const RoPIMap m = build_ropi_map(road, residual, det, 0);
    CHECK(m.mask.count() == 3);
    CHECK(m.tags[0] == kRoPIFromRoad);
    CHECK(m.tags[5] == kRoPIFromResidual);
    CHECK(m.tags[10] == kRoPIFromDetection);
    CHECK(m.tags[3] == 0);
}

TEST_CASE("all-empty inputs give an all-RoNI map") {
    const RoPIMap m = build_ropi_map(BlockMask(6, 4), BlockMask(6, 4), BlockMask(6, 4), 0);
    CHECK(m.mask.count() == 0);
}

TEST_CASE("sky rows take precedence over every source") {
    BlockMask road(4, 4), residual(4, 4), det(4, 4);
    for (int bx = 0; bx < 4; ++bx) road.set(bx, 0); // filter artifact in the sky band
    residual.set(1, 0);
    det.set(2, 1);
    const RoPIMap m = build_ropi_map(road, residual, det, 16); // one block row of sky
    for (int bx = 0; bx < 4; ++bx) REQUIRE_FALSE(m.mask.get(bx, 0));
    CHECK(m.mask.get(2, 1));
}

TEST_CASE("union is a superset of every source outside the sky") {
    std::mt19937 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        BlockMask a(8, 8), b(8, 8), c(8, 8);
        for (int i = 0; i < 64; ++i) {
            a.bits[static_cast<std::size_t>(i)] = rng() % 3 == 0;
            b.bits[static_cast<std::size_t>(i)] = rng() % 3 == 0;
            c.bits[static_cast<std::size_t>(i)] = rng() % 3 == 0;
        }
        const int sky_rows = static_cast<int>(rng() % 3) * 16;
        const RoPIMap m = build_ropi_map(a, b, c, sky_rows);
        for (int by = 0; by < 8; ++by)
            for (int bx = 0; bx < 8; ++bx) {
                if (by < sky_rows / 16) {
                    REQUIRE_FALSE(m.mask.get(bx, by));
                } else if (a.get(bx, by) || b.get(bx, by) || c.get(bx, by)) {
                    REQUIRE(m.mask.get(bx, by));
                } else {
                    REQUIRE_FALSE(m.mask.get(bx, by));
                }
            }
    }
}

TEST_CASE("mask dimension mismatches are rejected") {
    CHECK_THROWS_AS(build_ropi_map(BlockMask(4, 4), BlockMask(5, 4), BlockMask(4, 4), 0),
                    InvalidArgument);
}

TEST_CASE("detection records round trip through the wire format") {
    std::vector<DetectionBox> boxes;
    DetectionBox a;
    a.x = 100; a.y = 200; a.w = 48; a.h = 32; a.cls = 1; a.confidence = 0.75;
    DetectionBox b;
    b.x = 5; b.y = 9; b.w = 16; b.h = 16; b.cls = 0; b.confidence = 1.0;
    boxes = {a, b};
    BitWriter bw;
    write_detection_records(bw, 42, boxes);
    BitReader br(bw.bytes());
    const DetectionRecord rec = read_detection_records(br);
    CHECK(rec.frame_index == 42);
    REQUIRE(rec.boxes.size() == 2);
    CHECK(rec.boxes[0].x == 100);
    CHECK(rec.boxes[0].cls == 1);
    CHECK(rec.boxes[0].confidence == Catch::Approx(0.75).margin(0.01));
    CHECK(rec.boxes[1].w == 16);
    CHECK(rec.boxes[0].source_frame == 42);
}
