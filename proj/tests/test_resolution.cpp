#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "dcc/resolution.hpp"

using namespace dcc;

namespace {
CameraIntrinsics desk_base() {
    CameraIntrinsics k;
    k.focal_x = k.focal_y = 2625.0; // 1750 px @ 1280 scaled to 1920
    k.frame_length = 1920.0;
    k.frame_width = 1080.0;
    return k;
}
} // namespace

TEST_CASE("table lookup is monotone in extent") {
    const ResolutionTable t = ResolutionTable::default_for_base(1080);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.1, 300.0);
    for (int i = 0; i < 500; ++i) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        // smaller extent never maps to a lower resolution
        REQUIRE(static_cast<int>(t.class_for(a)) >= static_cast<int>(t.class_for(b)));
    }
    CHECK(t.class_for(1000.0) == ResolutionClass::r720); // saturation
}

TEST_CASE("nadir 50 m assigns 1080p to the single slice") {
    const SlicePlan plan = plan_slices(90, 1080, nullptr);
    const Pose pose = Pose::at({0, 0, 50}, 0, 90, 0);
    const SliceAssignment a = assign_resolutions(plan, pose, desk_base(),
                                                 ResolutionTable::default_for_base(1080));
    REQUIRE(a.classes.size() == 1);
    CHECK(a.classes[0] == ResolutionClass::r1080);
    CHECK(a.conservative[0] == 0);
}

TEST_CASE("pitch 30 at 100 m assigns 1080p, 1440p, 2160p near to far") {
    const SlicePlan plan = plan_slices(30, 1080, nullptr);
    REQUIRE(plan.slices.size() == 3);
    const Pose pose = Pose::at({0, 0, 100}, 0, 30, 0);
    const SliceAssignment a = assign_resolutions(plan, pose, desk_base(),
                                                 ResolutionTable::default_for_base(1080));
    // slices are ordered top to bottom: far, middle, near
    CHECK(a.classes[0] == ResolutionClass::r2160);
    CHECK(a.classes[1] == ResolutionClass::r1440);
    CHECK(a.classes[2] == ResolutionClass::r1080);
}

TEST_CASE("hovering below 50 m allows 720p") {
    const SlicePlan plan = plan_slices(90, 1080, nullptr);
    const Pose pose = Pose::at({0, 0, 40}, 0, 90, 0);
    const SliceAssignment a = assign_resolutions(plan, pose, desk_base(),
                                                 ResolutionTable::default_for_base(1080));
    CHECK(a.classes[0] == ResolutionClass::r720);
}

TEST_CASE("farther slices never get a lower class than nearer ones") {
    const CameraIntrinsics k = desk_base();
    const ResolutionTable t = ResolutionTable::default_for_base(1080);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const double pitch = 20 + rng() % 70;
        const double alt = 30 + rng() % 150;
        const SlicePlan plan = plan_slices(pitch, 1080, nullptr);
        const SliceAssignment a =
            assign_resolutions(plan, Pose::at({0, 0, alt}, 0, pitch, 0), k, t);
        for (std::size_t s = 0; s + 1 < a.classes.size(); ++s)
            REQUIRE(static_cast<int>(a.classes[s]) >= static_cast<int>(a.classes[s + 1]));
    }
}

TEST_CASE("downsample identity is byte exact") {
    std::mt19937 rng(11);
    ImageRgb img(64, 48);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() % 256);
    const ImageRgb out = downsample_area(img, 64, 48);
    CHECK(out.data == img.data);
}

TEST_CASE("downsampling a constant slice preserves the value") {
    ImageRgb img(128, 96, 201);
    const ImageRgb out = downsample_area(img, 64, 48);
    for (auto v : out.data) REQUIRE(static_cast<int>(v) == 201);
}

TEST_CASE("2:1 downsample of a checkerboard is uniform mid-gray") {
    ImageRgb img(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            const std::uint8_t v = (x + y) % 2 ? 255 : 0;
            img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = v;
        }
    const ImageRgb out = downsample_area(img, 32, 32);
    for (auto v : out.data) REQUIRE(static_cast<int>(v) == 128); // 127.5 rounded
}

TEST_CASE("upscale requests to the downsampler are rejected") {
    ImageRgb img(32, 32, 7);
    CHECK_THROWS_AS(downsample_area(img, 64, 32), InvalidArgument);
}

TEST_CASE("upsample identity and constants") {
    std::mt19937 rng(13);
    ImageRgb img(40, 24);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() % 256);
    CHECK(upsample_bicubic(img, 40, 24).data == img.data);

    ImageRgb flat(32, 16, 93);
    const ImageRgb up = upsample_bicubic(flat, 96, 48);
    for (auto v : up.data) REQUIRE(static_cast<int>(v) == 93);
}

TEST_CASE("downsample then upsample tracks a smooth gradient") {
    const int w = 128, h = 128;
    ImageRgb img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int v = static_cast<int>(60.0 + 0.5 * x + 0.45 * y);
            img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = clamp_u8(v);
        }
    const ImageRgb down = downsample_area(img, 64, 64);
    const ImageRgb up = upsample_bicubic(down, w, h);
    int worst = 0;
    for (int y = 4; y < h - 4; ++y)
        for (int x = 4; x < w - 4; ++x) {
            const int analytic = static_cast<int>(60.0 + 0.5 * x + 0.45 * y);
            worst = std::max(worst, std::abs(analytic - static_cast<int>(up.at(x, y, 0))));
        }
    CHECK(worst <= 2);
}

TEST_CASE("class scale arithmetic keeps dimensions consistent") {
    CHECK(scale_dim(1920, ResolutionClass::r1080) == 960);
    CHECK(scale_dim(1080, ResolutionClass::r1080) == 540);
    CHECK(scale_dim(1920, ResolutionClass::r720) == 640);
    CHECK(scale_dim(1920, ResolutionClass::r1440) == 1280);
    CHECK(scale_dim(1080, ResolutionClass::r2160) == 1080);
}

TEST_CASE("training on separable step data lands inside the gaps") {
    std::mt19937_64 rng(17);
    for (int seed = 0; seed < 20; ++seed) {
        std::vector<TrainingSample> samples;
        // class bands with clear gaps: [4,8] -> 2160p, [14,18] -> 1440p,
        // [26,34] -> 1080p, [50,80] -> 720p
        auto add = [&](double lo, double hi, ResolutionClass c) {
            for (int i = 0; i < 30; ++i) {
                TrainingSample s;
                s.pixel_extent = lo + (hi - lo) * ((rng() % 1000) / 999.0);
                s.min_acceptable_class = c;
                samples.push_back(s);
            }
        };
        add(4, 8, ResolutionClass::r2160);
        add(14, 18, ResolutionClass::r1440);
        add(26, 34, ResolutionClass::r1080);
        add(50, 80, ResolutionClass::r720);
        const TrainResult r = train_resolution_table(samples);
        REQUIRE_FALSE(r.warning);
        REQUIRE(r.table.thresholds[0] > 8);
        REQUIRE(r.table.thresholds[0] < 14);
        REQUIRE(r.table.thresholds[1] > 18);
        REQUIRE(r.table.thresholds[1] < 26);
        REQUIRE(r.table.thresholds[2] > 34);
        REQUIRE(r.table.thresholds[2] < 50);
    }
}

TEST_CASE("single-class training saturates to that class") {
    std::vector<TrainingSample> samples;
    for (int i = 0; i < 50; ++i) {
        TrainingSample s;
        s.pixel_extent = 30.0 + i;
        s.min_acceptable_class = ResolutionClass::r1080;
        samples.push_back(s);
    }
    const TrainResult r = train_resolution_table(samples);
    for (const auto& s : samples)
        REQUIRE(r.table.class_for(s.pixel_extent) == ResolutionClass::r1080);
}

TEST_CASE("paper-regime extents from 50 m nadir train to 1080p") {
    // oracle-labeled samples in the 50 m regime: extents near 94 px are fine
    // at 1080p but not at 720p
    std::vector<TrainingSample> samples;
    for (int i = 0; i < 40; ++i) {
        TrainingSample s;
        s.pixel_extent = 85.0 + (i % 20);
        s.min_acceptable_class = ResolutionClass::r1080;
        samples.push_back(s);
        TrainingSample t;
        t.pixel_extent = 130.0 + (i % 30);
        t.min_acceptable_class = ResolutionClass::r720;
        samples.push_back(t);
        TrainingSample u;
        u.pixel_extent = 20.0 + (i % 10);
        u.min_acceptable_class = ResolutionClass::r1440;
        samples.push_back(u);
        TrainingSample v;
        v.pixel_extent = 4.0 + (i % 4);
        v.min_acceptable_class = ResolutionClass::r2160;
        samples.push_back(v);
    }
    const TrainResult r = train_resolution_table(samples);
    REQUIRE(r.table.class_for(94.5) == ResolutionClass::r1080);
}

TEST_CASE("rtab round trip") {
    ResolutionTable t;
    t.thresholds = {12, 34, 156};
    std::stringstream buf;
    save_table(t, buf);
    CHECK(buf.str().size() == 14);
    const ResolutionTable back = load_table(buf);
    CHECK(back.thresholds == t.thresholds);

    std::stringstream bad("XXXXXXXXYYYYYY");
    CHECK_THROWS_AS(load_table(bad), ParseError);
}

TEST_CASE("recall history drives the adjustment rules") {
    const std::vector<double> low(6, 0.6);
    CHECK(adjust_assignment(low, ResolutionClass::r1080) == Adjustment::retrain_request);

    const std::vector<double> high(6, 0.95);
    CHECK(adjust_assignment(high, ResolutionClass::r1080) == Adjustment::decrease_one);
    CHECK(decrease_class(ResolutionClass::r1080) == ResolutionClass::r720);

    const std::vector<double> mid(6, 0.8);
    CHECK(adjust_assignment(mid, ResolutionClass::r1080) == Adjustment::hold);

    // not below 720p
    CHECK(adjust_assignment(high, ResolutionClass::r720) == Adjustment::hold);

    // five frames are not enough
    const std::vector<double> five(5, 0.5);
    CHECK(adjust_assignment(five, ResolutionClass::r1080) == Adjustment::hold);

    // a single recovery breaks the streak
    std::vector<double> broken(6, 0.6);
    broken[3] = 0.85;
    CHECK(adjust_assignment(broken, ResolutionClass::r1080) == Adjustment::hold);
}
