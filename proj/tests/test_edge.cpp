#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dcc/codec.hpp"
#include "dcc/edge.hpp"

using namespace dcc;

namespace {

Yuv420 noise_yuv(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Yuv420 f(w, h);
    for (auto& v : f.y.data) v = static_cast<std::uint8_t>(rng() % 256);
    for (auto& v : f.cb.data) v = static_cast<std::uint8_t>(96 + rng() % 64);
    for (auto& v : f.cr.data) v = static_cast<std::uint8_t>(96 + rng() % 64);
    return f;
}

DecodedFrame single_slice_frame(Yuv420 img, int row_start, int row_end,
                                ResolutionClass res) {
    DecodedFrame f;
    SliceCodeMeta m;
    m.row_start = row_start;
    m.row_end = row_end;
    m.res = res;
    m.out_w = img.width();
    m.out_h = img.height();
    f.meta.slices.push_back(m);
    f.slices.push_back(std::move(img));
    return f;
}

DetectionBox box(int x, int y, int w, int h, std::uint8_t cls = 0) {
    DetectionBox b;
    b.x = x;
    b.y = y;
    b.w = w;
    b.h = h;
    b.cls = cls;
    return b;
}

} // namespace

TEST_CASE("single native slice reconstructs as a bit-identical passthrough") {
    const Yuv420 img = noise_yuv(128, 96, 1);
    const DecodedFrame f = single_slice_frame(img, 0, 96, ResolutionClass::r2160);
    const ImageRgb recon = reconstruct(f, 128, 96);
    const ImageRgb direct = yuv420_to_rgb(img);
    CHECK(recon.data == direct.data);
}

TEST_CASE("two uniform slices of equal value reconstruct uniformly") {
    Yuv420 top(128, 32), bottom(128, 32);
    for (auto& v : top.y.data) v = 150;
    for (auto& v : bottom.y.data) v = 150;
    DecodedFrame f;
    SliceCodeMeta m0;
    m0.row_start = 0;
    m0.row_end = 64;
    m0.res = ResolutionClass::r1080;
    m0.out_w = 128;
    m0.out_h = 32;
    SliceCodeMeta m1 = m0;
    m1.row_start = 64;
    m1.row_end = 128;
    f.meta.slices = {m0, m1};
    f.slices = {top, bottom};
    const ImageRgb recon = reconstruct(f, 256, 128);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 256; ++x)
            for (int c = 0; c < 3; ++c) REQUIRE(static_cast<int>(recon.at(x, y, c)) == 150);
}

TEST_CASE("seam stays smooth across a blended gradient") {
    // both slices carry the same analytic vertical gradient
    auto make_slice = [](int row0, int rows, double slope) {
        Yuv420 s(256, rows);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < 256; ++x)
                s.y.at(x, y) = clamp_u8(static_cast<int>(40.0 + slope * (row0 + y)));
        return s;
    };
    const double slope = 0.77;
    DecodedFrame f;
    SliceCodeMeta m0;
    m0.row_start = 0;
    m0.row_end = 64;
    m0.res = ResolutionClass::r2160;
    m0.out_w = 256;
    m0.out_h = 64;
    SliceCodeMeta m1 = m0;
    m1.row_start = 64;
    m1.row_end = 128;
    f.meta.slices = {m0, m1};
    f.slices = {make_slice(0, 64, slope), make_slice(64, 64, slope)};
    const ImageRgb recon = reconstruct(f, 256, 128);

    auto second_diff = [&](int y) {
        int worst = 0;
        for (int x = 8; x < 248; ++x) {
            const int d = recon.at(x, y + 1, 1) - 2 * recon.at(x, y, 1) + recon.at(x, y - 1, 1);
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    };
    int interior = 1; // rounding ripple of the analytic gradient itself
    for (int y = 16; y < 48; ++y) interior = std::max(interior, second_diff(y));
    int seam = 0;
    for (int y = 56; y < 72; ++y) seam = std::max(seam, second_diff(y));
    CHECK(seam <= 2 * interior);
}

TEST_CASE("sky rows are filled from the cached sky image") {
    const Yuv420 img = noise_yuv(128, 64, 3);
    DecodedFrame f = single_slice_frame(img, 32, 96, ResolutionClass::r2160);
    f.meta.sky_rows = 32;
    Yuv420 sky(64, 16);
    for (auto& v : sky.y.data) v = 200;
    for (auto& v : sky.cb.data) v = 150;
    f.sky_image = sky;
    f.has_sky_image = true;
    const ImageRgb recon = reconstruct(f, 128, 96);
    // blueish bright fill above, slice content below
    CHECK(recon.at(64, 10, 2) > 150);
    const ImageRgb direct = yuv420_to_rgb(img);
    CHECK(recon.at(5, 40, 1) == direct.at(5, 8, 1));

    f.has_sky_image = false;
    const ImageRgb gray = reconstruct(f, 128, 96);
    CHECK(static_cast<int>(gray.at(64, 10, 0)) == 128);
}

TEST_CASE("missing slices are a reconstruction error") {
    DecodedFrame f;
    CHECK_THROWS_AS(reconstruct(f, 64, 64), ReconstructionError);
}

TEST_CASE("iou corner cases") {
    CHECK(iou(box(0, 0, 10, 10), box(0, 0, 10, 10)) == Catch::Approx(1.0));
    CHECK(iou(box(0, 0, 10, 10), box(10, 10, 5, 5)) == Catch::Approx(0.0));
    CHECK(iou(box(0, 0, 10, 10), box(5, 0, 10, 10)) == Catch::Approx(5.0 / 15.0));
}

TEST_CASE("an object detected once stays detected for the window") {
    DetectionAggregator agg(5);
    const DetectionBox d = box(100, 100, 30, 20);
    REQUIRE(agg.push(0, {d}).size() == 1);
    for (std::uint32_t f = 1; f < 5; ++f) {
        const auto finals = agg.push(f, {});
        REQUIRE(finals.size() == 1); // still within the window
        CHECK(finals[0].x == 100);
    }
    CHECK(agg.push(5, {}).empty()); // window expired
}

TEST_CASE("window of one degenerates to per-frame detection") {
    DetectionAggregator agg(1);
    CHECK(agg.push(0, {box(0, 0, 10, 10)}).size() == 1);
    CHECK(agg.push(1, {}).empty());
}

TEST_CASE("majority vote settles the class") {
    DetectionAggregator agg(5);
    agg.push(0, {box(50, 50, 20, 20, 0)});
    agg.push(1, {box(50, 50, 20, 20, 0)});
    const auto finals = agg.push(2, {box(50, 50, 20, 20, 1)});
    REQUIRE(finals.size() == 1);
    CHECK(finals[0].cls == 0); // car, car, truck -> car
}

TEST_CASE("enlarging the window never decreases recall") {
    // a flickering detector: the object is seen every third frame
    std::vector<std::vector<DetectionBox>> per_frame(12);
    for (int f = 0; f < 12; f += 3) per_frame[static_cast<std::size_t>(f)] = {box(10, 10, 20, 20)};
    std::vector<std::vector<TruthBox>> truth(12);
    for (int f = 0; f < 12; ++f) {
        TruthBox t;
        t.frame = static_cast<std::uint32_t>(f);
        t.x = 10;
        t.y = 10;
        t.w = 20;
        t.h = 20;
        truth[static_cast<std::size_t>(f)].push_back(t);
    }
    double prev = -1;
    for (int w : {1, 2, 3, 5, 8}) {
        const auto finals = aggregate_detections(per_frame, w);
        const EvalReport r = compute_metrics(finals, truth);
        REQUIRE(r.recall >= prev);
        prev = r.recall;
    }
}

TEST_CASE("metrics formulas") {
    // perfect detections
    std::vector<std::vector<TruthBox>> truth(1);
    TruthBox t;
    t.x = 0; t.y = 0; t.w = 10; t.h = 10;
    truth[0] = {t, t};
    truth[0][1].x = 50;
    std::vector<std::vector<DetectionBox>> dets(1);
    dets[0] = {box(0, 0, 10, 10), box(50, 0, 10, 10)};
    EvalReport perfect = compute_metrics(dets, truth);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);

    // half missed, no false positives -> P=1, R=0.5, F1=2/3
    dets[0].pop_back();
    EvalReport half = compute_metrics(dets, truth);
    CHECK(half.precision == 1.0);
    CHECK(half.recall == Catch::Approx(0.5));
    CHECK(half.f1 == Catch::Approx(2.0 / 3.0));

    // empty truth with detections: degenerate by convention
    std::vector<std::vector<TruthBox>> none(1);
    EvalReport degen = compute_metrics(dets, none);
    CHECK(degen.precision == 0.0);
    CHECK(degen.recall == 1.0);
    CHECK(degen.degenerate);
}

TEST_CASE("compression gain reproduces the published ratio") {
    // 33.1 MB baseline vs 3.6 MB method: gamma = 819%
    const double gamma = compression_gain(33.1e6, 3.6e6);
    CHECK(std::lround(gamma * 100) == 819);
    CHECK_THROWS_AS(compression_gain(1.0, 0.0), InvalidArgument);
}

TEST_CASE("oracle detector gates on extent and reconstruction quality") {
    const int w = 256, h = 128;
    ImageRgb pristine(w, h, 110);
    // two objects: a large one and one below the extent gate
    auto paint = [&](ImageRgb& img, int x0, int y0, int ww, int hh, int v) {
        for (int y = y0; y < y0 + hh; ++y)
            for (int x = x0; x < x0 + ww; ++x) {
                img.at(x, y, 0) = static_cast<std::uint8_t>(v);
                img.at(x, y, 1) = static_cast<std::uint8_t>(v);
                img.at(x, y, 2) = static_cast<std::uint8_t>(v / 2);
            }
    };
    paint(pristine, 40, 40, 40, 24, 220);
    paint(pristine, 150, 60, 10, 6, 220);
    std::vector<TruthBox> truth;
    TruthBox big;
    big.x = 40; big.y = 40; big.w = 40; big.h = 24;
    TruthBox small;
    small.x = 150; small.y = 60; small.w = 10; small.h = 6;
    small.object_id = 1;
    truth = {big, small};

    OracleParams params;
    params.min_extent_px = 12;
    params.psnr_gate_db = 28;
    OracleDetector oracle([&](std::uint32_t) { return truth; },
                          [&](std::uint32_t) { return &pristine; }, w, h, params);

    // pristine input: only the large object passes the extent gate
    const auto clean = oracle.detect(pristine, 0);
    REQUIRE(clean.size() == 1);
    CHECK(clean[0].x == 40);

    // badly corrupted box region: the PSNR gate rejects it
    ImageRgb corrupted = pristine;
    std::mt19937 rng(7);
    for (int y = 40; y < 64; ++y)
        for (int x = 40; x < 80; ++x)
            for (int c = 0; c < 3; ++c)
                corrupted.at(x, y, c) = static_cast<std::uint8_t>(rng() % 256);
    CHECK(oracle.detect(corrupted, 0).empty());

    // low-resolution unregistered input: the scaled extent fails the gate
    const ImageRgb half = downsample_area(pristine, w / 2, h / 2);
    CHECK(oracle.detect(half, 0).size() == 1); // 40x24 -> 20x12, right at the gate
    const ImageRgb quarter = downsample_area(pristine, w / 4, h / 4);
    CHECK(oracle.detect(quarter, 0).empty()); // 10x6 < 12 px
}

TEST_CASE("feedback messages are deterministic and round trip") {
    FeedbackMessage msg;
    msg.frame_index = 17;
    msg.decrease_one = true;
    msg.boxes = {box(10, 20, 30, 40, 1)};
    msg.boxes[0].source_frame = 17; // the parser stamps boxes with the record frame
    ResolutionTable t;
    t.thresholds = {9, 22, 97};
    msg.table = t;
    const auto a = serialize_feedback(msg);
    const auto b = serialize_feedback(msg);
    CHECK(a == b);
    const FeedbackMessage back = parse_feedback(a);
    CHECK(back == msg);
}

TEST_CASE("make_feedback applies the recall rules") {
    const std::vector<DetectionBox> boxes = {box(1, 2, 30, 30)};
    auto trainer = [] {
        ResolutionTable t;
        t.thresholds = {7, 21, 90};
        return t;
    };

    // steady recall: boxes only
    const FeedbackMessage steady =
        make_feedback(5, boxes, std::vector<double>(6, 0.8), ResolutionClass::r1080, trainer);
    CHECK(steady.boxes == boxes);
    CHECK_FALSE(steady.table.has_value());
    CHECK_FALSE(steady.decrease_one);

    // low recall for six frames: retrained table rides along
    const FeedbackMessage low =
        make_feedback(6, boxes, std::vector<double>(6, 0.65), ResolutionClass::r1080, trainer);
    REQUIRE(low.table.has_value());
    CHECK(low.table->thresholds[0] == 7);

    // sustained high recall: decrease by one
    const FeedbackMessage high =
        make_feedback(7, boxes, std::vector<double>(6, 0.95), ResolutionClass::r1080, trainer);
    CHECK(high.decrease_one);
}
