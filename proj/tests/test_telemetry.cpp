#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "dcc/telemetry.hpp"

using namespace dcc;

TEST_CASE("two well-formed lines parse into a track of length 2") {
    std::istringstream in(
        "# comment\n"
        "0.0, 0, 0, 50, 1, 0, 0, 0, 90, 0\n"
        "0.2, 0.2, 0, 50, 1, 0, 0, 0, 90, 0\n");
    const TelemetryTrack track = parse_telemetry(in);
    REQUIRE(track.size() == 2);
    CHECK(track.samples()[1].position.x == Catch::Approx(0.2));
    CHECK(track.samples()[0].pitch_deg == Catch::Approx(90.0));
}

TEST_CASE("a nine-field record names the failing line") {
    std::istringstream in(
        "0.0, 0, 0, 50, 1, 0, 0, 0, 90, 0\n"
        "0.2, 0.2, 0, 50, 1, 0, 0, 0, 90\n");
    try {
        parse_telemetry(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("9") != std::string::npos);
    }
}

TEST_CASE("non-monotonic timestamps are rejected") {
    std::istringstream in(
        "1.0, 0, 0, 50, 0, 0, 0, 0, 90, 0\n"
        "0.5, 0, 0, 50, 0, 0, 0, 0, 90, 0\n");
    CHECK_THROWS_AS(parse_telemetry(in), ParseError);
}

TEST_CASE("garbage fields are rejected") {
    std::istringstream in("0.0, 0, zero, 50, 0, 0, 0, 0, 90, 0\n");
    CHECK_THROWS_AS(parse_telemetry(in), ParseError);
}

TEST_CASE("serialize then parse is the identity on generated tracks") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-100, 100);
    std::vector<TelemetrySample> samples;
    double t = 0;
    for (int i = 0; i < 100; ++i) {
        TelemetrySample s;
        s.timestamp = t;
        t += 0.1 + (rng() % 100) / 1000.0;
        s.position = {d(rng), d(rng), 50 + (rng() % 100)};
        s.velocity = {d(rng) / 10, d(rng) / 10, 0};
        s.yaw_deg = d(rng);
        s.pitch_deg = 45 + (rng() % 45);
        s.roll_deg = d(rng) / 50;
        samples.push_back(s);
    }
    const TelemetryTrack track(samples);
    std::stringstream buf;
    serialize_telemetry(track, buf);
    const TelemetryTrack back = parse_telemetry(buf);
    REQUIRE(back.size() == track.size());
    for (std::size_t i = 0; i < track.size(); ++i) {
        const auto& a = track.samples()[i];
        const auto& b = back.samples()[i];
        REQUIRE(a.timestamp == b.timestamp);
        REQUIRE(a.position.x == b.position.x);
        REQUIRE(a.position.y == b.position.y);
        REQUIRE(a.position.z == b.position.z);
        REQUIRE(a.velocity.x == b.velocity.x);
        REQUIRE(a.yaw_deg == b.yaw_deg);
        REQUIRE(a.pitch_deg == b.pitch_deg);
        REQUIRE(a.roll_deg == b.roll_deg);
    }
}

namespace {
TelemetryTrack simple_track() {
    std::vector<TelemetrySample> s(2);
    s[0].timestamp = 0;
    s[0].position = {0, 0, 50};
    s[0].velocity = {1, 0, 0};
    s[0].pitch_deg = 90;
    s[1].timestamp = 1;
    s[1].position = {1, 0, 50};
    s[1].velocity = {1, 0, 0};
    s[1].pitch_deg = 88;
    return TelemetryTrack(s);
}
} // namespace

TEST_CASE("pose_at hits knot points exactly") {
    const TelemetryTrack track = simple_track();
    const PoseVelocity p0 = pose_at(track, 0.0);
    CHECK(p0.pose.position.x == 0.0);
    CHECK(p0.pose.pitch_deg == 90.0);
    const PoseVelocity p1 = pose_at(track, 1.0);
    CHECK(p1.pose.position.x == 1.0);
    CHECK(p1.pose.pitch_deg == 88.0);
}

TEST_CASE("pose_at interpolates the midpoint") {
    const TelemetryTrack track = simple_track();
    const PoseVelocity p = pose_at(track, 0.5);
    CHECK(p.pose.position.x == Catch::Approx(0.5));
    CHECK(p.pose.position.z == Catch::Approx(50.0));
}

TEST_CASE("pose_at rejects out-of-range times") {
    const TelemetryTrack track = simple_track();
    CHECK_THROWS_AS(pose_at(track, -0.1), OutOfRange);
    CHECK_THROWS_AS(pose_at(track, 1.1), OutOfRange);
}

TEST_CASE("position is continuous and tracks the analytic trajectory") {
    // dense reference of an analytic constant-velocity path
    std::vector<TelemetrySample> samples;
    const Vec3 v{2.0, -1.0, 0.0};
    for (int i = 0; i <= 50; ++i) {
        TelemetrySample s;
        s.timestamp = i * 0.1;
        s.position = Vec3{0, 0, 60} + v * s.timestamp;
        s.velocity = v;
        s.pitch_deg = 90;
        samples.push_back(s);
    }
    const TelemetryTrack track(samples);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double t = d(rng);
        const PoseVelocity p = pose_at(track, t);
        const Vec3 expect = Vec3{0, 0, 60} + v * t;
        REQUIRE((p.pose.position - expect).norm() < 0.1 * 2.5); // spacing * speed
        const double eps = 1e-6;
        if (t + eps <= track.last_time()) {
            const PoseVelocity q = pose_at(track, t + eps);
            REQUIRE((q.pose.position - p.pose.position).norm() < 1e-3);
        }
    }
}
