#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dcc/config.hpp"

using namespace dcc;

TEST_CASE("sectioned key/value parsing") {
    std::istringstream in(
        "# toolkit config\n"
        "[camera]\n"
        "focal_x = 2625\n"
        "focal_y = 2625\n"
        "frame_length = 1920\n"
        "frame_width = 1080\n"
        "\n"
        "[motion]\n"
        "decimate_sad = 640\n"
        "; trailing comment\n");
    const KeyValueConfig c = KeyValueConfig::parse(in);
    CHECK(c.get_double("camera", "focal_x", 0) == 2625.0);
    CHECK(c.get_int("motion", "decimate_sad", 0) == 640);
    CHECK(c.get_int("motion", "missing", 7) == 7);
    CHECK_FALSE(c.has("codec", "qp_ropi"));
}

TEST_CASE("malformed lines carry line numbers") {
    std::istringstream in("[camera\nfocal_x = 1\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(in), ParseError);
    std::istringstream in2("focal_x 1750\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(in2), ParseError);
}

TEST_CASE("toolkit config falls back to defaults") {
    std::istringstream in("[codec]\nqp_roni = 24\n");
    const ToolkitConfig t = ToolkitConfig::from_config(KeyValueConfig::parse(in));
    CHECK(t.codec.qp_roni == 24);
    CHECK(t.codec.qp_ropi == 0);
    CHECK(t.motion.decimate_sad == 512);
    CHECK(t.camera.focal_x == 1750.0);
    CHECK(t.oracle.psnr_gate_db == 28.0);
}

TEST_CASE("intrinsics file requires all four fields") {
    const char* path = "test_intrinsics.tmp";
    {
        std::ofstream out(path);
        out << "focal_x = 1750\nfocal_y = 1750\nframe_length = 1280\nframe_width = 720\n";
    }
    const CameraIntrinsics k = load_intrinsics(path);
    CHECK(k.focal_x == 1750.0);
    CHECK(k.frame_width == 720.0);
    {
        std::ofstream out(path);
        out << "focal_x = 1750\n";
    }
    CHECK_THROWS_AS(load_intrinsics(path), InvalidArgument);
    std::remove(path);
}
