// dcc: drone-to-edge video compression toolkit command line.
//
// Subcommands:
//   simulate    render a synthetic scene: raw video + telemetry + ground truth
//   encode      raw video + telemetry -> .dcc bitstream (baseline | dcc-r | dcc)
//   decode      .dcc -> reconstructed raw frames + metadata dump
//   evaluate    decoded frames + truth -> detection metrics CSV
//   train-table fit resolution-table thresholds from labeled samples

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dcc/dcc.hpp"

namespace {

using namespace dcc;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

// ---- simulate ----

struct SimulateArgs {
    std::string area = "highway";
    double altitude = 50, pitch = 90, speed = 5, duration = 10;
    int fps = 5;
    int vehicles = 6, parked = 4;
    double vehicle_speed = 8, noise = 1.5;
    std::uint64_t seed = 1;
    int width = 1920, height = 1080;
    bool full_4k = false;
    bool pavement = false;
    std::string out, telemetry, truth, pristine;
};

int run_simulate(const SimulateArgs& a) {
    SceneConfig cfg;
    if (a.area == "residence") cfg.area = AreaKind::residence;
    else if (a.area == "local") cfg.area = AreaKind::local;
    else if (a.area == "highway") cfg.area = AreaKind::highway;
    else throw InvalidArgument("unknown area: " + a.area);
    cfg.altitude_m = a.altitude;
    cfg.pitch_deg = a.pitch;
    cfg.speed_mps = a.speed;
    cfg.fps = a.fps;
    cfg.duration_s = a.duration;
    cfg.moving_vehicles = a.vehicles;
    cfg.parked_vehicles = a.parked;
    cfg.vehicle_speed_mps = a.vehicle_speed;
    cfg.noise_sigma = a.noise;
    cfg.seed = a.seed;
    cfg.pavement_everywhere = a.pavement;
    cfg.base_width = a.full_4k ? 3840 : a.width;
    cfg.base_height = a.full_4k ? 2160 : a.height;
    const SceneRenderer scene(cfg);

    DcvHeader header;
    header.width = static_cast<std::uint16_t>(cfg.base_width);
    header.height = static_cast<std::uint16_t>(cfg.base_height);
    header.fps = static_cast<std::uint8_t>(cfg.fps);

    auto video = open_out(a.out);
    DcvWriter writer(video, header);
    std::optional<DcvWriter> pristine_writer;
    std::ofstream pristine_file;
    if (!a.pristine.empty()) {
        pristine_file = open_out(a.pristine);
        pristine_writer.emplace(pristine_file, header);
    }
    std::vector<std::vector<TruthBox>> truth;
    for (int i = 0; i < scene.frame_count(); ++i) {
        writer.write_frame(scene.render(i, true));
        if (pristine_writer) pristine_writer->write_frame(scene.render(i, false));
        truth.push_back(scene.truth_boxes(i));
    }
    writer.finalize();
    if (pristine_writer) pristine_writer->finalize();

    auto tlm = open_out(a.telemetry);
    serialize_telemetry(scene.telemetry(), tlm);
    if (!a.truth.empty()) {
        auto gt = open_out(a.truth);
        write_truth(gt, truth);
    }
    std::cout << "wrote " << scene.frame_count() << " frames (" << cfg.base_width << "x"
              << cfg.base_height << " @ " << cfg.fps << " fps) to " << a.out << "\n";
    return 0;
}

// ---- encode ----

class FileSource : public dcc::FrameSource {
public:
    FileSource(const std::string& video_path, const std::string& telemetry_path,
               CameraIntrinsics camera_ref, const std::string& pristine_path,
               const std::string& truth_path)
        : video_(open_in(video_path)), reader_(video_) {
        auto tlm = open_in(telemetry_path);
        track_ = parse_telemetry(tlm);
        camera_ = camera_ref.scaled_to(reader_.header().width, reader_.header().height);
        if (!pristine_path.empty()) {
            pristine_file_ = open_in(pristine_path);
            pristine_reader_.emplace(*pristine_file_);
        }
        if (!truth_path.empty()) {
            auto gt = open_in(truth_path);
            truth_frames_ = read_truth(gt);
        }
    }

    int frame_count() const override { return static_cast<int>(reader_.header().frame_count); }
    int fps() const override { return reader_.header().fps; }
    int width() const override { return reader_.header().width; }
    int height() const override { return reader_.header().height; }
    const TelemetryTrack& telemetry() const override { return track_; }
    CameraIntrinsics camera() const override { return camera_; }
    bool has_truth() const override {
        return !truth_frames_.empty() && pristine_reader_.has_value();
    }

    ImageRgb frame(int i) override {
        if (i != next_) throw StateError("file source frames must be read in order");
        ++next_;
        auto f = reader_.read_frame();
        if (!f) throw CorruptBitstream("raw video ended early", 0);
        if (pristine_reader_) {
            auto p = pristine_reader_->read_frame();
            if (!p) throw CorruptBitstream("pristine video ended early", 0);
            pristine_ = std::move(*p);
        }
        return std::move(*f);
    }

    ImageRgb pristine(int) override { return pristine_; }

    std::vector<TruthBox> truth(int i) override {
        const auto idx = static_cast<std::size_t>(i);
        return idx < truth_frames_.size() ? truth_frames_[idx] : std::vector<TruthBox>{};
    }

private:
    std::ifstream video_;
    DcvReader reader_;
    std::optional<std::ifstream> pristine_file_;
    std::optional<DcvReader> pristine_reader_;
    ImageRgb pristine_;
    std::vector<std::vector<TruthBox>> truth_frames_;
    TelemetryTrack track_;
    CameraIntrinsics camera_;
    int next_ = 0;
};

struct EncodeArgs {
    std::string video, telemetry, out;
    std::string method = "dcc";
    std::string config, table, pristine, truth;
};

Method parse_method(const std::string& m) {
    if (m == "baseline") return Method::baseline;
    if (m == "dcc-r") return Method::dcc_r;
    if (m == "dcc-rm") return Method::dcc_rm;
    if (m == "dcc") return Method::dcc;
    throw InvalidArgument("unknown method: " + m + " (use baseline | dcc-r | dcc)");
}

int run_encode(const EncodeArgs& a) {
    PipelineOptions opt;
    if (!a.config.empty()) opt.tk = ToolkitConfig::load(a.config);
    FileSource src(a.video, a.telemetry, opt.tk.camera, a.pristine, a.truth);
    if (!a.table.empty()) {
        auto in = open_in(a.table);
        opt.table = load_table(in);
    } else {
        opt.table = ResolutionTable::default_for_base(src.height());
    }
    opt.keep_stream = true;
    opt.evaluate = src.has_truth(); // drives the feedback loop when possible

    const MethodRun run = run_pipeline(src, parse_method(a.method), opt);
    auto out = open_out(a.out);
    out.write(reinterpret_cast<const char*>(run.stream.data()),
              static_cast<std::streamsize>(run.stream.size()));
    std::cout << method_name(run.method) << ": " << run.frames.size() << " frames ("
              << run.i_frames << " I, " << run.p_frames << " P), " << run.container_bytes
              << " bytes, drone-side " << run.drone_seconds << " s\n";
    return 0;
}

// ---- decode ----

struct DecodeArgs {
    std::string in, out, metadata;
};

int run_decode(const DecodeArgs& a) {
    auto in = open_in(a.in);
    StreamReader reader(in);
    const StreamHeader h = reader.header();

    auto video = open_out(a.out);
    DcvHeader vh;
    vh.width = h.width;
    vh.height = h.height;
    vh.fps = h.fps;
    DcvWriter writer(video, vh);

    std::optional<std::ofstream> meta;
    if (!a.metadata.empty()) meta = open_out(a.metadata);

    Decoder dec(h.width, h.height);
    int count = 0;
    while (auto seg = reader.read_frame()) {
        const DecodedFrame f = dec.decode_frame(seg->bytes);
        writer.write_frame(reconstruct(f, h.width, h.height));
        if (meta) {
            *meta << "frame " << count << ": " << (f.meta.kind == FrameKind::I ? "I" : "P")
                  << " qp " << f.meta.qp_ropi << "/" << f.meta.qp_roni << " sky_rows "
                  << f.meta.sky_rows << (f.meta.sky_payload ? " (sky payload)" : "")
                  << " bytes " << seg->bytes.size() << "\n";
            for (const SliceCodeMeta& s : f.meta.slices)
                *meta << "  slice rows [" << s.row_start << "," << s.row_end << ") "
                      << class_name(s.res) << " " << s.out_w << "x" << s.out_h << " gm ("
                      << s.gm.d_w << "," << s.gm.d_l << ") ropi " << s.ropi.count() << "/"
                      << s.ropi.bits.size() << "\n";
        }
        ++count;
    }
    writer.finalize();
    std::cout << "decoded " << count << " frames to " << a.out << "\n";
    return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
    std::string decoded, pristine, truth, out;
    std::string method = "DCC";
    std::string stream, baseline_stream;
    std::uint64_t bytes = 0, baseline_bytes = 0;
    int window = 5;
    std::string config;
};

std::uint64_t file_size(const std::string& path) {
    auto in = open_in(path);
    in.seekg(0, std::ios::end);
    return static_cast<std::uint64_t>(in.tellg());
}

int run_evaluate(const EvaluateArgs& a) {
    ToolkitConfig tk;
    if (!a.config.empty()) tk = ToolkitConfig::load(a.config);

    auto dec_file = open_in(a.decoded);
    DcvReader dec_reader(dec_file);
    auto pris_file = open_in(a.pristine);
    DcvReader pris_reader(pris_file);
    auto gt = open_in(a.truth);
    const auto truth = read_truth(gt);

    const int w = dec_reader.header().width, h = dec_reader.header().height;
    std::vector<std::vector<TruthBox>> truth_eval(truth.size());
    for (std::size_t f = 0; f < truth.size(); ++f)
        for (const TruthBox& t : truth[f])
            if (t.minor_extent() >= tk.oracle.min_extent_px) truth_eval[f].push_back(t);

    DetectionAggregator agg(a.window, 0.35, w, h);
    std::vector<std::vector<DetectionBox>> finals;
    ImageRgb pristine;
    std::uint32_t i = 0;
    while (auto frame = dec_reader.read_frame()) {
        auto p = pris_reader.read_frame();
        if (!p) throw CorruptBitstream("pristine video ended early", 0);
        pristine = std::move(*p);
        OracleDetector oracle(
            [&](std::uint32_t f) {
                return f < truth.size() ? truth[f] : std::vector<TruthBox>{};
            },
            [&](std::uint32_t) { return &pristine; }, w, h, tk.oracle);
        finals.push_back(agg.push(i, oracle.detect(*frame, i)));
        ++i;
    }
    truth_eval.resize(std::max<std::size_t>(truth_eval.size(), finals.size()));

    EvalReport report = compute_metrics(finals, truth_eval);
    report.volume_bytes =
        a.bytes ? static_cast<double>(a.bytes)
                : (a.stream.empty() ? 0.0 : static_cast<double>(file_size(a.stream)));
    const double base_bytes =
        a.baseline_bytes
            ? static_cast<double>(a.baseline_bytes)
            : (a.baseline_stream.empty() ? 0.0
                                         : static_cast<double>(file_size(a.baseline_stream)));
    report.gamma = (base_bytes > 0 && report.volume_bytes > 0)
                       ? compression_gain(base_bytes, report.volume_bytes)
                       : 0.0;

    std::ostream* outp = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file = open_out(a.out);
        outp = &file;
    }
    *outp << "method,bytes,precision,recall,f1,gamma\n";
    outp->precision(6);
    *outp << a.method << "," << static_cast<std::uint64_t>(report.volume_bytes) << ","
          << report.precision << "," << report.recall << "," << report.f1 << ","
          << report.gamma << "\n";
    return 0;
}

// ---- train-table ----

struct TrainArgs {
    std::string samples, out;
};

int run_train(const TrainArgs& a) {
    auto in = open_in(a.samples);
    std::vector<TrainingSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        double extent = 0;
        char cls_buf[16] = {0};
        if (std::sscanf(line.c_str(), "%lf , %15s", &extent, cls_buf) != 2)
            throw ParseError("expected 'extent, class'", line_no);
        std::string cls(cls_buf);
        TrainingSample s;
        s.pixel_extent = extent;
        if (cls == "720p" || cls == "0") s.min_acceptable_class = ResolutionClass::r720;
        else if (cls == "1080p" || cls == "1") s.min_acceptable_class = ResolutionClass::r1080;
        else if (cls == "1440p" || cls == "2") s.min_acceptable_class = ResolutionClass::r1440;
        else if (cls == "2160p" || cls == "3") s.min_acceptable_class = ResolutionClass::r2160;
        else throw ParseError("unknown class '" + cls + "'", line_no);
        samples.push_back(s);
    }
    const TrainResult result = train_resolution_table(samples);
    auto out = open_out(a.out);
    save_table(result.table, out);
    std::cout << "thresholds: " << result.table.thresholds[0] << " "
              << result.table.thresholds[1] << " " << result.table.thresholds[2]
              << (result.warning ? " (warning: data not cleanly separable)" : "") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DCC drone-to-edge video compression toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "render a synthetic scene");
    simulate->add_option("--area", sim.area, "residence | local | highway");
    simulate->add_option("--altitude", sim.altitude, "meters, 20..200");
    simulate->add_option("--pitch", sim.pitch, "degrees, 0..90 (90 = nadir)");
    simulate->add_option("--speed", sim.speed, "drone speed m/s");
    simulate->add_option("--fps", sim.fps, "1, 2 or 5");
    simulate->add_option("--duration", sim.duration, "seconds");
    simulate->add_option("--vehicles", sim.vehicles, "moving vehicles");
    simulate->add_option("--parked", sim.parked, "parked vehicles");
    simulate->add_option("--vehicle-speed", sim.vehicle_speed, "m/s");
    simulate->add_option("--noise", sim.noise, "sensor noise sigma (levels)");
    simulate->add_option("--seed", sim.seed, "scene seed");
    simulate->add_option("--width", sim.width, "base width");
    simulate->add_option("--height", sim.height, "base height");
    simulate->add_flag("--full-4k", sim.full_4k, "paper-scale 3840x2160 base");
    simulate->add_flag("--pavement", sim.pavement, "pave the whole ground");
    simulate->add_option("--out", sim.out, "raw video .dcv")->required();
    simulate->add_option("--telemetry", sim.telemetry, "telemetry .tlm")->required();
    simulate->add_option("--truth", sim.truth, "ground truth .gt");
    simulate->add_option("--pristine", sim.pristine, "noise-free render .dcv");

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "encode raw video to a .dcc stream");
    encode->add_option("--video", enc.video, "input .dcv")->required();
    encode->add_option("--telemetry", enc.telemetry, "input .tlm")->required();
    encode->add_option("--method", enc.method, "baseline | dcc-r | dcc");
    encode->add_option("--out", enc.out, "output .dcc")->required();
    encode->add_option("--config", enc.config, "toolkit configuration file");
    encode->add_option("--table", enc.table, "resolution table .rtab");
    encode->add_option("--pristine", enc.pristine, "pristine .dcv (enables edge feedback)");
    encode->add_option("--truth", enc.truth, "ground truth .gt (enables edge feedback)");

    DecodeArgs dec;
    auto* decode = app.add_subcommand("decode", "decode and reconstruct a .dcc stream");
    decode->add_option("--in", dec.in, "input .dcc")->required();
    decode->add_option("--out", dec.out, "output reconstructed .dcv")->required();
    decode->add_option("--metadata", dec.metadata, "metadata dump file");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "detection metrics over decoded frames");
    evaluate->add_option("--decoded", ev.decoded, "reconstructed .dcv")->required();
    evaluate->add_option("--pristine", ev.pristine, "noise-free render .dcv")->required();
    evaluate->add_option("--truth", ev.truth, "ground truth .gt")->required();
    evaluate->add_option("--method", ev.method, "method label for the CSV");
    evaluate->add_option("--bytes", ev.bytes, "transmitted bytes");
    evaluate->add_option("--stream", ev.stream, ".dcc whose size is the volume");
    evaluate->add_option("--baseline-bytes", ev.baseline_bytes, "baseline bytes for gamma");
    evaluate->add_option("--baseline-stream", ev.baseline_stream, "baseline .dcc for gamma");
    evaluate->add_option("--window", ev.window, "detection window W");
    evaluate->add_option("--config", ev.config, "toolkit configuration file");
    evaluate->add_option("--out", ev.out, "CSV output (stdout when omitted)");

    TrainArgs tr;
    auto* train = app.add_subcommand("train-table", "fit resolution table thresholds");
    train->add_option("--samples", tr.samples, "CSV: extent, class")->required();
    train->add_option("--out", tr.out, "output .rtab")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*encode) return run_encode(enc);
        if (*decode) return run_decode(dec);
        if (*evaluate) return run_evaluate(ev);
        if (*train) return run_train(tr);
    } catch (const std::exception& e) {
        std::cerr << "dcc: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
