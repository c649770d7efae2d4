#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "asplund/detection.hpp"
#include "asplund/error.hpp"
#include "asplund/io.hpp"
#include "asplund/pipeline.hpp"
#include "asplund/synthetic.hpp"

namespace fs = std::filesystem;
using namespace asplund;

namespace {

struct MapOptions {
    std::string input;
    std::string probe = "ring";
    MapKind metric = MapKind::Multiplicative;
    MapImpl impl = MapImpl::Morpho;
    double p = 1.0;
    bool complement = false;
    double upper = LipScale::kDefaultUpper;
    double clamp = 0.5;
};

struct OutputOptions {
    std::string out;
    MapFormat format = MapFormat::F32Raw;
};

const std::map<std::string, MapKind> kMetrics{{"mult", MapKind::Multiplicative}, {"add", MapKind::Additive}};
const std::map<std::string, MapImpl> kImpls{{"direct", MapImpl::Direct}, {"morpho", MapImpl::Morpho}, {"flat", MapImpl::Flat}};
const std::map<std::string, MapFormat> kFormats{
    {"raw", MapFormat::F32Raw}, {"csv", MapFormat::Csv}, {"png", MapFormat::Png16Heatmap}};
const std::map<std::string, DetectMethod> kMethods{
    {"both", DetectMethod::Both}, {"percentile", DetectMethod::PercentileThreshold}, {"hminima", DetectMethod::HMinima}};

void add_metric_flags(CLI::App* cmd, MapOptions& o)
{
    cmd->add_option("--probe", o.probe, "probe spec (disk:r=,v= | rect:w=,h=,v= | ring[...] | image:... | file:path=)")
        ->capture_default_str();
    cmd->add_option("--metric", o.metric, "distance metric")->transform(CLI::CheckedTransformer(kMetrics));
    cmd->add_option("--p", o.p, "tolerance: fraction of window samples kept")->capture_default_str();
    cmd->add_flag("--complement", o.complement, "process f^c against b^c (dark targets on a light background)");
    cmd->add_option("--M", o.upper, "upper bound of the grey axis")->capture_default_str();
    cmd->add_option("--clamp", o.clamp, "margin keeping values inside ]0, M[ for the multiplicative metric")
        ->capture_default_str();
}

void add_map_flags(CLI::App* cmd, MapOptions& o)
{
    cmd->add_option("input", o.input, "image (.pgm, .png or .aspm)")->required();
    add_metric_flags(cmd, o);
    cmd->add_option("--impl", o.impl, "map implementation")->transform(CLI::CheckedTransformer(kImpls));
}

RunConfig run_config(const MapOptions& o)
{
    RunConfig cfg;
    cfg.metric = o.metric;
    cfg.impl = o.impl;
    cfg.p = o.p;
    cfg.complement = o.complement;
    cfg.clamp_eps = o.clamp;
    return cfg;
}

DistanceMap compute(const MapOptions& o)
{
    const LipScale scale(o.upper);
    const GreyImage image = read_image(o.input, scale);
    const ProbeFunction probe = build_probe(parse_probe_spec(o.probe), scale);
    return compute_map(image, probe, run_config(o));
}

bool to_stdout(const std::string& out) { return out.empty() || out == "-"; }

void emit_map(const DistanceMap& map, const OutputOptions& out)
{
    if (!to_stdout(out.out)) {
        write_map(map, fs::path(out.out), out.format);
        return;
    }
    if (out.format == MapFormat::Png16Heatmap) {
        throw Error("png output needs --out <path>");
    }
    write_map(map, std::cout, out.format);
    std::cout.flush();
}

void emit_detections(const std::vector<Detection>& found, const std::string& out)
{
    std::ofstream file;
    if (!to_stdout(out)) {
        file.open(out, std::ios::binary);
        if (!file) {
            throw Error("cannot open " + out);
        }
    }
    std::ostream& sink = to_stdout(out) ? std::cout : file;
    sink << "x,y,distance,area\n";
    char line[96];
    for (const Detection& d : found) {
        std::snprintf(line, sizeof line, "%d,%d,%.9g,%zu\n", d.position.x, d.position.y, d.distance, d.area);
        sink << line;
    }
}

bool is_map_file(const std::string& path)
{
    const std::string ext = fs::path(path).extension().string();
    return (ext == ".aspm" || ext == ".raw") && read_raw(fs::path(path)).kind != kRawGreyKind;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Illumination-invariant probe matching with LIP Asplund distances"};
    app.require_subcommand(1);

    MapOptions map_opts;
    OutputOptions map_out;
    auto* map_cmd = app.add_subcommand("map", "compute a distance map");
    add_map_flags(map_cmd, map_opts);
    map_cmd->add_option("--out", map_out.out, "output path ('-' or absent: stdout)");
    map_cmd->add_option("--format", map_out.format, "map format")->transform(CLI::CheckedTransformer(kFormats));

    MapOptions det_opts;
    DetectConfig det_cfg;
    std::optional<double> det_h;
    std::string det_out;
    auto* det_cmd = app.add_subcommand("detect", "locate probe matches in an image or a precomputed map");
    det_cmd->set_help_flag("--help", "Print this help message and exit");
    add_map_flags(det_cmd, det_opts);
    det_cmd->add_option("--percentile", det_cfg.percentile, "percentile threshold")->capture_default_str();
    det_cmd->add_option("--h", det_h, "minimum depth of a retained minimum (default depends on the metric)");
    det_cmd->add_option("--min-area", det_cfg.min_area, "smallest accepted region")->capture_default_str();
    det_cmd->add_option("--max-area", det_cfg.max_area, "largest accepted region")->capture_default_str();
    det_cmd->add_option("--method", det_cfg.method, "region extraction")->transform(CLI::CheckedTransformer(kMethods));
    det_cmd->add_option("--out", det_out, "detections as CSV ('-' or absent: stdout)");

    MapOptions bench_opts;
    bench_opts.input.clear();
    int reps = 3;
    std::uint64_t bench_seed = 108;
    auto* bench_cmd = app.add_subcommand("bench", "time the direct and morphological paths");
    bench_cmd->add_option("input", bench_opts.input, "image; absent: a generated 1224x918 scene");
    add_metric_flags(bench_cmd, bench_opts);
    bench_cmd->add_option("--reps", reps, "timed repetitions per path")->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "seed of the generated scene")->capture_default_str();

    auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic inputs");
    sim_cmd->require_subcommand(1);
    double sim_upper = LipScale::kDefaultUpper;
    std::string sim_out;
    std::uint64_t sim_seed = 7;

    auto* scene_cmd = sim_cmd->add_subcommand("scene", "textured scene with stamped ring-plus-disk objects");
    std::string scene_preset = "reference";
    scene_cmd->add_option("--preset", scene_preset, "reference (256x256, four stamps) or benchmark (1224x918)")
        ->check(CLI::IsMember({"reference", "benchmark"}))
        ->capture_default_str();

    auto* noise_cmd = sim_cmd->add_subcommand("noise", "constant plane with sparse Gaussian noise");
    int noise_w = 50, noise_h = 50;
    double plane = 100.0, density = 0.08, sigma = 2.2360679774997898;
    std::string plane_out;
    noise_cmd->add_option("--width", noise_w)->capture_default_str();
    noise_cmd->add_option("--height", noise_h)->capture_default_str();
    noise_cmd->add_option("--plane", plane, "plane grey value")->capture_default_str();
    noise_cmd->add_option("--density", density, "fraction of perturbed pixels")->capture_default_str();
    noise_cmd->add_option("--sigma", sigma, "noise standard deviation")->capture_default_str();
    noise_cmd->add_option("--plane-out", plane_out, "also write the noiseless plane");

    auto* light_cmd = sim_cmd->add_subcommand("lighting", "darken an image by LIP multiplication or addition");
    std::string light_in;
    std::optional<double> alpha, shift;
    bool light_complement = false;
    light_cmd->add_option("input", light_in, "image")->required();
    auto* mul_opt = light_cmd->add_option("--mul", alpha, "multiplicative factor alpha");
    auto* add_opt = light_cmd->add_option("--add", shift, "additive constant k");
    mul_opt->excludes(add_opt);
    light_cmd->add_flag("--complement", light_complement, "apply the factor through complements");

    for (auto* cmd : {scene_cmd, noise_cmd, light_cmd}) {
        cmd->add_option("--out", sim_out, "output image (.pgm or .aspm for real values)")->required();
        cmd->add_option("--M", sim_upper, "upper bound of the grey axis")->capture_default_str();
    }
    for (auto* cmd : {scene_cmd, noise_cmd}) {
        cmd->add_option("--seed", sim_seed, "generator seed")->capture_default_str();
    }

    std::string probe_spec;
    std::string probe_out;
    double probe_upper = LipScale::kDefaultUpper;
    auto* probe_cmd = app.add_subcommand("probe", "materialise a probe spec as a probe file");
    probe_cmd->add_option("spec", probe_spec, "probe spec")->required();
    probe_cmd->add_option("--M", probe_upper, "upper bound of the grey axis")->capture_default_str();
    probe_cmd->add_option("--out", probe_out, "probe file ('-' or absent: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*map_cmd) {
            emit_map(compute(map_opts), map_out);
        } else if (*det_cmd) {
            det_cfg.h = det_h;
            const DistanceMap map = is_map_file(det_opts.input) ? read_map(det_opts.input) : compute(det_opts);
            emit_detections(detect(map, det_cfg), det_out);
        } else if (*bench_cmd) {
            const LipScale scale(bench_opts.upper);
            const GreyImage image = bench_opts.input.empty()
                                        ? clip_to_image(make_scene(benchmark_scene(bench_seed), scale), 0.0)
                                        : read_image(bench_opts.input, scale);
            ProbeFunction probe = build_probe(parse_probe_spec(bench_opts.probe), scale);
            GreyImage subject = image;
            if (bench_opts.complement) {
                PreparedInput prepared = prepare_input(image, probe, run_config(bench_opts));
                subject = std::move(prepared.image);
                probe = std::move(prepared.probe);
            }
            const BenchReport report =
                bench(subject, probe, bench_opts.metric, bench_opts.p, reps, bench_seed, bench_opts.clamp);
            std::cout << format_report(report) << '\n';
        } else if (*sim_cmd) {
            const LipScale scale(sim_upper);
            if (*scene_cmd) {
                const SceneSpec spec = scene_preset == "benchmark" ? benchmark_scene(sim_seed) : reference_scene(sim_seed);
                write_image(make_scene(spec, scale), sim_out);
            } else if (*noise_cmd) {
                const NoisyPlane planes = gen_noisy_plane(noise_w, noise_h, plane, density, sigma, sim_seed, scale);
                write_image(planes.noisy, sim_out);
                if (!plane_out.empty()) {
                    write_image(planes.plane, plane_out);
                }
            } else {
                if (!alpha && !shift) {
                    throw Error("lighting needs --mul or --add");
                }
                const GreyImage f = read_image(light_in, scale);
                const LightingChange change = alpha ? LightingChange{MulDarken{*alpha}} : LightingChange{AddDarken{*shift}};
                write_image(simulate_lighting(f, change, light_complement), sim_out);
            }
        } else if (*probe_cmd) {
            const ProbeFunction probe = build_probe(parse_probe_spec(probe_spec), LipScale(probe_upper));
            if (to_stdout(probe_out)) {
                write_probe(probe, std::cout);
            } else {
                write_probe(probe, fs::path(probe_out));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "asplund: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
