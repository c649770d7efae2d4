#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "asplund/asplund_add.hpp"
#include "asplund/asplund_mult.hpp"
#include "asplund/detection.hpp"
#include "asplund/error.hpp"
#include "asplund/io.hpp"
#include "asplund/pipeline.hpp"
#include "asplund/synthetic.hpp"

namespace py = pybind11;
using namespace asplund;

namespace {

using Array2D = py::array_t<double, py::array::c_style | py::array::forcecast>;

RealArray to_grid(const Array2D& a)
{
    if (a.ndim() != 2) {
        throw Error("expected a 2-D array");
    }
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    return RealArray(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array2D to_numpy(const RealArray& g)
{
    Array2D out({g.height(), g.width()});
    std::memcpy(out.mutable_data(), g.data().data(), g.size() * sizeof(double));
    return out;
}

GreyImage to_image(const Array2D& a, double upper) { return GreyImage::infer(to_grid(a), LipScale(upper)); }

MapKind parse_metric(const std::string& name)
{
    if (name == "mult") {
        return MapKind::Multiplicative;
    }
    if (name == "add") {
        return MapKind::Additive;
    }
    throw Error("metric must be 'mult' or 'add'");
}

MapImpl parse_impl(const std::string& name)
{
    if (name == "direct") {
        return MapImpl::Direct;
    }
    if (name == "morpho") {
        return MapImpl::Morpho;
    }
    if (name == "flat") {
        return MapImpl::Flat;
    }
    throw Error("impl must be 'direct', 'morpho' or 'flat'");
}

ProbeFunction probe_from_arrays(const py::array_t<int, py::array::c_style | py::array::forcecast>& offsets,
                                const std::vector<double>& values, double upper)
{
    if (offsets.ndim() != 2 || offsets.shape(1) != 2) {
        throw Error("offsets must have shape (n, 2) holding (dx, dy)");
    }
    std::vector<Offset> support;
    for (py::ssize_t i = 0; i < offsets.shape(0); ++i) {
        support.push_back({offsets.at(i, 0), offsets.at(i, 1)});
    }
    return ProbeFunction(std::move(support), values, LipScale(upper));
}

}  // namespace

PYBIND11_MODULE(_asplund, m)
{
    m.doc() = "LIP Asplund distance maps and probe detection";

    py::register_exception<Error>(m, "AsplundError", PyExc_ValueError);

    m.def(
        "lip_add", [](double f, double g, double upper) { return lip_add(f, g, LipScale(upper)); }, py::arg("f"),
        py::arg("g"), py::arg("M") = LipScale::kDefaultUpper);
    m.def(
        "lip_neg", [](double f, double upper) { return lip_neg(f, LipScale(upper)); }, py::arg("f"),
        py::arg("M") = LipScale::kDefaultUpper);
    m.def(
        "lip_sub", [](double f, double g, double upper) { return lip_sub(f, g, LipScale(upper)); }, py::arg("f"),
        py::arg("g"), py::arg("M") = LipScale::kDefaultUpper);
    m.def(
        "lip_mul", [](double alpha, double f, double upper) { return lip_mul(alpha, f, LipScale(upper)); },
        py::arg("alpha"), py::arg("f"), py::arg("M") = LipScale::kDefaultUpper);

    m.def(
        "dist_mult",
        [](const std::vector<double>& f, const std::vector<double>& g, double p, double upper) {
            return dist_mult_tol(f, g, p, LipScale(upper));
        },
        py::arg("f"), py::arg("g"), py::arg("p") = 1.0, py::arg("M") = LipScale::kDefaultUpper,
        "Multiplicative distance between two equal-length samples.");
    m.def(
        "dist_add",
        [](const std::vector<double>& f, const std::vector<double>& g, double p, double upper) {
            return dist_add_tol(f, g, p, LipScale(upper));
        },
        py::arg("f"), py::arg("g"), py::arg("p") = 1.0, py::arg("M") = LipScale::kDefaultUpper,
        "Additive distance between two equal-length samples.");

    py::class_<ProbeFunction>(m, "Probe")
        .def(py::init(&probe_from_arrays), py::arg("offsets"), py::arg("values"),
             py::arg("M") = LipScale::kDefaultUpper)
        .def_static(
            "from_spec",
            [](const std::string& spec, double upper) { return build_probe(parse_probe_spec(spec), LipScale(upper)); },
            py::arg("spec"), py::arg("M") = LipScale::kDefaultUpper)
        .def_static(
            "from_file", [](const std::string& path) { return read_probe(std::filesystem::path(path)); },
            py::arg("path"))
        .def("save", [](const ProbeFunction& b, const std::string& path) { write_probe(b, std::filesystem::path(path)); })
        .def_property_readonly("offsets",
                               [](const ProbeFunction& b) {
                                   py::array_t<int> out({static_cast<py::ssize_t>(b.size()), py::ssize_t{2}});
                                   auto view = out.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < b.size(); ++i) {
                                       view(i, 0) = b.offset(i).dx;
                                       view(i, 1) = b.offset(i).dy;
                                   }
                                   return out;
                               })
        .def_property_readonly("values",
                               [](const ProbeFunction& b) {
                                   return std::vector<double>(b.values().begin(), b.values().end());
                               })
        .def_property_readonly("M", [](const ProbeFunction& b) { return b.scale().upper(); })
        .def_property_readonly("name", &ProbeFunction::name)
        .def_property_readonly("is_flat", &ProbeFunction::is_flat)
        .def("__len__", &ProbeFunction::size)
        .def("__repr__", [](const ProbeFunction& b) {
            return "<Probe '" + b.name() + "' with " + std::to_string(b.size()) + " offsets>";
        });

    m.def(
        "distance_map",
        [](const Array2D& image, const ProbeFunction& probe, const std::string& metric, const std::string& impl,
           double p, bool complement, double clamp) {
            RunConfig cfg;
            cfg.metric = parse_metric(metric);
            cfg.impl = parse_impl(impl);
            cfg.p = p;
            cfg.complement = complement;
            cfg.clamp_eps = clamp;
            const GreyImage f = to_image(image, probe.scale().upper());
            DistanceMap map;
            {
                py::gil_scoped_release release;
                map = compute_map(f, probe, cfg);
            }
            return to_numpy(map.values);
        },
        py::arg("image"), py::arg("probe"), py::arg("metric") = "mult", py::arg("impl") = "morpho",
        py::arg("p") = 1.0, py::arg("complement") = false, py::arg("clamp") = 0.5,
        "Per-pixel distance between the image and the probe. Image rows are the first axis.");

    m.def(
        "detect",
        [](const Array2D& values, const std::string& metric, double percentile, std::optional<double> h,
           std::size_t min_area, std::size_t max_area) {
            DistanceMap map;
            map.values = to_grid(values);
            map.kind = parse_metric(metric);
            DetectConfig cfg;
            cfg.percentile = percentile;
            cfg.h = h;
            cfg.min_area = min_area;
            cfg.max_area = max_area;
            py::list out;
            for (const Detection& d : detect(map, cfg)) {
                out.append(py::dict(py::arg("x") = d.position.x, py::arg("y") = d.position.y,
                                    py::arg("distance") = d.distance, py::arg("area") = d.area));
            }
            return out;
        },
        py::arg("map"), py::arg("metric") = "mult", py::arg("percentile") = 37.0, py::arg("h") = py::none(),
        py::arg("min_area") = 1, py::arg("max_area") = 400,
        "Detections sorted by ascending distance, each a dict with x, y, distance and area.");

    m.def(
        "bench",
        [](const Array2D& image, const ProbeFunction& probe, const std::string& metric, double p, int reps,
           std::uint64_t seed) {
            const GreyImage f = to_image(image, probe.scale().upper());
            BenchReport r;
            {
                py::gil_scoped_release release;
                r = bench(f, probe, parse_metric(metric), p, reps, seed);
            }
            return py::dict(py::arg("direct_seconds") = r.direct_seconds, py::arg("morpho_seconds") = r.morpho_seconds,
                            py::arg("gain") = r.gain, py::arg("max_difference") = r.max_difference,
                            py::arg("report") = format_report(r));
        },
        py::arg("image"), py::arg("probe"), py::arg("metric") = "mult", py::arg("p") = 1.0, py::arg("reps") = 3,
        py::arg("seed") = 0);

    m.def(
        "reference_scene", [](std::uint64_t seed) { return to_numpy(make_scene(reference_scene(seed)).values()); },
        py::arg("seed") = 7, "256x256 scene with two plain and two darkened ring-plus-disk objects.");
    m.def(
        "noisy_plane",
        [](int width, int height, double plane, double density, double sigma, std::uint64_t seed) {
            const NoisyPlane np = gen_noisy_plane(width, height, plane, density, sigma, seed);
            return py::make_tuple(to_numpy(np.noisy.values()), to_numpy(np.plane.values()));
        },
        py::arg("width"), py::arg("height"), py::arg("plane"), py::arg("density"), py::arg("sigma"),
        py::arg("seed"));
    m.def(
        "darken",
        [](const Array2D& image, std::optional<double> alpha, std::optional<double> k, bool complement, double upper) {
            if (alpha.has_value() == k.has_value()) {
                throw Error("pass exactly one of alpha or k");
            }
            const LightingChange change = alpha ? LightingChange{MulDarken{*alpha}} : LightingChange{AddDarken{*k}};
            return to_numpy(simulate_lighting(to_image(image, upper), change, complement).values());
        },
        py::arg("image"), py::arg("alpha") = py::none(), py::arg("k") = py::none(), py::arg("complement") = false,
        py::arg("M") = LipScale::kDefaultUpper);

    m.def(
        "read_image", [](const std::string& path) { return to_numpy(read_image(path).values()); }, py::arg("path"));
    m.def(
        "write_image",
        [](const Array2D& image, const std::string& path) { write_image(GreyImage::infer(to_grid(image)), path); },
        py::arg("image"), py::arg("path"));
}
