#include "asplund/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "asplund/io.hpp"

namespace asplund {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Fields = std::map<std::string, std::string>;

Fields parse_fields(const std::string& text)
{
    Fields fields;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error("probe spec: expected key=value, got '" + item + "'");
        }
        if (!fields.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
            throw Error("probe spec: duplicate key '" + item.substr(0, eq) + "'");
        }
        pos = comma + 1;
    }
    return fields;
}

class FieldReader {
public:
    explicit FieldReader(Fields fields) : fields_(std::move(fields)) {}

    double real(const std::string& key, double fallback)
    {
        const auto it = fields_.find(key);
        if (it == fields_.end()) {
            return fallback;
        }
        const std::string text = take(it);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size()) {
            throw Error("probe spec: '" + key + "' is not a number");
        }
        return v;
    }

    int integer(const std::string& key, int fallback)
    {
        const auto it = fields_.find(key);
        if (it == fields_.end()) {
            return fallback;
        }
        const std::string text = take(it);
        int v = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size()) {
            throw Error("probe spec: '" + key + "' is not an integer");
        }
        return v;
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const auto it = fields_.find(key);
        return it == fields_.end() ? fallback : take(it);
    }

    std::string required(const std::string& key)
    {
        const auto it = fields_.find(key);
        if (it == fields_.end()) {
            throw Error("probe spec: missing '" + key + "'");
        }
        return take(it);
    }

    void done() const
    {
        if (!fields_.empty()) {
            throw Error("probe spec: unknown key '" + fields_.begin()->first + "'");
        }
    }

private:
    std::string take(Fields::iterator it)
    {
        std::string v = it->second;
        fields_.erase(it);
        return v;
    }

    Fields fields_;
};

ProbeShape read_shape(const std::string& kind, FieldReader& in)
{
    if (kind == "disk") {
        return DiskShape{in.integer("r", 3)};
    }
    if (kind == "rect") {
        const int w = in.integer("w", 5);
        return RectShape{w, in.integer("h", w)};
    }
    if (kind == "ring") {
        RingPlusDiskShape ring;
        ring.outer_radius = in.integer("outer", ring.outer_radius);
        ring.ring_width = in.integer("width", ring.ring_width);
        ring.ring_value = in.real("ring", ring.ring_value);
        ring.disk_radius = in.integer("disk_r", ring.disk_radius);
        ring.disk_value = in.real("disk", ring.disk_value);
        return ring;
    }
    throw Error("probe spec: unknown shape '" + kind + "'");
}

void validate_shape(const ProbeShape& shape)
{
    std::visit(overloaded{
                   [](const DiskShape& d) {
                       if (d.radius < 0) {
                           throw Error("disk radius must be >= 0");
                       }
                   },
                   [](const RectShape& r) {
                       if (r.width <= 0 || r.height <= 0) {
                           throw Error("rect size must be positive");
                       }
                   },
                   [](const RingPlusDiskShape& r) {
                       if (r.outer_radius <= 0 || r.ring_width <= 0 || r.ring_width > r.outer_radius ||
                           r.disk_radius < 0 || r.disk_radius >= r.outer_radius - r.ring_width) {
                           throw Error("ring-plus-disk: need 0 <= disk_r < outer - width and 0 < width <= outer");
                       }
                   },
               },
               shape);
}

bool in_ring(const RingPlusDiskShape& r, const Offset& o)
{
    const int d2 = o.dx * o.dx + o.dy * o.dy;
    const int inner = r.outer_radius - r.ring_width;
    return d2 >= inner * inner && d2 <= r.outer_radius * r.outer_radius;
}

double ring_disk_value(const RingPlusDiskShape& r, const Offset& o)
{
    return in_ring(r, o) ? r.ring_value : r.disk_value;
}

// Smooth field in [0, 1] from a sum of random Gaussian bumps.
RealArray smooth_field(int width, int height, int bumps, std::mt19937_64& rng)
{
    RealArray field(width, height, 0.0);
    std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height), sigma(15.0, 45.0), amp(-1.0, 1.0);
    for (int b = 0; b < bumps; ++b) {
        const double cx = ux(rng), cy = uy(rng), s = sigma(rng), a = amp(rng);
        const double inv = 1.0 / (2.0 * s * s);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double dx = x - cx, dy = y - cy;
                field(x, y) += a * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    const auto vals = field.values();
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    for (double& v : field.values()) {
        v = range > 0.0 ? (v - lo) / range : 0.5;
    }
    return field;
}

}  // namespace

std::vector<Offset> shape_offsets(const ProbeShape& shape)
{
    validate_shape(shape);
    return std::visit(overloaded{
                          [](const DiskShape& d) { return disk_offsets(d.radius); },
                          [](const RectShape& r) { return rect_offsets(r.width, r.height); },
                          [](const RingPlusDiskShape& r) {
                              std::vector<Offset> out;
                              for (int dy = -r.outer_radius; dy <= r.outer_radius; ++dy) {
                                  for (int dx = -r.outer_radius; dx <= r.outer_radius; ++dx) {
                                      const Offset o{dx, dy};
                                      if (in_ring(r, o) || dx * dx + dy * dy <= r.disk_radius * r.disk_radius) {
                                          out.push_back(o);
                                      }
                                  }
                              }
                              return out;
                          },
                      },
                      shape);
}

ProbeFunction make_probe(const ProbeShape& shape, double value, LipScale scale)
{
    std::vector<Offset> offsets = shape_offsets(shape);
    ProbeFunction probe;
    if (const auto* ring = std::get_if<RingPlusDiskShape>(&shape)) {
        std::vector<double> values;
        values.reserve(offsets.size());
        for (const Offset& o : offsets) {
            values.push_back(ring_disk_value(*ring, o));
        }
        probe = ProbeFunction(std::move(offsets), std::move(values), scale);
        probe.set_name("ring");
    } else {
        probe = ProbeFunction::flat(std::move(offsets), value, scale);
        probe.set_name(std::holds_alternative<DiskShape>(shape) ? "disk" : "rect");
    }
    return probe;
}

ProbeFunction probe_from_image(const GreyImage& img, int x, int y, const ProbeShape& shape)
{
    std::vector<Offset> offsets = shape_offsets(shape);
    std::vector<double> values;
    values.reserve(offsets.size());
    for (const Offset& o : offsets) {
        const int sx = x + o.dx, sy = y + o.dy;
        if (!img.values().contains(sx, sy)) {
            throw Error("probe from image: support leaves the image");
        }
        values.push_back(img(sx, sy));
    }
    ProbeFunction probe(std::move(offsets), std::move(values), img.scale());
    probe.set_name("image@" + std::to_string(x) + "," + std::to_string(y));
    return probe;
}

ProbeSpec parse_probe_spec(const std::string& text)
{
    const std::size_t colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    FieldReader in(parse_fields(colon == std::string::npos ? std::string() : text.substr(colon + 1)));
    ProbeSpec spec;
    if (kind == "disk" || kind == "rect" || kind == "ring") {
        SyntheticSource src{read_shape(kind, in), in.real("v", 128.0)};
        spec.source = src;
    } else if (kind == "image") {
        ImageSource src;
        src.path = in.required("path");
        src.x = in.integer("x", 0);
        src.y = in.integer("y", 0);
        src.shape = read_shape(in.text("shape", "disk"), in);
        spec.source = src;
    } else if (kind == "file") {
        spec.source = FileSource{in.required("path")};
    } else {
        throw Error("probe spec: unknown kind '" + kind + "'");
    }
    in.done();
    return spec;
}

ProbeFunction build_probe(const ProbeSpec& spec, LipScale scale)
{
    return std::visit(overloaded{
                          [&](const SyntheticSource& s) { return make_probe(s.shape, s.value, scale); },
                          [&](const ImageSource& s) {
                              return probe_from_image(read_image(s.path, scale), s.x, s.y, s.shape);
                          },
                          [&](const FileSource& s) {
                              ProbeFunction probe = read_probe(s.path);
                              if (!(probe.scale() == scale)) {
                                  throw Error("probe file scale differs from the requested M");
                              }
                              return probe;
                          },
                      },
                      spec.source);
}

GreyImage simulate_lighting(const GreyImage& f, const LightingChange& change, bool complement_for_mul)
{
    const LipScale s = f.scale();
    const double m = s.upper();
    if (const auto* mul = std::get_if<MulDarken>(&change)) {
        const double alpha = mul->alpha;
        if (!(alpha > 0.0 && std::isfinite(alpha))) {
            throw Error("simulate_lighting: alpha must be a positive finite real");
        }
        if (!complement_for_mul) {
            return lip_mul(alpha, f);
        }
        if (f.mode() != RangeMode::Image) {
            throw Error("simulate_lighting: complement requires an image-mode input");
        }
        // (alpha (x) f^c)^c = M (f / M)^alpha, defined on all of [0, M[.
        RealArray out(f.width(), f.height());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = m * std::pow(f.values()[i] / m, alpha);
        }
        return GreyImage(std::move(out), s, RangeMode::Image);
    }
    const double k = std::get<AddDarken>(change).k;
    if (!(std::isfinite(k) && k < m)) {
        throw Error("simulate_lighting: k must be a finite real below M");
    }
    return lip_add(f, k);
}

NoisyPlane gen_noisy_plane(int width, int height, double plane_value, double density, double sigma,
                           std::uint64_t seed, LipScale scale)
{
    if (!(density >= 0.0 && density <= 1.0)) {
        throw Error("noise density must lie in [0, 1]");
    }
    if (!(sigma >= 0.0 && std::isfinite(sigma))) {
        throw Error("noise sigma must be a non-negative finite real");
    }
    const double m = scale.upper();
    const double eps = 0.5;
    const double base = std::clamp(plane_value, eps, m - eps);
    RealArray plane(width, height, base);
    RealArray noisy = plane;

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(plane.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto hit = static_cast<std::size_t>(std::lround(density * static_cast<double>(plane.size())));
    std::normal_distribution<double> noise(0.0, sigma);
    for (std::size_t i = 0; i < hit; ++i) {
        noisy[order[i]] = std::clamp(base + noise(rng), eps, m - eps);
    }
    return {GreyImage(std::move(noisy), scale), GreyImage(std::move(plane), scale)};
}

GreyImage make_scene(const SceneSpec& spec, LipScale scale)
{
    if (!(spec.background_low >= 0.0 && spec.background_low <= spec.background_high &&
          spec.background_high < scale.upper())) {
        throw Error("scene: background range must lie in [0, M[");
    }
    std::mt19937_64 rng(spec.seed);
    RealArray field = smooth_field(spec.width, spec.height, spec.blobs, rng);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);
    const double span = spec.background_high - spec.background_low;
    for (double& v : field.values()) {
        const double n = spec.noise_sigma > 0.0 ? noise(rng) : 0.0;
        v = std::clamp(spec.background_low + span * v + n, 0.0, scale.upper() - 1.0);
    }

    const RingPlusDiskShape& object = spec.object;
    const std::vector<Offset> support = shape_offsets(object);
    const std::vector<Offset> footprint = disk_offsets(object.outer_radius);
    const double m = scale.upper();
    for (const Stamp& stamp : spec.stamps) {
        for (const Offset& o : support) {
            const int x = stamp.center.x + o.dx, y = stamp.center.y + o.dy;
            if (field.contains(x, y)) {
                field(x, y) = ring_disk_value(object, o);
            }
        }
        if (stamp.kind == StampKind::Plain) {
            continue;
        }
        for (const Offset& o : footprint) {
            const int x = stamp.center.x + o.dx, y = stamp.center.y + o.dy;
            if (!field.contains(x, y)) {
                continue;
            }
            double& v = field(x, y);
            v = stamp.kind == StampKind::MulDarkened ? m * std::pow(v / m, stamp.amount)
                                                     : lip_add(stamp.amount, v, scale);
        }
    }
    return GreyImage::infer(std::move(field), scale);
}

SceneSpec reference_scene(std::uint64_t seed)
{
    SceneSpec spec;
    spec.seed = seed;
    spec.stamps = {
        {{60, 60}, StampKind::Plain, 1.0},
        {{190, 70}, StampKind::Plain, 1.0},
        {{70, 190}, StampKind::MulDarkened, 5.0},
        {{185, 185}, StampKind::AddDarkened, lip_neg(100.0)},
    };
    return spec;
}

SceneSpec benchmark_scene(std::uint64_t seed)
{
    SceneSpec spec;
    spec.width = 1224;
    spec.height = 918;
    spec.seed = seed;
    spec.blobs = 30;
    for (int i = 0; i < 12; ++i) {
        spec.stamps.push_back({{60 + 100 * i, 150 + 50 * (i % 4)}, StampKind::Plain, 1.0});
    }
    return spec;
}

}  // namespace asplund
