#include "asplund/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

namespace asplund {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::ifstream open_in(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string() + " for reading");
    }
    return in;
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ostream& out, const fs::path& path)
{
    out.flush();
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in)
{
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n' && c != '\r') {
                c = in.get();
            }
        } else if (std::isspace(c)) {
            if (!token.empty()) {
                return token;
            }
        } else {
            token.push_back(static_cast<char>(c));
        }
        c = in.get();
    }
    if (token.empty()) {
        throw Error("PGM: truncated header");
    }
    return token;
}

int pgm_int(std::istream& in, const char* what)
{
    const std::string token = pgm_token(in);
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) ||
        token.size() > 9) {
        throw Error(std::string("PGM: malformed ") + what);
    }
    return std::stoi(token);
}

std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
}

void put_u32(std::ostream& out, std::uint32_t v)
{
    const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in)
{
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw Error("raw: truncated header");
    }
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

std::string extension(const fs::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_c(const fs::path& path, const char* mode)
{
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw Error("cannot open " + path.string());
    }
    return f;
}

// libpng reports errors by longjmp; each stage below keeps only trivially
// destructible locals between setjmp and the libpng calls.

bool png_write_rows(png_structp png, png_infop info, std::FILE* file, int width, int height, png_byte** rows)
{
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

void write_png16(const fs::path& path, int width, int height, const std::vector<std::uint16_t>& samples)
{
    const std::size_t stride = static_cast<std::size_t>(width) * 2;
    std::vector<png_byte> bytes(stride * static_cast<std::size_t>(height));
    std::vector<png_byte*> rows(static_cast<std::size_t>(height));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        bytes[2 * i] = static_cast<png_byte>(samples[i] >> 8);
        bytes[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xff);
    }
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = bytes.data() + stride * static_cast<std::size_t>(y);
    }
    FilePtr file = open_c(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    const bool ok = info && png_write_rows(png, info, file.get(), width, height, rows.data());
    png_destroy_write_struct(&png, info ? &info : nullptr);
    if (!ok || std::fflush(file.get()) != 0) {
        throw Error("PNG: failed to write " + path.string());
    }
}

// Decoded PNG rows, expanded to 8 or 16 bits per channel, alpha stripped.
struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;
    int depth = 0;
    std::vector<png_byte> bytes;
};

struct PngLayout {
    png_uint_32 width;
    png_uint_32 height;
    int channels;
    int depth;
    std::size_t stride;
};

bool png_read_layout(png_structp png, png_infop info, std::FILE* file, PngLayout* layout)
{
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_init_io(png, file);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    layout->width = png_get_image_width(png, info);
    layout->height = png_get_image_height(png, info);
    layout->channels = png_get_channels(png, info);
    layout->depth = png_get_bit_depth(png, info);
    layout->stride = png_get_rowbytes(png, info);
    return true;
}

bool png_read_rows(png_structp png, png_byte** rows)
{
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

DecodedPng decode_png(const fs::path& path)
{
    FilePtr file = open_c(path, "rb");
    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw Error("PNG: bad signature in " + path.string());
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    PngLayout layout{};
    DecodedPng out;
    bool ok = info && png_read_layout(png, info, file.get(), &layout);
    if (ok) {
        out.width = static_cast<int>(layout.width);
        out.height = static_cast<int>(layout.height);
        out.channels = layout.channels;
        out.depth = layout.depth;
        out.bytes.resize(layout.stride * layout.height);
        std::vector<png_byte*> rows(layout.height);
        for (png_uint_32 y = 0; y < layout.height; ++y) {
            rows[y] = out.bytes.data() + layout.stride * y;
        }
        ok = png_read_rows(png, rows.data());
    }
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (!ok) {
        throw Error("PNG: failed to decode " + path.string());
    }
    return out;
}

}  // namespace

GreyImage read_pgm(std::istream& in, LipScale scale)
{
    char magic[2];
    if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
        throw Error("PGM: expected P2 or P5 magic");
    }
    const bool binary = magic[1] == '5';
    const int width = pgm_int(in, "width");
    const int height = pgm_int(in, "height");
    const int maxval = pgm_int(in, "maxval");
    if (width <= 0 || height <= 0) {
        throw Error("PGM: dimensions must be positive");
    }
    if (maxval != 255) {
        throw Error("PGM: only maxval 255 is supported");
    }
    RealArray values(width, height, 0.0);
    if (binary) {
        std::vector<unsigned char> bytes(values.size());
        if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
            throw Error("PGM: truncated pixel data");
        }
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            values[i] = bytes[i];
        }
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const int v = pgm_int(in, "sample");
            if (v > maxval) {
                throw Error("PGM: sample exceeds maxval");
            }
            values[i] = v;
        }
    }
    return GreyImage(std::move(values), scale, RangeMode::Image);
}

GreyImage read_pgm(const fs::path& path, LipScale scale)
{
    std::ifstream in = open_in(path);
    return read_pgm(in, scale);
}

void write_pgm(const GreyImage& img, std::ostream& out, PgmEncoding encoding)
{
    const bool binary = encoding == PgmEncoding::Binary;
    out << (binary ? "P5" : "P2") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
    const RealArray& values = img.values();
    if (binary) {
        std::vector<char> bytes(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            bytes[i] = static_cast<char>(to_byte(values[i]));
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        return;
    }
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out << (x ? " " : "") << static_cast<int>(to_byte(values(x, y)));
        }
        out << '\n';
    }
}

void write_pgm(const GreyImage& img, const fs::path& path, PgmEncoding encoding)
{
    std::ofstream out = open_out(path);
    write_pgm(img, out, encoding);
    finish(out, path);
}

GreyImage read_png_luminance(const fs::path& path, LipScale scale)
{
#ifdef ASPLUND_PNG_INGEST
    const DecodedPng png = decode_png(path);
    RealArray values(png.width, png.height, 0.0);
    const std::size_t bytes_per_sample = png.depth == 16 ? 2 : 1;
    const double to_8bit = png.depth == 16 ? 255.0 / 65535.0 : 1.0;
    auto sample = [&](std::size_t i) {
        const png_byte* p = png.bytes.data() + i * bytes_per_sample;
        const double raw = bytes_per_sample == 2 ? (p[0] << 8 | p[1]) : p[0];
        return raw * to_8bit;
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t base = i * static_cast<std::size_t>(png.channels);
        double v = 0.0;
        if (png.channels >= 3) {
            v = 0.299 * sample(base) + 0.587 * sample(base + 1) + 0.114 * sample(base + 2);
        } else {
            v = sample(base);
        }
        values[i] = std::clamp(v, 0.0, 255.0);
    }
    return GreyImage(std::move(values), scale, RangeMode::Image);
#else
    (void)scale;
    throw Error("PNG ingestion is disabled in this build: " + path.string());
#endif
}

void write_raw(const RealArray& values, std::uint32_t kind, std::ostream& out)
{
    out.write("ASPM", 4);
    put_u32(out, static_cast<std::uint32_t>(values.width()));
    put_u32(out, static_cast<std::uint32_t>(values.height()));
    put_u32(out, kind);
    std::vector<unsigned char> bytes(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
        for (int b = 0; b < 4; ++b) {
            bytes[4 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
        }
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

RawArray read_raw(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "ASPM", 4) != 0) {
        throw Error("raw: bad magic");
    }
    const std::uint32_t width = get_u32(in);
    const std::uint32_t height = get_u32(in);
    const std::uint32_t kind = get_u32(in);
    if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20)) {
        throw Error("raw: implausible dimensions");
    }
    RawArray out{RealArray(static_cast<int>(width), static_cast<int>(height), 0.0), kind};
    std::vector<unsigned char> bytes(out.values.size() * 4);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
        throw Error("raw: truncated data");
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
            bits |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
        }
        out.values[i] = std::bit_cast<float>(bits);
    }
    return out;
}

RawArray read_raw(const fs::path& path)
{
    std::ifstream in = open_in(path);
    return read_raw(in);
}

void write_map(const DistanceMap& map, std::ostream& out, MapFormat format)
{
    switch (format) {
    case MapFormat::F32Raw:
        write_raw(map.values, static_cast<std::uint32_t>(map.kind), out);
        return;
    case MapFormat::Csv: {
        char buf[32];
        for (int y = 0; y < map.height(); ++y) {
            for (int x = 0; x < map.width(); ++x) {
                std::snprintf(buf, sizeof buf, "%.9g", map(x, y));
                if (x) {
                    out << ',';
                }
                out << buf;
            }
            out << "\r\n";
        }
        return;
    }
    case MapFormat::Png16Heatmap:
        throw Error("PNG heatmaps are written to files only");
    }
}

void write_map(const DistanceMap& map, const fs::path& path, MapFormat format)
{
    if (format == MapFormat::Png16Heatmap) {
        const auto vals = map.values.values();
        for (double v : vals) {
            if (!std::isfinite(v)) {
                throw Error("heatmap: map values must be finite");
            }
        }
        const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
        const double range = *hi - *lo;
        std::vector<std::uint16_t> samples(vals.size(), 0);
        if (range > 0.0) {
            for (std::size_t i = 0; i < vals.size(); ++i) {
                samples[i] = static_cast<std::uint16_t>(std::lround((vals[i] - *lo) / range * 65535.0));
            }
        }
        write_png16(path, map.width(), map.height(), samples);
        return;
    }
    std::ofstream out = open_out(path);
    write_map(map, out, format);
    finish(out, path);
}

DistanceMap read_map(const fs::path& path)
{
    RawArray raw = read_raw(path);
    if (raw.kind > 1) {
        throw Error("raw: " + path.string() + " does not hold a distance map");
    }
    DistanceMap map;
    map.values = std::move(raw.values);
    map.kind = static_cast<MapKind>(raw.kind);
    return map;
}

void write_grey_raw(const GreyImage& img, const fs::path& path)
{
    std::ofstream out = open_out(path);
    write_raw(img.values(), kRawGreyKind, out);
    finish(out, path);
}

GreyImage read_image(const fs::path& path, LipScale scale)
{
    const std::string ext = extension(path);
    if (ext == ".png") {
        return read_png_luminance(path, scale);
    }
    if (ext == ".aspm" || ext == ".raw") {
        RawArray raw = read_raw(path);
        if (raw.kind != kRawGreyKind) {
            throw Error("raw: " + path.string() + " does not hold a grey image");
        }
        return GreyImage::infer(std::move(raw.values), scale);
    }
    return read_pgm(path, scale);
}

void write_image(const GreyImage& img, const fs::path& path)
{
    const std::string ext = extension(path);
    if (ext == ".aspm" || ext == ".raw") {
        write_grey_raw(img, path);
    } else {
        write_pgm(img, path);
    }
}

Png16 read_png16(const fs::path& path)
{
    const DecodedPng png = decode_png(path);
    if (png.channels != 1 || png.depth != 16) {
        throw Error("PNG: expected 16-bit grayscale");
    }
    Png16 out{png.width, png.height, {}};
    out.samples.resize(static_cast<std::size_t>(png.width) * png.height);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = static_cast<std::uint16_t>(png.bytes[2 * i] << 8 | png.bytes[2 * i + 1]);
    }
    return out;
}

ProbeFunction read_probe(std::istream& in)
{
    std::vector<Offset> offsets;
    std::vector<double> values;
    double upper = LipScale::kDefaultUpper;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (first == "M") {
            if (!(fields >> upper)) {
                throw Error("probe file: bad M on line " + std::to_string(line_no));
            }
            continue;
        }
        Offset o;
        double v = 0.0;
        std::istringstream head(first);
        if (!(head >> o.dx) || !(fields >> o.dy >> v)) {
            throw Error("probe file: expected 'dx dy value' on line " + std::to_string(line_no));
        }
        offsets.push_back(o);
        values.push_back(v);
    }
    if (offsets.empty()) {
        throw Error("probe file: no samples");
    }
    return ProbeFunction(std::move(offsets), std::move(values), LipScale(upper));
}

ProbeFunction read_probe(const fs::path& path)
{
    std::ifstream in = open_in(path);
    ProbeFunction probe = read_probe(in);
    probe.set_name(path.stem().string());
    return probe;
}

void write_probe(const ProbeFunction& probe, std::ostream& out)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "M %.17g\n", probe.scale().upper());
    out << buf;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", probe.offset(i).dx, probe.offset(i).dy, probe.value(i));
        out << buf;
    }
}

void write_probe(const ProbeFunction& probe, const fs::path& path)
{
    std::ofstream out = open_out(path);
    write_probe(probe, out);
    finish(out, path);
}

}  // namespace asplund
