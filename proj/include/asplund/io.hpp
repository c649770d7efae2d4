#pragma once

// File formats: PGM images, distance maps (raw f32, CSV, 16-bit PNG
// heatmap), float grey images and probe definitions.
//
// Raw layout (little-endian): "ASPM", u32 width, u32 height, u32 kind, then
// width * height f32 values in row-major order. kind is 0 for
// multiplicative maps, 1 for additive maps and 2 for grey images.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "asplund/distance_map.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace asplund {

enum class PgmEncoding { Ascii, Binary };  // P2, P5

GreyImage read_pgm(std::istream& in, LipScale scale = {});
GreyImage read_pgm(const std::filesystem::path& path, LipScale scale = {});
/// Values are rounded to the nearest integer and clipped to [0, 255].
void write_pgm(const GreyImage& img, std::ostream& out, PgmEncoding encoding = PgmEncoding::Binary);
void write_pgm(const GreyImage& img, const std::filesystem::path& path, PgmEncoding encoding = PgmEncoding::Binary);

/// Luminance of an 8-bit PNG (BT.601 weights for colour input).
GreyImage read_png_luminance(const std::filesystem::path& path, LipScale scale = {});

enum class MapFormat { F32Raw, Csv, Png16Heatmap };

inline constexpr std::uint32_t kRawGreyKind = 2;

struct RawArray {
    RealArray values;
    std::uint32_t kind = 0;
};

void write_raw(const RealArray& values, std::uint32_t kind, std::ostream& out);
RawArray read_raw(std::istream& in);
RawArray read_raw(const std::filesystem::path& path);

void write_map(const DistanceMap& map, std::ostream& out, MapFormat format);
void write_map(const DistanceMap& map, const std::filesystem::path& path, MapFormat format);
DistanceMap read_map(const std::filesystem::path& path);

void write_grey_raw(const GreyImage& img, const std::filesystem::path& path);

/// Dispatch on extension: .pgm, .png or .aspm (raw grey image).
GreyImage read_image(const std::filesystem::path& path, LipScale scale = {});
/// Dispatch on extension: .aspm keeps real values, anything else is written as PGM.
void write_image(const GreyImage& img, const std::filesystem::path& path);

/// 16-bit grayscale samples of a PNG file, row-major.
struct Png16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;
};
Png16 read_png16(const std::filesystem::path& path);

/// Probe text format: '#' comments, optional "M <upper>" line, then "dx dy value" lines.
ProbeFunction read_probe(std::istream& in);
ProbeFunction read_probe(const std::filesystem::path& path);
void write_probe(const ProbeFunction& probe, std::ostream& out);
void write_probe(const ProbeFunction& probe, const std::filesystem::path& path);

}  // namespace asplund
