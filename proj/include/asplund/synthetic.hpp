#pragma once

// Probe construction, lighting simulation and seeded synthetic inputs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asplund/detection.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace asplund {

struct DiskShape {
    int radius = 3;
};

struct RectShape {
    int width = 5;
    int height = 5;
};

/// A ring of grey value ring_value around a central disk of disk_value.
struct RingPlusDiskShape {
    int outer_radius = 15;
    int ring_width = 3;
    double ring_value = 18.0;
    int disk_radius = 2;
    double disk_value = 190.0;
};

using ProbeShape = std::variant<DiskShape, RectShape, RingPlusDiskShape>;

/// Offsets covered by a shape. For a ring-plus-disk this is the ring and the disk only.
std::vector<Offset> shape_offsets(const ProbeShape& shape);

/// Flat probe for disk/rect shapes; a ring-plus-disk carries its own two values and ignores value.
ProbeFunction make_probe(const ProbeShape& shape, double value, LipScale scale = {});

/// Probe sampled from an image around (x, y); every offset must fall inside the image.
ProbeFunction probe_from_image(const GreyImage& img, int x, int y, const ProbeShape& shape);

struct SyntheticSource {
    ProbeShape shape;
    double value = 128.0;
};
struct ImageSource {
    std::filesystem::path path;
    int x = 0;
    int y = 0;
    ProbeShape shape;
};
struct FileSource {
    std::filesystem::path path;
};

/// Parsed form of a textual probe description:
///   disk:r=7[,v=128]        rect:w=5,h=5[,v=128]
///   ring[:outer=15,width=3,ring=18,disk_r=2,disk=190]
///   image:path=img.pgm,x=10,y=20,shape=disk,r=7
///   file:path=probe.txt
struct ProbeSpec {
    std::variant<SyntheticSource, ImageSource, FileSource> source;
};

ProbeSpec parse_probe_spec(const std::string& text);
ProbeFunction build_probe(const ProbeSpec& spec, LipScale scale = {});

struct MulDarken {
    double alpha = 1.0;
};
struct AddDarken {
    double k = 0.0;
};
using LightingChange = std::variant<MulDarken, AddDarken>;

/// MulDarken: alpha (x) f, or (alpha (x) f^c)^c with complement_for_mul.
/// AddDarken: k (+) f, which may leave the image range.
GreyImage simulate_lighting(const GreyImage& f, const LightingChange& change, bool complement_for_mul);

struct NoisyPlane {
    GreyImage noisy;
    GreyImage plane;
};

/// A constant plane and a copy where round(density * n) pixels, picked by the
/// seeded generator, receive Gaussian noise; values are clamped to [0.5, M - 0.5].
NoisyPlane gen_noisy_plane(int width, int height, double plane_value, double density, double sigma,
                           std::uint64_t seed, LipScale scale = {});

enum class StampKind { Plain, MulDarkened, AddDarkened };

struct Stamp {
    PixelPos center;
    StampKind kind = StampKind::Plain;
    double amount = 1.0;  // alpha for MulDarkened (applied through complements), k for AddDarkened
};

struct SceneSpec {
    int width = 256;
    int height = 256;
    std::uint64_t seed = 1;
    double background_low = 70.0;
    double background_high = 150.0;
    double noise_sigma = 2.0;
    int blobs = 12;
    RingPlusDiskShape object;
    std::vector<Stamp> stamps;
};

/// Smooth textured background with copies of the ring-plus-disk object stamped in.
/// Darkened stamps darken the object's whole footprint disk.
GreyImage make_scene(const SceneSpec& spec, LipScale scale = {});

/// The reference four-stamp scene: two plain copies, one darkened by alpha = 5
/// through complements and one by k = (-)100.
SceneSpec reference_scene(std::uint64_t seed = 7);

/// A 1224x918 scene with twelve plain stamps, sized for timing the two map paths.
SceneSpec benchmark_scene(std::uint64_t seed = 108);

}  // namespace asplund
