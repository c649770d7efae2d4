#include "asplund/lip.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace asplund {

namespace {

void require(bool ok, const char* message)
{
    if (!ok) {
        throw Error(message);
    }
}

double checked(double v, const char* op)
{
    if (std::isnan(v)) {
        throw Error(std::string(op) + ": produced NaN");
    }
    return v;
}

void require_below_upper(double v, LipScale s, const char* op)
{
    if (!(v < s.upper())) {
        throw Error(std::string(op) + ": grey value must be < M");
    }
}

void require_same_scale(const GreyImage& f, const GreyImage& g)
{
    require(f.scale() == g.scale(), "LIP scale mismatch between images");
    require(f.values().same_shape(g.values()), "image shape mismatch");
}

template <typename Fn>
RealArray map_values(const RealArray& in, Fn fn)
{
    RealArray out(in.width(), in.height());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = fn(in[i]);
    }
    return out;
}

template <typename Fn>
RealArray zip_values(const RealArray& a, const RealArray& b, Fn fn)
{
    RealArray out(a.width(), a.height());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = fn(a[i], b[i]);
    }
    return out;
}

}  // namespace

LipScale::LipScale(double upper) : upper_(upper)
{
    require(std::isfinite(upper) && upper > 0.0, "LIP scale upper bound M must be a positive finite real");
}

GreyImage::GreyImage(RealArray values, LipScale scale, RangeMode mode)
    : values_(std::move(values)), scale_(scale), mode_(mode)
{
    const double m = scale_.upper();
    for (double v : values_.values()) {
        if (!std::isfinite(v)) {
            throw Error("grey image values must be finite");
        }
        if (!(v < m)) {
            throw Error("grey image values must be < M");
        }
        if (mode_ == RangeMode::Image && v < 0.0) {
            throw Error("image-mode grey values must be >= 0");
        }
    }
}

GreyImage GreyImage::infer(RealArray values, LipScale scale)
{
    const auto vals = values.values();
    const bool nonneg = std::all_of(vals.begin(), vals.end(), [](double v) { return v >= 0.0; });
    return GreyImage(std::move(values), scale, nonneg ? RangeMode::Image : RangeMode::ExtendedFunction);
}

double lip_add(double f, double g, LipScale s)
{
    require_below_upper(f, s, "lip_add");
    require_below_upper(g, s, "lip_add");
    return checked(f + g - f * g / s.upper(), "lip_add");
}

double lip_neg(double f, LipScale s)
{
    require_below_upper(f, s, "lip_neg");
    return checked(-f / (1.0 - f / s.upper()), "lip_neg");
}

double lip_sub(double f, double g, LipScale s)
{
    require_below_upper(f, s, "lip_sub");
    require_below_upper(g, s, "lip_sub");
    return checked((f - g) / (1.0 - g / s.upper()), "lip_sub");
}

double lip_mul(double alpha, double f, LipScale s)
{
    require(alpha > 0.0 && std::isfinite(alpha), "lip_mul: alpha must be a positive finite real");
    require_below_upper(f, s, "lip_mul");
    const double m = s.upper();
    return checked(m - m * std::pow(1.0 - f / m, alpha), "lip_mul");
}

double complement(double f, LipScale s)
{
    return s.upper() - f;
}

double tilde(double f, LipScale s)
{
    require(f <= s.upper(), "tilde: grey value must be <= M");
    return checked(std::log1p(-f / s.upper()), "tilde");
}

double hat(double f, LipScale s)
{
    require(f >= 0.0 && f <= s.upper(), "hat: grey value must lie in [0, M]");
    return checked(std::log(-std::log1p(-f / s.upper())), "hat");
}

double xi(double f, LipScale s)
{
    require(f <= s.upper(), "xi: grey value must be <= M");
    return checked(-s.upper() * std::log1p(-f / s.upper()), "xi");
}

double xi_inv(double u, LipScale s)
{
    require(!std::isnan(u), "xi_inv: NaN input");
    return checked(-s.upper() * std::expm1(-u / s.upper()), "xi_inv");
}

double contrast_mult(double f, double g, LipScale s)
{
    require(g > 0.0 && g < s.upper(), "contrast_mult: probe value must lie in ]0, M[");
    require(f >= 0.0 && f < s.upper(), "contrast_mult: image value must lie in [0, M[");
    return checked(std::log1p(-f / s.upper()) / std::log1p(-g / s.upper()), "contrast_mult");
}

double contrast_add(double f, double g, LipScale s)
{
    return lip_sub(f, g, s);
}

GreyImage lip_add(const GreyImage& f, const GreyImage& g)
{
    require_same_scale(f, g);
    const LipScale s = f.scale();
    auto out = zip_values(f.values(), g.values(), [s](double a, double b) { return lip_add(a, b, s); });
    const bool image = f.mode() == RangeMode::Image && g.mode() == RangeMode::Image;
    return GreyImage(std::move(out), s, image ? RangeMode::Image : RangeMode::ExtendedFunction);
}

GreyImage lip_add(const GreyImage& f, double c)
{
    const LipScale s = f.scale();
    auto out = map_values(f.values(), [s, c](double a) { return lip_add(a, c, s); });
    const bool image = f.mode() == RangeMode::Image && c >= 0.0;
    return GreyImage(std::move(out), s, image ? RangeMode::Image : RangeMode::ExtendedFunction);
}

GreyImage lip_neg(const GreyImage& f)
{
    const LipScale s = f.scale();
    return GreyImage(map_values(f.values(), [s](double a) { return lip_neg(a, s); }), s,
                     RangeMode::ExtendedFunction);
}

GreyImage lip_sub(const GreyImage& f, const GreyImage& g)
{
    require_same_scale(f, g);
    const LipScale s = f.scale();
    return GreyImage(zip_values(f.values(), g.values(), [s](double a, double b) { return lip_sub(a, b, s); }), s,
                     RangeMode::ExtendedFunction);
}

GreyImage lip_sub(const GreyImage& f, double c)
{
    const LipScale s = f.scale();
    return GreyImage(map_values(f.values(), [s, c](double a) { return lip_sub(a, c, s); }), s,
                     RangeMode::ExtendedFunction);
}

GreyImage lip_mul(double alpha, const GreyImage& f)
{
    const LipScale s = f.scale();
    return GreyImage(map_values(f.values(), [s, alpha](double a) { return lip_mul(alpha, a, s); }), s, f.mode());
}

GreyImage complement(const GreyImage& f)
{
    require(f.mode() == RangeMode::Image, "complement requires an image-mode input");
    const LipScale s = f.scale();
    // M - 0 == M falls outside the grey axis; callers clamp before complementing.
    for (double v : f.values().values()) {
        require(v > 0.0, "complement: zero-valued pixel would map onto M; clamp first");
    }
    return GreyImage(map_values(f.values(), [s](double a) { return complement(a, s); }), s, RangeMode::Image);
}

RealArray tilde(const GreyImage& f)
{
    const LipScale s = f.scale();
    return map_values(f.values(), [s](double a) { return tilde(a, s); });
}

RealArray hat(const GreyImage& f)
{
    const LipScale s = f.scale();
    return map_values(f.values(), [s](double a) { return hat(a, s); });
}

RealArray xi(const GreyImage& f)
{
    const LipScale s = f.scale();
    return map_values(f.values(), [s](double a) { return xi(a, s); });
}

RealArray xi_inv(const RealArray& u, LipScale s)
{
    return map_values(u, [s](double a) { return xi_inv(a, s); });
}

RealArray contrast_mult(const GreyImage& f, const GreyImage& g)
{
    require_same_scale(f, g);
    const LipScale s = f.scale();
    return zip_values(f.values(), g.values(), [s](double a, double b) { return contrast_mult(a, b, s); });
}

RealArray contrast_add(const GreyImage& f, const GreyImage& g)
{
    require_same_scale(f, g);
    const LipScale s = f.scale();
    return zip_values(f.values(), g.values(), [s](double a, double b) { return contrast_add(a, b, s); });
}

GreyImage clamp_positive(const GreyImage& f, double eps)
{
    const double m = f.upper();
    require(eps > 0.0 && 2.0 * eps < m, "clamp epsilon must lie in ]0, M/2[");
    return GreyImage(map_values(f.values(), [eps, m](double a) { return std::clamp(a, eps, m - eps); }), f.scale(),
                     RangeMode::Image);
}

GreyImage clip_to_image(const GreyImage& f, double eps)
{
    const double m = f.upper();
    require(eps >= 0.0 && eps < m, "clip epsilon must lie in [0, M[");
    return GreyImage(map_values(f.values(), [eps, m](double a) { return std::clamp(a, 0.0, m - eps); }), f.scale(),
                     RangeMode::Image);
}

}  // namespace asplund
