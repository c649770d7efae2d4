#pragma once

// Logarithmic Image Processing arithmetic.
//
// Grey values follow the transmittance convention: 0 is white (full
// transmission) and the upper bound M is black. Scalar functions take the
// scale explicitly; image functions use the scale carried by the image and
// refuse to mix images with different scales.

#include <span>

#include "asplund/grid.hpp"

namespace asplund {

/// Grey-scale configuration: the open upper bound M of the grey axis.
class LipScale {
public:
    static constexpr double kDefaultUpper = 256.0;

    LipScale() = default;
    explicit LipScale(double upper);

    double upper() const { return upper_; }

    bool operator==(const LipScale&) const = default;

private:
    double upper_ = kDefaultUpper;
};

enum class RangeMode {
    Image,             // values in [0, M[
    ExtendedFunction,  // values in ]-inf, M[
};

/// A 2-D field of finite grey values tagged with its scale and range mode.
class GreyImage {
public:
    GreyImage() = default;
    GreyImage(RealArray values, LipScale scale = {}, RangeMode mode = RangeMode::Image);

    /// Picks Image mode when every value is non-negative, ExtendedFunction otherwise.
    static GreyImage infer(RealArray values, LipScale scale = {});

    int width() const { return values_.width(); }
    int height() const { return values_.height(); }
    std::size_t size() const { return values_.size(); }
    double operator()(int x, int y) const { return values_(x, y); }

    const RealArray& values() const { return values_; }
    LipScale scale() const { return scale_; }
    double upper() const { return scale_.upper(); }
    RangeMode mode() const { return mode_; }

private:
    RealArray values_;
    LipScale scale_;
    RangeMode mode_ = RangeMode::Image;
};

// Scalar operations.

double lip_add(double f, double g, LipScale s = {});
double lip_neg(double f, LipScale s = {});
double lip_sub(double f, double g, LipScale s = {});
double lip_mul(double alpha, double f, LipScale s = {});
double complement(double f, LipScale s = {});

/// ln(1 - f/M). Lies in [-inf, 0] for f in [0, M]; f = M maps to -inf.
double tilde(double f, LipScale s = {});
/// ln(-ln(1 - f/M)). Requires 0 <= f <= M; f = 0 maps to -inf.
double hat(double f, LipScale s = {});
/// -M ln(1 - f/M): the order isomorphism carrying LIP addition to ordinary addition.
double xi(double f, LipScale s = {});
double xi_inv(double u, LipScale s = {});

/// Multiplicative contrast: the ratio gamma with gamma (x) g == f.
double contrast_mult(double f, double g, LipScale s = {});
/// Additive contrast: the constant gamma with gamma (+) g == f.
double contrast_add(double f, double g, LipScale s = {});

// Image operations.

GreyImage lip_add(const GreyImage& f, const GreyImage& g);
GreyImage lip_add(const GreyImage& f, double c);
GreyImage lip_neg(const GreyImage& f);
GreyImage lip_sub(const GreyImage& f, const GreyImage& g);
GreyImage lip_sub(const GreyImage& f, double c);
GreyImage lip_mul(double alpha, const GreyImage& f);
GreyImage complement(const GreyImage& f);

RealArray tilde(const GreyImage& f);
RealArray hat(const GreyImage& f);
RealArray xi(const GreyImage& f);
RealArray xi_inv(const RealArray& u, LipScale s = {});

RealArray contrast_mult(const GreyImage& f, const GreyImage& g);
RealArray contrast_add(const GreyImage& f, const GreyImage& g);

/// Clamp every value into [eps, M - eps] so the multiplicative transforms stay finite.
GreyImage clamp_positive(const GreyImage& f, double eps = 0.5);
/// Clip an extended function into the image range [0, M - eps].
GreyImage clip_to_image(const GreyImage& f, double eps = 0.5);

}  // namespace asplund
