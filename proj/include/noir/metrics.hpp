#pragma once

#include "noir/image.hpp"

namespace noir {

// PSNR cap returned for an exact match (MSE = 0).
inline constexpr double kPsnrCap = 99.0;

// Dice coefficient for class k: 2|A∩B| / (|A|+|B|); 1 when both sides are
// empty. Throws ShapeError on mismatched sizes.
double dsc(const MaskImage& a, const MaskImage& b, int k);

// Intersection over union for class k; 1 when both sides are empty.
double iou(const MaskImage& a, const MaskImage& b, int k);

// 10*log10(max_val^2 / MSE); kPsnrCap when MSE = 0.
double psnr(const GrayImage& x, const GrayImage& y, double max_val = 1.0);

// Mean local SSIM, Gaussian window 11x11 (shrunk to fit small images),
// sigma 1.5, k1=0.01, k2=0.03, dynamic range 1.
double ssim(const GrayImage& x, const GrayImage& y);

}  // namespace noir
