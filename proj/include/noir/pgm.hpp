#pragma once

#include <string>

#include "noir/image.hpp"

namespace noir {

// Binary PGM (P5, maxval 255). Intensities are quantized as
// clamp(round(v*255)); masks store raw class indices. Readers throw IoError
// naming the byte offset of the first malformed element.
void write_pgm(const std::string& path, const GrayImage& img);
GrayImage read_pgm(const std::string& path);

void write_mask_pgm(const std::string& path, const MaskImage& mask);
MaskImage read_mask_pgm(const std::string& path, int n_classes);

}  // namespace noir
