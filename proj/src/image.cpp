#include "noir/image.hpp"

#include <algorithm>
#include <cmath>

namespace noir {

namespace {

void check_size(int64_t rows, int64_t cols, const char* what) {
    if (rows < 1 || cols < 1) throw ContractError(std::string(what) + ": target size must be >= 1");
}

// Overlap weights of destination cell i (of n_dst) against source cells, in
// units where the axis has length n_src.
struct AxisOverlap {
    int64_t first;
    std::vector<double> w;
};

AxisOverlap axis_overlap(int64_t n_src, int64_t n_dst, int64_t i) {
    const double scale = static_cast<double>(n_src) / static_cast<double>(n_dst);
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    AxisOverlap ov;
    ov.first = static_cast<int64_t>(std::floor(lo));
    int64_t last = static_cast<int64_t>(std::ceil(hi)) - 1;
    last = std::min(last, n_src - 1);
    for (int64_t s = ov.first; s <= last; ++s) {
        double cell_lo = std::max(lo, static_cast<double>(s));
        double cell_hi = std::min(hi, static_cast<double>(s + 1));
        ov.w.push_back(std::max(0.0, cell_hi - cell_lo));
    }
    return ov;
}

}  // namespace

GrayImage downsample_area(const GrayImage& src, int64_t rows, int64_t cols) {
    check_size(rows, cols, "downsample_area");
    GrayImage dst(rows, cols);
    const double inv_area = static_cast<double>(rows * cols) / static_cast<double>(src.rows * src.cols);
    for (int64_t r = 0; r < rows; ++r) {
        AxisOverlap ry = axis_overlap(src.rows, rows, r);
        for (int64_t c = 0; c < cols; ++c) {
            AxisOverlap rx = axis_overlap(src.cols, cols, c);
            double acc = 0.0;
            for (size_t a = 0; a < ry.w.size(); ++a) {
                for (size_t b = 0; b < rx.w.size(); ++b) {
                    acc += ry.w[a] * rx.w[b] *
                           src.at(ry.first + static_cast<int64_t>(a), rx.first + static_cast<int64_t>(b));
                }
            }
            dst.at(r, c) = static_cast<float>(acc * inv_area);
        }
    }
    return dst;
}

MaskImage downsample_nearest(const MaskImage& src, int64_t rows, int64_t cols) {
    check_size(rows, cols, "downsample_nearest");
    MaskImage dst(rows, cols, src.n_classes);
    for (int64_t r = 0; r < rows; ++r) {
        // destination cell center mapped into source index space
        int64_t sr = std::min(src.rows - 1, static_cast<int64_t>((r + 0.5) * src.rows / rows));
        for (int64_t c = 0; c < cols; ++c) {
            int64_t sc = std::min(src.cols - 1, static_cast<int64_t>((c + 0.5) * src.cols / cols));
            dst.at(r, c) = src.at(sr, sc);
        }
    }
    return dst;
}

GrayImage box_blur3(const GrayImage& src) {
    GrayImage dst(src.rows, src.cols);
    for (int64_t r = 0; r < src.rows; ++r) {
        for (int64_t c = 0; c < src.cols; ++c) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                int64_t rr = std::clamp<int64_t>(r + dr, 0, src.rows - 1);
                for (int dc = -1; dc <= 1; ++dc) {
                    int64_t cc = std::clamp<int64_t>(c + dc, 0, src.cols - 1);
                    acc += src.at(rr, cc);
                }
            }
            dst.at(r, c) = static_cast<float>(acc / 9.0);
        }
    }
    return dst;
}

}  // namespace noir
