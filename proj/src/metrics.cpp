#include "noir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace noir {

namespace {

void check_same_size(int64_t ar, int64_t ac, int64_t br, int64_t bc, const char* what) {
    if (ar != br || ac != bc) {
        throw ShapeError(std::string(what) + ": size mismatch " + std::to_string(ar) + "x" +
                         std::to_string(ac) + " vs " + std::to_string(br) + "x" + std::to_string(bc));
    }
}

}  // namespace

double dsc(const MaskImage& a, const MaskImage& b, int k) {
    check_same_size(a.rows, a.cols, b.rows, b.cols, "dsc");
    int64_t na = 0, nb = 0, inter = 0;
    for (size_t i = 0; i < a.v.size(); ++i) {
        bool ia = a.v[i] == k;
        bool ib = b.v[i] == k;
        na += ia;
        nb += ib;
        inter += ia && ib;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

double iou(const MaskImage& a, const MaskImage& b, int k) {
    check_same_size(a.rows, a.cols, b.rows, b.cols, "iou");
    int64_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.v.size(); ++i) {
        bool ia = a.v[i] == k;
        bool ib = b.v[i] == k;
        inter += ia && ib;
        uni += ia || ib;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double psnr(const GrayImage& x, const GrayImage& y, double max_val) {
    check_same_size(x.rows, x.cols, y.rows, y.cols, "psnr");
    double mse = 0.0;
    for (size_t i = 0; i < x.v.size(); ++i) {
        double d = static_cast<double>(x.v[i]) - y.v[i];
        mse += d * d;
    }
    mse /= static_cast<double>(x.v.size());
    if (mse == 0.0) return kPsnrCap;
    return 10.0 * std::log10(max_val * max_val / mse);
}

double ssim(const GrayImage& x, const GrayImage& y) {
    check_same_size(x.rows, x.cols, y.rows, y.cols, "ssim");
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    const double sigma = 1.5;

    int64_t win = std::min<int64_t>(11, std::min(x.rows, x.cols));
    if (win % 2 == 0) win -= 1;
    if (win < 1) throw ContractError("ssim: image too small");
    const int64_t half = win / 2;

    // normalized Gaussian window
    std::vector<double> w(static_cast<size_t>(win * win));
    double wsum = 0.0;
    for (int64_t i = 0; i < win; ++i) {
        for (int64_t j = 0; j < win; ++j) {
            double di = static_cast<double>(i - half);
            double dj = static_cast<double>(j - half);
            double g = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
            w[static_cast<size_t>(i * win + j)] = g;
            wsum += g;
        }
    }
    for (double& g : w) g /= wsum;

    // mean local SSIM over windows fully inside the image
    double total = 0.0;
    int64_t count = 0;
    for (int64_t r = half; r < x.rows - half; ++r) {
        for (int64_t c = half; c < x.cols - half; ++c) {
            double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
            for (int64_t i = 0; i < win; ++i) {
                for (int64_t j = 0; j < win; ++j) {
                    double wij = w[static_cast<size_t>(i * win + j)];
                    double xv = x.at(r + i - half, c + j - half);
                    double yv = y.at(r + i - half, c + j - half);
                    mx += wij * xv;
                    my += wij * yv;
                    mxx += wij * xv * xv;
                    myy += wij * yv * yv;
                    mxy += wij * xv * yv;
                }
            }
            double vx = mxx - mx * mx;
            double vy = myy - my * my;
            double cxy = mxy - mx * my;
            double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
            double den = (mx * mx + my * my + c1) * (vx + vy + c2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace noir
