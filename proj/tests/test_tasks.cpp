#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "noir/metrics.hpp"
#include "noir/pgm.hpp"
#include "noir/rng.hpp"
#include "noir/tasks.hpp"
#include "oracle_helpers.hpp"

using namespace noir;

namespace {

MaskImage random_mask(int64_t rows, int64_t cols, int n_classes, Rng& rng) {
    MaskImage m(rows, cols, n_classes);
    for (auto& v : m.v) v = static_cast<uint8_t>(rng.below(static_cast<uint32_t>(n_classes)));
    return m;
}

GrayImage random_gray(int64_t rows, int64_t cols, Rng& rng) {
    GrayImage g(rows, cols);
    for (auto& v : g.v) v = rng.uniform();
    return g;
}

// Per-pixel counting oracle for overlap metrics.
void count_overlap(const MaskImage& a, const MaskImage& b, int k, int64_t& na, int64_t& nb, int64_t& inter,
                   int64_t& uni) {
    na = nb = inter = uni = 0;
    for (int64_t r = 0; r < a.rows; ++r) {
        for (int64_t c = 0; c < a.cols; ++c) {
            bool ia = a.at(r, c) == k, ib = b.at(r, c) == k;
            na += ia;
            nb += ib;
            inter += ia && ib;
            uni += ia || ib;
        }
    }
}

// independent SSIM recomputation: same constants, two-pass window statistics
double ssim_oracle(const GrayImage& x, const GrayImage& y) {
    const double c1 = 1e-4, c2 = 9e-4, sigma = 1.5;
    int64_t win = std::min<int64_t>(11, std::min(x.rows, x.cols));
    if (win % 2 == 0) win -= 1;
    int64_t half = win / 2;
    std::vector<double> w;
    double wsum = 0;
    for (int64_t i = -half; i <= half; ++i)
        for (int64_t j = -half; j <= half; ++j) {
            w.push_back(std::exp(-(double(i) * i + double(j) * j) / (2 * sigma * sigma)));
            wsum += w.back();
        }
    for (double& g : w) g /= wsum;
    double total = 0;
    int64_t count = 0;
    for (int64_t r = half; r < x.rows - half; ++r) {
        for (int64_t c = half; c < x.cols - half; ++c) {
            double mx = 0, my = 0;
            size_t idx = 0;
            for (int64_t i = -half; i <= half; ++i)
                for (int64_t j = -half; j <= half; ++j, ++idx) {
                    mx += w[idx] * x.at(r + i, c + j);
                    my += w[idx] * y.at(r + i, c + j);
                }
            double vx = 0, vy = 0, cxy = 0;
            idx = 0;
            for (int64_t i = -half; i <= half; ++i)
                for (int64_t j = -half; j <= half; ++j, ++idx) {
                    double dx = x.at(r + i, c + j) - mx;
                    double dy = y.at(r + i, c + j) - my;
                    vx += w[idx] * dx * dx;
                    vy += w[idx] * dy * dy;
                    cxy += w[idx] * dx * dy;
                }
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / double(count);
}

std::filesystem::path temp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "noir_test_tasks";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("dsc and iou: identity, disjoint, analytic overlap") {
    MaskImage a(4, 4, 2), b(4, 4, 2);
    // |A| = 4, |B| = 4, overlap 2
    a.at(0, 0) = a.at(0, 1) = a.at(0, 2) = a.at(0, 3) = 1;
    b.at(0, 2) = b.at(0, 3) = b.at(1, 0) = b.at(1, 1) = 1;
    CHECK(dsc(a, b, 1) == doctest::Approx(0.5));
    CHECK(iou(a, b, 1) == doctest::Approx(2.0 / 6.0));

    CHECK(dsc(a, a, 1) == 1.0);
    CHECK(iou(a, a, 1) == 1.0);

    MaskImage c(4, 4, 2);
    c.at(3, 3) = 1;
    MaskImage d(4, 4, 2);
    d.at(0, 0) = 1;
    CHECK(dsc(c, d, 1) == 0.0);
    CHECK(iou(c, d, 1) == 0.0);

    // both empty -> perfect agreement
    MaskImage e(4, 4, 2), f(4, 4, 2);
    CHECK(dsc(e, f, 1) == 1.0);
    CHECK(iou(e, f, 1) == 1.0);

    MaskImage g(3, 4, 2);
    CHECK_THROWS_AS(dsc(a, g, 1), ShapeError);
    CHECK_THROWS_AS(iou(a, g, 1), ShapeError);
}

TEST_CASE("metrics agree with per-pixel oracles on 100 random instances") {
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        int64_t rows = 5 + rng.below_int(12);
        int64_t cols = 5 + rng.below_int(12);
        int n_classes = 2 + rng.below_int(3);
        MaskImage a = random_mask(rows, cols, n_classes, rng);
        MaskImage b = random_mask(rows, cols, n_classes, rng);
        for (int k = 0; k < n_classes; ++k) {
            int64_t na, nb, inter, uni;
            count_overlap(a, b, k, na, nb, inter, uni);
            double d_ref = (na + nb) == 0 ? 1.0 : 2.0 * inter / double(na + nb);
            double j_ref = uni == 0 ? 1.0 : inter / double(uni);
            CHECK(dsc(a, b, k) == d_ref);
            CHECK(iou(a, b, k) == j_ref);
            // algebraic identity D = 2J/(1+J) implies D >= J
            CHECK(dsc(a, b, k) >= iou(a, b, k));
        }
    }
}

TEST_CASE("psnr: cap, analytic value, formula oracle") {
    GrayImage x(8, 8), y(8, 8);
    for (size_t i = 0; i < x.v.size(); ++i) x.v[i] = y.v[i] = 0.25f + 0.01f * float(i % 7);
    CHECK(psnr(x, y) == kPsnrCap);

    // MSE = 0.01 -> 20 dB
    GrayImage z = x;
    for (auto& v : z.v) v += 0.1f;
    CHECK(psnr(x, z) == doctest::Approx(20.0).epsilon(1e-6));

    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        GrayImage p = random_gray(6, 7, rng), q = random_gray(6, 7, rng);
        double mse = 0;
        for (size_t i = 0; i < p.v.size(); ++i) {
            mse += (double(p.v[i]) - q.v[i]) * (double(p.v[i]) - q.v[i]);
        }
        mse /= double(p.v.size());
        CHECK(std::fabs(psnr(p, q) - 10.0 * std::log10(1.0 / mse)) < 1e-6);
    }
}

TEST_CASE("ssim: exact identity, constant-image analytic value, symmetry, oracle") {
    Rng rng(31);
    GrayImage x = random_gray(20, 20, rng);
    CHECK(ssim(x, x) == 1.0);

    // constant a vs constant b with zero variances
    const double a = 0.3, b = 0.7, c1 = 1e-4;
    GrayImage ca(16, 16, float(a)), cb(16, 16, float(b));
    double expected = (2 * a * b + c1) / (a * a + b * b + c1);
    CHECK(ssim(ca, cb) == doctest::Approx(expected).epsilon(1e-6));

    for (int trial = 0; trial < 20; ++trial) {
        GrayImage p = random_gray(14, 17, rng), q = random_gray(14, 17, rng);
        CHECK(ssim(p, q) == doctest::Approx(ssim(q, p)).epsilon(1e-12));
        CHECK(std::fabs(ssim(p, q) - ssim_oracle(p, q)) < 1e-6);
    }
}

TEST_CASE("pgm: roundtrip identity and exact header bytes") {
    Rng rng(77);
    GrayImage img = random_gray(9, 13, rng);
    // quantize first so the roundtrip is exact
    for (auto& v : img.v) v = std::round(v * 255.0f) / 255.0f;
    auto path = temp_file("roundtrip.pgm");
    write_pgm(path.string(), img);
    GrayImage back = read_pgm(path.string());
    CHECK(back.rows == img.rows);
    CHECK(back.cols == img.cols);
    CHECK(back.v == img.v);

    std::ifstream in(path, std::ios::binary);
    std::string header(11, '\0');
    in.read(header.data(), 11);
    CHECK(header == "P5\n13 9\n255");

    MaskImage mask = random_mask(6, 5, 3, rng);
    auto mpath = temp_file("mask.pgm");
    write_mask_pgm(mpath.string(), mask);
    MaskImage mback = read_mask_pgm(mpath.string(), 3);
    CHECK(mback.v == mask.v);
}

TEST_CASE("pgm: malformed magic reported with byte offset") {
    auto path = temp_file("bad.pgm");
    std::ofstream(path, std::ios::binary) << "P6\n2 2\n255\n....";
    try {
        read_pgm(path.string());
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
        CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }

    auto trunc = temp_file("trunc.pgm");
    std::ofstream(trunc, std::ios::binary) << "P5\n4 4\n255\nab";
    CHECK_THROWS_AS(read_pgm(trunc.string()), IoError);
}

TEST_CASE("generate: same spec twice is byte-identical") {
    TaskSpec spec;
    spec.kind = TaskKind::Seg2d;
    spec.resolution = 16;
    spec.n_samples = 10;
    spec.seed = 42;
    auto a = generate(spec);
    auto b = generate(spec);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].input.v == b[i].input.v);
        CHECK(a[i].target_mask.v == b[i].target_mask.v);
        CHECK(a[i].split == b[i].split);
    }
}

TEST_CASE("generate: centered ellipse target equals analytic indicator at cell centers") {
    // rasterization path vs direct indicator evaluation
    Shape s;
    s.kind = Shape::Kind::Ellipse;
    s.ellipse = {0.0f, 0.0f, 0.6f, 0.35f, 0.0f};
    s.label = 1;
    const int64_t n = 24;
    MaskImage mask = rasterize_shapes({s}, n, n, 2);
    for (int64_t r = 0; r < n; ++r) {
        float y = -1.0f + float(2 * r + 1) / float(n);
        for (int64_t c = 0; c < n; ++c) {
            float x = -1.0f + float(2 * c + 1) / float(n);
            float q = (y / 0.6f) * (y / 0.6f) + (x / 0.35f) * (x / 0.35f);
            CHECK(int(mask.at(r, c)) == (q <= 1.0f ? 1 : 0));
        }
    }
    // a noise-free single-shape seg2d target goes through the same rasterizer
    TaskSpec spec;
    spec.kind = TaskKind::Seg2d;
    spec.resolution = 16;
    spec.n_samples = 2;
    spec.noise_sigma = 0.0f;
    spec.shapes_min = spec.shapes_max = 1;
    for (const auto& sample : generate(spec)) {
        int64_t on = 0;
        for (auto v : sample.target_mask.v) on += v;
        CHECK(on > 0);  // one shape always rasterizes to a nonempty mask
    }
}

TEST_CASE("generate: split sizes follow round-with-remainder-to-train") {
    CHECK(split_sizes(320, {0.8f, 0.1f, 0.1f}) == std::array<int, 3>{256, 32, 32});
    CHECK(split_sizes(10, {0.8f, 0.1f, 0.1f}) == std::array<int, 3>{8, 1, 1});
    CHECK(split_sizes(7, {0.7f, 0.15f, 0.15f}) == std::array<int, 3>{5, 1, 1});

    TaskSpec spec;
    spec.resolution = 8;
    spec.n_samples = 10;
    auto samples = generate(spec);
    int tr = 0, va = 0, te = 0;
    for (const auto& s : samples) {
        tr += s.split == Split::Train;
        va += s.split == Split::Val;
        te += s.split == Split::Test;
    }
    CHECK(tr == 8);
    CHECK(va == 1);
    CHECK(te == 1);
}

TEST_CASE("generate: inputs and targets share resolution and aligned coordinates") {
    for (TaskKind kind : {TaskKind::Seg2d, TaskKind::MultiSeg2d, TaskKind::Complete2d, TaskKind::Translate2d}) {
        TaskSpec spec;
        spec.kind = kind;
        spec.resolution = 12;
        spec.n_samples = 3;
        spec.seed = 5;
        for (const auto& sample : generate(spec)) {
            auto [in, tgt] = as_signal_pair(sample);
            CHECK(in.native_resolution == tgt.native_resolution);
            CHECK(in.coords.data == tgt.coords.data);
            CHECK(in.n_points() == 12 * 12);
            for (float v : in.coords.data) {
                CHECK(v >= -1.0f);
                CHECK(v <= 1.0f);
            }
            if (kind == TaskKind::Translate2d) {
                CHECK(!tgt.categorical);
                CHECK(tgt.channels() == 1);
            } else {
                CHECK(tgt.categorical);
                CHECK(tgt.channels() == (kind == TaskKind::MultiSeg2d ? 3 : 2));
                // one-hot rows
                for (int64_t p = 0; p < tgt.n_points(); ++p) {
                    float row_sum = 0;
                    for (int64_t c = 0; c < tgt.channels(); ++c) row_sum += tgt.values.at(p, c);
                    CHECK(row_sum == 1.0f);
                }
            }
        }
    }
}

TEST_CASE("generate: unknown kind and bad spec rejected") {
    CHECK_THROWS_AS(task_kind_from_string("fooo"), ConfigError);
    TaskSpec spec;
    spec.resolution = 4;
    CHECK_THROWS_AS(generate(spec), ConfigError);
    TaskSpec spec2;
    spec2.split_fractions = {0.5f, 0.1f, 0.1f};
    CHECK_THROWS_AS(generate(spec2), ConfigError);
}

TEST_CASE("downsample: area average preserves constants, nearest preserves labels") {
    GrayImage g(8, 8, 0.37f);
    GrayImage d = downsample_area(g, 4, 4);
    for (float v : d.v) CHECK(v == doctest::Approx(0.37f));

    // 2x2 block means for even division
    GrayImage ramp(4, 4);
    for (int64_t r = 0; r < 4; ++r)
        for (int64_t c = 0; c < 4; ++c) ramp.at(r, c) = float(r * 4 + c);
    GrayImage half = downsample_area(ramp, 2, 2);
    CHECK(half.at(0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0f));
    CHECK(half.at(1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0f));

    MaskImage m(6, 6, 3);
    m.at(0, 0) = 1;
    m.at(5, 5) = 2;
    MaskImage mn = downsample_nearest(m, 3, 3);
    CHECK(mn.rows == 3);
    CHECK(int(mn.at(0, 0)) == int(m.at(1, 1)));
    CHECK(int(mn.at(2, 2)) == int(m.at(5, 5)));
}
