#include "noir/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "noir/rng.hpp"

namespace noir {

TaskKind task_kind_from_string(const std::string& name) {
    if (name == "seg2d") return TaskKind::Seg2d;
    if (name == "multiseg2d") return TaskKind::MultiSeg2d;
    if (name == "complete2d") return TaskKind::Complete2d;
    if (name == "translate2d") return TaskKind::Translate2d;
    throw ConfigError("task: unknown kind '" + name +
                      "' (want seg2d, multiseg2d, complete2d or translate2d)");
}

std::string to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::Seg2d: return "seg2d";
        case TaskKind::MultiSeg2d: return "multiseg2d";
        case TaskKind::Complete2d: return "complete2d";
        case TaskKind::Translate2d: return "translate2d";
    }
    return "?";
}

std::string to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

Split split_from_string(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw ConfigError("split: unknown tag '" + name + "'");
}

void TaskSpec::validate() const {
    if (resolution < 8) throw ConfigError("task: resolution must be >= 8");
    if (n_samples < 1) throw ConfigError("task: n_samples must be >= 1");
    if (noise_sigma < 0.0f) throw ConfigError("task: noise sigma must be >= 0");
    if (shapes_min < 1 || shapes_max < shapes_min) {
        throw ConfigError("task: invalid shape-count range");
    }
    float total = split_fractions[0] + split_fractions[1] + split_fractions[2];
    if (std::fabs(total - 1.0f) > 1e-5f) {
        throw ConfigError("task: split fractions must sum to 1");
    }
}

int TaskSpec::n_target_classes() const {
    switch (kind) {
        case TaskKind::Seg2d: return 2;
        case TaskKind::MultiSeg2d: return 3;
        case TaskKind::Complete2d: return 2;
        case TaskKind::Translate2d: return 0;
    }
    return 0;
}

bool Ellipse::contains(float y, float x) const {
    float dy = y - cy, dx = x - cx;
    float ca = std::cos(angle), sa = std::sin(angle);
    float ry_ = ca * dy + sa * dx;
    float rx_ = -sa * dy + ca * dx;
    float a = ry_ / ry;
    float b = rx_ / rx;
    return a * a + b * b <= 1.0f;
}

bool Box::contains(float y, float x) const {
    float dy = y - cy, dx = x - cx;
    float ca = std::cos(angle), sa = std::sin(angle);
    float ry_ = ca * dy + sa * dx;
    float rx_ = -sa * dy + ca * dx;
    return std::fabs(ry_) <= hy && std::fabs(rx_) <= hx;
}

bool Shape::contains(float y, float x) const {
    return kind == Kind::Ellipse ? ellipse.contains(y, x) : box.contains(y, x);
}

MaskImage rasterize_shapes(const std::vector<Shape>& shapes, int64_t rows, int64_t cols, int n_classes) {
    MaskImage mask(rows, cols, n_classes);
    for (int64_t r = 0; r < rows; ++r) {
        float y = -1.0f + static_cast<float>(2 * r + 1) / static_cast<float>(rows);
        for (int64_t c = 0; c < cols; ++c) {
            float x = -1.0f + static_cast<float>(2 * c + 1) / static_cast<float>(cols);
            for (const Shape& s : shapes) {
                if (s.contains(y, x)) mask.at(r, c) = static_cast<uint8_t>(s.label);
            }
        }
    }
    return mask;
}

std::array<int, 3> split_sizes(int n, const std::array<float, 3>& fractions) {
    std::array<int, 3> sizes;
    for (int i = 0; i < 3; ++i) {
        sizes[static_cast<size_t>(i)] =
            static_cast<int>(std::lround(static_cast<double>(n) * fractions[static_cast<size_t>(i)]));
    }
    sizes[0] += n - (sizes[0] + sizes[1] + sizes[2]);  // remainder to train
    return sizes;
}

namespace {

struct Wave {
    float ky, kx, phase, amp;
};

struct Scene {
    float base = 0.4f;
    std::vector<Wave> waves;
    std::vector<Shape> shapes;
    std::vector<float> offsets;
    Box erase{};
};

float background(const Scene& sc, float y, float x) {
    float v = sc.base;
    for (const Wave& w : sc.waves) {
        v += w.amp * std::sin(3.14159265f * (w.ky * y + w.kx * x) + w.phase);
    }
    return v;
}

// 3x3 supersampled indicator coverage of shape s over pixel (r, c).
float coverage(const Shape& s, int64_t r, int64_t c, int64_t rows, int64_t cols) {
    int hit = 0;
    for (int i = 0; i < 3; ++i) {
        float y = -1.0f + 2.0f * (static_cast<float>(r) + (static_cast<float>(i) + 0.5f) / 3.0f) /
                              static_cast<float>(rows);
        for (int j = 0; j < 3; ++j) {
            float x = -1.0f + 2.0f * (static_cast<float>(c) + (static_cast<float>(j) + 0.5f) / 3.0f) /
                                  static_cast<float>(cols);
            hit += s.contains(y, x);
        }
    }
    return static_cast<float>(hit) / 9.0f;
}

Scene draw_scene(const TaskSpec& spec, Rng& rng) {
    Scene sc;
    sc.base = rng.uniform(0.25f, 0.5f);
    for (int i = 0; i < 3; ++i) {
        Wave w;
        w.amp = rng.uniform(0.04f, 0.1f);
        w.ky = rng.uniform(-1.5f, 1.5f);
        w.kx = rng.uniform(-1.5f, 1.5f);
        w.phase = rng.uniform(0.0f, 6.2831853f);
        sc.waves.push_back(w);
    }
    int count = spec.shapes_min + rng.below_int(spec.shapes_max - spec.shapes_min + 1);
    for (int i = 0; i < count; ++i) {
        Shape s;
        bool use_ellipse = rng.uniform() < 0.5f;
        if (use_ellipse) {
            s.kind = Shape::Kind::Ellipse;
            s.ellipse = {rng.uniform(-0.45f, 0.45f), rng.uniform(-0.45f, 0.45f),
                         rng.uniform(0.22f, 0.5f), rng.uniform(0.22f, 0.5f), rng.uniform(0.0f, 3.1415926f)};
            s.label = 1;
        } else {
            s.kind = Shape::Kind::Box;
            s.box = {rng.uniform(-0.45f, 0.45f), rng.uniform(-0.45f, 0.45f),
                     rng.uniform(0.18f, 0.42f), rng.uniform(0.18f, 0.42f), rng.uniform(0.0f, 3.1415926f)};
            s.label = spec.kind == TaskKind::MultiSeg2d ? 2 : 1;
        }
        sc.shapes.push_back(s);
        sc.offsets.push_back(rng.uniform(0.28f, 0.42f));
    }
    if (spec.kind == TaskKind::Complete2d) {
        sc.erase = {rng.uniform(-0.5f, 0.5f), rng.uniform(-0.5f, 0.5f), rng.uniform(0.15f, 0.35f),
                    rng.uniform(0.15f, 0.35f), 0.0f};
    }
    return sc;
}

GrayImage render_intensity(const TaskSpec& spec, const Scene& sc, Rng& rng) {
    const int64_t n = spec.resolution;
    GrayImage img(n, n);
    for (int64_t r = 0; r < n; ++r) {
        float y = -1.0f + static_cast<float>(2 * r + 1) / static_cast<float>(n);
        for (int64_t c = 0; c < n; ++c) {
            float x = -1.0f + static_cast<float>(2 * c + 1) / static_cast<float>(n);
            float v = background(sc, y, x);
            float bump = 0.0f;
            for (size_t s = 0; s < sc.shapes.size(); ++s) {
                bump = std::max(bump, sc.offsets[s] * coverage(sc.shapes[s], r, c, n, n));
            }
            v += bump;
            if (spec.noise_sigma > 0.0f) v += spec.noise_sigma * rng.normal();
            img.at(r, c) = std::clamp(v, 0.0f, 1.0f);
        }
    }
    return img;
}

GrayImage render_binary_input(const TaskSpec& spec, const Scene& sc, Rng& rng) {
    const int64_t n = spec.resolution;
    GrayImage img(n, n);
    for (int64_t r = 0; r < n; ++r) {
        float y = -1.0f + static_cast<float>(2 * r + 1) / static_cast<float>(n);
        for (int64_t c = 0; c < n; ++c) {
            float x = -1.0f + static_cast<float>(2 * c + 1) / static_cast<float>(n);
            bool inside = false;
            for (const Shape& s : sc.shapes) inside = inside || s.contains(y, x);
            if (inside && sc.erase.contains(y, x)) inside = false;  // damaged region
            float v = inside ? 1.0f : 0.0f;
            if (spec.noise_sigma > 0.0f) v += spec.noise_sigma * rng.normal();
            img.at(r, c) = std::clamp(v, 0.0f, 1.0f);
        }
    }
    return img;
}

}  // namespace

std::vector<TaskSample> generate(const TaskSpec& spec) {
    spec.validate();
    auto sizes = split_sizes(spec.n_samples, spec.split_fractions);
    std::vector<TaskSample> samples;
    samples.reserve(static_cast<size_t>(spec.n_samples));
    for (int id = 0; id < spec.n_samples; ++id) {
        Rng rng(seed_combine(spec.seed, static_cast<uint64_t>(id)));
        Scene sc = draw_scene(spec, rng);

        TaskSample s;
        s.id = id;
        s.split = id < sizes[0] ? Split::Train : (id < sizes[0] + sizes[1] ? Split::Val : Split::Test);

        switch (spec.kind) {
            case TaskKind::Seg2d:
            case TaskKind::MultiSeg2d:
                s.input = render_intensity(spec, sc, rng);
                s.target_mask = rasterize_shapes(sc.shapes, spec.resolution, spec.resolution,
                                                 spec.n_target_classes());
                s.target_categorical = true;
                break;
            case TaskKind::Complete2d:
                s.input = render_binary_input(spec, sc, rng);
                s.target_mask = rasterize_shapes(sc.shapes, spec.resolution, spec.resolution, 2);
                s.target_categorical = true;
                break;
            case TaskKind::Translate2d: {
                s.input = render_intensity(spec, sc, rng);
                GrayImage remapped(s.input.rows, s.input.cols);
                for (size_t i = 0; i < s.input.v.size(); ++i) {
                    remapped.v[i] = std::sqrt(s.input.v[i]);
                }
                s.target_gray = box_blur3(remapped);
                s.target_categorical = false;
                break;
            }
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

SignalSample input_signal(const TaskSample& sample) { return signal_from_gray(sample.input); }

SignalSample target_signal(const TaskSample& sample) {
    return sample.target_categorical ? signal_from_mask(sample.target_mask)
                                     : signal_from_gray(sample.target_gray);
}

std::pair<SignalSample, SignalSample> as_signal_pair(const TaskSample& sample) {
    return {input_signal(sample), target_signal(sample)};
}

}  // namespace noir
