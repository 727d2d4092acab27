#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "noir/image.hpp"
#include "noir/signal.hpp"

namespace noir {

enum class TaskKind { Seg2d, MultiSeg2d, Complete2d, Translate2d };

TaskKind task_kind_from_string(const std::string& name);
std::string to_string(TaskKind kind);

enum class Split { Train, Val, Test };
std::string to_string(Split split);
Split split_from_string(const std::string& name);

// Synthetic paired-function dataset description. Everything is deterministic
// given the seed.
struct TaskSpec {
    TaskKind kind = TaskKind::Seg2d;
    int64_t resolution = 48;  // square grid
    int n_samples = 64;
    float noise_sigma = 0.01f;
    int shapes_min = 1;
    int shapes_max = 3;
    uint64_t seed = 0;
    std::array<float, 3> split_fractions = {0.8f, 0.1f, 0.1f};

    void validate() const;
    int n_target_classes() const;  // 0 for continuous targets
};

// Geometric primitives in normalized [-1,1] coordinates (y, x order to match
// image rows/cols).
struct Ellipse {
    float cy, cx, ry, rx, angle;
    bool contains(float y, float x) const;
};

struct Box {
    float cy, cx, hy, hx, angle;
    bool contains(float y, float x) const;
};

struct Shape {
    enum class Kind { Ellipse, Box } kind;
    Ellipse ellipse{};
    Box box{};
    int label = 1;
    bool contains(float y, float x) const;
};

// Hard indicator rasterization at cell centers; later shapes overwrite.
MaskImage rasterize_shapes(const std::vector<Shape>& shapes, int64_t rows, int64_t cols, int n_classes);

struct TaskSample {
    int id = 0;
    Split split = Split::Train;
    GrayImage input;
    GrayImage target_gray;  // translate2d
    MaskImage target_mask;  // seg2d / multiseg2d / complete2d
    bool target_categorical = true;
};

// Paired input/target samples with deterministic split tags. Split sizes are
// round(n * fraction) with the remainder assigned to train.
std::vector<TaskSample> generate(const TaskSpec& spec);

std::array<int, 3> split_sizes(int n, const std::array<float, 3>& fractions);

SignalSample input_signal(const TaskSample& sample);
SignalSample target_signal(const TaskSample& sample);
std::pair<SignalSample, SignalSample> as_signal_pair(const TaskSample& sample);

}  // namespace noir
