#include "noir/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

namespace noir {

namespace {

struct RawPgm {
    int64_t width = 0;
    int64_t height = 0;
    std::vector<uint8_t> bytes;
};

void write_raw(const std::string& path, int64_t width, int64_t height, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("pgm: cannot open '" + path + "' for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("pgm: short write to '" + path + "'");
}

[[noreturn]] void parse_fail(const std::string& path, size_t offset, const std::string& what) {
    throw IoError("pgm: '" + path + "': " + what + " at byte offset " + std::to_string(offset));
}

RawPgm read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm: cannot open '" + path + "'");
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t pos = 0;

    auto skip_space = [&]() {
        while (pos < buf.size()) {
            if (buf[pos] == '#') {  // comment to end of line
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&](const char* name) -> int64_t {
        skip_space();
        size_t start = pos;
        int64_t value = 0;
        while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            value = value * 10 + (buf[pos] - '0');
            ++pos;
        }
        if (pos == start) parse_fail(path, pos, std::string("expected ") + name);
        return value;
    };

    if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '5') {
        parse_fail(path, 0, "bad magic (want 'P5')");
    }
    pos = 2;
    RawPgm pgm;
    pgm.width = read_int("width");
    pgm.height = read_int("height");
    int64_t maxval = read_int("maxval");
    if (maxval != 255) parse_fail(path, pos, "unsupported maxval " + std::to_string(maxval));
    if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos]))) {
        parse_fail(path, pos, "expected single whitespace before pixel data");
    }
    ++pos;
    const size_t need = static_cast<size_t>(pgm.width * pgm.height);
    if (buf.size() - pos < need) {
        parse_fail(path, buf.size(), "truncated pixel data (need " + std::to_string(need) + " bytes)");
    }
    pgm.bytes.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                     buf.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return pgm;
}

}  // namespace

void write_pgm(const std::string& path, const GrayImage& img) {
    std::vector<uint8_t> bytes(img.v.size());
    for (size_t i = 0; i < img.v.size(); ++i) {
        float q = std::round(img.v[i] * 255.0f);
        bytes[i] = static_cast<uint8_t>(std::clamp(q, 0.0f, 255.0f));
    }
    write_raw(path, img.cols, img.rows, bytes);
}

GrayImage read_pgm(const std::string& path) {
    RawPgm raw = read_raw(path);
    GrayImage img(raw.height, raw.width);
    for (size_t i = 0; i < raw.bytes.size(); ++i) {
        img.v[i] = static_cast<float>(raw.bytes[i]) / 255.0f;
    }
    return img;
}

void write_mask_pgm(const std::string& path, const MaskImage& mask) {
    write_raw(path, mask.cols, mask.rows, mask.v);
}

MaskImage read_mask_pgm(const std::string& path, int n_classes) {
    RawPgm raw = read_raw(path);
    MaskImage mask(raw.height, raw.width, n_classes);
    for (size_t i = 0; i < raw.bytes.size(); ++i) {
        if (raw.bytes[i] >= n_classes) {
            throw IoError("pgm: '" + path + "': class index " + std::to_string(raw.bytes[i]) +
                          " out of range for " + std::to_string(n_classes) + " classes");
        }
        mask.v[i] = raw.bytes[i];
    }
    return mask;
}

}  // namespace noir
