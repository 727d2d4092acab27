#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace noir {

// splitmix64, used to expand seeds and derive independent substreams.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t seed_combine(uint64_t a, uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

// PCG32 (O'Neill). Self-contained so streams are bit-identical everywhere,
// independent of the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) {
        state_ = 0;
        inc_ = (splitmix64(seed ^ 0xda3e39cb94b95bdbULL) << 1) | 1u;
        next_u32();
        state_ += splitmix64(seed);
        next_u32();
    }

    uint32_t next_u32() {
        uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18) ^ old) >> 27);
        uint32_t rot = static_cast<uint32_t>(old >> 59);
        return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
    }

    // [0, 1) with 24 bits of mantissa, exactly representable in float.
    float uniform() { return static_cast<float>(next_u32() >> 8) * (1.0f / 16777216.0f); }

    float uniform(float lo, float hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n).
    uint32_t below(uint32_t n) {
        if (n <= 1) return 0;
        uint32_t threshold = (~n + 1u) % n;
        for (;;) {
            uint32_t r = next_u32();
            if (r >= threshold) return r % n;
        }
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint32_t>(n))); }

    // Box-Muller with cached spare.
    float normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        float u1 = uniform();
        float u2 = uniform();
        // avoid log(0)
        float r = std::sqrt(-2.0f * std::log(1.0f - u1));
        float theta = 6.2831853071795864769f * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    float normal(float mean, float stddev) { return mean + stddev * normal(); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(static_cast<uint32_t>(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), partial Fisher-Yates. k > n returns all n.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> idx(static_cast<size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        if (k >= n) return idx;
        for (int i = 0; i < k; ++i) {
            int j = i + below_int(n - i);
            std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
        }
        idx.resize(static_cast<size_t>(k));
        return idx;
    }

    // Independent generator for a named substream.
    Rng split(uint64_t stream) const { return Rng(seed_combine(state_ ^ inc_, stream)); }

private:
    uint64_t state_ = 0;
    uint64_t inc_ = 1;
    float spare_ = 0.0f;
    bool has_spare_ = false;
};

}  // namespace noir
