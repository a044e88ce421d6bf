#pragma once

// Hashing, deterministic RNG, and small string/file helpers shared across
// the workbench.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace mrtp {

// 64-bit FNV-1a; stable across platforms and runs. Used for seed derivation,
// config digests, and cassette request matching.
constexpr std::uint64_t fnv1a(std::string_view data,
                              std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v);

// Maps a hash to [0,1). Used for stateless per-action noise draws.
double unit_from_hash(std::uint64_t h);

// Deterministic RNG. mt19937_64 output is pinned by the standard; the bounded
// helpers below replace std::uniform_* distributions, whose sequences are
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Inclusive bounds.
    int uniform_int(int lo, int hi);

    // [0,1)
    double uniform_real();

    // Fisher-Yates, driven by uniform_int for determinism.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values from [lo,hi], in draw order.
    std::vector<int> sample_without_replacement(int lo, int hi, int k);

private:
    std::mt19937_64 engine_;
};

std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool contains(std::string_view haystack, std::string_view needle);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace mrtp
