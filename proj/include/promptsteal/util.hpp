#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace promptsteal {

// 64-bit FNV-1a. Used for deterministic bucketing and seed mixing, not for
// content addressing (that is sha256_hex).
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// Lowercased maximal runs of ASCII alphanumerics.
std::vector<std::string> tokenize(std::string_view text);

std::string lowercase_ascii(std::string_view text);
std::string trim(std::string_view text);
bool starts_with(std::string_view text, std::string_view prefix);

// Deterministic RNG wrapper. All draws are specified here rather than via
// std::uniform_int_distribution so streams are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased integer in [0, n) via rejection sampling. n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Double in [0, 1) with 53 random bits.
    double unit();

    // Fisher-Yates, last-to-first.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    // k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

    // Index into `weights` proportional to weight. Total must be > 0.
    std::size_t pick_weighted(const std::vector<double>& weights);

private:
    std::mt19937_64 engine_;
};

// Stable per-item seed: mixes a base seed with a purpose tag and a payload
// (typically the question text) so independent draws do not share streams.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag, std::string_view payload);

// --- filesystem helpers ---

std::string read_file(const std::filesystem::path& path);
// Writes to a temp name in the same directory, then renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// --- time ---

std::string iso8601_utc(std::chrono::system_clock::time_point tp);
std::string iso8601_utc_now();

}  // namespace promptsteal
