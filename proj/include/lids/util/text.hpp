#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lids::util {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool contains_icase(std::string_view haystack, std::string_view needle);

// Shortest decimal text that round-trips to `v`, with at least two digits
// after the decimal point ("1.00", "0.95", "0.123456789").
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Stable 64-bit hash of a byte string (FNV-1a followed by a splitmix finalizer).
std::uint64_t stable_hash(std::string_view s, std::uint64_t seed = 0);

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic generator whose output does not depend on the standard
// library implementation (std::uniform_*_distribution is unspecified).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    // Uniform real in [0, 1).
    double uniform();
    double normal();

private:
    std::uint64_t state_;
};

}  // namespace lids::util
