#pragma once

#include "lids/construction/builder.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace lids::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

struct Config {
    std::filesystem::path data_dir;
    std::filesystem::path pipelines_dir;
    std::filesystem::path docs_dir;
    std::filesystem::path out_dir;
    construction::ThresholdConfig thresholds;
    std::size_t workers = 1;
    std::filesystem::path lexicon_path;
    std::filesystem::path gazetteer_path;
    std::uint64_t seed = 42;

    // Throws InvalidQuery when a threshold is outside [0, 1] or workers is 0.
    void validate() const;
};

// Shipped docs, lexicon and gazetteer paths; other fields empty.
Config default_config();

// Entry point of the lids-forge tool. Returns the process exit code:
// 0 success, 1 I/O or data error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lids::cli
