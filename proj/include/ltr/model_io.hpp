#pragma once

#include <filesystem>
#include <string>

#include "ltr/ranker.hpp"

namespace ltr::model_io {

inline constexpr const char* kModeRankNetFeatures = "ranknet-features";
inline constexpr const char* kModeConvRankNet = "convranknet";

// Model files carry an 8-byte magic, a length-prefixed JSON header (format
// version, mode, config echo, parameter names and shapes) and the parameter
// values as raw little-endian 64-bit reals in header order. Loading a saved
// model reproduces scores bit-identically.

void save_ranknet(const ranker::RankNetModel& model, const std::filesystem::path& path);
ranker::RankNetModel load_ranknet(const std::filesystem::path& path);

void save_convranknet(const ranker::ConvRankNetModel& model,
                      const std::filesystem::path& path);
ranker::ConvRankNetModel load_convranknet(const std::filesystem::path& path);

// Reads just the mode string ("ranknet-features" or "convranknet"). Throws
// std::runtime_error on a malformed file.
std::string peek_mode(const std::filesystem::path& path);

}  // namespace ltr::model_io
