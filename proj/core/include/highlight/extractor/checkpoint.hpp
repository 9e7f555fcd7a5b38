#pragma once

#include <filesystem>
#include <iosfwd>

#include "highlight/extractor/config.hpp"
#include "highlight/extractor/parameters.hpp"
#include "highlight/extractor/vocab.hpp"

namespace highlight::extractor {

inline constexpr int kCheckpointVersion = 1;
inline constexpr const char* kCheckpointFormat = "highlight-extractor";

struct ExtractorModel {
    ModelConfig config;
    Vocab vocab;
    Parameters params;
};

// JSON document: format tag, version, config, vocab and every tensor as
// {"rows", "cols", "data"} in column-major order. Doubles round-trip exactly.
void write_checkpoint(std::ostream& out, const ExtractorModel& model);
ExtractorModel read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ExtractorModel& model);
ExtractorModel load_checkpoint(const std::filesystem::path& path);

}  // namespace highlight::extractor
