#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "highlight/alignment.hpp"
#include "highlight/corpus.hpp"
#include "highlight/extractor/instances.hpp"

namespace highlight::testkit {

using Rng = std::mt19937_64;

TokenList random_tokens(Rng& rng, std::size_t length, std::size_t vocab_size);

Document random_document(Rng& rng, const std::string& doc_id, std::size_t max_sentences = 6,
                         std::size_t max_sentence_len = 12, std::size_t vocab_size = 30,
                         std::size_t max_abstract_len = 10);

std::vector<Document> random_corpus(Rng& rng, std::size_t docs);

// Row-stochastic attention of shape abstract x flat document.
AttentionMatrix random_attention(Rng& rng, const Document& doc);

// Marker task: 48 content words plus the markers "[[" and "]]". Positive
// sentences contain one "[[ w... ]]" block and their span runs from "[[" to
// "]]" inclusive; negatives contain no markers.
struct MarkerTaskOptions {
    std::size_t sentences = 2000;
    std::size_t min_len = 6;
    std::size_t max_len = 14;
    double positive_rate = 0.5;
    std::size_t doc_positions = 8;
    std::uint64_t seed = 2024;
};

inline constexpr const char* kOpenMarker = "[[";
inline constexpr const char* kCloseMarker = "]]";

std::vector<extractor::LabelledSentence> marker_task(const MarkerTaskOptions& opts);

}  // namespace highlight::testkit
