#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "highlight/alignment.hpp"
#include "highlight/corpus.hpp"

namespace highlight {

using LocalSelection = std::set<std::size_t>;

struct SmoothingConfig {
    // Two selected tokens are bridged iff strictly fewer than gap_threshold
    // unselected tokens lie between them.
    std::size_t gap_threshold = 5;
    // A segment must contain at least this many tokens (">5 words").
    std::size_t min_segment_tokens = 6;
    // Also bridge a short stretch between the outermost selected tokens and
    // the sentence boundaries.
    bool extend_to_boundary = false;

    void validate() const;
};

// Inclusive, sentence-local token range.
struct Run {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start + 1; }
    bool operator==(const Run&) const = default;
};

struct SentenceAnnotation {
    std::string doc_id;
    std::size_t sentence_index = 0;
    std::optional<Run> segment;  // present iff the sentence is labelled 1

    int label() const noexcept { return segment ? 1 : 0; }
    bool operator==(const SentenceAnnotation&) const = default;
};

// Splits a flat selection into per-sentence local selections. Sentences with
// nothing selected are absent from the map.
std::map<std::size_t, LocalSelection> per_sentence_selection(const AlignedWordSet& aligned, const Document& doc);

LocalSelection fill_gaps(const LocalSelection& selected, std::size_t sentence_len, const SmoothingConfig& cfg);

// Maximal consecutive runs, by increasing start.
std::vector<Run> runs(const LocalSelection& selected);

// Longest run, earliest on ties; nothing when the winner is shorter than
// cfg.min_segment_tokens.
std::optional<Run> select_segment(const std::vector<Run>& runs, const SmoothingConfig& cfg);

// fill_gaps -> runs -> select_segment for one sentence.
std::optional<Run> smooth_sentence(const LocalSelection& selected, std::size_t sentence_len,
                                   const SmoothingConfig& cfg);

std::vector<SentenceAnnotation> annotate_document(const Document& doc, const AlignedWordSet& aligned,
                                                  const SmoothingConfig& cfg = {});

// Throws when the annotation breaks its own invariants or does not fit doc.
void validate_annotation(const SentenceAnnotation& ann, const Document& doc);

std::vector<SentenceAnnotation> read_annotations(std::istream& in, const std::string& source = "<stream>");
std::vector<SentenceAnnotation> load_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, const std::vector<SentenceAnnotation>& anns);
void save_annotations(const std::filesystem::path& path, const std::vector<SentenceAnnotation>& anns);

}  // namespace highlight
