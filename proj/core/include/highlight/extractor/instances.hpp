#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "highlight/corpus.hpp"
#include "highlight/extractor/config.hpp"
#include "highlight/extractor/model.hpp"
#include "highlight/extractor/vocab.hpp"
#include "highlight/smoothing.hpp"

namespace highlight::extractor {

// A sentence together with its gold annotation; the on-disk training format.
struct LabelledSentence {
    SentenceAnnotation annotation;
    TokenList tokens;
};

// Joins documents and their per-sentence annotations. Every sentence of every
// document must be annotated exactly once.
std::vector<LabelledSentence> join_annotations(const std::vector<Document>& docs,
                                               const std::vector<SentenceAnnotation>& annotations);

// Encodes one sentence. Tokens past cfg.max_sentence_len are dropped and the
// span end is clipped to the kept region. Returns nothing for a positive
// sentence whose span starts inside the dropped region.
std::optional<TrainingInstance> make_instance(const std::string& doc_id, std::size_t sentence_index,
                                              const TokenList& tokens, const std::optional<Run>& span,
                                              const Vocab& vocab, const ModelConfig& cfg);

struct InstanceSet {
    std::vector<TrainingInstance> instances;
    std::size_t dropped = 0;  // positives lost to truncation
};

InstanceSet make_instances(const std::vector<LabelledSentence>& data, const Vocab& vocab, const ModelConfig& cfg);

// Unlabelled instances for every sentence of doc, in order.
std::vector<TrainingInstance> document_instances(const Document& doc, const Vocab& vocab, const ModelConfig& cfg);

// {"doc_id", "sentence_index", "tokens", "label", "start", "end"} per line.
std::vector<LabelledSentence> read_labelled(std::istream& in, const std::string& source = "<stream>");
std::vector<LabelledSentence> load_labelled(const std::filesystem::path& path);
void write_labelled(std::ostream& out, const std::vector<LabelledSentence>& data);
void save_labelled(const std::filesystem::path& path, const std::vector<LabelledSentence>& data);

}  // namespace highlight::extractor
