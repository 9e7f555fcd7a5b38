#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "highlight/corpus.hpp"
#include "highlight/rouge.hpp"
#include "highlight/smoothing.hpp"

namespace highlight {

enum class SummaryUnit { Sentence, Segment };

// "sent" / "sentence" and "segm" / "segment".
SummaryUnit parse_summary_unit(const std::string& name);
std::string to_string(SummaryUnit unit);

struct SummaryRecord {
    std::string doc_id;
    TokenList tokens;  // verbatim source tokens in document order
    SummaryUnit unit = SummaryUnit::Sentence;
};

// Annotations of one document, indexed by sentence.
using DocumentAnnotations = std::vector<SentenceAnnotation>;

// Groups annotations by document and checks that every sentence of every
// document is annotated exactly once. Result is parallel to docs.
std::vector<DocumentAnnotations> group_complete(const std::vector<Document>& docs,
                                                const std::vector<SentenceAnnotation>& annotations);

// Tokens of the positive sentences (Sentence) or of their segments (Segment).
TokenList materialize(const Document& doc, std::span<const SentenceAnnotation> annotations, SummaryUnit unit);

std::vector<SummaryRecord> build_oracle(const std::vector<Document>& docs,
                                        const std::vector<SentenceAnnotation>& annotations, SummaryUnit unit);

// Groups predictions by doc_id and orders them by sentence_index. Emits one
// record per document in docs order; documents without predictions get an
// empty summary. Unknown doc_ids are rejected.
std::vector<SummaryRecord> assemble_predictions(const std::vector<SentenceAnnotation>& predictions,
                                                const std::vector<Document>& docs, SummaryUnit unit);

struct DocumentStats {
    std::string doc_id;
    std::size_t sentences = 0;
    std::size_t positive_sentences = 0;
    std::size_t gold_tokens = 0;          // tokens inside segments
    double compression_sum = 0.0;         // sum over positives of segment/sentence length
    std::size_t abstract_sentences = 0;
    std::size_t abstract_tokens = 0;
};

struct CorpusStats {
    std::size_t documents = 0;
    std::size_t total_sentences = 0;
    std::size_t positive_sentences = 0;
    double pos_sentence_rate = 0.0;
    double mean_gold_sents_per_doc = 0.0;
    double mean_gold_tokens_per_doc = 0.0;
    // Mean over positive sentences of segment length / sentence length.
    double compression_rate = 0.0;
    double mean_abstract_sents_per_doc = 0.0;
    double mean_abstract_tokens_per_doc = 0.0;
    std::vector<DocumentStats> per_document;
};

// Abstract sentences counted as stretches closed by ".", "!" or "?", plus a
// trailing unterminated stretch.
std::size_t count_abstract_sentences(const TokenList& abstract_tokens);

DocumentStats document_stats(const Document& doc, std::span<const SentenceAnnotation> annotations);
// Folds per-document rows into corpus-level figures.
CorpusStats aggregate(std::vector<DocumentStats> per_document);
CorpusStats corpus_stats(const std::vector<Document>& docs, const std::vector<SentenceAnnotation>& annotations);

// Mean segment/sentence length ratio over the positive entries of a
// (possibly partial) annotation list; 0 when there are none.
double compression_ratio(const std::vector<SentenceAnnotation>& annotations, const std::vector<Document>& docs);

// Fraction of abstract tokens whose aligned document token (one per abstract
// token, see row_alignments) falls in a positive sentence (Sentence) or
// inside a segment (Segment). An alignment-membership proxy, 0 for an empty
// abstract.
double abstract_coverage(const Document& doc, std::span<const std::size_t> token_alignment,
                         std::span<const SentenceAnnotation> annotations, SummaryUnit unit);

using MacroRouge = std::map<RougeMetric, RougeScore>;

// Per-document ROUGE averaged with equal weight per document, componentwise.
// The averaged f1 is the mean of per-document F1 values. Both sides must cover
// the same doc_ids.
MacroRouge evaluate(const std::vector<SummaryRecord>& summaries, const std::vector<SummaryRecord>& references,
                    std::span<const RougeMetric> metrics);

std::vector<RougeMetric> parse_metric_list(const std::string& csv);

// {"doc_id": str, "tokens": [str, ...]} per line. Unit is not stored.
std::vector<SummaryRecord> read_summaries(std::istream& in, const std::string& source = "<stream>");
std::vector<SummaryRecord> load_summaries(const std::filesystem::path& path);
void write_summaries(std::ostream& out, const std::vector<SummaryRecord>& records);
void save_summaries(const std::filesystem::path& path, const std::vector<SummaryRecord>& records);

}  // namespace highlight
